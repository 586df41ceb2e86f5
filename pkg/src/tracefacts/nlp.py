"""Deterministic shallow NLP: sentence splitting, tokenization, coarse POS
tagging, lemmatization and noun-phrase chunking.

Everything here is dictionary- and rule-driven so that identical input always
produces identical output. The tagger uses a bundled most-frequent-tag lexicon
with suffix heuristics as fallback; the lemmatizer applies detachment rules in
the style of WordNet's morphological processor, backed by a small exception
list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

# Coarse tag set. PREP also covers verb particles; OTHER covers pronouns,
# conjunctions, punctuation and anything unclassifiable.
NOUN = "NOUN"
VERB = "VERB"
ADJ = "ADJ"
ADV = "ADV"
PREP = "PREP"
DET = "DET"
OTHER = "OTHER"

# Auxiliaries and modals are tagged VERB but never count as the main verb of
# a matched pattern.
AUX_WORDS = frozenset(
    """am is are was were be been being have has had having do does did
    shall should will would can could may might must""".split()
)

STOPWORD_LEMMAS = frozenset(
    """the a an of in on at by for with from to into onto and or not this
    that these those each every all some any no be is are was were been""".split()
)

_ABBREVIATIONS = frozenset(
    ["e.g", "i.e", "eg", "ie", "etc", "vs", "cf", "fig", "no", "dr", "mr", "mrs", "st", "inc"]
)

_WORD_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9'/\-]*|[^\sA-Za-z0-9]")
_ACRONYM_RE = re.compile(r"^[A-Z]{2,}s?$")
_SENT_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s+[\"'(]?[A-Z0-9])")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    sentence_index: int
    token_index: int
    start: int  # character offset into the original text
    end: int


class Sentence:
    """A tagged sentence with chunk lookup helpers."""

    def __init__(self, tokens: list[Token], text: str):
        self.tokens = tokens
        self.text = text

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]


def _load_lexicon() -> dict[str, str]:
    lex: dict[str, str] = {}
    data = resources.files("tracefacts.data").joinpath("lexicon.txt").read_text("utf-8")
    for line in data.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.rsplit(None, 1)
        lex[word] = tag
    return lex


def _load_exceptions() -> dict[tuple[str, str], str]:
    exc: dict[tuple[str, str], str] = {}
    data = resources.files("tracefacts.data").joinpath("morph_exc.txt").read_text("utf-8")
    for line in data.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pos, inflected, base = line.split()[:3]
        exc[(pos, inflected)] = base
    return exc


_LEXICON = _load_lexicon()
_MORPH_EXC = _load_exceptions()

# Suffix fallbacks, tried in order on words absent from the lexicon.
_NOUN_SUFFIXES = ("tion", "sion", "ment", "ity", "ness", "ance", "ence", "ship", "ism", "ure")
_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ic", "ical", "less")


def tag_word(surface: str) -> str:
    if not surface:
        return OTHER
    if not any(ch.isalnum() for ch in surface):
        return DET if surface == "'s" else OTHER
    if _ACRONYM_RE.match(surface):
        return NOUN
    low = surface.lower()
    tag = _LEXICON.get(low)
    if tag is not None:
        return tag
    if low.endswith(_NOUN_SUFFIXES):
        return NOUN
    if low.endswith("ly"):
        return ADV
    if low.endswith(_ADJ_SUFFIXES):
        return ADJ
    if low.endswith(("ing", "ed")):
        return VERB
    return NOUN


# WordNet-style detachment rules, per POS, applied after the exception list.
_NOUN_RULES = [
    ("ies", "y"),
    ("sses", "ss"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("xes", "x"),
    ("zes", "z"),
    ("men", "man"),
    ("s", ""),
]
_VERB_RULES = [
    ("ies", "y"),
    ("sses", "ss"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("xes", "x"),
    ("es", "e"),
    ("es", ""),
    ("ed", ""),
    ("ed", "e"),
    ("ing", ""),
    ("ing", "e"),
    ("s", ""),
]
_ADJ_RULES = [
    ("est", ""),
    ("est", "e"),
    ("er", ""),
    ("er", "e"),
]


def lemmatize(surface: str, pos: str) -> str:
    """Lowercased base form; falls back to the lowercased surface."""
    low = surface.lower()
    key = "n" if pos == NOUN else "v" if pos == VERB else "a" if pos == ADJ else None
    if key is None:
        return low
    exc = _MORPH_EXC.get((key, low))
    if exc is not None:
        return exc
    rules = _NOUN_RULES if key == "n" else _VERB_RULES if key == "v" else _ADJ_RULES
    candidates = []
    for suffix, repl in rules:
        if low.endswith(suffix) and len(low) - len(suffix) + len(repl) >= 2:
            if suffix == "s" and low.endswith(("ss", "us", "is")):
                continue
            candidates.append(low[: len(low) - len(suffix)] + repl)
    # Prefer a candidate the lexicon knows about; otherwise first rule wins.
    for cand in candidates:
        if cand in _LEXICON:
            return cand
    return candidates[0] if candidates else low


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences in ``text``.

    Splits on ., ! or ? followed by whitespace and a capital/digit, unless the
    preceding word is a known abbreviation.
    """
    if not text.strip():
        return []
    spans = []
    start = 0
    for m in _SENT_BOUNDARY_RE.finditer(text):
        end = m.end()
        prev = text[start : m.start()]
        last_word = prev.rsplit(None, 1)[-1].rstrip(".").lower() if prev.split() else ""
        if last_word in _ABBREVIATIONS:
            continue
        spans.append((start, end))
        rest = text[end:]
        start = end + (len(rest) - len(rest.lstrip()))
    if start < len(text) and text[start:].strip():
        spans.append((start, len(text)))
    return spans


def tokenize_and_tag(text: str) -> list[Sentence]:
    """Split, tokenize, tag and lemmatize ``text``; deterministic throughout.

    Empty or whitespace-only input yields an empty list. Token offsets index
    into the original string so that surfaces are exact substrings.
    """
    sentences: list[Sentence] = []
    for s_idx, (s_start, s_end) in enumerate(split_sentences(text)):
        raw = text[s_start:s_end]
        tokens: list[Token] = []
        for m in _WORD_RE.finditer(raw):
            word = m.group(0)
            pieces = [(word, m.start())]
            if len(word) > 2 and word.lower().endswith("'s"):
                pieces = [(word[:-2], m.start()), (word[-2:], m.start() + len(word) - 2)]
            for piece, off in pieces:
                pos = tag_word(piece)
                tokens.append(
                    Token(
                        surface=piece,
                        lemma=lemmatize(piece, pos),
                        pos=pos,
                        sentence_index=s_idx,
                        token_index=len(tokens),
                        start=s_start + off,
                        end=s_start + off + len(piece),
                    )
                )
        sentences.append(Sentence(tokens, raw))
    return sentences


def noun_phrase_chunks(sentence: Sentence) -> list[tuple[int, int]]:
    """Maximal (ADJ|NOUN)* NOUN chunk spans as (start, end) token indexes.

    A run of ADJ/NOUN tokens is trimmed back to its final NOUN; runs without
    a NOUN are discarded.
    """
    chunks: list[tuple[int, int]] = []
    i = 0
    toks = sentence.tokens
    n = len(toks)
    while i < n:
        if toks[i].pos in (ADJ, NOUN):
            j = i
            while j < n and toks[j].pos in (ADJ, NOUN):
                j += 1
            end = j
            while end > i and toks[end - 1].pos != NOUN:
                end -= 1
            if end > i:
                chunks.append((i, end))
            i = j
        else:
            i += 1
    return chunks


def chunk_candidates(sentence: Sentence, max_len: int = 4) -> list[tuple[int, int]]:
    """All sub-spans of maximal chunks that end at a NOUN, up to ``max_len``."""
    out: list[tuple[int, int]] = []
    for start, end in noun_phrase_chunks(sentence):
        for i in range(start, end):
            for j in range(i + 1, min(end, i + max_len) + 1):
                if sentence.tokens[j - 1].pos == NOUN:
                    out.append((i, j))
    return out


def phrase_text(sentence: Sentence, start: int, end: int) -> str:
    return " ".join(t.lemma for t in sentence.tokens[start:end])


def normalize_phrase(text: str) -> str:
    """Lemma-join a free-text phrase the same way corpus terms are built."""
    parts: list[str] = []
    for sent in tokenize_and_tag(text):
        for tok in sent:
            if any(ch.isalnum() for ch in tok.surface):
                parts.append(tok.lemma)
    return " ".join(parts)
