"""Syntactic association search.

Two matchers produce labeled term associations:

* lexico-syntactic patterns — surface regexes ("such as", "consists of", ...)
  pairing the nearest noun-phrase chunks on either side of the match with a
  taxonomic or compositional relation;
* grammatical structure analysis — a shallow scan for two domain-term spans
  connected by a verb, optionally with auxiliaries and a trailing preposition,
  yielding verb-labeled relations ("stores", "is loaded into", ...).

An evidence index built over project artifacts and domain documents answers
per-pair queries, preferring matches from the linked artifacts themselves and
pattern matches over grammatical ones.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from importlib import resources

from . import nlp
from .nlp import ADV, DET, NOUN, PREP, VERB, Sentence
from .terms import find_term_spans

ARGUMENT_ORDERS = ("left_is_source", "left_is_target")

# Bare past participles that read as reduced passives when they directly link
# two noun phrases ("the drug loaded into the reservoir").
_IRREGULAR_PARTICIPLES = frozenset(
    "made found given taken kept held shown known seen done built sent left met written begun".split()
)


@dataclass(frozen=True)
class LspRule:
    name: str
    pattern: str
    relation_label: str
    argument_order: str = "left_is_source"

    def __post_init__(self):
        if self.argument_order not in ARGUMENT_ORDERS:
            raise ValueError(f"unknown argument order {self.argument_order!r}")
        if not self.relation_label:
            raise ValueError("relation label must be non-empty")
        object.__setattr__(self, "_compiled", re.compile(self.pattern, re.IGNORECASE))

    @property
    def compiled(self) -> re.Pattern:
        return self._compiled  # type: ignore[attr-defined]


@dataclass(frozen=True)
class SynEvidence:
    left_term: str
    right_term: str
    relation_label: str
    reversed: bool
    sentence_ref: str  # "<artifact-or-doc id>#<sentence index>"
    kind: str = "lsp"  # lsp | grammatical
    origin: str = ""  # artifact or document id the sentence came from


def load_rules(path=None) -> list[LspRule]:
    """Rules from a JSON file; the four built-in patterns by default."""
    if path is None:
        raw = resources.files("tracefacts.data").joinpath("lsp_rules.json").read_text("utf-8")
    else:
        raw = open(path, encoding="utf-8").read()
    rules = []
    for obj in json.loads(raw):
        rules.append(
            LspRule(
                name=obj["name"],
                pattern=obj["pattern"],
                relation_label=obj["relation_label"],
                argument_order=obj.get("argument_order", "left_is_source"),
            )
        )
    return rules


def _normalized_with_offsets(sentence: Sentence) -> tuple[str, list[tuple[int, int]]]:
    """Lowercased single-spaced sentence text plus per-token char spans.

    Padded with one leading and trailing space so edge-anchored patterns can
    match at the sentence boundary.
    """
    parts: list[str] = []
    spans: list[tuple[int, int]] = []
    pos = 1  # account for leading pad space
    for tok in sentence.tokens:
        spans.append((pos, pos + len(tok.surface)))
        parts.append(tok.surface.lower())
        pos += len(tok.surface) + 1
    return " " + " ".join(parts) + " ", spans


def _chunk_phrase(sentence: Sentence, start: int, end: int, cap: int = 4) -> str:
    if end - start > cap:
        start = end - cap
    return nlp.phrase_text(sentence, start, end)


def _right_phrase(sentence: Sentence, chunks: list[tuple[int, int]], idx: int, start_override: int | None = None) -> str:
    """Chunk text, extended across an immediate "of (DET)" to the next chunk.

    Keeps the connective tokens, so "rear" followed by "of the pump" yields
    "rear of the pump".
    """
    start, end = chunks[idx]
    if start_override is not None:
        start = start_override
    toks = sentence.tokens
    j = end
    if j < len(toks) and toks[j].lemma == "of":
        k = j + 1
        if k < len(toks) and toks[k].pos == DET:
            k += 1
        if idx + 1 < len(chunks) and chunks[idx + 1][0] == k:
            mid = " ".join(t.lemma for t in toks[end : chunks[idx + 1][0]])
            return f"{_chunk_phrase(sentence, start, end)} {mid} {_chunk_phrase(sentence, *chunks[idx + 1])}"
    return _chunk_phrase(sentence, start, end)


def match_lsp(sentence: Sentence, rules: list[LspRule], sentence_ref: str = "", origin: str = "") -> list[SynEvidence]:
    """All rule matches in a sentence, one evidence per match with both sides.

    For each regex hit, the nearest noun-phrase chunk left of the match and
    the nearest chunk right of it become the argument pair; hits lacking a
    chunk on either side are dropped, as are self-pairs.
    """
    text, token_spans = _normalized_with_offsets(sentence)
    chunks = nlp.noun_phrase_chunks(sentence)
    if not chunks:
        return []
    evidences: list[SynEvidence] = []
    for rule in rules:
        for m in rule.compiled.finditer(text):
            # Nearest chunk on each side; a chunk overlapping the match is
            # trimmed to the tokens outside it ("and other healthcare
            # settings" keeps only "healthcare settings" on the right).
            left_span = None
            for cs, ce in chunks:
                if token_spans[cs][0] < m.start():
                    end = ce
                    while end > cs and token_spans[end - 1][1] > m.start() + 1:
                        end -= 1
                    while end > cs and sentence.tokens[end - 1].pos != NOUN:
                        end -= 1
                    if end > cs:
                        left_span = (cs, end)
            right_idx = None
            right_span = None
            for i, (cs, ce) in enumerate(chunks):
                if token_spans[ce - 1][1] > m.end():
                    start = cs
                    while start < ce and token_spans[start][0] < m.end() - 1:
                        start += 1
                    if start < ce:
                        right_idx = i
                        right_span = (start, ce)
                        break
            if left_span is None or right_span is None:
                continue
            left = _chunk_phrase(sentence, *left_span)
            right = _right_phrase(sentence, chunks, right_idx, start_override=right_span[0])
            if rule.argument_order == "left_is_target":
                left, right = right, left
            if left == right:
                continue
            evidences.append(
                SynEvidence(
                    left_term=left,
                    right_term=right,
                    relation_label=rule.relation_label,
                    reversed=False,
                    sentence_ref=sentence_ref,
                    kind="lsp",
                    origin=origin,
                )
            )
    return evidences


def _is_participle(surface: str) -> bool:
    low = surface.lower()
    return low.endswith("ed") or low in _IRREGULAR_PARTICIPLES


def _match_connective(tokens: list[nlp.Token]) -> str | None:
    """Relation label if tokens form DET/ADV* AUX* VERB PREP? DET/ADV*.

    The label keeps the surface forms; a bare participle with no auxiliary is
    rendered as a passive ("loaded into" becomes "is loaded into").
    """
    i = 0
    n = len(tokens)
    while i < n and tokens[i].pos in (DET, ADV):
        i += 1
    aux: list[str] = []
    while i < n and tokens[i].pos == VERB and tokens[i].surface.lower() in nlp.AUX_WORDS:
        aux.append(tokens[i].surface.lower())
        i += 1
    if i >= n or tokens[i].pos != VERB:
        return None
    verb = tokens[i].surface.lower()
    i += 1
    prep = None
    if i < n and tokens[i].pos == PREP:
        prep = tokens[i].surface.lower()
        i += 1
    while i < n and tokens[i].pos in (DET, ADV):
        i += 1
    if i != n:
        return None
    if not aux and _is_participle(verb):
        aux = ["is"]
    return " ".join(aux + [verb] + ([prep] if prep else []))


def match_grammatical(
    sentence: Sentence,
    term_spans: list[tuple[int, int, str]],
    sentence_ref: str = "",
    origin: str = "",
) -> list[SynEvidence]:
    """Verb-labeled associations between adjacent domain-term spans.

    A pair of spans with no intervening domain term matches when the tokens
    between them form a verb group; a following "and <verb group>" before the
    next span extends the subject to that span too, so a coordinated sentence
    yields one evidence per conjunct.
    """
    evidences: list[SynEvidence] = []
    toks = sentence.tokens
    for i in range(len(term_spans) - 1):
        a_start, a_end, a_text = term_spans[i]
        b_start, b_end, b_text = term_spans[i + 1]
        label = _match_connective(toks[a_end:b_start])
        if label is None or a_text == b_text:
            continue
        evidences.append(
            SynEvidence(
                left_term=a_text,
                right_term=b_text,
                relation_label=label,
                reversed=False,
                sentence_ref=sentence_ref,
                kind="grammatical",
                origin=origin,
            )
        )
        # Coordinated verb groups share the subject: scan past the object for
        # "and <verb group> <next span>".
        prev_end = b_end
        for j in range(i + 2, len(term_spans)):
            c_start, c_end, c_text = term_spans[j]
            between = toks[prev_end:c_start]
            and_positions = [k for k, t in enumerate(between) if t.surface.lower() == "and"]
            label2 = None
            for k in and_positions:
                label2 = _match_connective(between[k + 1 :])
                if label2 is not None:
                    break
            if label2 is None or a_text == c_text:
                break
            evidences.append(
                SynEvidence(
                    left_term=a_text,
                    right_term=c_text,
                    relation_label=label2,
                    reversed=False,
                    sentence_ref=sentence_ref,
                    kind="grammatical",
                    origin=origin,
                )
            )
            prev_end = c_end
    return evidences


class SynIndex:
    """Association evidence gathered from artifacts and domain documents."""

    def __init__(self, rules: list[LspRule] | None = None):
        self.rules = rules if rules is not None else load_rules()
        self._by_pair: dict[tuple[str, str], list[SynEvidence]] = {}

    def add_text(self, text_or_sentences, origin: str, is_artifact: bool, term_set: set[str]) -> None:
        sentences = text_or_sentences
        if isinstance(text_or_sentences, str):
            sentences = nlp.tokenize_and_tag(text_or_sentences)
        tag = origin if is_artifact else f"doc:{origin}"
        for s_idx, sentence in enumerate(sentences):
            ref = f"{tag}#{s_idx}"
            found = match_lsp(sentence, self.rules, sentence_ref=ref, origin=tag)
            spans = find_term_spans(sentence, term_set)
            found.extend(match_grammatical(sentence, spans, sentence_ref=ref, origin=tag))
            for ev in found:
                self._by_pair.setdefault((ev.left_term, ev.right_term), []).append(ev)

    def build(self, proj, stats, domain_docs: list[tuple[str, str]]) -> "SynIndex":
        term_set = stats.domain_specific_terms()
        for artifact in proj.artifacts.values():
            self.add_text(artifact.sentences, origin=artifact.id, is_artifact=True, term_set=term_set)
        for name, text in domain_docs:
            self.add_text(text, origin=name, is_artifact=False, term_set=term_set)
        return self

    def all_evidence(self) -> list[SynEvidence]:
        out = []
        for key in sorted(self._by_pair):
            out.extend(self._by_pair[key])
        return out

    def evidence_for_link(self, link, source_term: str, target_term: str) -> SynEvidence | None:
        """Best evidence connecting the pair, oriented to the link.

        Location outranks kind: a match inside the link's own artifacts beats
        any corpus match, then pattern evidence beats grammatical. A match
        whose orientation opposes source->target is returned reversed.
        """
        if source_term == target_term:
            return None
        link_origins = {link.source_id, link.target_id}

        def priority(ev: SynEvidence) -> tuple[int, int, str]:
            in_link = 0 if ev.origin in link_origins else 1
            kind = 0 if ev.kind == "lsp" else 1
            return (in_link, kind, ev.sentence_ref)

        candidates: list[tuple[tuple, SynEvidence]] = []
        for ev in self._by_pair.get((source_term, target_term), []):
            candidates.append((priority(ev), replace(ev, reversed=False)))
        for ev in self._by_pair.get((target_term, source_term), []):
            candidates.append((priority(ev), replace(ev, reversed=True)))
        if not candidates:
            return None
        candidates.sort(key=lambda pair: pair[0])
        return candidates[0][1]
