"""Candidate term extraction and domain-specificity scoring.

Terms are noun-phrase chunks of one to four tokens. A term's domain
specificity is the natural log of the ratio between its normalized frequency
in the domain corpus and in the general corpus; terms scoring at or above the
threshold are marked domain-specific.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import nlp
from .project import Project

DEFAULT_THRESHOLD = 1.0

# A term never seen in the general corpus gets half an occurrence so the
# log ratio stays defined; terms absent from the domain corpus are dropped.
GENERAL_SMOOTHING = 0.5


class CorpusError(Exception):
    pass


def ds_value(freq_domain: float, total_domain: float, freq_general: float, total_general: float) -> float:
    """Log ratio of normalized frequencies; general-side zero is smoothed."""
    if freq_domain <= 0:
        raise ValueError("domain frequency must be positive")
    if freq_general <= 0:
        freq_general = GENERAL_SMOOTHING
    return math.log((freq_domain / total_domain) / (freq_general / total_general))


@dataclass
class Term:
    text: str
    head: str
    freq_domain: int = 0
    freq_general: int = 0
    ds: float = 0.0
    is_domain_specific: bool = False


@dataclass
class CorpusStats:
    threshold: float
    total_domain_tokens: int
    total_general_tokens: int
    term_index: dict[str, Term]
    # Per-lemma token counts over domain corpus plus project artifacts; feeds
    # information-content estimation.
    token_lemma_counts: dict[str, int] = field(default_factory=dict)

    def domain_specific_terms(self) -> set[str]:
        return {t.text for t in self.term_index.values() if t.is_domain_specific}

    def ds_of(self, term_text: str) -> float:
        term = self.term_index.get(term_text)
        return term.ds if term else 0.0

    def to_json(self) -> str:
        payload = {
            "threshold": self.threshold,
            "total_domain_tokens": self.total_domain_tokens,
            "total_general_tokens": self.total_general_tokens,
            "terms": [
                {
                    "text": t.text,
                    "head": t.head,
                    "freq_domain": t.freq_domain,
                    "freq_general": t.freq_general,
                    "ds": t.ds,
                    "is_domain_specific": t.is_domain_specific,
                }
                for t in sorted(self.term_index.values(), key=lambda t: t.text)
            ],
            "token_lemma_counts": dict(sorted(self.token_lemma_counts.items())),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CorpusStats":
        payload = json.loads(text)
        index = {
            t["text"]: Term(
                text=t["text"],
                head=t["head"],
                freq_domain=t["freq_domain"],
                freq_general=t["freq_general"],
                ds=t["ds"],
                is_domain_specific=t["is_domain_specific"],
            )
            for t in payload["terms"]
        }
        return cls(
            threshold=payload["threshold"],
            total_domain_tokens=payload["total_domain_tokens"],
            total_general_tokens=payload["total_general_tokens"],
            term_index=index,
            token_lemma_counts=payload.get("token_lemma_counts", {}),
        )


def read_corpus_dir(directory) -> list[tuple[str, str]]:
    """All .txt files under ``directory`` (recursive), as (name, text) pairs."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"corpus directory not found: {directory}")
    docs = []
    for path in sorted(directory.rglob("*.txt")):
        try:
            docs.append((str(path.relative_to(directory)), path.read_text("utf-8")))
        except OSError as e:
            raise CorpusError(f"cannot read corpus file {path}: {e}") from e
    if not docs:
        raise CorpusError(f"no .txt files in corpus directory: {directory}")
    return docs


def _count_chunks(texts: Iterable[str]) -> tuple[dict[str, tuple[str, int]], int]:
    """Count every 1-4 token noun-phrase chunk across ``texts``.

    Returns (term text -> (head lemma, count), total counted occurrences).
    """
    counts: dict[str, tuple[str, int]] = {}
    total = 0
    for text in texts:
        for sentence in nlp.tokenize_and_tag(text):
            for start, end in nlp.chunk_candidates(sentence):
                phrase = nlp.phrase_text(sentence, start, end)
                head = sentence.tokens[end - 1].lemma
                prev = counts.get(phrase)
                counts[phrase] = (head, (prev[1] if prev else 0) + 1)
                total += 1
    return counts, total


def _lemma_token_counts(texts: Iterable[str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for text in texts:
        for sentence in nlp.tokenize_and_tag(text):
            for tok in sentence:
                if any(ch.isalnum() for ch in tok.surface):
                    counts[tok.lemma] = counts.get(tok.lemma, 0) + 1
    return counts


def extract_terms(
    project: Project | None,
    domain_corpus_dir,
    general_corpus_dir,
    threshold: float = DEFAULT_THRESHOLD,
) -> CorpusStats:
    """Count candidate terms in both corpora and score domain specificity."""
    domain_docs = read_corpus_dir(domain_corpus_dir)
    general_docs = read_corpus_dir(general_corpus_dir)

    domain_counts, domain_total = _count_chunks(text for _, text in domain_docs)
    general_counts, general_total = _count_chunks(text for _, text in general_docs)

    index: dict[str, Term] = {}
    for text, (head, freq_d) in sorted(domain_counts.items()):
        freq_g = general_counts.get(text, ("", 0))[1]
        ds = ds_value(freq_d, domain_total, freq_g, general_total)
        index[text] = Term(
            text=text,
            head=head,
            freq_domain=freq_d,
            freq_general=freq_g,
            ds=ds,
            is_domain_specific=ds >= threshold,
        )

    ic_texts = [text for _, text in domain_docs]
    if project is not None:
        ic_texts.extend(a.text for a in project.artifacts.values())

    return CorpusStats(
        threshold=threshold,
        total_domain_tokens=domain_total,
        total_general_tokens=general_total,
        term_index=index,
        token_lemma_counts=_lemma_token_counts(ic_texts),
    )


def find_term_spans(sentence: nlp.Sentence, term_set: set[str], max_len: int = 4) -> list[tuple[int, int, str]]:
    """Non-overlapping term occurrences in a sentence, longest match first.

    Greedy left-to-right scan over lemmas; at each position the longest
    matching phrase wins and the scan resumes past it.
    """
    lemmas = sentence.lemmas()
    spans: list[tuple[int, int, str]] = []
    i = 0
    n = len(lemmas)
    while i < n:
        matched = False
        for length in range(min(max_len, n - i), 0, -1):
            phrase = " ".join(lemmas[i : i + length])
            if phrase in term_set:
                spans.append((i, i + length, phrase))
                i += length
                matched = True
                break
        if not matched:
            i += 1
    return spans


def domain_terms_in(artifact, stats: CorpusStats) -> list[Term]:
    """Domain-specific terms occurring in the artifact, by first occurrence."""
    term_set = stats.domain_specific_terms()
    ordered: list[Term] = []
    seen: set[str] = set()
    for sentence in artifact.sentences:
        for _, _, phrase in find_term_spans(sentence, term_set):
            if phrase not in seen:
                seen.add(phrase)
                ordered.append(stats.term_index[phrase])
    return ordered
