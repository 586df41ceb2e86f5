"""Candidate fact generation, filtering, confidence scoring and ranking.

For a trace link, every pairing of a source-artifact domain term with a
target-artifact domain term is a candidate fact carrying four evidence
channels: syntactic (pattern or verb match, the only labeled channel),
semantic relatedness, association mining cosine, and topic-space cosine.

The pipeline follows four steps: drop candidates lacking both topic and
semantic support; assign a confidence from an ordered tier table; rank by
confidence with topic-times-semantic and association cosine as tie breakers;
accept a top-N prefix or a confidence cutoff.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Protocol

from .patterns import SynEvidence
from .wordnet import SemScore

SEM_MODES = ("max", "hw", "aw")

DEFAULT_THRESHOLDS = {
    "tm": 0.1,
    "tm_hi": 0.5,
    "sem": 0.2,
    "sem_hi": 0.5,
    "arm": 0.5,
    "ds": 1.5,
}

# Condition names usable in tier definitions.
_CONDITIONS = ("syn", "tm", "tm_hi", "sem", "sem_hi", "arm", "ds")

DEFAULT_TIERS = [
    {"conf": 0.9, "requires": ["syn", "tm", "sem"]},
    {"conf": 0.6, "requires": ["arm", "tm_hi", "sem_hi"]},
    {"conf": 0.5, "requires": ["tm_hi", "sem_hi", "ds"]},
    {"conf": 0.4, "requires": ["tm_hi", "sem_hi"]},
    {"conf": 0.1, "requires": []},
]


class SchemeError(Exception):
    pass


@dataclass(frozen=True)
class EvidenceVector:
    syn: SynEvidence | None
    sem: SemScore
    arm: float
    tm: float


@dataclass
class CandidateFact:
    link_id: str
    source_term: str
    target_term: str
    evidence: EvidenceVector
    relation_label: str | None = None
    reversed: bool = False
    conf: float = 0.0
    rank: int = 0

    def to_dict(self) -> dict:
        syn = self.evidence.syn
        return {
            "link_id": self.link_id,
            "source_term": self.source_term,
            "target_term": self.target_term,
            "relation_label": self.relation_label,
            "reversed": self.reversed,
            "conf": self.conf,
            "rank": self.rank,
            "evidence": {
                "syn": None
                if syn is None
                else {
                    "relation_label": syn.relation_label,
                    "reversed": syn.reversed,
                    "sentence_ref": syn.sentence_ref,
                    "kind": syn.kind,
                },
                "sem_hw": self.evidence.sem.hw,
                "sem_aw": self.evidence.sem.aw,
                "arm": self.evidence.arm,
                "tm": self.evidence.tm,
            },
        }


class ConfidenceScheme:
    """Ordered tier table: the first tier whose conditions all hold wins.

    Conditions: ``syn`` (labeled evidence present), ``tm``/``tm_hi`` and
    ``sem``/``sem_hi`` (channel at or above the low/high threshold), ``arm``
    (cosine at or above threshold), ``ds`` (both terms' domain specificity at
    or above threshold).
    """

    def __init__(self, thresholds: dict | None = None, tiers: list[dict] | None = None, sem_mode: str = "max"):
        self.thresholds = dict(DEFAULT_THRESHOLDS)
        if thresholds:
            unknown = set(thresholds) - set(DEFAULT_THRESHOLDS)
            if unknown:
                raise SchemeError(f"unknown thresholds: {sorted(unknown)}")
            self.thresholds.update(thresholds)
        self.tiers = [dict(t) for t in (tiers if tiers is not None else DEFAULT_TIERS)]
        if sem_mode not in SEM_MODES:
            raise SchemeError(f"sem_mode must be one of {SEM_MODES}")
        self.sem_mode = sem_mode
        confs = [t["conf"] for t in self.tiers]
        if any(b >= a for a, b in zip(confs, confs[1:])):
            raise SchemeError("tier confidence values must be strictly decreasing")
        for tier in self.tiers:
            unknown = set(tier.get("requires", [])) - set(_CONDITIONS)
            if unknown:
                raise SchemeError(f"unknown tier conditions: {sorted(unknown)}")

    @classmethod
    def load(cls, path) -> "ConfidenceScheme":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls(
            thresholds=payload.get("thresholds"),
            tiers=payload.get("tiers"),
            sem_mode=payload.get("sem_mode", "max"),
        )

    def sem_scalar(self, sem: SemScore) -> float:
        if self.sem_mode == "hw":
            return sem.hw
        if self.sem_mode == "aw":
            return sem.aw
        return max(sem.hw, sem.aw)

    def passes_filter(self, ev: EvidenceVector) -> bool:
        return ev.tm >= self.thresholds["tm"] and self.sem_scalar(ev.sem) >= self.thresholds["sem"]

    def _holds(self, cond: str, ev: EvidenceVector, ds_source: float, ds_target: float) -> bool:
        th = self.thresholds
        if cond == "syn":
            return ev.syn is not None
        if cond == "tm":
            return ev.tm >= th["tm"]
        if cond == "tm_hi":
            return ev.tm >= th["tm_hi"]
        if cond == "sem":
            return self.sem_scalar(ev.sem) >= th["sem"]
        if cond == "sem_hi":
            return self.sem_scalar(ev.sem) >= th["sem_hi"]
        if cond == "arm":
            return ev.arm >= th["arm"]
        if cond == "ds":
            return ds_source >= th["ds"] and ds_target >= th["ds"]
        raise SchemeError(f"unknown condition {cond!r}")

    def confidence(self, ev: EvidenceVector, ds_source: float, ds_target: float) -> float:
        for tier in self.tiers:
            if all(self._holds(c, ev, ds_source, ds_target) for c in tier.get("requires", [])):
                return tier["conf"]
        return 0.0


class EvidenceProvider(Protocol):
    def syn(self, link, source_term: str, target_term: str) -> SynEvidence | None: ...

    def sem(self, source_term: str, target_term: str) -> SemScore: ...

    def arm(self, source_term: str, target_term: str) -> float: ...

    def tm(self, source_term: str, target_term: str) -> float: ...

    def ds(self, term: str) -> float: ...


@dataclass
class PlantedEvidence:
    """Evidence provider backed by explicit per-pair tables; used in tests
    and anywhere the four engines are bypassed."""

    syn_table: dict[tuple[str, str], SynEvidence] = field(default_factory=dict)
    sem_table: dict[tuple[str, str], SemScore] = field(default_factory=dict)
    arm_table: dict[tuple[str, str], float] = field(default_factory=dict)
    tm_table: dict[tuple[str, str], float] = field(default_factory=dict)
    ds_table: dict[str, float] = field(default_factory=dict)

    def syn(self, link, source_term, target_term):
        return self.syn_table.get((source_term, target_term))

    def sem(self, source_term, target_term):
        return self.sem_table.get((source_term, target_term)) or self.sem_table.get(
            (target_term, source_term), SemScore(0.0, 0.0)
        )

    def arm(self, source_term, target_term):
        return self.arm_table.get((source_term, target_term), 0.0)

    def tm(self, source_term, target_term):
        return self.tm_table.get((source_term, target_term)) or self.tm_table.get(
            (target_term, source_term), 0.0
        )

    def ds(self, term):
        return self.ds_table.get(term, 0.0)


def generate_candidates(link, source_terms: list[str], target_terms: list[str], provider: EvidenceProvider) -> list[CandidateFact]:
    """One candidate per source-target term pairing with full evidence."""
    candidates = []
    for s in source_terms:
        for t in target_terms:
            if s == t:
                continue
            syn = provider.syn(link, s, t)
            ev = EvidenceVector(
                syn=syn,
                sem=provider.sem(s, t),
                arm=provider.arm(s, t),
                tm=provider.tm(s, t),
            )
            candidates.append(
                CandidateFact(
                    link_id=getattr(link, "id", str(link)),
                    source_term=s,
                    target_term=t,
                    evidence=ev,
                    relation_label=syn.relation_label if syn else None,
                    reversed=syn.reversed if syn else False,
                )
            )
    return candidates


def filter_candidates(candidates: list[CandidateFact], scheme: ConfidenceScheme) -> list[CandidateFact]:
    """Step 1: keep only candidates with both topic and semantic support."""
    return [c for c in candidates if scheme.passes_filter(c.evidence)]


def score_and_rank(
    candidates: list[CandidateFact],
    scheme: ConfidenceScheme,
    ds_lookup: Callable[[str], float],
) -> list[CandidateFact]:
    """Steps 2-3: assign tier confidences and sort into a total order.

    Order: confidence desc, then tm x semantic scalar desc, then association
    cosine desc, then (source, target) alphabetically. Ranks are 1-based.
    """
    for c in candidates:
        c.conf = scheme.confidence(c.evidence, ds_lookup(c.source_term), ds_lookup(c.target_term))
    ordered = sorted(
        candidates,
        key=lambda c: (
            -c.conf,
            -(c.evidence.tm * scheme.sem_scalar(c.evidence.sem)),
            -c.evidence.arm,
            c.source_term,
            c.target_term,
        ),
    )
    for i, c in enumerate(ordered, start=1):
        c.rank = i
    return ordered


@dataclass(frozen=True)
class AcceptPolicy:
    top_n: int | None = None
    min_conf: float | None = None

    @classmethod
    def parse(cls, spec: str) -> "AcceptPolicy":
        kind, _, value = spec.partition(":")
        if kind == "top":
            return cls(top_n=int(value))
        if kind == "conf":
            return cls(min_conf=float(value))
        raise ValueError(f"accept policy must be 'top:N' or 'conf:X', got {spec!r}")


def accept(ranked: list[CandidateFact], policy: AcceptPolicy) -> list[CandidateFact]:
    """Step 4: the accepted prefix or over-threshold subset, in rank order."""
    if policy.top_n is not None:
        return ranked[: max(policy.top_n, 0)]
    if policy.min_conf is not None:
        return [c for c in ranked if c.conf >= policy.min_conf]
    raise ValueError("accept policy must set top_n or min_conf")


def mine_link(
    link,
    source_terms: list[str],
    target_terms: list[str],
    provider: EvidenceProvider,
    scheme: ConfidenceScheme,
) -> list[CandidateFact]:
    """Full pipeline for one link: generate, filter, score, rank."""
    candidates = generate_candidates(link, source_terms, target_terms, provider)
    survivors = filter_candidates(candidates, scheme)
    return score_and_rank(survivors, scheme, provider.ds)
