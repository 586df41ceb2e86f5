"""Hit-ratio evaluation of ranked candidate facts against answer sets.

A hit is an answer fact whose unordered, lemma-normalized term pair appears
within the top N of its link's ranked list. Curves report, for N = 1..n_max,
the fraction of answer facts hit; the generation ceiling (fraction produced
at any rank) is reported separately since curves plateau there.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .fusion import CandidateFact
from .lda import Lcg
from .nlp import normalize_phrase


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class AnswerFact:
    source: str
    target: str
    label: str | None = None

    def pair(self) -> frozenset[str]:
        return frozenset((self.source, self.target))


@dataclass
class AnswerSet:
    link_id: str
    facts: list[AnswerFact]


@dataclass
class HitRatioCurve:
    method: str
    points: list[float]  # index 0 is N=1
    ceiling: float
    total_answers: int
    n_max: int

    @property
    def empty(self) -> bool:
        return self.total_answers == 0

    def at(self, n: int) -> float:
        if self.empty:
            raise EvalError(f"curve {self.method!r} is empty: no answer facts")
        if not 1 <= n <= self.n_max:
            raise EvalError(f"N={n} outside [1, {self.n_max}]")
        return self.points[n - 1]


def load_answer_sets(path, normalize: bool = True) -> list[AnswerSet]:
    """Answer sets from JSON Lines {link_id, facts: [{source, target, label?}]}."""
    path = Path(path)
    answer_sets = []
    with path.open(encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise EvalError(f"{path}:{line_no}: invalid JSON: {e.msg}") from e
            facts = []
            for f in obj.get("facts", []):
                source, target = f["source"], f["target"]
                if normalize:
                    source, target = normalize_phrase(source), normalize_phrase(target)
                facts.append(AnswerFact(source=source, target=target, label=f.get("label")))
            answer_sets.append(AnswerSet(link_id=obj["link_id"], facts=facts))
    return answer_sets


def _pair_lists(ranked_lists: dict[str, list]) -> dict[str, list[frozenset[str]]]:
    out = {}
    for link_id, ranked in ranked_lists.items():
        pairs = []
        for item in ranked:
            if isinstance(item, CandidateFact):
                pairs.append(frozenset((item.source_term, item.target_term)))
            else:
                pairs.append(frozenset(item))
        out[link_id] = pairs
    return out


def hit_ratio(
    ranked_lists: dict[str, list],
    answers: list[AnswerSet],
    n_max: int = 100,
    method: str = "heuristic",
    macro: bool = False,
) -> HitRatioCurve:
    """Curve of answer facts found within top N, label-blind, micro-averaged.

    ``macro=True`` averages per-link fractions instead of pooling all answer
    facts. Every answered link must have a ranked list (it may be empty).
    """
    for ans in answers:
        if ans.link_id not in ranked_lists:
            raise EvalError(f"answer set references unknown link {ans.link_id!r}")
    pair_lists = _pair_lists(ranked_lists)

    total = sum(len(a.facts) for a in answers)
    if total == 0:
        return HitRatioCurve(method=method, points=[], ceiling=0.0, total_answers=0, n_max=n_max)

    # rank (1-based) of each answer fact, or None if never generated
    per_link_ranks: list[list[int | None]] = []
    for ans in answers:
        pairs = pair_lists[ans.link_id]
        ranks = []
        for fact in ans.facts:
            want = fact.pair()
            found = None
            for idx, pair in enumerate(pairs):
                if pair == want:
                    found = idx + 1
                    break
            ranks.append(found)
        per_link_ranks.append(ranks)

    points = []
    for n in range(1, n_max + 1):
        if macro:
            fracs = [
                sum(1 for r in ranks if r is not None and r <= n) / len(ranks)
                for ranks in per_link_ranks
                if ranks
            ]
            points.append(sum(fracs) / len(fracs))
        else:
            hits = sum(1 for ranks in per_link_ranks for r in ranks if r is not None and r <= n)
            points.append(hits / total)
    generated = sum(1 for ranks in per_link_ranks for r in ranks if r is not None)
    return HitRatioCurve(
        method=method,
        points=points,
        ceiling=generated / total,
        total_answers=total,
        n_max=n_max,
    )


def _technique_ranking(candidates: list[CandidateFact], scalar) -> list[CandidateFact]:
    return sorted(
        candidates,
        key=lambda c: (-scalar(c), -c.evidence.tm, c.source_term, c.target_term),
    )


TECHNIQUE_SCALARS = {
    "syn": lambda c: 1.0 if c.evidence.syn is not None else 0.0,
    "sem": lambda c: c.evidence.sem.aw,
    "arm": lambda c: c.evidence.arm,
    "tm": lambda c: c.evidence.tm,
}


def technique_curves(
    unfiltered: dict[str, list[CandidateFact]],
    fused: dict[str, list[CandidateFact]],
    answers: list[AnswerSet],
    n_max: int = 100,
    macro: bool = False,
) -> list[HitRatioCurve]:
    """Per-technique curves over unfiltered candidates plus the fused curve.

    A single technique ranks by its own scalar (syntactic evidence counts as
    one or zero) with topic cosine breaking ties; the fused ranking is used
    as given.
    """
    curves = []
    for name, scalar in TECHNIQUE_SCALARS.items():
        ranked = {lid: _technique_ranking(cands, scalar) for lid, cands in unfiltered.items()}
        curves.append(hit_ratio(ranked, answers, n_max=n_max, method=name, macro=macro))
    curves.append(hit_ratio(fused, answers, n_max=n_max, method="heuristic", macro=macro))
    return curves


def random_baseline(
    unfiltered: dict[str, list[CandidateFact]],
    answers: list[AnswerSet],
    seeds: list[int],
    n_max: int = 100,
    macro: bool = False,
) -> HitRatioCurve:
    """Average curve over per-seed uniform shuffles of each link's list."""
    if not seeds:
        raise EvalError("at least one seed required")
    acc = [0.0] * n_max
    ceiling_acc = 0.0
    total_answers = 0
    for seed in seeds:
        rng = Lcg(seed)
        shuffled = {}
        for link_id in unfiltered:
            cands = list(unfiltered[link_id])
            rng.shuffle(cands)
            shuffled[link_id] = cands
        curve = hit_ratio(shuffled, answers, n_max=n_max, method="random", macro=macro)
        if curve.empty:
            return curve
        total_answers = curve.total_answers
        ceiling_acc += curve.ceiling
        for i in range(n_max):
            acc[i] += curve.points[i]
    k = len(seeds)
    return HitRatioCurve(
        method="random",
        points=[x / k for x in acc],
        ceiling=ceiling_acc / k,
        total_answers=total_answers,
        n_max=n_max,
    )


def curves_to_csv(curves: list[HitRatioCurve]) -> str:
    lines = ["method,N,hit_ratio"]
    for curve in curves:
        for n in range(1, curve.n_max + 1):
            lines.append(f"{curve.method},{n},{curve.points[n - 1]:.6f}")
    return "\n".join(lines) + "\n"


def curves_to_dat(curves: list[HitRatioCurve]) -> str:
    """Gnuplot-friendly columns: N then one hit-ratio column per method."""
    if not curves:
        return ""
    header = "# N " + " ".join(c.method for c in curves)
    lines = [header]
    for n in range(1, curves[0].n_max + 1):
        row = [str(n)] + [f"{c.points[n - 1]:.6f}" for c in curves]
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"
