"""Query expansion over the vetted ontology, and expanded artifact search.

A query term grows along accepted facts: synonym edges both ways, subclass
edges downward from a queried superclass, part/subsystem edges downward from
the whole. Untyped and verb-labeled relations count as generic associations
and are followed only on the first hop. Every expansion carries the fact-id
path that justifies it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nlp import normalize_phrase
from .store import Fact, Ontology
from .terms import find_term_spans

SYNONYM_RELATIONS = frozenset({"synonym", "is-synonym-of", "same-as"})
SUBCLASS_RELATIONS = frozenset({"is-subclass-of", "is-a", "subclass-of", "one type of", "type-of"})
SUPERCLASS_RELATIONS = frozenset({"is-superclass-of", "superclass-of"})
HAS_PART_RELATIONS = frozenset({"has-part", "contains", "has-subsystem", "comprises"})
PART_OF_RELATIONS = frozenset(
    {"is-part-of", "part-of", "subsystem", "subsystem-of", "is-subsystem-of", "component-of"}
)


@dataclass
class Expansion:
    term: str
    relation: str
    hops: int
    path: list[str]  # fact ids, in traversal order


@dataclass
class ExpandedQuery:
    original_terms: list[str]
    expansions: dict[str, list[Expansion]] = field(default_factory=dict)

    def all_terms_weighted(self) -> dict[str, float]:
        """Every query plus expansion term with weight 1 / (1 + hops)."""
        weights = {t: 1.0 for t in self.original_terms}
        for exps in self.expansions.values():
            for e in exps:
                w = 1.0 / (1.0 + e.hops)
                if w > weights.get(e.term, 0.0):
                    weights[e.term] = w
        return weights


def _neighbors(fact: Fact, node: str) -> str | None:
    """The node reached by traversing ``fact`` from ``node``, if allowed."""
    rel = fact.relation
    if rel in SYNONYM_RELATIONS:
        if fact.source == node:
            return fact.target
        if fact.target == node:
            return fact.source
        return None
    if rel in SUBCLASS_RELATIONS or rel in PART_OF_RELATIONS:
        # stored as (part/subclass, rel, whole/superclass): walk downward
        return fact.source if fact.target == node else None
    if rel in SUPERCLASS_RELATIONS or rel in HAS_PART_RELATIONS:
        return fact.target if fact.source == node else None
    # generic association: either direction, first hop only (checked by caller)
    if fact.source == node:
        return fact.target
    if fact.target == node:
        return fact.source
    return None


def _is_generic(relation: str) -> bool:
    return relation not in (
        SYNONYM_RELATIONS
        | SUBCLASS_RELATIONS
        | SUPERCLASS_RELATIONS
        | HAS_PART_RELATIONS
        | PART_OF_RELATIONS
    )


def expand_query(ontology: Ontology, terms: list[str], max_hops: int = 2) -> ExpandedQuery:
    """Breadth-first expansion of each term along accepted facts."""
    result = ExpandedQuery(original_terms=list(terms))
    for raw in terms:
        start = normalize_phrase(raw)
        found: list[Expansion] = []
        seen = {start}
        frontier: list[tuple[str, int, list[str]]] = [(start, 0, [])]
        while frontier:
            node, hops, path = frontier.pop(0)
            if hops >= max_hops:
                continue
            for fact in ontology.facts_touching(node):
                if _is_generic(fact.relation) and hops > 0:
                    continue
                nxt = _neighbors(fact, node)
                if nxt is None or nxt in seen:
                    continue
                seen.add(nxt)
                exp = Expansion(term=nxt, relation=fact.relation, hops=hops + 1, path=path + [fact.id])
                found.append(exp)
                frontier.append((nxt, hops + 1, exp.path))
        result.expansions[raw] = found
    return result


@dataclass
class SearchHit:
    artifact_id: str
    score: float
    matched: dict[str, float]  # term -> weight contributed


def search_artifacts(project, expanded: ExpandedQuery) -> list[SearchHit]:
    """Artifacts ranked by summed weights of distinct matched terms.

    Original terms weigh 1; an expansion at h hops weighs 1/(1+h). Ties
    break on artifact id.
    """
    weights = expanded.all_terms_weighted()
    normalized = {normalize_phrase(t): w for t, w in weights.items()}
    term_set = set(normalized)
    hits = []
    for artifact in project.artifacts.values():
        matched: dict[str, float] = {}
        for sentence in artifact.sentences:
            for _, _, phrase in find_term_spans(sentence, term_set):
                matched[phrase] = normalized[phrase]
        if matched:
            hits.append(
                SearchHit(
                    artifact_id=artifact.id,
                    score=sum(matched.values()),
                    matched=dict(sorted(matched.items())),
                )
            )
    hits.sort(key=lambda h: (-h.score, h.artifact_id))
    return hits
