"""Association mining over trace links.

Every trace link is one transaction: the set of domain-specific terms in its
source artifact on one side and in its target artifact on the other. Pairs
are scored with the cosine interest measure, co-occurrence count over the
geometric mean of the marginal counts, which is unaffected by transaction
volume and by rare-event skew.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .terms import CorpusStats, domain_terms_in


@dataclass(frozen=True)
class Transaction:
    link_id: str
    source_items: frozenset[str]
    target_items: frozenset[str]


@dataclass(frozen=True)
class ArmScore:
    source_term: str
    target_term: str
    co_count: int
    src_count: int
    tgt_count: int
    cosine: float


def build_transactions(project, stats: CorpusStats) -> list[Transaction]:
    """One transaction per trace link, in link load order."""
    transactions = []
    for link in project.links.values():
        source, target = project.link_endpoints(link)
        transactions.append(
            Transaction(
                link_id=link.id,
                source_items=frozenset(t.text for t in domain_terms_in(source, stats)),
                target_items=frozenset(t.text for t in domain_terms_in(target, stats)),
            )
        )
    return transactions


class ArmModel:
    """Side-respecting pair counts over a fixed transaction list."""

    def __init__(self, transactions: list[Transaction], min_cooccur: int = 1):
        if min_cooccur < 1:
            raise ValueError("min_cooccur must be >= 1")
        self.transactions = list(transactions)
        self.min_cooccur = min_cooccur
        self._src_counts: dict[str, int] = {}
        self._tgt_counts: dict[str, int] = {}
        self._pair_counts: dict[tuple[str, str], int] = {}
        for tx in self.transactions:
            for s in tx.source_items:
                self._src_counts[s] = self._src_counts.get(s, 0) + 1
            for t in tx.target_items:
                self._tgt_counts[t] = self._tgt_counts.get(t, 0) + 1
            for s in tx.source_items:
                for t in tx.target_items:
                    self._pair_counts[(s, t)] = self._pair_counts.get((s, t), 0) + 1

    def score(self, source_term: str, target_term: str) -> ArmScore:
        co = self._pair_counts.get((source_term, target_term), 0)
        src = self._src_counts.get(source_term, 0)
        tgt = self._tgt_counts.get(target_term, 0)
        if co < self.min_cooccur or src == 0 or tgt == 0:
            cosine = 0.0
        else:
            cosine = co / math.sqrt(src * tgt)
        return ArmScore(
            source_term=source_term,
            target_term=target_term,
            co_count=co,
            src_count=src,
            tgt_count=tgt,
            cosine=cosine,
        )

    def cosine(self, source_term: str, target_term: str) -> float:
        return self.score(source_term, target_term).cosine

    def top_pairs(self, n: int) -> list[ArmScore]:
        """Highest-cosine pairs; ties broken by co-count then alphabetically."""
        if n <= 0:
            return []
        scored = [self.score(s, t) for (s, t) in self._pair_counts]
        scored.sort(key=lambda a: (-a.cosine, -a.co_count, a.source_term, a.target_term))
        return scored[:n]
