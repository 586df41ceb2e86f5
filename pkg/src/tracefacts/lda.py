"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

Training is fully deterministic for a given (corpus, k, iterations, alpha,
beta, seed): sampling order is document order then token order, and draws come
from a 64-bit linear congruential generator (Knuth MMIX multiplier
6364136223846793005, increment 1442695040888963407; doubles take the top 53
bits, bounded ints multiply-shift the top 32), so identical inputs reproduce
identical models across platforms and languages.

Term association is the cosine of topic-space vectors, where a term's vector
is its per-topic probability. Multiword terms are expected to be merged into
single vocabulary entries during document preparation; unseen multiword terms
fall back to the mean of their constituent word vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class Lcg:
    """Deterministic 64-bit linear congruential generator."""

    MULT = 6364136223846793005
    INC = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state * self.MULT + self.INC) & self.MASK
        return self.state

    def next_double(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def next_int(self, n: int) -> int:
        # multiply-shift on the high 32 bits; the low bits of an LCG cycle
        # too quickly for modulo draws
        return ((self.next_u64() >> 32) * n) >> 32

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.next_int(i + 1)
            items[i], items[j] = items[j], items[i]


class TopicModelError(Exception):
    pass


@dataclass
class TopicModel:
    k: int
    vocab: list[str]
    phi: np.ndarray  # (k, vocab) rows sum to 1
    theta: np.ndarray  # (docs, k) rows sum to 1
    seed: int
    iterations: int
    alpha: float
    beta: float

    def __post_init__(self):
        self._vocab_index = {w: i for i, w in enumerate(self.vocab)}
        self._top_sets: dict[int, list[set[int]]] = {}

    def vocab_id(self, term: str) -> int | None:
        return self._vocab_index.get(term)

    def top_terms(self, topic: int, n: int = 20) -> list[tuple[str, float]]:
        """The n most probable terms of a topic, ties broken alphabetically."""
        if not 0 <= topic < self.k:
            raise IndexError(f"topic index {topic} out of range [0, {self.k})")
        row = self.phi[topic]
        order = sorted(range(len(self.vocab)), key=lambda v: (-row[v], self.vocab[v]))
        return [(self.vocab[v], float(row[v])) for v in order[:n]]

    def _truncation_sets(self, top_n: int) -> list[set[int]]:
        sets = self._top_sets.get(top_n)
        if sets is None:
            sets = [
                {self._vocab_index[w] for w, _ in self.top_terms(j, top_n)}
                for j in range(self.k)
            ]
            self._top_sets[top_n] = sets
        return sets

    def term_vector(self, term: str, truncate_top: int | None = None) -> np.ndarray:
        """Topic-space vector; zero for out-of-vocabulary single words.

        A multiword term missing from the vocabulary is averaged from its
        constituent words. With ``truncate_top`` set, entries where the term
        falls outside a topic's top-n list are zeroed.
        """
        vid = self._vocab_index.get(term)
        if vid is None and " " in term:
            parts = term.split()
            vecs = [self.term_vector(p, truncate_top) for p in parts]
            return np.mean(vecs, axis=0)
        if vid is None:
            return np.zeros(self.k)
        vec = self.phi[:, vid].copy()
        if truncate_top is not None:
            sets = self._truncation_sets(truncate_top)
            for j in range(self.k):
                if vid not in sets[j]:
                    vec[j] = 0.0
        return vec

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "vocab": self.vocab,
            "phi": [[float(x) for x in row] for row in self.phi],
            "theta": [[float(x) for x in row] for row in self.theta],
            "seed": self.seed,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "beta": self.beta,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TopicModel":
        payload = json.loads(text)
        return cls(
            k=payload["k"],
            vocab=payload["vocab"],
            phi=np.array(payload["phi"], dtype=float),
            theta=np.array(payload["theta"], dtype=float),
            seed=payload["seed"],
            iterations=payload["iterations"],
            alpha=payload["alpha"],
            beta=payload["beta"],
        )


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.dot(u, u))
    nv = float(np.dot(v, v))
    if nu <= 0.0 or nv <= 0.0:
        return 0.0
    val = float(np.dot(u, v)) / math.sqrt(nu * nv)
    return max(0.0, min(1.0, val))


def train_lda(
    documents: list[list[str]],
    k: int,
    iterations: int = 1000,
    alpha: float | None = None,
    beta: float = 0.01,
    seed: int = 1,
) -> TopicModel:
    """Collapsed Gibbs sampling over tokenized documents."""
    if k < 2:
        raise TopicModelError("k must be at least 2")
    docs = [d for d in documents if d]
    if not docs:
        raise TopicModelError("corpus has no non-empty documents")
    if alpha is None:
        alpha = 50.0 / k

    vocab = sorted({w for doc in docs for w in doc})
    vocab_index = {w: i for i, w in enumerate(vocab)}
    v_size = len(vocab)

    doc_words = [np.array([vocab_index[w] for w in doc], dtype=np.int64) for doc in docs]
    n_wk = np.zeros((v_size, k), dtype=np.float64)
    n_dk = np.zeros((len(docs), k), dtype=np.float64)
    n_k = np.zeros(k, dtype=np.float64)
    assignments = [np.zeros(len(ws), dtype=np.int64) for ws in doc_words]

    rng = Lcg(seed)
    for d, ws in enumerate(doc_words):
        for i, w in enumerate(ws):
            topic = rng.next_int(k)
            assignments[d][i] = topic
            n_wk[w, topic] += 1
            n_dk[d, topic] += 1
            n_k[topic] += 1

    vbeta = v_size * beta
    for _ in range(iterations):
        for d, ws in enumerate(doc_words):
            zs = assignments[d]
            ndk_d = n_dk[d]
            for i in range(len(ws)):
                w = ws[i]
                old = zs[i]
                nwk_w = n_wk[w]
                nwk_w[old] -= 1
                ndk_d[old] -= 1
                n_k[old] -= 1
                weights = (nwk_w + beta) / (n_k + vbeta) * (ndk_d + alpha)
                cum = np.cumsum(weights)
                u = rng.next_double() * cum[-1]
                new = int(np.searchsorted(cum, u, side="right"))
                if new >= k:
                    new = k - 1
                nwk_w[new] += 1
                ndk_d[new] += 1
                n_k[new] += 1
                zs[i] = new

    phi = (n_wk.T + beta) / (n_k[:, None] + vbeta)
    phi = phi / phi.sum(axis=1, keepdims=True)
    doc_lens = np.array([len(ws) for ws in doc_words], dtype=np.float64)
    theta = (n_dk + alpha) / (doc_lens[:, None] + k * alpha)
    theta = theta / theta.sum(axis=1, keepdims=True)
    return TopicModel(
        k=k,
        vocab=vocab,
        phi=phi,
        theta=theta,
        seed=seed,
        iterations=iterations,
        alpha=alpha,
        beta=beta,
    )


def tm_score(model: TopicModel, term_a: str, term_b: str, truncate_top: int | None = None) -> float:
    """Cosine similarity of two terms' topic vectors, in [0, 1]."""
    va = model.term_vector(term_a, truncate_top)
    vb = model.term_vector(term_b, truncate_top)
    return cosine(va, vb)
