"""WordNet-backed semantic relatedness.

Parses the standard WordNet 3.x database files (data.noun, index.noun,
data.verb, index.verb plus optional exception lists), attributes corpus counts
to synsets to estimate information content, and scores word pairs with the
Lin measure: twice the information content of the least common subsumer over
the summed information content of the two senses, maximized over sense pairs.

Phrase pairs get two scores: head-word relatedness and the symmetrized
average of per-word best matches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .nlp import STOPWORD_LEMMAS

_POS_TAGS = ("n", "v")
_HYPERNYM_SYMBOLS = ("@", "@i")


class WordNetError(Exception):
    pass


@dataclass
class SynsetNode:
    id: str  # pos + offset, e.g. "n00001740"
    pos: str
    lemmas: list[str]
    hypernyms: list[str] = field(default_factory=list)
    count: float = 0.0
    ic: float = 0.0


class Taxonomy:
    def __init__(self):
        self.synsets: dict[str, SynsetNode] = {}
        self.lemma_index: dict[tuple[str, str], list[str]] = {}  # (pos, lemma) -> synset ids
        self.exceptions: dict[tuple[str, str], str] = {}
        self._ancestors: dict[str, frozenset[str]] = {}
        self._ic_ready = False

    def synsets_for(self, lemma: str, pos: str) -> list[SynsetNode]:
        lemma = lemma.lower().replace(" ", "_")
        ids = self.lemma_index.get((pos, lemma), [])
        return [self.synsets[sid] for sid in ids]

    def ancestors_or_self(self, sid: str) -> frozenset[str]:
        cached = self._ancestors.get(sid)
        if cached is not None:
            return cached
        out: set[str] = set()
        stack = [sid]
        while stack:
            cur = stack.pop()
            if cur in out:
                continue
            out.add(cur)
            stack.extend(self.synsets[cur].hypernyms)
        frozen = frozenset(out)
        self._ancestors[sid] = frozen
        return frozen

    def _check_acyclic(self) -> None:
        state: dict[str, int] = {}  # 1 = in progress, 2 = done
        for start in self.synsets:
            if state.get(start):
                continue
            stack: list[tuple[str, int]] = [(start, 0)]
            state[start] = 1
            while stack:
                node, idx = stack[-1]
                hypers = self.synsets[node].hypernyms
                if idx < len(hypers):
                    stack[-1] = (node, idx + 1)
                    nxt = hypers[idx]
                    st = state.get(nxt)
                    if st == 1:
                        raise WordNetError(f"hypernym cycle involving synset {nxt}")
                    if st is None:
                        state[nxt] = 1
                        stack.append((nxt, 0))
                else:
                    state[node] = 2
                    stack.pop()


def _parse_data_line(line: str, pos: str) -> SynsetNode:
    head = line.split(" | ", 1)[0]
    fields = head.split()
    offset = fields[0]
    ss_type = fields[2]
    w_cnt = int(fields[3], 16)
    lemmas = []
    idx = 4
    for _ in range(w_cnt):
        lemmas.append(fields[idx].lower())
        idx += 2  # skip lex_id
    p_cnt = int(fields[idx])
    idx += 1
    hypernyms = []
    for _ in range(p_cnt):
        symbol, ptr_offset, ptr_pos = fields[idx], fields[idx + 1], fields[idx + 2]
        idx += 4  # symbol, offset, pos, source/target
        if symbol in _HYPERNYM_SYMBOLS and ptr_pos == pos:
            hypernyms.append(f"{pos}{ptr_offset}")
    del ss_type
    return SynsetNode(id=f"{pos}{offset}", pos=pos, lemmas=lemmas, hypernyms=hypernyms)


def load_wordnet(directory) -> Taxonomy:
    """Load noun and verb taxonomies from WordNet 3.x database files."""
    directory = Path(directory)
    tax = Taxonomy()
    for pos, name in (("n", "noun"), ("v", "verb")):
        data_path = directory / f"data.{name}"
        index_path = directory / f"index.{name}"
        for p in (data_path, index_path):
            if not p.is_file():
                raise WordNetError(f"missing WordNet file: {p.name}")
        try:
            for line in data_path.read_text("utf-8").splitlines():
                if not line or line.startswith("  "):
                    continue
                try:
                    node = _parse_data_line(line, pos)
                except (IndexError, ValueError) as e:
                    raise WordNetError(f"corrupt entry in {data_path.name}: {line[:40]!r}") from e
                tax.synsets[node.id] = node
            for line in index_path.read_text("utf-8").splitlines():
                if not line or line.startswith("  "):
                    continue
                fields = line.split()
                try:
                    lemma = fields[0].lower()
                    synset_cnt = int(fields[2])
                    p_cnt = int(fields[3])
                    offsets = fields[4 + p_cnt + 2 :]
                    if len(offsets) < synset_cnt:
                        raise ValueError("truncated offset list")
                    ids = [f"{pos}{off}" for off in offsets[:synset_cnt]]
                except (IndexError, ValueError) as e:
                    raise WordNetError(f"corrupt entry in {index_path.name}: {line[:40]!r}") from e
                tax.lemma_index[(pos, lemma)] = ids
        except OSError as e:
            raise WordNetError(f"cannot read {e.filename}") from e
        exc_path = directory / f"{name}.exc"
        if exc_path.is_file():
            for line in exc_path.read_text("utf-8").splitlines():
                parts = line.split()
                if len(parts) >= 2:
                    tax.exceptions[(pos, parts[0].lower())] = parts[1].lower()
    dangling = [
        (sid, h)
        for sid, node in tax.synsets.items()
        for h in node.hypernyms
        if h not in tax.synsets
    ]
    if dangling:
        sid, h = dangling[0]
        raise WordNetError(f"synset {sid} points to unknown hypernym {h}")
    tax._check_acyclic()
    return tax


def compute_ic(tax: Taxonomy, corpus_counts) -> Taxonomy:
    """Populate information content from corpus lemma counts.

    Each lemma's count is split evenly across its synsets within a part of
    speech; every synset additionally receives one smoothing count. Counts
    propagate to all hypernym ancestors and ic = -ln(propagated / pos total).
    """
    counts = getattr(corpus_counts, "token_lemma_counts", corpus_counts)
    own: dict[str, float] = {sid: 1.0 for sid in tax.synsets}
    for lemma, count in counts.items():
        for pos in _POS_TAGS:
            ids = tax.lemma_index.get((pos, lemma.lower().replace(" ", "_")))
            if ids:
                share = count / len(ids)
                for sid in ids:
                    own[sid] += share
    totals = {pos: 0.0 for pos in _POS_TAGS}
    for sid, node in tax.synsets.items():
        totals[node.pos] += own[sid]
    propagated: dict[str, float] = {sid: 0.0 for sid in tax.synsets}
    for sid in tax.synsets:
        for anc in tax.ancestors_or_self(sid):
            propagated[anc] += own[sid]
    for sid, node in tax.synsets.items():
        total = totals[node.pos]
        p = propagated[sid] / total if total > 0 else 1.0
        node.count = propagated[sid]
        node.ic = -math.log(p) if p < 1.0 else 0.0
    tax._ic_ready = True
    return tax


@dataclass(frozen=True)
class SemScore:
    hw: float
    aw: float


def lin(tax: Taxonomy, word_a: str, word_b: str) -> float:
    """Max Lin relatedness over same-POS sense pairs; 0 when undefined."""
    best = 0.0
    for pos in _POS_TAGS:
        for sa in tax.synsets_for(word_a, pos):
            anc_a = tax.ancestors_or_self(sa.id)
            for sb in tax.synsets_for(word_b, pos):
                common = anc_a & tax.ancestors_or_self(sb.id)
                if not common:
                    continue
                denom = sa.ic + sb.ic
                if denom <= 0:
                    continue
                lcs_ic = max(tax.synsets[sid].ic for sid in common)
                val = 2.0 * lcs_ic / denom
                if val > best:
                    best = val
    return min(best, 1.0)


def _content_words(text: str) -> list[str]:
    return [w for w in text.split() if w not in STOPWORD_LEMMAS]


def _head_of(term) -> str:
    head = getattr(term, "head", None)
    if head:
        return head
    words = _content_words(term if isinstance(term, str) else term.text)
    return words[-1] if words else ""


def _text_of(term) -> str:
    return term if isinstance(term, str) else term.text


def sem_score(tax: Taxonomy, term_a, term_b) -> SemScore:
    """Head-word and all-words relatedness for a term pair.

    The all-words score averages, in each direction, every content word's
    best match in the other phrase, then averages the two directions so the
    result is symmetric.
    """
    head_a, head_b = _head_of(term_a), _head_of(term_b)
    hw = lin(tax, head_a, head_b) if head_a and head_b else 0.0
    words_a = _content_words(_text_of(term_a))
    words_b = _content_words(_text_of(term_b))
    if not words_a or not words_b:
        return SemScore(hw=hw, aw=0.0)
    pair_scores = {(wa, wb): lin(tax, wa, wb) for wa in words_a for wb in words_b}
    avg_a = sum(max(pair_scores[(wa, wb)] for wb in words_b) for wa in words_a) / len(words_a)
    avg_b = sum(max(pair_scores[(wa, wb)] for wa in words_a) for wb in words_b) / len(words_b)
    return SemScore(hw=hw, aw=(avg_a + avg_b) / 2.0)
