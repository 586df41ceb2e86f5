"""Project runtime: loads a project directory and wires the four association
engines behind a single evidence provider, with per-link candidate caching.

A project directory contains project.json:

    {
      "artifacts": "artifacts.jsonl",
      "links": "links.jsonl",
      "domain_dir": "domain",
      "general_dir": "general",
      "wordnet_dir": null,
      "threshold": 1.0,
      "min_cooccur": 1,
      "lda": {"k": 20, "iterations": 200, "alpha": null, "beta": 0.01, "seed": 42},
      "scheme": null,
      "sem_mode": "max",
      "truncate_top": null
    }

Paths are relative to the directory. Without a wordnet directory the semantic
channel scores zero, so schemes for such projects should lower the semantic
thresholds.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from . import assoc, fusion, lda, nlp, patterns, terms, wordnet
from .project import Project, ingest_project
from .store import Fact, FactStore, UNTYPED_RELATION, fact_id_for
from .terms import CorpusStats, domain_terms_in, find_term_spans


class ConfigError(Exception):
    pass


@dataclass
class LdaParams:
    k: int = 20
    iterations: int = 200
    alpha: float | None = None
    beta: float = 0.01
    seed: int = 42


@dataclass
class ProjectConfig:
    root: Path
    artifacts: Path
    links: Path
    domain_dir: Path
    general_dir: Path
    wordnet_dir: Path | None = None
    threshold: float = terms.DEFAULT_THRESHOLD
    min_cooccur: int = 1
    lda_params: LdaParams = None  # type: ignore[assignment]
    scheme_path: Path | None = None
    sem_mode: str = "max"
    truncate_top: int | None = None

    def __post_init__(self):
        if self.lda_params is None:
            self.lda_params = LdaParams()

    @classmethod
    def load(cls, project_dir) -> "ProjectConfig":
        root = Path(project_dir)
        config_path = root / "project.json"
        if not config_path.is_file():
            raise ConfigError(f"missing project config: {config_path}")
        payload = json.loads(config_path.read_text("utf-8"))
        for key in ("artifacts", "links", "domain_dir", "general_dir"):
            if key not in payload:
                raise ConfigError(f"project.json missing required key {key!r}")
        lda_payload = payload.get("lda", {})
        return cls(
            root=root,
            artifacts=root / payload["artifacts"],
            links=root / payload["links"],
            domain_dir=root / payload["domain_dir"],
            general_dir=root / payload["general_dir"],
            wordnet_dir=(root / payload["wordnet_dir"]) if payload.get("wordnet_dir") else None,
            threshold=payload.get("threshold", terms.DEFAULT_THRESHOLD),
            min_cooccur=payload.get("min_cooccur", 1),
            lda_params=LdaParams(
                k=lda_payload.get("k", 20),
                iterations=lda_payload.get("iterations", 200),
                alpha=lda_payload.get("alpha"),
                beta=lda_payload.get("beta", 0.01),
                seed=lda_payload.get("seed", 42),
            ),
            scheme_path=(root / payload["scheme"]) if payload.get("scheme") else None,
            sem_mode=payload.get("sem_mode", "max"),
            truncate_top=payload.get("truncate_top"),
        )


def lda_documents(texts: list[str], stats: CorpusStats) -> list[list[str]]:
    """Content lemmas per document with domain phrases merged into one token."""
    term_set = stats.domain_specific_terms()
    documents = []
    content_tags = (nlp.NOUN, nlp.VERB, nlp.ADJ, nlp.ADV)
    for text in texts:
        tokens: list[str] = []
        for sentence in nlp.tokenize_and_tag(text):
            spans = find_term_spans(sentence, term_set)
            span_starts = {s: (e, phrase) for s, e, phrase in spans}
            i = 0
            while i < len(sentence.tokens):
                if i in span_starts:
                    end, phrase = span_starts[i]
                    tokens.append(phrase)
                    i = end
                    continue
                tok = sentence.tokens[i]
                if tok.pos in content_tags and any(ch.isalnum() for ch in tok.surface):
                    tokens.append(tok.lemma)
                i += 1
        documents.append(tokens)
    return documents


class EngineEvidenceProvider:
    """fusion.EvidenceProvider over the live engines."""

    def __init__(self, runtime: "ProjectRuntime"):
        self.rt = runtime

    def syn(self, link, source_term, target_term):
        return self.rt.syn_index.evidence_for_link(link, source_term, target_term)

    def sem(self, source_term, target_term):
        if self.rt.taxonomy is None:
            return wordnet.SemScore(0.0, 0.0)
        term_a = self.rt.stats.term_index.get(source_term, source_term)
        term_b = self.rt.stats.term_index.get(target_term, target_term)
        return wordnet.sem_score(self.rt.taxonomy, term_a, term_b)

    def arm(self, source_term, target_term):
        return self.rt.arm_model.cosine(source_term, target_term)

    def tm(self, source_term, target_term):
        return lda.tm_score(self.rt.topic_model, source_term, target_term, self.rt.config.truncate_top)

    def ds(self, term):
        return self.rt.stats.ds_of(term)


class ProjectRuntime:
    def __init__(self, config: ProjectConfig):
        self.config = config
        self.project: Project = ingest_project(config.artifacts, config.links)
        self.domain_docs = terms.read_corpus_dir(config.domain_dir)
        self.stats = terms.extract_terms(
            self.project, config.domain_dir, config.general_dir, threshold=config.threshold
        )
        self.syn_index = patterns.SynIndex().build(self.project, self.stats, self.domain_docs)
        self.arm_model = assoc.ArmModel(
            assoc.build_transactions(self.project, self.stats), min_cooccur=config.min_cooccur
        )
        texts = [text for _, text in self.domain_docs]
        texts.extend(a.text for a in self.project.artifacts.values())
        params = config.lda_params
        self.topic_model = lda.train_lda(
            lda_documents(texts, self.stats),
            k=params.k,
            iterations=params.iterations,
            alpha=params.alpha,
            beta=params.beta,
            seed=params.seed,
        )
        self.taxonomy = None
        if config.wordnet_dir is not None:
            self.taxonomy = wordnet.compute_ic(wordnet.load_wordnet(config.wordnet_dir), self.stats)
        self.scheme = (
            fusion.ConfidenceScheme.load(config.scheme_path)
            if config.scheme_path
            else fusion.ConfidenceScheme(sem_mode=config.sem_mode)
        )
        self.provider = EngineEvidenceProvider(self)
        self.store = FactStore(config.root / "store")
        self._ranked_cache: dict[str, list[fusion.CandidateFact]] = {}
        self._unfiltered_cache: dict[str, list[fusion.CandidateFact]] = {}
        self._lock = threading.Lock()

    def link_terms(self, link) -> tuple[list[str], list[str]]:
        source, target = self.project.link_endpoints(link)
        return (
            [t.text for t in domain_terms_in(source, self.stats)],
            [t.text for t in domain_terms_in(target, self.stats)],
        )

    def unfiltered_candidates_for(self, link_id: str) -> list[fusion.CandidateFact]:
        with self._lock:
            cached = self._unfiltered_cache.get(link_id)
        if cached is not None:
            return cached
        link = self.project.link(link_id)
        source_terms, target_terms = self.link_terms(link)
        candidates = fusion.generate_candidates(link, source_terms, target_terms, self.provider)
        with self._lock:
            self._unfiltered_cache[link_id] = candidates
        return candidates

    def candidates_for(self, link_id: str) -> list[fusion.CandidateFact]:
        """Ranked candidates for a link, mined lazily and cached.

        Every served candidate is registered in the store as a suggested
        fact so decisions can reference it by id.
        """
        with self._lock:
            cached = self._ranked_cache.get(link_id)
        if cached is not None:
            return cached
        candidates = self.unfiltered_candidates_for(link_id)
        survivors = fusion.filter_candidates(list(candidates), self.scheme)
        ranked = fusion.score_and_rank(survivors, self.scheme, self.provider.ds)
        for cand in ranked:
            self.store.suggest(self._fact_from_candidate(cand))
        with self._lock:
            self._ranked_cache[link_id] = ranked
        return ranked

    def _fact_from_candidate(self, cand: fusion.CandidateFact) -> Fact:
        return Fact(
            id=fact_id_for(cand.link_id, cand.source_term, cand.target_term),
            source=cand.source_term,
            relation=cand.relation_label or UNTYPED_RELATION,
            target=cand.target_term,
            status="suggested",
            provenance={
                "link_id": cand.link_id,
                "conf": cand.conf,
                "rank": cand.rank,
                "reversed": cand.reversed,
                "evidence": cand.to_dict()["evidence"],
            },
        )

    def fact_id_of(self, cand: fusion.CandidateFact) -> str:
        return fact_id_for(cand.link_id, cand.source_term, cand.target_term)

    def accept_candidates(self, link_id: str, policy: fusion.AcceptPolicy, editor: str = "auto") -> list[Fact]:
        """Auto-accept a link's top candidates into the ontology."""
        ranked = self.candidates_for(link_id)
        accepted = []
        for cand in fusion.accept(ranked, policy):
            fact = self.store.record_decision(self.fact_id_of(cand), "accept", editor=editor)
            accepted.append(fact)
        return accepted
