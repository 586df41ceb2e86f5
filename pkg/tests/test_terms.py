from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ds_oracle import brute_force_ds
from tracefacts.lda import Lcg
from tracefacts.project import Artifact
from tracefacts.terms import (
    CorpusError,
    CorpusStats,
    Term,
    domain_terms_in,
    ds_value,
    extract_terms,
    find_term_spans,
)

NOUN_VOCAB = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "theta", "kappa", "sigma", "omega"]


def synthetic_corpus_texts(domain_words=150, general_words=400, seed=17):
    """Plain noun streams; chunk extraction degenerates to n-gram counting."""
    rng = Lcg(seed)
    domain = " ".join(NOUN_VOCAB[rng.next_int(6)] for _ in range(domain_words))
    general = " ".join(NOUN_VOCAB[3 + rng.next_int(7)] for _ in range(general_words))
    return domain, general


def write_corpus(tmp_path, domain_text, general_text):
    d = tmp_path / "domain"
    g = tmp_path / "general"
    d.mkdir()
    g.mkdir()
    (d / "d.txt").write_text(domain_text, "utf-8")
    (g / "g.txt").write_text(general_text, "utf-8")
    return d, g


def test_ds_equal_normalized_frequency_is_zero():
    assert ds_value(5, 100, 50, 1000) == pytest.approx(0.0, abs=1e-15)


def test_ds_drug_reservoir_example():
    assert ds_value(5, 100, 1, 1000) == pytest.approx(math.log(50.0), rel=1e-15)


def test_ds_smoothing_for_unseen_general():
    assert ds_value(2, 100, 0, 1000) == pytest.approx(math.log((2 / 100) / (0.5 / 1000)), rel=1e-15)


def test_ds_requires_positive_domain_frequency():
    with pytest.raises(ValueError):
        ds_value(0, 100, 1, 1000)


@given(
    st.integers(min_value=1, max_value=10_000),
    st.integers(min_value=1, max_value=10_000),
    st.integers(min_value=0, max_value=10_000),
)
@settings(max_examples=300, deadline=None)
def test_ds_monotone_in_domain_frequency(freq_d, bump, freq_g):
    total_d, total_g = 1_000_000, 1_000_000
    low = ds_value(freq_d, total_d, freq_g, total_g)
    high = ds_value(freq_d + bump, total_d, freq_g, total_g)
    assert high >= low


def test_extract_terms_matches_brute_force_oracle(tmp_path):
    domain_text, general_text = synthetic_corpus_texts()
    d, g = write_corpus(tmp_path, domain_text, general_text)
    stats = extract_terms(None, d, g, threshold=1.0)
    expected = brute_force_ds(domain_text, general_text)
    assert set(stats.term_index) == set(expected)
    for text, term in stats.term_index.items():
        assert term.ds == pytest.approx(expected[text], rel=1e-12)
        assert term.is_domain_specific == (term.ds >= 1.0)


def test_domain_specific_set_size_matches_oracle(tmp_path):
    domain_text, general_text = synthetic_corpus_texts(domain_words=300, general_words=600, seed=29)
    d, g = write_corpus(tmp_path, domain_text, general_text)
    stats = extract_terms(None, d, g, threshold=1.0)
    expected = brute_force_ds(domain_text, general_text)
    oracle_set = {t for t, ds in expected.items() if ds >= 1.0}
    assert stats.domain_specific_terms() == oracle_set


def test_extract_terms_deterministic_serialization(tmp_path):
    domain_text, general_text = synthetic_corpus_texts(seed=3)
    d, g = write_corpus(tmp_path, domain_text, general_text)
    first = extract_terms(None, d, g).to_json()
    second = extract_terms(None, d, g).to_json()
    assert first == second
    assert CorpusStats.from_json(first).to_json() == first


def test_empty_corpus_dir_errors(tmp_path):
    d = tmp_path / "domain"
    d.mkdir()
    g = tmp_path / "general"
    g.mkdir()
    (g / "g.txt").write_text("words here", "utf-8")
    with pytest.raises(CorpusError):
        extract_terms(None, d, g)
    with pytest.raises(CorpusError):
        extract_terms(None, tmp_path / "missing", g)


def _stats_with(terms: dict[str, float]) -> CorpusStats:
    index = {
        text: Term(text=text, head=text.split()[-1], freq_domain=1, freq_general=0, ds=ds, is_domain_specific=ds >= 1.0)
        for text, ds in terms.items()
    }
    return CorpusStats(threshold=1.0, total_domain_tokens=1, total_general_tokens=1, term_index=index)


TABLE_TERMS = {
    "drug library thread": 3.0,
    "drug library": 3.0,
    "drug record": 3.0,
    "liquid drug": 3.0,
    "drug reservoir": 3.0,
}


def test_domain_terms_in_drug_library_sentence():
    stats = _stats_with(TABLE_TERMS)
    artifact = Artifact(
        id="A",
        kind="other",
        text=(
            "The drug library thread stores the drug library provided by the hospital "
            "pharmacy and retrieves the drug record corresponding to the liquid drug "
            "loaded into the drug reservoir."
        ),
    )
    found = [t.text for t in domain_terms_in(artifact, stats)]
    assert found == ["drug library thread", "drug library", "drug record", "liquid drug", "drug reservoir"]


def test_domain_terms_in_no_terms():
    stats = _stats_with(TABLE_TERMS)
    artifact = Artifact(id="A", kind="other", text="Nothing relevant appears here.")
    assert domain_terms_in(artifact, stats) == []


def test_longest_match_wins_and_standalone_reported():
    stats = _stats_with({"drug library thread": 3.0, "drug library": 3.0})
    artifact = Artifact(
        id="A", kind="other", text="The drug library thread also manages the drug library."
    )
    sentence = artifact.sentences[0]
    spans = find_term_spans(sentence, stats.domain_specific_terms())
    phrases = [p for _, _, p in spans]
    assert phrases == ["drug library thread", "drug library"]
    # the 3-token span covers the first occurrence; 2-token term only at its own spot
    assert spans[0][0] < spans[1][0]


def test_term_invariants_from_extraction(tmp_path):
    domain_text, general_text = synthetic_corpus_texts(seed=11)
    d, g = write_corpus(tmp_path, domain_text, general_text)
    stats = extract_terms(None, d, g)
    total_d = sum(t.freq_domain for t in stats.term_index.values())
    assert total_d == stats.total_domain_tokens
    for term in stats.term_index.values():
        assert term.freq_domain > 0
        assert term.head == term.text.split()[-1]


def test_tokens_counted_for_ic(tmp_path):
    d, g = write_corpus(tmp_path, "alpha beta", "gamma delta")
    stats = extract_terms(None, d, g)
    assert stats.token_lemma_counts == {"alpha": 1, "beta": 1}


def test_corpus_dirs_recurse(tmp_path):
    d = tmp_path / "domain"
    d.mkdir()
    (d / "d.txt").write_text("alpha alpha", "utf-8")
    g = tmp_path / "general"
    (g / "nested").mkdir(parents=True)
    (g / "nested" / "g.txt").write_text("beta", "utf-8")
    stats = extract_terms(None, d, g)
    assert "alpha" in stats.term_index
