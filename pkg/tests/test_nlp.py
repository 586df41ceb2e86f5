from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from tracefacts import nlp


def flat_tokens(sentences):
    return [t for s in sentences for t in s]


def test_pca_pump_sentence_tags():
    sents = nlp.tokenize_and_tag("The PCA pump shall have a start button.")
    assert len(sents) == 1
    tags = {t.surface: t.pos for t in sents[0]}
    assert tags["pump"] == nlp.NOUN
    assert tags["have"] == nlp.VERB
    assert tags["PCA"] == nlp.NOUN
    assert tags["button"] == nlp.NOUN


def test_empty_text_gives_empty_list():
    assert nlp.tokenize_and_tag("") == []
    assert nlp.tokenize_and_tag("   \n ") == []


def test_audio_speaker_sentence_tags():
    sents = nlp.tokenize_and_tag("Audio speaker is located on the rear of the pump.")
    tags = {t.surface: t.pos for t in sents[0]}
    assert tags["located"] == nlp.VERB
    assert tags["on"] == nlp.PREP
    assert tags["speaker"] == nlp.NOUN
    assert tags["rear"] == nlp.NOUN


def test_deterministic_output():
    text = "The drug library thread stores the drug library."
    first = nlp.tokenize_and_tag(text)
    second = nlp.tokenize_and_tag(text)
    assert [(t.surface, t.lemma, t.pos) for t in flat_tokens(first)] == [
        (t.surface, t.lemma, t.pos) for t in flat_tokens(second)
    ]


def test_sentence_split_basic():
    sents = nlp.tokenize_and_tag("Pumps deliver drugs. Filters clean the air.")
    assert len(sents) == 2


def test_sentence_split_abbreviations():
    assert len(nlp.tokenize_and_tag("See Fig. 3 for details.")) == 1
    assert len(nlp.tokenize_and_tag("Use caution, e.g. Never exceed the limit.")) == 1
    assert len(nlp.tokenize_and_tag("Many devices, etc. Are listed.")) == 1


def test_possessive_clitic_split():
    sent = nlp.tokenize_and_tag("The clinician's press of the start button is logged.")[0]
    surfaces = [t.surface for t in sent]
    assert "clinician" in surfaces
    assert "'s" in surfaces
    tags = {t.surface: t.pos for t in sent}
    assert tags["'s"] == nlp.DET
    assert tags["press"] == nlp.VERB


def test_lemmatization_cases():
    assert nlp.lemmatize("pumps", nlp.NOUN) == "pump"
    assert nlp.lemmatize("libraries", nlp.NOUN) == "library"
    assert nlp.lemmatize("settings", nlp.NOUN) == "setting"
    assert nlp.lemmatize("EHRs", nlp.NOUN) == "ehr"
    assert nlp.lemmatize("glasses", nlp.NOUN) == "glass"
    assert nlp.lemmatize("men", nlp.NOUN) == "man"
    assert nlp.lemmatize("stores", nlp.VERB) == "store"
    assert nlp.lemmatize("located", nlp.VERB) == "locate"
    assert nlp.lemmatize("loaded", nlp.VERB) == "load"
    assert nlp.lemmatize("found", nlp.VERB) == "find"
    assert nlp.lemmatize("other", nlp.ADJ) == "other"
    assert nlp.lemmatize("with", nlp.PREP) == "with"


def test_acronym_rule():
    assert nlp.tag_word("ROI") == nlp.NOUN
    assert nlp.tag_word("EHRs") == nlp.NOUN
    assert nlp.tag_word("it") == nlp.OTHER


def test_chunker_basic():
    sent = nlp.tokenize_and_tag("Each profile contains instrument configurations appropriate for the care area.")[0]
    chunks = {nlp.phrase_text(sent, a, b) for a, b in nlp.noun_phrase_chunks(sent)}
    assert "profile" in chunks
    assert "instrument configuration" in chunks
    assert "care area" in chunks
    # trailing adjective is not absorbed
    assert not any("appropriate" in c for c in chunks)


def test_chunk_candidates_nested():
    sent = nlp.tokenize_and_tag("The drug library thread runs.")[0]
    cands = {nlp.phrase_text(sent, a, b) for a, b in nlp.chunk_candidates(sent)}
    assert {"drug", "library", "thread", "drug library", "library thread", "drug library thread"} <= cands


def _reconstruct(text: str, sentences) -> str:
    out = []
    pos = 0
    for tok in flat_tokens(sentences):
        out.append(text[pos : tok.start])
        out.append(tok.surface)
        pos = tok.end
    out.append(text[pos:])
    return "".join(out)


@given(st.text(max_size=300))
@settings(max_examples=200, deadline=None)
def test_tokenization_round_trip(text):
    sentences = nlp.tokenize_and_tag(text)
    assert _reconstruct(text, sentences) == text
    # every inter-token gap is pure whitespace
    pos = 0
    for tok in flat_tokens(sentences):
        assert text[pos : tok.start].strip() == ""
        assert text[tok.start : tok.end] == tok.surface
        pos = tok.end
    assert text[pos:].strip() == ""


@given(st.text(alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd", "Po", "Zs")), max_size=200))
@settings(max_examples=200, deadline=None)
def test_tagger_total_and_deterministic(text):
    for sent in nlp.tokenize_and_tag(text):
        for tok in sent:
            assert tok.pos in (nlp.NOUN, nlp.VERB, nlp.ADJ, nlp.ADV, nlp.PREP, nlp.DET, nlp.OTHER)
            assert tok.lemma == tok.lemma.lower()
