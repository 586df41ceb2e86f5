from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from tracefacts.fusion import PlantedEvidence
from tracefacts.patterns import SynEvidence
from tracefacts.runtime import ProjectConfig, ProjectRuntime
from tracefacts.wordnet import SemScore, compute_ic, load_wordnet

FIXTURES = Path(__file__).parent / "fixtures"

# Lemma counts used everywhere the toy taxonomy needs information content.
# Own counts after add-one smoothing: entity 1, artifact 3, container 7,
# reservoir 5, substance 2, drug 11, person 9 (person + clinician); total 38.
TOY_COUNTS = {
    "artifact": 2,
    "container": 6,
    "reservoir": 4,
    "substance": 1,
    "drug": 10,
    "person": 5,
    "clinician": 3,
}


@pytest.fixture(scope="session")
def wn_toy_dir() -> Path:
    return FIXTURES / "wn_toy"


@pytest.fixture(scope="session")
def toy_tax(wn_toy_dir):
    return compute_ic(load_wordnet(wn_toy_dir), TOY_COUNTS)


@pytest.fixture()
def project1_dir(tmp_path) -> Path:
    dest = tmp_path / "project1"
    shutil.copytree(FIXTURES / "project1", dest)
    return dest


@pytest.fixture(scope="session")
def project1_runtime(tmp_path_factory) -> ProjectRuntime:
    """Shared read-only runtime; tests that mutate the store copy their own."""
    dest = tmp_path_factory.mktemp("shared") / "project1"
    shutil.copytree(FIXTURES / "project1", dest)
    return ProjectRuntime(ProjectConfig.load(dest))


# -- EHR-shaped synthetic project ------------------------------------------

# names chosen so no POS suffix heuristic fires; all tag NOUN
EHR_SOURCE_TERMS = ["srcalpha", "srcbeta", "srcgamma", "srcdelta", "srcepsilon"]
EHR_TARGET_TERMS = ["tgtalpha", "tgtbeta", "tgtgamma", "tgtdelta", "tgtepsilon"]


def write_ehr_project(root: Path, regulations=1064, requirements=116, links=589) -> Path:
    """A project shaped like the motivating scenario: regulation stubs traced
    to requirement stubs, five domain terms on each side of every link."""
    root.mkdir(parents=True, exist_ok=True)
    src_text = "The " + " and the ".join(EHR_SOURCE_TERMS) + " are documented."
    tgt_text = "The " + " and the ".join(EHR_TARGET_TERMS) + " are documented."
    with (root / "artifacts.jsonl").open("w", encoding="utf-8") as fh:
        for i in range(regulations):
            fh.write(json.dumps({"id": f"reg{i:04d}", "kind": "regulation", "text": src_text}) + "\n")
        for i in range(requirements):
            fh.write(json.dumps({"id": f"req{i:03d}", "kind": "requirement", "text": tgt_text}) + "\n")
    with (root / "links.jsonl").open("w", encoding="utf-8") as fh:
        for i in range(links):
            fh.write(
                json.dumps(
                    {
                        "id": f"lnk{i:04d}",
                        "source": f"reg{(i * 7) % regulations:04d}",
                        "target": f"req{(i * 3) % requirements:03d}",
                    }
                )
                + "\n"
            )
    domain = root / "domain"
    general = root / "general"
    domain.mkdir(exist_ok=True)
    general.mkdir(exist_ok=True)
    term_block = " ".join(f"the {t}" for t in EHR_SOURCE_TERMS + EHR_TARGET_TERMS)
    (domain / "d1.txt").write_text(" ".join([term_block] * 6), "utf-8")
    junk = [f"junkword{i}" for i in range(20)]
    junk_block = " ".join(f"the {w}" for w in junk)
    (general / "g1.txt").write_text(" ".join([junk_block] * 5), "utf-8")
    (root / "project.json").write_text(
        json.dumps(
            {
                "artifacts": "artifacts.jsonl",
                "links": "links.jsonl",
                "domain_dir": "domain",
                "general_dir": "general",
                "threshold": 1.0,
                "lda": {"k": 4, "iterations": 20, "seed": 5},
            }
        ),
        "utf-8",
    )
    return root


@pytest.fixture(scope="session")
def ehr_runtime(tmp_path_factory) -> ProjectRuntime:
    root = write_ehr_project(tmp_path_factory.mktemp("ehr") / "proj")
    return ProjectRuntime(ProjectConfig.load(root))


# -- planted start-button/clinician review fixture ---------------------------

D1_TERMS = ["pca pump", "start button"]
R1_TERMS = ["control panel", "touch panel", "clinician", "alarm"]

EXPECTED_RANKING = [
    ("start button", "clinician", "press of", True, 0.9),
    ("pca pump", "touch panel", None, False, 0.6),
    ("pca pump", "control panel", None, False, 0.5),
    ("pca pump", "alarm", None, False, 0.5),
    ("pca pump", "clinician", None, False, 0.4),
    ("start button", "touch panel", None, False, 0.1),
    ("start button", "control panel", None, False, 0.1),
]


def build_review_fixture():
    """Planted evidence reproducing the reference review ranking.

    Eight generated pairs; (start button, alarm) dies in the filter, the
    remaining seven land on the confidence tiers 0.9 / 0.6 / 0.5 / 0.5 /
    0.4 / 0.1 / 0.1 in a fixed order.
    """
    provider = PlantedEvidence(
        syn_table={
            ("start button", "clinician"): SynEvidence(
                left_term="clinician",
                right_term="start button",
                relation_label="press of",
                reversed=True,
                sentence_ref="doc:mip1.txt#1",
                kind="grammatical",
                origin="doc:mip1.txt",
            )
        },
        sem_table={
            ("start button", "clinician"): SemScore(0.6, 0.3),
            ("pca pump", "touch panel"): SemScore(0.8, 0.8),
            ("pca pump", "control panel"): SemScore(0.7, 0.55),
            ("pca pump", "alarm"): SemScore(0.7, 0.5),
            ("pca pump", "clinician"): SemScore(0.6, 0.5),
            ("start button", "touch panel"): SemScore(0.4, 0.2),
            ("start button", "control panel"): SemScore(0.3, 0.2),
            ("start button", "alarm"): SemScore(0.3, 0.1),
        },
        arm_table={
            ("pca pump", "touch panel"): 0.8,
            ("pca pump", "control panel"): 0.3,
        },
        tm_table={
            ("start button", "clinician"): 0.55,
            ("pca pump", "touch panel"): 0.7,
            ("pca pump", "control panel"): 0.7,
            ("pca pump", "alarm"): 0.6,
            ("pca pump", "clinician"): 0.7,
            ("start button", "touch panel"): 0.3,
            ("start button", "control panel"): 0.2,
            ("start button", "alarm"): 0.05,
        },
        ds_table={
            "pca pump": 2.5,
            "start button": 2.0,
            "touch panel": 1.8,
            "control panel": 1.7,
            "alarm": 1.6,
            "clinician": 1.0,
        },
    )
    return provider


# -- planted 30-link evaluation fixture -------------------------------------


def _syn(left, right, label="relates to"):
    return SynEvidence(
        left_term=left,
        right_term=right,
        relation_label=label,
        reversed=False,
        sentence_ref="planted#0",
        kind="grammatical",
        origin="planted",
    )


def build_eval_fixture():
    """30 links, 5x5 term grids, answer planted at (s5, t5) of each link.

    Links 1-26 carry real signal on the answer; links 27-30 leave it blank.
    Distractor evidence is arranged so each single technique misses a
    different slice of links while the fused ranking keeps the answer first
    wherever it survives the filter.
    """
    provider = PlantedEvidence()
    links = []
    answers = []
    for i in range(1, 31):
        link_id = f"l{i:02d}"
        s = [f"s{i:02d}_{j}" for j in range(1, 6)]
        t = [f"t{i:02d}_{j}" for j in range(1, 6)]
        links.append((link_id, s, t))
        ans = (s[4], t[4])
        answers.append((link_id, ans))
        if i <= 26:
            provider.tm_table[ans] = 0.6
            provider.sem_table[ans] = SemScore(0.6, 0.6)
            provider.arm_table[ans] = 0.4
            provider.ds_table[s[4]] = 2.0
            provider.ds_table[t[4]] = 2.0
        if i <= 10:
            provider.syn_table[ans] = _syn(*ans)
        # distractors
        provider.tm_table[(s[0], t[0])] = 0.75
        provider.sem_table[(s[0], t[0])] = SemScore(0.05, 0.05)
        provider.arm_table[(s[1], t[1])] = 0.95
        provider.tm_table[(s[1], t[1])] = 0.05
        provider.sem_table[(s[1], t[1])] = SemScore(0.05, 0.05)
        if 11 <= i <= 20:
            provider.syn_table[(s[2], t[2])] = _syn(s[2], t[2])
            provider.tm_table[(s[2], t[2])] = 0.05
            provider.sem_table[(s[2], t[2])] = SemScore(0.05, 0.05)
        if 21 <= i <= 26:
            tm_noise = [(s[0], t[1]), (s[0], t[2]), (s[0], t[3]), (s[1], t[0]), (s[1], t[2]), (s[1], t[3]), (s[2], t[0])]
            for j, pair in enumerate(tm_noise):
                provider.tm_table[pair] = 0.61 + 0.01 * j
                provider.sem_table[pair] = SemScore(0.05, 0.05)
        if 23 <= i <= 26:
            sem_noise = [(s[2], t[1]), (s[2], t[3]), (s[3], t[0]), (s[3], t[1]), (s[3], t[2]), (s[3], t[3]), (s[0], t[4])]
            for pair in sem_noise:
                provider.sem_table[pair] = SemScore(0.05, 0.65)
                provider.tm_table[pair] = 0.05
        if 24 <= i <= 26:
            arm_noise = [(s[0], t[1]), (s[0], t[2]), (s[0], t[3]), (s[1], t[0]), (s[1], t[2]), (s[1], t[3]), (s[2], t[0])]
            for j, pair in enumerate(arm_noise):
                provider.arm_table[pair] = 0.9 - 0.05 * j
    return provider, links, answers
