"""Command-line interface.

Most commands operate on a project directory holding project.json (see
runtime.ProjectConfig). `corpus build` also runs standalone from explicit
file arguments.
"""

from __future__ import annotations

import json
import sys

import click

from . import evaluation, fusion, lda, terms
from .project import ingest_project
from .runtime import ProjectConfig, ProjectRuntime, lda_documents
from .wordnet import compute_ic, load_wordnet, sem_score


def _load_runtime(project_dir) -> ProjectRuntime:
    return ProjectRuntime(ProjectConfig.load(project_dir))


@click.group()
def main():
    """Mine domain facts guided by trace links."""


@main.group()
def corpus():
    """Corpus and term extraction commands."""


@corpus.command("build")
@click.option("--artifacts", "artifacts_path", required=True, type=click.Path(exists=True))
@click.option("--links", "links_path", required=True, type=click.Path(exists=True))
@click.option("--domain-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--general-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--threshold", default=terms.DEFAULT_THRESHOLD, show_default=True, type=float)
@click.option("--out", "out_path", required=True, type=click.Path())
def corpus_build(artifacts_path, links_path, domain_dir, general_dir, threshold, out_path):
    """Extract terms, score domain specificity, write corpus stats JSON."""
    proj = ingest_project(artifacts_path, links_path)
    stats = terms.extract_terms(proj, domain_dir, general_dir, threshold=threshold)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(stats.to_json())
    summary = proj.summary()
    summary["terms"] = len(stats.term_index)
    summary["domain_specific"] = len(stats.domain_specific_terms())
    click.echo(json.dumps(summary, sort_keys=True))


@main.command("syn")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--rules", "rules_path", default=None, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
def syn_command(project_dir, rules_path, out_path):
    """Dump all syntactic evidence found in artifacts and domain documents."""
    from .patterns import SynIndex, load_rules

    rt = _load_runtime(project_dir)
    index = rt.syn_index
    if rules_path:
        index = SynIndex(load_rules(rules_path)).build(rt.project, rt.stats, rt.domain_docs)
    lines = [
        json.dumps(
            {
                "left": ev.left_term,
                "right": ev.right_term,
                "relation": ev.relation_label,
                "kind": ev.kind,
                "sentence_ref": ev.sentence_ref,
            },
            sort_keys=True,
        )
        for ev in index.all_evidence()
    ]
    output = "\n".join(lines) + ("\n" if lines else "")
    if out_path:
        open(out_path, "w", encoding="utf-8").write(output)
    else:
        click.echo(output, nl=False)


@main.command("sem")
@click.option("--wordnet", "wordnet_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.argument("term_a")
@click.argument("term_b")
def sem_command(wordnet_dir, project_dir, term_a, term_b):
    """Score semantic relatedness of two terms."""
    rt = _load_runtime(project_dir)
    tax = compute_ic(load_wordnet(wordnet_dir), rt.stats)
    score = sem_score(tax, term_a, term_b)
    click.echo(json.dumps({"term_a": term_a, "term_b": term_b, "hw": score.hw, "aw": score.aw}))


@main.command("arm")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--min-cooccur", default=1, show_default=True, type=int)
@click.option("--top", default=50, show_default=True, type=int)
def arm_command(project_dir, min_cooccur, top):
    """Print the top association pairs as JSON."""
    from .assoc import ArmModel, build_transactions

    rt = _load_runtime(project_dir)
    model = ArmModel(build_transactions(rt.project, rt.stats), min_cooccur=min_cooccur)
    payload = [
        {
            "source": s.source_term,
            "target": s.target_term,
            "cosine": s.cosine,
            "co_count": s.co_count,
            "src_count": s.src_count,
            "tgt_count": s.tgt_count,
        }
        for s in model.top_pairs(top)
    ]
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


@main.group()
def topics():
    """Topic model commands."""


@topics.command("train")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--k", default=50, show_default=True, type=int)
@click.option("--iters", default=1000, show_default=True, type=int)
@click.option("--alpha", default=None, type=float)
@click.option("--beta", default=0.01, show_default=True, type=float)
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def topics_train(project_dir, k, iters, alpha, beta, seed, out_path):
    """Train the topic model over domain documents plus artifacts."""
    config = ProjectConfig.load(project_dir)
    proj = ingest_project(config.artifacts, config.links)
    stats = terms.extract_terms(proj, config.domain_dir, config.general_dir, threshold=config.threshold)
    texts = [text for _, text in terms.read_corpus_dir(config.domain_dir)]
    texts.extend(a.text for a in proj.artifacts.values())
    model = lda.train_lda(lda_documents(texts, stats), k=k, iterations=iters, alpha=alpha, beta=beta, seed=seed)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(model.to_json())
    click.echo(json.dumps({"k": model.k, "vocab": len(model.vocab), "iterations": iters, "seed": seed}))


@main.command("mine")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--scheme", "scheme_path", default=None, type=click.Path(exists=True))
@click.option("--accept", "accept_spec", default=None, help="top:N or conf:X to auto-accept")
@click.option("--out", "out_path", required=True, type=click.Path())
def mine_command(project_dir, scheme_path, accept_spec, out_path):
    """Mine ranked candidates for every link; JSON Lines output."""
    rt = _load_runtime(project_dir)
    if scheme_path:
        rt.scheme = fusion.ConfidenceScheme.load(scheme_path)
    with open(out_path, "w", encoding="utf-8") as fh:
        for link_id in rt.project.links:
            for cand in rt.candidates_for(link_id):
                fh.write(json.dumps(cand.to_dict(), sort_keys=True) + "\n")
    accepted = 0
    if accept_spec:
        policy = fusion.AcceptPolicy.parse(accept_spec)
        for link_id in rt.project.links:
            accepted += len(rt.accept_candidates(link_id, policy))
    click.echo(json.dumps({"links": len(rt.project.links), "accepted": accepted}))


def _parse_seeds(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in spec.split(",") if s]


@main.command("eval")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--answers", "answers_path", required=True, type=click.Path(exists=True))
@click.option("--nmax", default=100, show_default=True, type=int)
@click.option("--seeds", default="1..100", show_default=True, help="range lo..hi or comma list")
@click.option("--macro", is_flag=True, default=False)
@click.option("--out", "out_path", required=True, type=click.Path(), help="CSV output path")
@click.option("--dat", "dat_path", default=None, type=click.Path(), help="gnuplot data file")
def eval_command(project_dir, answers_path, nmax, seeds, macro, out_path, dat_path):
    """Hit-ratio curves: each technique, the fused ranking, a random baseline."""
    rt = _load_runtime(project_dir)
    answers = evaluation.load_answer_sets(answers_path)
    unfiltered = {lid: rt.unfiltered_candidates_for(lid) for lid in rt.project.links}
    fused = {lid: rt.candidates_for(lid) for lid in rt.project.links}
    curves = evaluation.technique_curves(unfiltered, fused, answers, n_max=nmax, macro=macro)
    curves.append(evaluation.random_baseline(unfiltered, answers, _parse_seeds(seeds), n_max=nmax, macro=macro))
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(evaluation.curves_to_csv(curves))
    if dat_path:
        with open(dat_path, "w", encoding="utf-8") as fh:
            fh.write(evaluation.curves_to_dat(curves))
    ceilings = {c.method: round(c.ceiling, 6) for c in curves}
    click.echo(json.dumps({"answers": curves[0].total_answers, "generation_ceiling": ceilings}))


@main.command("serve")
@click.option("--project-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=None, type=int, help="defaults to $TRACEFACTS_PORT or 8715")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_command(project_dir, port, host):
    """Run the review service."""
    from .project import ProjectError
    from .runtime import ConfigError
    from .service import serve

    try:
        serve(project_dir, port=port, host=host)
    except (ConfigError, ProjectError, FileNotFoundError) as e:
        click.echo(f"cannot load project: {e}", err=True)
        sys.exit(1)
    except OSError as e:
        click.echo(f"cannot bind: {e}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
