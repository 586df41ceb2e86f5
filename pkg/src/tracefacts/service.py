"""JSON-over-HTTP service for mining review, vetting and query expansion.

Single-analyst desk tool: no authentication, permissive CORS for the review
UI. Reads are concurrent; decisions funnel through the single-writer store.
Candidates are mined lazily per link and cached.
"""

from __future__ import annotations

import os
from dataclasses import replace

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from . import fusion, query
from .runtime import ProjectConfig, ProjectRuntime
from .store import DuplicateFactError, StoreError, UnknownFactError

DEFAULT_PORT = 8715
PORT_ENV_VAR = "TRACEFACTS_PORT"


def _link_payload(rt: ProjectRuntime, link) -> dict:
    source, target = rt.project.link_endpoints(link)
    source_terms, target_terms = rt.link_terms(link)
    return {
        "id": link.id,
        "label": link.label,
        "source": {"id": source.id, "kind": source.kind, "text": source.text, "domain_terms": source_terms},
        "target": {"id": target.id, "kind": target.kind, "text": target.text, "domain_terms": target_terms},
    }


def _candidate_payload(rt: ProjectRuntime, cand: fusion.CandidateFact) -> dict:
    payload = cand.to_dict()
    payload["fact_id"] = rt.fact_id_of(cand)
    fact = rt.store.facts.get(payload["fact_id"])
    payload["status"] = fact.status if fact else "suggested"
    return payload


def create_app(runtime: ProjectRuntime) -> FastAPI:
    app = FastAPI(title="tracefacts", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    rt = runtime

    @app.get("/project/summary")
    def project_summary():
        summary = rt.project.summary()
        summary["domain_specific_terms"] = len(rt.stats.domain_specific_terms())
        summary["threshold"] = rt.stats.threshold
        return summary

    @app.get("/links")
    def list_links():
        return [_link_payload(rt, link) for link in rt.project.links.values()]

    @app.get("/links/{link_id}")
    def get_link(link_id: str):
        if link_id not in rt.project.links:
            raise HTTPException(status_code=404, detail=f"unknown link {link_id!r}")
        return _link_payload(rt, rt.project.link(link_id))

    @app.get("/links/{link_id}/candidates")
    def link_candidates(link_id: str, scheme: str | None = Query(default=None)):
        if link_id not in rt.project.links:
            raise HTTPException(status_code=404, detail=f"unknown link {link_id!r}")
        if scheme is None:
            ranked = rt.candidates_for(link_id)
        else:
            scheme_path = rt.config.root / scheme
            if not scheme_path.is_file():
                raise HTTPException(status_code=400, detail=f"unknown scheme {scheme!r}")
            alt = fusion.ConfidenceScheme.load(scheme_path)
            # copy before re-scoring: the cached default ranking shares these
            # objects and must keep its own conf/rank values
            candidates = [replace(c) for c in rt.unfiltered_candidates_for(link_id)]
            ranked = fusion.score_and_rank(fusion.filter_candidates(candidates, alt), alt, rt.provider.ds)
        return [_candidate_payload(rt, c) for c in ranked]

    @app.post("/facts/{fact_id}/decision")
    def decide(fact_id: str, body: dict = Body(...)):
        action = body.get("action")
        if action not in ("accept", "reject", "modify"):
            raise HTTPException(status_code=400, detail="action must be accept, reject or modify")
        try:
            fact = rt.store.record_decision(
                fact_id,
                action,
                relation=body.get("relation"),
                source=body.get("source"),
                target=body.get("target"),
                editor=body.get("editor", "analyst"),
            )
        except UnknownFactError as e:
            raise HTTPException(status_code=404, detail=str(e)) from e
        except (DuplicateFactError, StoreError) as e:
            raise HTTPException(status_code=400, detail=str(e)) from e
        return fact.to_dict()

    @app.get("/ontology")
    def ontology():
        onto = rt.store.ontology()
        return {"facts": [f.to_dict() for f in onto.facts]}

    @app.get("/ontology/export")
    def export(format: str = Query(default="json")):
        if format == "turtle":
            return PlainTextResponse(rt.store.export_turtle(), media_type="text/turtle")
        if format == "json":
            return PlainTextResponse(rt.store.export_json(), media_type="application/json")
        raise HTTPException(status_code=400, detail=f"unknown export format {format!r}")

    @app.post("/query/expand")
    def expand(body: dict = Body(...)):
        terms_in = body.get("terms") or []
        max_hops = body.get("max_hops", 2)
        expanded = query.expand_query(rt.store.ontology(), terms_in, max_hops=max_hops)
        return {
            "original_terms": expanded.original_terms,
            "expansions": {
                t: [
                    {"term": e.term, "relation": e.relation, "hops": e.hops, "path": e.path}
                    for e in exps
                ]
                for t, exps in expanded.expansions.items()
            },
        }

    @app.post("/query/search")
    def search(body: dict = Body(...)):
        terms_in = body.get("terms") or []
        max_hops = body.get("max_hops", 2)
        expanded = query.expand_query(rt.store.ontology(), terms_in, max_hops=max_hops)
        hits = query.search_artifacts(rt.project, expanded)
        return {
            "expanded": {
                t: [
                    {"term": e.term, "relation": e.relation, "hops": e.hops, "path": e.path}
                    for e in exps
                ]
                for t, exps in expanded.expansions.items()
            },
            "results": [
                {
                    "artifact_id": h.artifact_id,
                    "score": h.score,
                    "matched": h.matched,
                    "text": rt.project.artifact(h.artifact_id).text,
                }
                for h in hits
            ],
        }

    return app


def serve(project_dir, port: int | None = None, host: str = "127.0.0.1"):
    """Run the service; blocks until interrupted."""
    import uvicorn

    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    runtime = ProjectRuntime(ProjectConfig.load(project_dir))
    app = create_app(runtime)
    uvicorn.run(app, host=host, port=port, log_level="warning")
