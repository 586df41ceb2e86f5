"""Project artifacts and trace links: loading, validation, summaries.

Artifacts arrive as JSON Lines ({"id", "kind", "text"}); links as JSON Lines
({"id", "source", "target", "label"?}) or CSV with an id,source,target header.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import nlp

ARTIFACT_KINDS = ("requirement", "design", "regulation", "component", "other")


class ProjectError(Exception):
    pass


class ParseError(ProjectError):
    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class DanglingLinkError(ProjectError):
    """A trace link references an artifact id that was never loaded."""

    def __init__(self, offenders: dict[str, list[str]]):
        self.offenders = offenders  # link id -> missing artifact ids
        pairs = "; ".join(f"{lid} -> {', '.join(missing)}" for lid, missing in sorted(offenders.items()))
        super().__init__(f"links reference unknown artifacts: {pairs}")


@dataclass
class Artifact:
    id: str
    kind: str
    text: str
    _sentences: list[nlp.Sentence] | None = field(default=None, repr=False, compare=False)

    @property
    def sentences(self) -> list[nlp.Sentence]:
        if self._sentences is None:
            self._sentences = nlp.tokenize_and_tag(self.text)
        return self._sentences


@dataclass(frozen=True)
class TraceLink:
    id: str
    source_id: str
    target_id: str
    label: str | None = None


class Project:
    def __init__(self, artifacts: list[Artifact], links: list[TraceLink]):
        self.artifacts = {a.id: a for a in artifacts}
        self.links = {l.id: l for l in links}

    def artifact(self, artifact_id: str) -> Artifact:
        return self.artifacts[artifact_id]

    def link(self, link_id: str) -> TraceLink:
        return self.links[link_id]

    def link_endpoints(self, link: TraceLink) -> tuple[Artifact, Artifact]:
        return self.artifacts[link.source_id], self.artifacts[link.target_id]

    def summary(self) -> dict:
        by_kind: dict[str, int] = {}
        for a in self.artifacts.values():
            by_kind[a.kind] = by_kind.get(a.kind, 0) + 1
        return {
            "artifacts": len(self.artifacts),
            "artifacts_by_kind": dict(sorted(by_kind.items())),
            "links": len(self.links),
        }


def _parse_artifact_line(path, line_no: int, raw: str) -> Artifact:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ParseError(path, line_no, f"invalid JSON: {e.msg}") from e
    if not isinstance(obj, dict):
        raise ParseError(path, line_no, "expected a JSON object")
    art_id = obj.get("id")
    text = obj.get("text")
    if not art_id or not isinstance(art_id, str):
        raise ParseError(path, line_no, "missing or invalid 'id'")
    if not text or not isinstance(text, str):
        raise ParseError(path, line_no, "missing or empty 'text'")
    kind = obj.get("kind", "other")
    if kind not in ARTIFACT_KINDS:
        kind = "other"
    return Artifact(id=art_id, kind=kind, text=text)


def load_artifacts(path) -> list[Artifact]:
    path = Path(path)
    artifacts: list[Artifact] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            art = _parse_artifact_line(path, line_no, raw)
            if art.id in seen:
                raise ParseError(path, line_no, f"duplicate artifact id {art.id!r}")
            seen.add(art.id)
            artifacts.append(art)
    return artifacts


def _link_from_fields(path, line_no, link_id, source, target, label=None) -> TraceLink:
    if not link_id:
        raise ParseError(path, line_no, "missing link 'id'")
    if not source or not target:
        raise ParseError(path, line_no, "missing link 'source' or 'target'")
    if source == target:
        raise ParseError(path, line_no, f"link {link_id!r} has identical source and target")
    return TraceLink(id=link_id, source_id=source, target_id=target, label=label)


def load_links(path) -> list[TraceLink]:
    path = Path(path)
    links: list[TraceLink] = []
    seen: set[str] = set()
    first = ""
    with path.open(encoding="utf-8") as fh:
        for raw in fh:
            if raw.strip():
                first = raw.strip()
                break
    is_csv = path.suffix.lower() == ".csv" or (first and not first.startswith("{"))
    with path.open(encoding="utf-8", newline="") as fh:
        if is_csv:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"id", "source", "target"} <= set(reader.fieldnames):
                raise ParseError(path, 1, "CSV header must contain id,source,target")
            for line_no, row in enumerate(reader, start=2):
                link = _link_from_fields(path, line_no, row.get("id"), row.get("source"), row.get("target"), row.get("label"))
                if link.id in seen:
                    raise ParseError(path, line_no, f"duplicate link id {link.id!r}")
                seen.add(link.id)
                links.append(link)
        else:
            for line_no, raw in enumerate(fh, start=1):
                if not raw.strip():
                    continue
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError as e:
                    raise ParseError(path, line_no, f"invalid JSON: {e.msg}") from e
                link = _link_from_fields(path, line_no, obj.get("id"), obj.get("source"), obj.get("target"), obj.get("label"))
                if link.id in seen:
                    raise ParseError(path, line_no, f"duplicate link id {link.id!r}")
                seen.add(link.id)
                links.append(link)
    return links


def ingest_project(artifact_file, link_file) -> Project:
    """Load artifacts and links, rejecting links with dangling endpoints."""
    artifacts = load_artifacts(artifact_file)
    links = load_links(link_file)
    known = {a.id for a in artifacts}
    offenders: dict[str, list[str]] = {}
    for link in links:
        missing = [aid for aid in (link.source_id, link.target_id) if aid not in known]
        if missing:
            offenders[link.id] = missing
    if offenders:
        raise DanglingLinkError(offenders)
    return Project(artifacts, links)
