"""Persistent ontology store with an append-only audit trail.

Facts move through suggested -> accepted / rejected / modified via recorded
decisions. State lives in a single JSON file written atomically; every change
is also appended to a JSON Lines audit log from which the store state can be
replayed. Accepted and modified facts form the ontology and can be exported
as JSON (round-trippable) or as Turtle triples under a fixed prefix.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

STATUSES = ("suggested", "accepted", "rejected", "modified")
ONTOLOGY_STATUSES = ("accepted", "modified")
UNTYPED_RELATION = "associated-with"
TURTLE_PREFIX = "tf"
TURTLE_NAMESPACE = "http://tracefacts.dev/ont#"


class StoreError(Exception):
    pass


class UnknownFactError(StoreError):
    pass


class DuplicateFactError(StoreError):
    pass


@dataclass
class Fact:
    id: str
    source: str
    relation: str
    target: str
    status: str = "suggested"
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "Fact":
        return cls(
            id=obj["id"],
            source=obj["source"],
            relation=obj["relation"],
            target=obj["target"],
            status=obj.get("status", "suggested"),
            provenance=obj.get("provenance", {}),
        )


def fact_id_for(link_id: str, source: str, target: str) -> str:
    digest = hashlib.sha1(json.dumps([link_id, source, target]).encode()).hexdigest()
    return f"cf-{digest[:12]}"


class Ontology:
    """Read view over accepted and modified facts with an entity index."""

    def __init__(self, facts: list[Fact]):
        self.facts = [f for f in facts if f.status in ONTOLOGY_STATUSES]
        self.entity_index: dict[str, list[Fact]] = {}
        for f in self.facts:
            self.entity_index.setdefault(f.source, []).append(f)
            self.entity_index.setdefault(f.target, []).append(f)

    def facts_touching(self, entity: str) -> list[Fact]:
        return self.entity_index.get(entity, [])

    def __len__(self) -> int:
        return len(self.facts)


class FactStore:
    """Single-writer store; pass ``directory=None`` for an in-memory store."""

    def __init__(self, directory=None, clock=time.time):
        self.directory = Path(directory) if directory else None
        self.clock = clock
        self.facts: dict[str, Fact] = {}
        self._audit_seq = 0
        # mutations are serialized; readers see snapshot-consistent state
        self._lock = threading.RLock()
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            state = self.directory / "ontology.json"
            if state.is_file():
                for obj in json.loads(state.read_text("utf-8"))["facts"]:
                    fact = Fact.from_dict(obj)
                    self.facts[fact.id] = fact
            audit = self.directory / "audit.jsonl"
            if audit.is_file():
                with audit.open(encoding="utf-8") as fh:
                    self._audit_seq = sum(1 for line in fh if line.strip())

    # -- persistence ------------------------------------------------------

    def _write_state(self) -> None:
        if not self.directory:
            return
        payload = json.dumps(
            {"facts": [f.to_dict() for f in sorted(self.facts.values(), key=lambda f: f.id)]},
            sort_keys=True,
            indent=1,
        )
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".ontology-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self.directory / "ontology.json")
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _append_audit(self, action: str, fact: Fact) -> dict:
        self._audit_seq += 1
        entry = {
            "seq": self._audit_seq,
            "ts": self.clock(),
            "action": action,
            "fact": fact.to_dict(),
        }
        if self.directory:
            with (self.directory / "audit.jsonl").open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
        return entry

    @classmethod
    def replay(cls, audit_path, directory=None) -> "FactStore":
        """Rebuild a store purely from an audit log."""
        store = cls(directory=None)
        with open(audit_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                fact = Fact.from_dict(entry["fact"])
                store.facts[fact.id] = fact
                store._audit_seq = entry["seq"]
        store.directory = Path(directory) if directory else None
        if store.directory:
            store.directory.mkdir(parents=True, exist_ok=True)
            store._write_state()
        return store

    # -- mutations --------------------------------------------------------

    def suggest(self, fact: Fact) -> Fact:
        """Register a suggested fact; an already-known id is returned as-is."""
        with self._lock:
            existing = self.facts.get(fact.id)
            if existing is not None:
                return existing
            fact.status = "suggested"
            self.facts[fact.id] = fact
            self._append_audit("suggest", fact)
            self._write_state()
            return fact

    def _check_unique(self, fact: Fact, source: str, relation: str, target: str) -> None:
        for other in self.facts.values():
            if (
                other.id != fact.id
                and other.status in ONTOLOGY_STATUSES
                and (other.source, other.relation, other.target) == (source, relation, target)
            ):
                raise DuplicateFactError(
                    f"({source!r}, {relation!r}, {target!r}) already accepted as {other.id}"
                )

    def record_decision(
        self,
        fact_id: str,
        action: str,
        relation: str | None = None,
        source: str | None = None,
        target: str | None = None,
        editor: str = "analyst",
    ) -> Fact:
        """Apply an accept / reject / modify decision.

        Identical repeated decisions are no-ops: the state is returned
        unchanged and nothing is appended to the audit log.
        """
        with self._lock:
            fact = self.facts.get(fact_id)
            if fact is None:
                raise UnknownFactError(f"unknown fact id {fact_id!r}")
            if action not in ("accept", "reject", "modify"):
                raise StoreError(f"unknown decision action {action!r}")

            new_source = source if source is not None else fact.source
            new_target = target if target is not None else fact.target
            if action == "modify" and not relation:
                raise StoreError("modify requires a non-empty relation")
            new_relation = relation if relation else (fact.relation or UNTYPED_RELATION)
            new_status = {"accept": "accepted", "reject": "rejected", "modify": "modified"}[action]

            if new_status in ONTOLOGY_STATUSES:
                if not new_relation:
                    raise StoreError("accepted facts require a non-empty relation")
                if new_source == new_target:
                    raise StoreError("self-loop facts cannot enter the ontology")
                self._check_unique(fact, new_source, new_relation, new_target)

            unchanged = (
                fact.status == new_status
                and fact.source == new_source
                and fact.relation == new_relation
                and fact.target == new_target
            )
            if unchanged:
                return fact

            fact.source = new_source
            fact.target = new_target
            fact.relation = new_relation
            fact.status = new_status
            fact.provenance = dict(fact.provenance, editor=editor, decided_at=self.clock())
            self._append_audit(action, fact)
            self._write_state()
            return fact

    # -- views and export -------------------------------------------------

    def ontology(self) -> Ontology:
        return Ontology(sorted(self.facts.values(), key=lambda f: f.id))

    def export_json(self) -> str:
        facts = [f.to_dict() for f in self.ontology().facts]
        return json.dumps(facts, sort_keys=True, indent=1)

    def import_json(self, text: str) -> None:
        """Load accepted facts from an export; replaces matching ids."""
        with self._lock:
            for obj in json.loads(text):
                fact = Fact.from_dict(obj)
                self.facts[fact.id] = fact
            self._write_state()

    def export_turtle(self) -> str:
        lines = [f"@prefix {TURTLE_PREFIX}: <{TURTLE_NAMESPACE}> .", ""]
        for fact in self.ontology().facts:
            s = _turtle_name(fact.source)
            p = _turtle_name(fact.relation)
            o = _turtle_name(fact.target)
            lines.append(f"{TURTLE_PREFIX}:{s} {TURTLE_PREFIX}:{p} {TURTLE_PREFIX}:{o} .")
        return "\n".join(lines) + "\n"


def _turtle_name(text: str) -> str:
    name = text.strip().replace(" ", "_")
    return re.sub(r"[^A-Za-z0-9_\-]", lambda m: f"%{ord(m.group(0)):02X}", name)


def import_ontology(text: str) -> Ontology:
    return Ontology([Fact.from_dict(obj) for obj in json.loads(text)])
