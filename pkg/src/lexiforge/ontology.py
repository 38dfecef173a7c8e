"""Concept hierarchy with case-role constraint slots.

Concepts form a rooted DAG over parent links (multiple inheritance is
allowed). Each concept may constrain case roles (AGENT, THEME, ...) to
other concepts; those slots drive semantic-template construction.
The ontology is immutable after load and safe to share across threads.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingSlotError, OntologyFormatError, ResourceError, UnknownConceptError

_NAME_RE = re.compile(r"^[A-Z][A-Z0-9-]*$")
_CONCEPT_KEYS = {"name", "parents", "slots"}


@dataclass(frozen=True)
class Concept:
    name: str
    parents: tuple[str, ...]
    slots: dict[str, str]


class Ontology:
    def __init__(self, concepts: dict[str, Concept], root: str):
        self.concepts = concepts
        self.root = root

    def __contains__(self, name: str) -> bool:
        return name in self.concepts

    def __getitem__(self, name: str) -> Concept:
        try:
            return self.concepts[name]
        except KeyError:
            raise UnknownConceptError(f"unknown concept: {name}") from None

    def subsumes(self, ancestor: str, descendant: str) -> bool:
        """True iff ancestor is reachable from descendant via parent links, or equal."""
        if ancestor not in self.concepts:
            raise UnknownConceptError(f"unknown concept: {ancestor}")
        if descendant not in self.concepts:
            raise UnknownConceptError(f"unknown concept: {descendant}")
        queue = deque([descendant])
        seen = set()
        while queue:
            name = queue.popleft()
            if name == ancestor:
                return True
            if name in seen:
                continue
            seen.add(name)
            queue.extend(self.concepts[name].parents)
        return False

    def constraint_on(self, concept: str, role: str) -> str:
        """The concept constraining `role` on `concept`; error if the slot is absent."""
        slots = self[concept].slots
        if role not in slots:
            raise MissingSlotError(f"{concept} has no constraint slot for {role}")
        return slots[role]


def subsumes(ontology: Ontology, ancestor: str, descendant: str) -> bool:
    return ontology.subsumes(ancestor, descendant)


def constraint_on(ontology: Ontology, concept: str, role: str) -> str:
    return ontology.constraint_on(concept, role)


def _check_acyclic(concepts: dict[str, Concept]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = dict.fromkeys(concepts, WHITE)
    for start in concepts:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            name, i = stack[-1]
            parents = concepts[name].parents
            if i == len(parents):
                stack.pop()
                color[name] = BLACK
                continue
            stack[-1] = (name, i + 1)
            parent = parents[i]
            if color[parent] == GRAY:
                raise OntologyFormatError(f"parent cycle through {parent}")
            if color[parent] == WHITE:
                color[parent] = GRAY
                stack.append((parent, 0))


def load_ontology(path: str | Path) -> Ontology:
    """Load and validate an ontology from a UTF-8 JSON array of concepts."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read ontology {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OntologyFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, list):
        raise OntologyFormatError(f"{path}: top level must be an array of concepts")

    concepts: dict[str, Concept] = {}
    for i, record in enumerate(data):
        locus = f"{path} record {i}"
        if not isinstance(record, dict):
            raise OntologyFormatError(f"{locus}: concept record must be an object")
        unknown = set(record) - _CONCEPT_KEYS
        if unknown:
            raise OntologyFormatError(f"{locus}: unknown keys {sorted(unknown)}")
        missing = _CONCEPT_KEYS - set(record)
        if missing:
            raise OntologyFormatError(f"{locus}: missing keys {sorted(missing)}")
        name = record["name"]
        if not _NAME_RE.match(name):
            raise OntologyFormatError(f"{locus}: concept name must be UPPERCASE, got {name!r}")
        if name in concepts:
            raise OntologyFormatError(f"{locus}: duplicate concept {name}")
        concepts[name] = Concept(
            name=name,
            parents=tuple(record["parents"]),
            slots=dict(record["slots"]),
        )

    for concept in concepts.values():
        for parent in concept.parents:
            if parent not in concepts:
                raise OntologyFormatError(
                    f"{concept.name}: dangling parent reference {parent}"
                )
        for role, filler in concept.slots.items():
            if not _NAME_RE.match(role):
                raise OntologyFormatError(f"{concept.name}: bad case-role name {role!r}")
            if filler not in concepts:
                raise OntologyFormatError(
                    f"{concept.name}: slot {role} names missing concept {filler}"
                )

    _check_acyclic(concepts)

    roots = [c.name for c in concepts.values() if not c.parents]
    if len(roots) != 1:
        raise OntologyFormatError(
            f"{path}: expected exactly one root concept, found {sorted(roots)}"
        )
    return Ontology(concepts, roots[0])
