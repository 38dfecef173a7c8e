"""Semantic-lexicon store: sense records, derived indices, JSON persistence.

A sense binds a surface word (or MWE) to an ontology concept via its
sem-struc and describes the required surface structure in its syn-struc.
Senses acquired automatically carry learned=True plus a provenance run id
until a knowledge engineer vets them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DuplicateSenseError, LexiconFormatError, ResourceError

POS_VALUES = ("verb", "noun", "other")

_ID_INDEX_RE = re.compile(r"^(.*?)(\d+)$")


@dataclass
class ExtraLexItem:
    """A required MWE token beyond the head verb, e.g. the particle "in"."""

    surface: str
    null_sem: bool = False


@dataclass
class SynStruc:
    head: str
    subject_var: str = ""
    object_var: str = ""
    extras: list[ExtraLexItem] = field(default_factory=list)


@dataclass
class SemStruc:
    concept: str
    role_bindings: dict[str, str] = field(default_factory=dict)


@dataclass
class LexSense:
    sense_id: str
    lemma: str
    pos: str
    syn_struc: SynStruc
    sem_struc: SemStruc
    examples: list[str] = field(default_factory=list)
    learned: bool = False
    provenance: str | None = None

    def is_transitive_verb(self) -> bool:
        return self.pos == "verb" and bool(self.syn_struc.object_var)


def _order_key(sense_id: str) -> tuple[str, int]:
    # "employ-v3" sorts after "employ-v1"; ids without a numeric suffix sort first
    m = _ID_INDEX_RE.match(sense_id)
    if m:
        return (m.group(1), int(m.group(2)))
    return (sense_id, -1)


def _validate_sense(sense: LexSense, locus: str) -> None:
    if not sense.sense_id:
        raise LexiconFormatError(f"{locus}: empty sense_id")
    if not sense.lemma:
        raise LexiconFormatError(f"{locus}: empty lemma")
    if sense.pos not in POS_VALUES:
        raise LexiconFormatError(f"{locus}: pos must be one of {POS_VALUES}, got {sense.pos!r}")
    if sense.pos == "verb" and not sense.syn_struc.head:
        raise LexiconFormatError(f"{locus}: verb sense needs a head verb in syn_struc")
    if sense.learned and not sense.provenance:
        raise LexiconFormatError(f"{locus}: learned sense lacks provenance")
    if len(sense.lemma.split()) == 1 and sense.syn_struc.extras:
        raise LexiconFormatError(f"{locus}: single-word sense must not carry extras")
    variables = {sense.syn_struc.subject_var, sense.syn_struc.object_var} - {""}
    for role, var in sense.sem_struc.role_bindings.items():
        if var not in variables:
            raise LexiconFormatError(
                f"{locus}: role {role} bound to unknown variable {var!r}"
            )


class Lexicon:
    """A set of senses with lemma and concept indices kept coherent."""

    def __init__(self, senses: Iterable[LexSense] = ()):
        self.senses: dict[str, LexSense] = {}
        self._by_lemma: dict[str, list[str]] = {}
        self._by_concept: dict[str, list[str]] = {}
        for sense in senses:
            self.add_sense(sense)

    def __len__(self) -> int:
        return len(self.senses)

    def __contains__(self, sense_id: str) -> bool:
        return sense_id in self.senses

    def __getitem__(self, sense_id: str) -> LexSense:
        return self.senses[sense_id]

    def __iter__(self) -> Iterator[LexSense]:
        return iter(self.senses.values())

    def add_sense(self, sense: LexSense) -> None:
        """Insert a sense and update both indices."""
        if sense.sense_id in self.senses:
            raise DuplicateSenseError(f"duplicate sense_id: {sense.sense_id}")
        _validate_sense(sense, f"sense {sense.sense_id}")
        self.senses[sense.sense_id] = sense
        self._by_lemma.setdefault(sense.lemma, []).append(sense.sense_id)
        self._by_concept.setdefault(sense.sem_struc.concept, []).append(sense.sense_id)
        self.check_indices()

    def senses_of(self, lemma: str) -> list[LexSense]:
        """All senses of a lemma in stable sense-index order."""
        ids = self._by_lemma.get(lemma, [])
        return [self.senses[i] for i in sorted(ids, key=_order_key)]

    def lexemes_denoting(
        self, concept: str, pos: str, include_learned: bool = False
    ) -> list[LexSense]:
        """Senses whose sem-struc names exactly this concept, filtered by pos.

        Learned senses are excluded unless include_learned is set, so a
        learning run never bootstraps off its own unvetted output.
        """
        ids = sorted(self._by_concept.get(concept, []), key=_order_key)
        return [
            self.senses[i]
            for i in ids
            if self.senses[i].pos == pos
            and (include_learned or not self.senses[i].learned)
        ]

    def next_sense_id(self, lemma: str) -> str:
        """Next free id under the learned-MWE naming scheme (take_on-v1, ...)."""
        base = lemma.replace(" ", "_")
        pattern = re.compile(rf"^{re.escape(base)}-v(\d+)$")
        taken = [int(m.group(1)) for sid in self.senses if (m := pattern.match(sid))]
        return f"{base}-v{max(taken, default=0) + 1}"

    def check_indices(self) -> None:
        """Verify index coherence; raises AssertionError on drift."""
        for sense in self.senses.values():
            assert sense.sense_id in self._by_lemma.get(sense.lemma, []), sense.sense_id
            assert sense.sense_id in self._by_concept.get(sense.sem_struc.concept, []), (
                sense.sense_id
            )
        indexed = {i for ids in self._by_lemma.values() for i in ids}
        assert indexed == set(self.senses), "lemma index out of sync"
        indexed = {i for ids in self._by_concept.values() for i in ids}
        assert indexed == set(self.senses), "concept index out of sync"

    def copy(self) -> "Lexicon":
        return Lexicon(record_to_sense(sense_to_record(s), s.sense_id) for s in self)


# --- JSON record format ---------------------------------------------------

_SENSE_KEYS = {
    "sense_id", "lemma", "pos", "syn_struc", "sem_struc", "examples", "learned", "provenance",
}
_SYN_KEYS = {"head", "subject_var", "object_var", "extras"}
_EXTRA_KEYS = {"surface", "null_sem"}
_SEM_KEYS = {"concept", "role_bindings"}


def _check_keys(obj: dict, allowed: set[str], required: set[str], locus: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise LexiconFormatError(f"{locus}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise LexiconFormatError(f"{locus}: missing keys {sorted(missing)}")


def record_to_sense(record: dict, locus: str) -> LexSense:
    if not isinstance(record, dict):
        raise LexiconFormatError(f"{locus}: sense record must be an object")
    _check_keys(record, _SENSE_KEYS, _SENSE_KEYS - {"provenance"}, locus)
    syn = record["syn_struc"]
    _check_keys(syn, _SYN_KEYS, _SYN_KEYS, f"{locus}.syn_struc")
    extras = []
    for i, item in enumerate(syn["extras"]):
        _check_keys(item, _EXTRA_KEYS, _EXTRA_KEYS, f"{locus}.syn_struc.extras[{i}]")
        extras.append(ExtraLexItem(surface=item["surface"], null_sem=bool(item["null_sem"])))
    sem = record["sem_struc"]
    _check_keys(sem, _SEM_KEYS, _SEM_KEYS, f"{locus}.sem_struc")
    sense = LexSense(
        sense_id=record["sense_id"],
        lemma=record["lemma"],
        pos=record["pos"],
        syn_struc=SynStruc(
            head=syn["head"],
            subject_var=syn["subject_var"],
            object_var=syn["object_var"],
            extras=extras,
        ),
        sem_struc=SemStruc(
            concept=sem["concept"],
            role_bindings=dict(sem["role_bindings"]),
        ),
        examples=list(record["examples"]),
        learned=bool(record["learned"]),
        provenance=record.get("provenance"),
    )
    _validate_sense(sense, locus)
    return sense


def sense_to_record(sense: LexSense) -> dict:
    return {
        "sense_id": sense.sense_id,
        "lemma": sense.lemma,
        "pos": sense.pos,
        "syn_struc": {
            "head": sense.syn_struc.head,
            "subject_var": sense.syn_struc.subject_var,
            "object_var": sense.syn_struc.object_var,
            "extras": [
                {"surface": e.surface, "null_sem": e.null_sem}
                for e in sense.syn_struc.extras
            ],
        },
        "sem_struc": {
            "concept": sense.sem_struc.concept,
            "role_bindings": dict(sense.sem_struc.role_bindings),
        },
        "examples": list(sense.examples),
        "learned": sense.learned,
        "provenance": sense.provenance,
    }


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a lexicon from a UTF-8 JSON array of sense records."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read lexicon {path}: {exc}") from exc
    if not text.strip():
        return Lexicon()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, list):
        raise LexiconFormatError(f"{path}: top level must be an array of sense records")
    lexicon = Lexicon()
    for i, record in enumerate(data):
        sense = record_to_sense(record, f"{path} record {i}")
        try:
            lexicon.add_sense(sense)
        except DuplicateSenseError as exc:
            raise LexiconFormatError(f"{path} record {i}: {exc}") from exc
    return lexicon


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    """Write the lexicon as canonical, human-diffable JSON."""
    records = [sense_to_record(s) for s in sorted(lexicon, key=lambda s: _order_key(s.sense_id))]
    try:
        Path(path).write_text(
            json.dumps(records, indent=2, sort_keys=True, ensure_ascii=False) + "\n", "utf-8"
        )
    except OSError as exc:
        raise ResourceError(f"cannot write lexicon {path}: {exc}") from exc
