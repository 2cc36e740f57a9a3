"""Educational frameworks: subjects, proficiency levels, and concepts.

A framework is loaded once from a JSON document and is immutable after
that, so instances can be shared freely across threads. Two built-in
frameworks ship with the package (math and literacy for preschool);
additional documents can be ingested without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from paired.errors import ParseError, UnknownLevel, ValidationError


class Subject(str, Enum):
    MATH = "math"
    LITERACY = "literacy"

    @classmethod
    def parse(cls, value: str) -> "Subject":
        try:
            return cls(value.lower())
        except ValueError:
            raise ParseError(f"unknown subject: {value!r}") from None


@dataclass(frozen=True)
class ProficiencyLevel:
    ordinal: int
    label: str


@dataclass(frozen=True)
class Concept:
    id: str
    subject: Subject
    level: int
    name: str
    description: str


@dataclass(frozen=True)
class Framework:
    subject: Subject
    levels: tuple[ProficiencyLevel, ...]
    concepts: tuple[Concept, ...] = field(default=())

    def concept(self, concept_id: str) -> Concept | None:
        for c in self.concepts:
            if c.id == concept_id:
                return c
        return None

    def has_concept(self, concept_id: str) -> bool:
        return self.concept(concept_id) is not None


def load_framework(source: str | Path | dict, subject: Subject | None = None) -> Framework:
    """Parse and validate a framework document.

    ``source`` may be a path to a JSON file or an already-decoded dict.
    When ``subject`` is given it must match the document header.

    Raises:
        ParseError: malformed JSON, missing fields, unknown subject,
            or a header that does not match ``subject``.
        ValidationError: structural invariant broken (duplicate ids,
            non-contiguous levels, empty level, dangling level ref).
    """
    if isinstance(source, (str, Path)):
        try:
            doc = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read framework document: {exc}") from exc
    else:
        doc = source

    if not isinstance(doc, dict) or "subject" not in doc:
        raise ParseError("framework document missing 'subject' header")
    doc_subject = Subject.parse(str(doc["subject"]))
    if subject is not None and doc_subject is not subject:
        raise ParseError(f"document subject {doc_subject.value!r} does not match requested {subject.value!r}")

    try:
        raw_levels = list(doc["levels"])
        raw_concepts = list(doc["concepts"])
    except KeyError as exc:
        raise ParseError(f"framework document missing field: {exc}") from exc

    levels = []
    for entry in raw_levels:
        try:
            levels.append(ProficiencyLevel(ordinal=int(entry["ordinal"]), label=str(entry["label"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad level entry {entry!r}: {exc}") from exc

    ordinals = [lv.ordinal for lv in levels]
    if ordinals != list(range(1, len(levels) + 1)):
        raise ValidationError(f"level ordinals must be contiguous from 1, got {ordinals}")
    labels = [lv.label for lv in levels]
    if len(set(labels)) != len(labels):
        raise ValidationError("level labels must be unique")

    concepts = []
    seen_ids: set[str] = set()
    for entry in raw_concepts:
        try:
            concept = Concept(
                id=str(entry["id"]),
                subject=doc_subject,
                level=int(entry["level"]),
                name=str(entry["name"]),
                description=str(entry["description"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad concept entry {entry!r}: {exc}") from exc
        if concept.id in seen_ids:
            raise ValidationError(f"duplicate concept id: {concept.id}")
        seen_ids.add(concept.id)
        if concept.level not in set(ordinals):
            raise ValidationError(f"concept {concept.id} references unknown level {concept.level}")
        if not concept.description.strip():
            raise ValidationError(f"concept {concept.id} has an empty description")
        concepts.append(concept)

    populated = {c.level for c in concepts}
    empty = set(ordinals) - populated
    if empty:
        raise ValidationError(f"levels without any concept: {sorted(empty)}")

    return Framework(subject=doc_subject, levels=tuple(levels), concepts=tuple(concepts))


def list_concepts(framework: Framework, level: int | None = None) -> list[Concept]:
    """Concepts ordered by (level, name); optionally filtered to one level."""
    if level is not None and level not in {lv.ordinal for lv in framework.levels}:
        raise UnknownLevel(f"no level {level} in {framework.subject.value} framework")
    selected = [c for c in framework.concepts if level is None or c.level == level]
    return sorted(selected, key=lambda c: (c.level, c.name))


def builtin_frameworks() -> dict[Subject, Framework]:
    """Load the frameworks bundled as package data."""
    out: dict[Subject, Framework] = {}
    root = resources.files("paired").joinpath("data/frameworks")
    for subject in Subject:
        doc = json.loads(root.joinpath(f"{subject.value}.json").read_text())
        out[subject] = load_framework(doc, subject)
    return out
