"""Grounded prompt assembly, provider calls, and content validation.

The provider boundary is a single "structured completion" call: it takes
an assembled :class:`PromptBundle` and returns a payload dict with keys
``concept_id, question, choices, correct_index, explanation, motivation``.
Validation failures are fed back into a bounded retry loop; content that
still fails after the budget raises :class:`GenerationFailed`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

from paired.errors import ConceptNotInFramework, GenerationFailed
from paired.framework import Framework, list_concepts
from paired.library import BookBundle, VisualContext


class ComponentKind(str, Enum):
    """The four content components, in canonical presentation order."""

    BOOK_TEXT = "book_text"
    QUESTION = "question"
    EXPLANATION = "explanation"
    MOTIVATION = "motivation"


COMPONENT_ORDER: tuple[ComponentKind, ...] = (
    ComponentKind.BOOK_TEXT,
    ComponentKind.QUESTION,
    ComponentKind.EXPLANATION,
    ComponentKind.MOTIVATION,
)

GENERATED_COMPONENTS: tuple[ComponentKind, ...] = (
    ComponentKind.QUESTION,
    ComponentKind.EXPLANATION,
    ComponentKind.MOTIVATION,
)

SCOPE_ALL = "all"


class Provenance(str, Enum):
    GENERATED = "generated"
    PARENT_EDITED = "parent_edited"
    SOURCE_BOOK = "source_book"


@dataclass(frozen=True)
class PageContent:
    page_index: int
    concept_id: str
    question: str
    choices: tuple[str, str, str, str]
    correct_index: int
    explanation: str
    motivation: str
    provenance: dict[ComponentKind, Provenance] = field(default_factory=dict)

    @staticmethod
    def default_provenance() -> dict[ComponentKind, Provenance]:
        prov = {kind: Provenance.GENERATED for kind in GENERATED_COMPONENTS}
        prov[ComponentKind.BOOK_TEXT] = Provenance.SOURCE_BOOK
        return prov

    def component_text(self, kind: ComponentKind, book_text: str = "") -> str:
        if kind is ComponentKind.BOOK_TEXT:
            return book_text
        if kind is ComponentKind.QUESTION:
            return self.question
        if kind is ComponentKind.EXPLANATION:
            return self.explanation
        return self.motivation

    def to_dict(self) -> dict:
        return {
            "page_index": self.page_index,
            "concept_id": self.concept_id,
            "question": self.question,
            "choices": list(self.choices),
            "correct_index": self.correct_index,
            "explanation": self.explanation,
            "motivation": self.motivation,
            "provenance": {k.value: v.value for k, v in self.provenance.items()},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PageContent":
        return cls(
            page_index=int(doc["page_index"]),
            concept_id=doc["concept_id"],
            question=doc["question"],
            choices=tuple(doc["choices"]),
            correct_index=int(doc["correct_index"]),
            explanation=doc["explanation"],
            motivation=doc["motivation"],
            provenance={ComponentKind(k): Provenance(v) for k, v in doc["provenance"].items()},
        )


@dataclass(frozen=True)
class PromptBundle:
    instructions: str
    page_image_ref: str
    visual_section: str
    framework_section: str
    target_concept: str | None
    grade: str
    subject: str

    def as_text(self) -> str:
        return "\n\n".join(
            [
                self.instructions,
                f"Grade: {self.grade}  Subject: {self.subject}",
                f"Page image: {self.page_image_ref}",
                "Scene objects:\n" + self.visual_section,
                "Available concepts:\n" + self.framework_section,
            ]
        )


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    def add(self, code: str, message: str) -> None:
        self.issues.append(ValidationIssue(code, message))

    @property
    def codes(self) -> list[str]:
        return [i.code for i in self.issues]

    def __bool__(self) -> bool:
        return bool(self.issues)

    def to_dict(self) -> dict:
        return {"issues": [{"code": i.code, "message": i.message} for i in self.issues]}


@dataclass
class GroundingReport:
    warnings: list[ValidationIssue] = field(default_factory=list)

    def add(self, code: str, message: str) -> None:
        self.warnings.append(ValidationIssue(code, message))

    @property
    def codes(self) -> list[str]:
        return [w.code for w in self.warnings]

    def __bool__(self) -> bool:
        return bool(self.warnings)


INSTRUCTIONS = (
    "Create one learning activity for this storybook page. Respond with a JSON "
    "object holding concept_id, question, choices (exactly four answer options, "
    "one correct), correct_index, explanation (how the correct answer is found), "
    "and motivation (encouraging words or a fun fact). Ground every object "
    "reference in the scene objects listed below."
)


def _render_object(obj) -> str:
    parts = [f"- {obj.name} | category={obj.category}"]
    for key in sorted(obj.properties):
        parts.append(f"{key}={obj.properties[key]}")
    if obj.relations:
        rels = ", ".join(f"{rel} {target}" for rel, target in obj.relations)
        parts.append(f"relations: {rels}")
    return " | ".join(parts)


def assemble_prompt(
    book: BookBundle,
    page_index: int,
    framework: Framework,
    concept_id: str | None = None,
    grade: str = "preschool",
) -> PromptBundle:
    """Build the deterministic grounded prompt for one page.

    Raises UnknownPage for an out-of-range page and ConceptNotInFramework
    when the requested concept does not resolve.
    """
    page = book.page(page_index)
    if concept_id is not None and not framework.has_concept(concept_id):
        raise ConceptNotInFramework(f"no concept {concept_id!r} in {framework.subject.value} framework")

    context = book.context_for(page_index)
    if context.objects:
        visual_section = "\n".join(_render_object(obj) for obj in context.objects)
    else:
        visual_section = "(no structured objects on this page)"

    framework_lines = [
        f"- {c.id} [level {c.level}] {c.name}: {c.description}" for c in list_concepts(framework)
    ]
    return PromptBundle(
        instructions=INSTRUCTIONS,
        page_image_ref=page.image_ref,
        visual_section=visual_section,
        framework_section="\n".join(framework_lines),
        target_concept=concept_id,
        grade=grade,
        subject=framework.subject.value,
    )


def validate_content(
    raw: dict,
    framework: Framework,
    visual: VisualContext,
    page_index: int,
) -> PageContent | ValidationReport:
    """Check a provider payload against every PageContent invariant.

    Returns the validated PageContent on success, otherwise a report with
    one machine-readable code per violated rule. Grounding problems are
    attached as warnings and never reject on their own.
    """
    report = ValidationReport()

    choices = raw.get("choices")
    if not isinstance(choices, (list, tuple)) or len(choices) != 4:
        got = len(choices) if isinstance(choices, (list, tuple)) else type(choices).__name__
        report.add("CHOICES_COUNT", f"expected exactly 4 choices, got {got}")
        choices = []
    else:
        choices = [str(c) for c in choices]
        if len(set(choices)) != 4:
            report.add("CHOICES_DUPLICATE", "choices must be pairwise distinct")

    try:
        correct_index = int(raw.get("correct_index", -1))
    except (TypeError, ValueError):
        correct_index = -1
    if not 0 <= correct_index <= 3:
        report.add("CORRECT_INDEX_RANGE", f"correct_index {raw.get('correct_index')!r} outside [0, 3]")

    concept_id = str(raw.get("concept_id") or "")
    if not framework.has_concept(concept_id):
        report.add("CONCEPT_UNKNOWN", f"concept {concept_id!r} not in {framework.subject.value} framework")

    for name in ("question", "explanation", "motivation"):
        value = raw.get(name)
        if not isinstance(value, str) or not value.strip():
            report.add("EMPTY_FIELD", f"{name} is empty or missing")
    for i, choice in enumerate(choices):
        if not choice.strip():
            report.add("EMPTY_FIELD", f"choice {i} is empty")

    if report:
        return report

    content = PageContent(
        page_index=page_index,
        concept_id=concept_id,
        question=str(raw["question"]),
        choices=tuple(choices),
        correct_index=correct_index,
        explanation=str(raw["explanation"]),
        motivation=str(raw["motivation"]),
        provenance=PageContent.default_provenance(),
    )
    return content


_NUMBER_WORDS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "eleven": 11, "twelve": 12,
}


def _parse_number(text: str) -> int | None:
    stripped = text.strip().lower()
    if re.fullmatch(r"\d+", stripped):
        return int(stripped)
    return _NUMBER_WORDS.get(stripped)


def ground_check(content: PageContent, visual: VisualContext) -> GroundingReport:
    """Compare a counting question's correct answer against scene counts.

    Only questions starting with "how many" are checked; everything else
    yields an empty report. Mismatched counts and unmatched object names
    are warnings, never rejections.
    """
    report = GroundingReport()
    question = content.question.strip().lower()
    if not question.startswith("how many"):
        return report

    answer = _parse_number(content.choices[content.correct_index])
    if answer is None:
        return report

    matched = None
    for obj in visual.objects:
        if obj.name.lower() in question:
            matched = obj
            break
    if matched is None:
        report.add("OBJECT_NOT_IN_CONTEXT", f"no scene object matches question {content.question!r}")
        return report
    expected = matched.count
    if expected is not None and expected != answer:
        report.add(
            "COUNT_MISMATCH",
            f"answer {answer} disagrees with count {expected} for {matched.name!r}",
        )
    return report


def generate_page_content(
    book: BookBundle,
    page_index: int,
    framework: Framework,
    provider,
    concept_id: str | None = None,
    grade: str = "preschool",
    max_retries: int = 2,
) -> PageContent:
    """Generate and validate content for one page, retrying on bad payloads.

    Each retry re-sends the prompt with the previous validation report
    attached so the provider can repair its output.
    """
    bundle = assemble_prompt(book, page_index, framework, concept_id, grade)
    visual = book.context_for(page_index)
    report: ValidationReport | None = None
    for _ in range(max_retries + 1):
        raw = provider.complete(bundle, repair=report)
        result = validate_content(raw, framework, visual, page_index)
        if isinstance(result, PageContent):
            return result
        report = result
    raise GenerationFailed(
        f"page {page_index} still invalid after {max_retries} retries: {report.codes}",
        report=report,
    )


def regenerate(
    content: PageContent,
    book: BookBundle,
    framework: Framework,
    scope: ComponentKind | str,
    provider,
    grade: str = "preschool",
) -> PageContent:
    """Replace the scoped components with fresh generated text.

    ``scope`` is one of the three generated components or ``"all"``.
    Components outside the scope are carried over byte-identically; the
    concept never changes here (concept swaps go through change_concept).
    """
    if isinstance(scope, str) and scope.lower() == SCOPE_ALL:
        kinds = set(GENERATED_COMPONENTS)
    else:
        kind = ComponentKind(scope)
        if kind not in GENERATED_COMPONENTS:
            raise ValueError(f"cannot regenerate {kind.value}")
        kinds = {kind}

    fresh = generate_page_content(
        book, content.page_index, framework, provider, concept_id=content.concept_id, grade=grade
    )
    provenance = dict(content.provenance)
    updates: dict = {}
    if ComponentKind.QUESTION in kinds:
        updates.update(question=fresh.question, choices=fresh.choices, correct_index=fresh.correct_index)
        provenance[ComponentKind.QUESTION] = Provenance.GENERATED
    if ComponentKind.EXPLANATION in kinds:
        updates["explanation"] = fresh.explanation
        provenance[ComponentKind.EXPLANATION] = Provenance.GENERATED
    if ComponentKind.MOTIVATION in kinds:
        updates["motivation"] = fresh.motivation
        provenance[ComponentKind.MOTIVATION] = Provenance.GENERATED
    return replace(content, provenance=provenance, **updates)
