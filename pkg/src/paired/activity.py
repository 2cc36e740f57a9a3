"""Activity lifecycle: bulk generation, review/edit with provenance,
concept swaps, launch snapshots, and cloning of reviewed activities.

All writes for one activity are serialized behind a per-manager lock;
launched activities are immutable snapshots that sessions reference.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum

from paired.contentgen import (
    ComponentKind,
    GENERATED_COMPONENTS,
    PageContent,
    Provenance,
    ValidationReport,
    generate_page_content,
    ground_check,
    regenerate,
    validate_content,
)
from paired.errors import (
    ActivityLaunched,
    ConceptNotInFramework,
    ContentInvalid,
    GenerationFailed,
    UnknownActivity,
)
from paired.framework import Framework, Subject
from paired.library import Library


class ActivityStatus(str, Enum):
    DRAFT = "draft"
    LAUNCHED = "launched"


@dataclass
class Activity:
    activity_id: str
    book_id: str
    subject: Subject
    grade: str
    pages: list[PageContent]
    status: ActivityStatus = ActivityStatus.DRAFT
    created_at: float = 0.0
    derived_from: str | None = None
    version: int = 1

    def page(self, page_index: int) -> PageContent:
        for page in self.pages:
            if page.page_index == page_index:
                return page
        raise ContentInvalid(f"activity has no page {page_index}")

    def to_dict(self) -> dict:
        return {
            "activity_id": self.activity_id,
            "book_id": self.book_id,
            "subject": self.subject.value,
            "grade": self.grade,
            "pages": [p.to_dict() for p in self.pages],
            "status": self.status.value,
            "created_at": self.created_at,
            "derived_from": self.derived_from,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Activity":
        return cls(
            activity_id=doc["activity_id"],
            book_id=doc["book_id"],
            subject=Subject(doc["subject"]),
            grade=doc["grade"],
            pages=[PageContent.from_dict(p) for p in doc["pages"]],
            status=ActivityStatus(doc["status"]),
            created_at=doc.get("created_at", 0.0),
            derived_from=doc.get("derived_from"),
            version=int(doc.get("version", 1)),
        )


@dataclass(frozen=True)
class PageSummary:
    page_index: int
    concept_name: str
    generated: int
    parent_edited: int
    grounding_warnings: int


@dataclass(frozen=True)
class ReviewSummary:
    activity_id: str
    pages: tuple[PageSummary, ...]
    total_generated: int
    total_parent_edited: int
    total_warnings: int

    def to_dict(self) -> dict:
        return {
            "activity_id": self.activity_id,
            "pages": [
                {
                    "page_index": p.page_index,
                    "concept_name": p.concept_name,
                    "generated": p.generated,
                    "parent_edited": p.parent_edited,
                    "grounding_warnings": p.grounding_warnings,
                }
                for p in self.pages
            ],
            "totals": {
                "generated": self.total_generated,
                "parent_edited": self.total_parent_edited,
                "grounding_warnings": self.total_warnings,
            },
        }


class ActivityManager:
    """Owns activity records and serializes writes per manager.

    ``on_change`` (if given) is called with each committed Activity so
    the service layer can persist it.
    """

    def __init__(self, library: Library, frameworks: dict[Subject, Framework], on_change=None) -> None:
        self._library = library
        self._frameworks = frameworks
        self._activities: dict[str, Activity] = {}
        self._lock = threading.RLock()
        self._on_change = on_change

    # -- helpers -------------------------------------------------------------

    def framework_for(self, activity: Activity) -> Framework:
        return self._frameworks[activity.subject]

    def get(self, activity_id: str) -> Activity:
        with self._lock:
            try:
                return self._activities[activity_id]
            except KeyError:
                raise UnknownActivity(f"no activity {activity_id!r}") from None

    def list_activities(self) -> list[Activity]:
        with self._lock:
            return sorted(self._activities.values(), key=lambda a: a.created_at)

    def restore(self, activity: Activity) -> None:
        """Load a persisted activity without triggering on_change."""
        with self._lock:
            self._activities[activity.activity_id] = activity

    def _commit(self, activity: Activity) -> Activity:
        activity.version += 1
        self._activities[activity.activity_id] = activity
        if self._on_change is not None:
            self._on_change(activity)
        return activity

    def _draft(self, activity_id: str) -> Activity:
        activity = self.get(activity_id)
        if activity.status is ActivityStatus.LAUNCHED:
            raise ActivityLaunched(f"activity {activity_id} is launched and immutable")
        return activity

    # -- operations ----------------------------------------------------------

    def create_activity(self, book_id: str, subject: Subject, grade: str, provider) -> Activity:
        """Generate a draft activity covering every page of the book."""
        book = self._library.get(book_id)
        framework = self._frameworks[subject]
        pages: list[PageContent] = []
        failed: list[int] = []
        for page in book.pages:
            try:
                pages.append(generate_page_content(book, page.index, framework, provider, grade=grade))
            except GenerationFailed as exc:
                failed.append(page.index)
                last_report = exc.report
        if failed:
            raise GenerationFailed(
                f"generation failed for pages {failed}", report=last_report, failed_pages=failed
            )
        with self._lock:
            activity = Activity(
                activity_id=uuid.uuid4().hex[:12],
                book_id=book_id,
                subject=subject,
                grade=grade,
                pages=pages,
                created_at=time.time(),
                version=0,
            )
            return self._commit(activity)

    def edit_component(self, activity_id: str, page_index: int, component: ComponentKind, new_value) -> Activity:
        """Apply a parent edit; question edits carry choices and correct_index.

        ``new_value`` is a string for explanation/motivation and a dict
        {question, choices, correct_index} for the question component.
        """
        if component not in GENERATED_COMPONENTS:
            raise ContentInvalid(f"component {component.value} is not editable")
        with self._lock:
            activity = self._draft(activity_id)
            page = activity.page(page_index)
            raw = page.to_dict()
            if component is ComponentKind.QUESTION:
                if not isinstance(new_value, dict):
                    raise ContentInvalid("question edits need {question, choices, correct_index}")
                raw["question"] = new_value.get("question", raw["question"])
                raw["choices"] = new_value.get("choices", raw["choices"])
                raw["correct_index"] = new_value.get("correct_index", raw["correct_index"])
            else:
                raw[component.value] = new_value

            book = self._library.get(activity.book_id)
            framework = self.framework_for(activity)
            result = validate_content(raw, framework, book.context_for(page_index), page_index)
            if isinstance(result, ValidationReport):
                raise ContentInvalid(f"edit rejected: {result.codes}", report=result)

            provenance = dict(page.provenance)
            provenance[component] = Provenance.PARENT_EDITED
            edited = replace(
                page,
                question=result.question,
                choices=result.choices,
                correct_index=result.correct_index,
                explanation=result.explanation,
                motivation=result.motivation,
                provenance=provenance,
            )
            activity.pages = [edited if p.page_index == page_index else p for p in activity.pages]
            return self._commit(activity)

    def regenerate_page(self, activity_id: str, page_index: int, scope, provider) -> Activity:
        with self._lock:
            activity = self._draft(activity_id)
            page = activity.page(page_index)
            book = self._library.get(activity.book_id)
            fresh = regenerate(page, book, self.framework_for(activity), scope, provider, grade=activity.grade)
            activity.pages = [fresh if p.page_index == page_index else p for p in activity.pages]
            return self._commit(activity)

    def change_concept(self, activity_id: str, page_index: int, concept_id: str, provider) -> Activity:
        """Swap the page's concept and regenerate all generated components.

        Selecting the current concept again still regenerates: choosing
        from the list is an explicit request for fresh content.
        """
        with self._lock:
            activity = self._draft(activity_id)
            framework = self.framework_for(activity)
            if not framework.has_concept(concept_id):
                raise ConceptNotInFramework(
                    f"concept {concept_id!r} not in {framework.subject.value} framework"
                )
            book = self._library.get(activity.book_id)
            fresh = generate_page_content(
                book, page_index, framework, provider, concept_id=concept_id, grade=activity.grade
            )
            activity.pages = [fresh if p.page_index == page_index else p for p in activity.pages]
            return self._commit(activity)

    def review_summary(self, activity_id: str) -> ReviewSummary:
        activity = self.get(activity_id)
        book = self._library.get(activity.book_id)
        framework = self.framework_for(activity)
        pages = []
        for page in activity.pages:
            tally = {Provenance.GENERATED: 0, Provenance.PARENT_EDITED: 0}
            for kind in GENERATED_COMPONENTS:
                tally[page.provenance[kind]] += 1
            warnings = ground_check(page, book.context_for(page.page_index))
            concept = framework.concept(page.concept_id)
            pages.append(
                PageSummary(
                    page_index=page.page_index,
                    concept_name=concept.name if concept else page.concept_id,
                    generated=tally[Provenance.GENERATED],
                    parent_edited=tally[Provenance.PARENT_EDITED],
                    grounding_warnings=len(warnings.warnings),
                )
            )
        return ReviewSummary(
            activity_id=activity_id,
            pages=tuple(pages),
            total_generated=sum(p.generated for p in pages),
            total_parent_edited=sum(p.parent_edited for p in pages),
            total_warnings=sum(p.grounding_warnings for p in pages),
        )

    def launch(self, activity_id: str) -> Activity:
        """Freeze the draft; launching an already-launched activity is a no-op."""
        with self._lock:
            activity = self.get(activity_id)
            if activity.status is ActivityStatus.LAUNCHED:
                return activity
            book = self._library.get(activity.book_id)
            framework = self.framework_for(activity)
            for page in activity.pages:
                result = validate_content(
                    page.to_dict(), framework, book.context_for(page.page_index), page.page_index
                )
                if isinstance(result, ValidationReport):
                    raise ContentInvalid(
                        f"page {page.page_index} invalid: {result.codes}", report=result
                    )
            activity.status = ActivityStatus.LAUNCHED
            return self._commit(activity)

    def clone_reviewed(self, activity_id: str) -> Activity:
        """Deep-copy any activity into a fresh editable draft.

        Provenance is preserved so the parent's earlier review effort
        stays visible on the clone.
        """
        with self._lock:
            source = self.get(activity_id)
            clone = Activity.from_dict(source.to_dict())
            clone.activity_id = uuid.uuid4().hex[:12]
            clone.status = ActivityStatus.DRAFT
            clone.derived_from = source.activity_id
            clone.created_at = time.time()
            clone.version = 0
            return self._commit(clone)
