"""Book bundles: page text, image refs, and structured visual context.

A bundle is a directory with ``book.json`` (title + pages),
``visual_context.json`` (per-page scene objects), and an ``images/``
folder. Bundles are validated as a whole at ingest time and are
immutable afterwards.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from paired.errors import (
    BrokenImageRef,
    MissingManifest,
    UnknownBook,
    UnknownPage,
    VisualContextMismatch,
)

COUNTABLE_CATEGORIES = {"character", "animal", "object"}
CATEGORIES = {"character", "animal", "environment", "object"}


@dataclass(frozen=True)
class BookPage:
    index: int  # 1-based
    text: str
    image_ref: str


@dataclass(frozen=True)
class SceneObject:
    name: str
    category: str
    properties: dict[str, object] = field(default_factory=dict)
    relations: tuple[tuple[str, str], ...] = ()

    @property
    def count(self) -> int | None:
        value = self.properties.get("count")
        return int(value) if value is not None else None


@dataclass(frozen=True)
class VisualContext:
    page_index: int
    objects: tuple[SceneObject, ...] = ()


@dataclass(frozen=True)
class BookBundle:
    book_id: str
    title: str
    pages: tuple[BookPage, ...]
    visual: tuple[VisualContext, ...]

    @property
    def page_count(self) -> int:
        return len(self.pages)

    def page(self, index: int) -> BookPage:
        if not 1 <= index <= len(self.pages):
            raise UnknownPage(f"book {self.book_id} has no page {index}")
        return self.pages[index - 1]

    def context_for(self, index: int) -> VisualContext:
        """Visual context for a page; pages without an entry get an empty one."""
        self.page(index)
        for ctx in self.visual:
            if ctx.page_index == index:
                return ctx
        return VisualContext(page_index=index, objects=())

    def to_dict(self) -> dict:
        return {
            "book_id": self.book_id,
            "title": self.title,
            "pages": [{"index": p.index, "text": p.text, "image_ref": p.image_ref} for p in self.pages],
            "visual": [
                {
                    "page_index": v.page_index,
                    "objects": [
                        {
                            "name": o.name,
                            "category": o.category,
                            "properties": o.properties,
                            "relations": [list(r) for r in o.relations],
                        }
                        for o in v.objects
                    ],
                }
                for v in self.visual
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BookBundle":
        return cls(
            book_id=doc["book_id"],
            title=doc.get("title", ""),
            pages=tuple(
                BookPage(index=int(p["index"]), text=p.get("text", ""), image_ref=p["image_ref"])
                for p in doc["pages"]
            ),
            visual=tuple(
                VisualContext(
                    page_index=int(v["page_index"]),
                    objects=tuple(
                        SceneObject(
                            name=o["name"],
                            category=o.get("category", "object"),
                            properties=dict(o.get("properties", {})),
                            relations=tuple((r[0], r[1]) for r in o.get("relations", [])),
                        )
                        for o in v.get("objects", [])
                    ),
                )
                for v in doc.get("visual", [])
            ),
        )


def _parse_scene_object(entry: dict, page_names: set[str]) -> SceneObject:
    name = str(entry["name"])
    category = str(entry.get("category", "object"))
    if category not in CATEGORIES:
        raise VisualContextMismatch(f"object {name!r} has unknown category {category!r}")
    properties = dict(entry.get("properties", {}))
    if "count" in properties:
        count = int(properties["count"])
        if count < 1:
            raise VisualContextMismatch(f"object {name!r} has count {count} < 1")
        properties["count"] = count
    elif category in COUNTABLE_CATEGORIES:
        # Countable objects must state how many are visible.
        raise VisualContextMismatch(f"countable object {name!r} is missing a count property")
    relations = []
    for rel in entry.get("relations", []):
        rel_name, target = str(rel[0]), str(rel[1])
        if target not in page_names:
            raise VisualContextMismatch(f"relation {rel_name!r} of {name!r} targets unknown object {target!r}")
        relations.append((rel_name, target))
    return SceneObject(name=name, category=category, properties=properties, relations=tuple(relations))


def load_bundle(path: str | Path) -> BookBundle:
    """Parse and validate one bundle directory without persisting it."""
    root = Path(path)
    manifest = root / "book.json"
    if not manifest.is_file():
        raise MissingManifest(f"no book.json in {root}")
    try:
        book_doc = json.loads(manifest.read_text())
    except json.JSONDecodeError as exc:
        raise MissingManifest(f"book.json is not valid JSON: {exc}") from exc

    pages = []
    for i, entry in enumerate(book_doc.get("pages", []), start=1):
        image_ref = str(entry["image_ref"])
        if not (root / image_ref).is_file():
            raise BrokenImageRef(f"page {i} image {image_ref!r} missing from bundle")
        pages.append(BookPage(index=i, text=str(entry.get("text", "")), image_ref=image_ref))
    if not pages:
        raise VisualContextMismatch("bundle has no pages")

    visual: list[VisualContext] = []
    vc_path = root / "visual_context.json"
    if vc_path.is_file():
        vc_doc = json.loads(vc_path.read_text())
        seen_pages: set[int] = set()
        for entry in vc_doc.get("pages", []):
            page_index = int(entry["page_index"])
            if not 1 <= page_index <= len(pages):
                raise VisualContextMismatch(f"visual context names page {page_index} of a {len(pages)}-page book")
            if page_index in seen_pages:
                raise VisualContextMismatch(f"duplicate visual context entry for page {page_index}")
            seen_pages.add(page_index)
            names = [str(o["name"]) for o in entry.get("objects", [])]
            if len(set(names)) != len(names):
                raise VisualContextMismatch(f"duplicate object name on page {page_index}")
            objects = tuple(_parse_scene_object(o, set(names)) for o in entry.get("objects", []))
            visual.append(VisualContext(page_index=page_index, objects=objects))

    return BookBundle(
        book_id=str(book_doc["book_id"]),
        title=str(book_doc.get("title", "")),
        pages=tuple(pages),
        visual=tuple(sorted(visual, key=lambda v: v.page_index)),
    )


class Library:
    """In-process registry of validated book bundles.

    Re-ingesting the same book_id replaces the previous bundle, but only
    after the new one validates, so readers never observe a broken book.
    """

    def __init__(self) -> None:
        self._books: dict[str, BookBundle] = {}
        self._lock = threading.Lock()

    def ingest_bundle(self, path: str | Path) -> BookBundle:
        bundle = load_bundle(path)
        with self._lock:
            self._books[bundle.book_id] = bundle
        return bundle

    def add(self, bundle: BookBundle) -> None:
        with self._lock:
            self._books[bundle.book_id] = bundle

    def get(self, book_id: str) -> BookBundle:
        try:
            return self._books[book_id]
        except KeyError:
            raise UnknownBook(f"no book {book_id!r}") from None

    def list_books(self) -> list[BookBundle]:
        return sorted(self._books.values(), key=lambda b: b.book_id)

    def get_page_context(self, book_id: str, page_index: int) -> tuple[BookPage, VisualContext]:
        book = self.get(book_id)
        return book.page(page_index), book.context_for(page_index)
