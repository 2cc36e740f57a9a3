import json
from pathlib import Path

import pytest

from paired.activity import ActivityManager
from paired.framework import Subject, builtin_frameworks
from paired.library import Library
from paired.providers import StubProvider

# Synthetic books: (text, [(object name, category, count or None, extra props)])
FOREST_PAGES = [
    ("Three foxes trot through the tall grass.", [("foxes", "animal", 3, {"color": "red"})]),
    ("A single owl watches from the oak tree.", [("owl", "animal", 1, {"location": "oak tree"}), ("oak tree", "environment", None, {})]),
    ("Five acorns lie beside the stream.", [("acorns", "object", 5, {"location": "stream bank"})]),
    ("Two rabbits hide near four mushrooms.", [("rabbits", "animal", 2, {}), ("mushrooms", "object", 4, {"color": "spotted"})]),
    ("The moon rises over the quiet forest.", [("moon", "environment", None, {"location": "sky"})]),
]


def write_bundle(root: Path, book_id: str, title: str, pages) -> Path:
    """Materialize a bundle directory from (text, objects) page specs."""
    bundle = root / book_id
    (bundle / "images").mkdir(parents=True)
    book = {"book_id": book_id, "title": title, "pages": []}
    visual = {"pages": []}
    for i, (text, objects) in enumerate(pages, start=1):
        image_ref = f"images/page{i}.png"
        (bundle / image_ref).write_bytes(b"\x89PNG stub")
        book["pages"].append({"text": text, "image_ref": image_ref})
        if objects:
            entry = {"page_index": i, "objects": []}
            for name, category, count, props in objects:
                properties = dict(props)
                if count is not None:
                    properties["count"] = count
                entry["objects"].append({"name": name, "category": category, "properties": properties})
            visual["pages"].append(entry)
    (bundle / "book.json").write_text(json.dumps(book, indent=2))
    (bundle / "visual_context.json").write_text(json.dumps(visual, indent=2))
    return bundle


@pytest.fixture()
def forest_bundle_dir(tmp_path):
    return write_bundle(tmp_path, "forest-walk", "A Forest Walk", FOREST_PAGES)


@pytest.fixture()
def library(forest_bundle_dir):
    lib = Library()
    lib.ingest_bundle(forest_bundle_dir)
    return lib


@pytest.fixture()
def forest_book(library):
    return library.get("forest-walk")


@pytest.fixture(scope="session")
def frameworks():
    return builtin_frameworks()


@pytest.fixture()
def math_framework(frameworks):
    return frameworks[Subject.MATH]


@pytest.fixture()
def literacy_framework(frameworks):
    return frameworks[Subject.LITERACY]


@pytest.fixture()
def stub_provider():
    return StubProvider()


@pytest.fixture()
def manager(library, frameworks):
    return ActivityManager(library, frameworks)


@pytest.fixture()
def draft_activity(manager, stub_provider):
    return manager.create_activity("forest-walk", Subject.MATH, "preschool", stub_provider)


@pytest.fixture()
def launched_activity(manager, draft_activity):
    return manager.launch(draft_activity.activity_id)


def one_page_bundle(tmp_path, book_id="single-page"):
    return write_bundle(
        tmp_path,
        book_id,
        "One Page",
        [("Two ducks paddle across the pond.", [("ducks", "animal", 2, {"color": "yellow"})])],
    )


@pytest.fixture()
def one_page_setup(tmp_path, frameworks):
    """(manager, launched 1-page activity, library) for session walks."""
    lib = Library()
    lib.ingest_bundle(one_page_bundle(tmp_path))
    mgr = ActivityManager(lib, frameworks)
    activity = mgr.create_activity("single-page", Subject.MATH, "preschool", StubProvider())
    return mgr, mgr.launch(activity.activity_id), lib


@pytest.fixture()
def three_page_setup(tmp_path, frameworks):
    lib = Library()
    lib.ingest_bundle(write_bundle(tmp_path, "three-pager", "Three Pages", FOREST_PAGES[:3]))
    mgr = ActivityManager(lib, frameworks)
    activity = mgr.create_activity("three-pager", Subject.MATH, "preschool", StubProvider())
    return mgr, mgr.launch(activity.activity_id), lib
