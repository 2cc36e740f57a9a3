"""Write a small demo book bundle to disk.

The bundle is a directory with book.json, visual_context.json, and one
placeholder image per page, ready for `paired ingest`:

    python3 scripts/make_demo_book.py demo/pond-day
"""

import argparse
import json
from pathlib import Path

PAGES = [
    ("Four frogs sun themselves on a log.", [("frogs", "animal", 4, {"color": "green"})]),
    ("One heron stands still in the reeds.", [("heron", "animal", 1, {"location": "reeds"})]),
    ("Three lily pads float near the shore.", [("lily pads", "object", 3, {})]),
    (
        "Two dragonflies chase five minnows.",
        [("dragonflies", "animal", 2, {}), ("minnows", "animal", 5, {})],
    ),
    ("The sun sets over the quiet pond.", [("sun", "environment", None, {"location": "sky"})]),
]


def write_demo_bundle(target: Path, book_id: str = "pond-day", title: str = "A Day at the Pond") -> Path:
    images = target / "images"
    images.mkdir(parents=True, exist_ok=True)
    book = {"book_id": book_id, "title": title, "pages": []}
    visual = {"pages": []}
    for index, (text, objects) in enumerate(PAGES, start=1):
        image_ref = f"images/page{index}.png"
        (target / image_ref).write_bytes(b"\x89PNG placeholder")
        book["pages"].append({"text": text, "image_ref": image_ref})
        entries = []
        for name, category, count, props in objects:
            properties = dict(props)
            if count is not None:
                properties["count"] = count
            entries.append({"name": name, "category": category, "properties": properties})
        visual["pages"].append({"page_index": index, "objects": entries})
    (target / "book.json").write_text(json.dumps(book, indent=2))
    (target / "visual_context.json").write_text(json.dumps(visual, indent=2))
    return target


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("target", nargs="?", default="demo/pond-day", type=Path)
    args = parser.parse_args()
    bundle = write_demo_bundle(args.target)
    print(f"wrote demo bundle to {bundle}")


if __name__ == "__main__":
    main()
