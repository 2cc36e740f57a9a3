"""File-backed versioned document store plus append-only event logs.

Layout under the data directory: one subdirectory per collection, one
directory per record id, one file per version (``v000001.json``).
Session event logs live in ``sessions/<id>/events.jsonl`` and are
flushed line by line, so after an abrupt stop at most one trailing
partial line exists and readers skip it.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from paired.errors import ImmutableViolation, NotFound, StorageUnavailable

COLLECTIONS = ("books", "frameworks", "activities", "sessions", "expression_dbs")
_FROZEN_MARKER = "frozen"


class DocumentStore:
    def __init__(self, data_dir: str | Path) -> None:
        self.root = Path(data_dir)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            probe = self.root / ".writable"
            probe.write_text("ok")
            probe.unlink()
        except OSError as exc:
            raise StorageUnavailable(f"storage path {self.root} not writable: {exc}") from exc
        self._lock = threading.Lock()

    def _record_dir(self, collection: str, record_id: str) -> Path:
        if collection not in COLLECTIONS:
            raise NotFound(f"unknown collection {collection!r}")
        return self.root / collection / record_id

    # -- versioned records ---------------------------------------------------

    def put(self, collection: str, record_id: str, body: dict) -> int:
        """Write a new version; returns the version number."""
        with self._lock:
            record_dir = self._record_dir(collection, record_id)
            if (record_dir / _FROZEN_MARKER).exists():
                raise ImmutableViolation(f"{collection}/{record_id} is frozen")
            record_dir.mkdir(parents=True, exist_ok=True)
            version = self._latest_version(record_dir) + 1
            target = record_dir / f"v{version:06d}.json"
            tmp = record_dir / f".v{version:06d}.tmp"
            tmp.write_text(json.dumps(body, sort_keys=True))
            os.replace(tmp, target)
            return version

    def get(self, collection: str, record_id: str) -> tuple[dict, int]:
        """Latest version of a record, as (body, version)."""
        record_dir = self._record_dir(collection, record_id)
        version = self._latest_version(record_dir)
        if version == 0:
            raise NotFound(f"{collection}/{record_id} not found")
        body = json.loads((record_dir / f"v{version:06d}.json").read_text())
        return body, version

    def freeze(self, collection: str, record_id: str) -> None:
        """Forbid further versions for a record (launched activities)."""
        record_dir = self._record_dir(collection, record_id)
        if not record_dir.is_dir():
            raise NotFound(f"{collection}/{record_id} not found")
        (record_dir / _FROZEN_MARKER).write_text("")

    def list_ids(self, collection: str) -> list[str]:
        base = self.root / collection
        if not base.is_dir():
            return []
        return sorted(p.name for p in base.iterdir() if p.is_dir())

    @staticmethod
    def _latest_version(record_dir: Path) -> int:
        if not record_dir.is_dir():
            return 0
        versions = [
            int(p.stem[1:]) for p in record_dir.glob("v*.json") if p.stem[1:].isdigit()
        ]
        return max(versions, default=0)

    # -- event logs ----------------------------------------------------------

    def _events_path(self, session_id: str) -> Path:
        path = self._record_dir("sessions", session_id)
        path.mkdir(parents=True, exist_ok=True)
        return path / "events.jsonl"

    def append_event(self, session_id: str, event: dict) -> None:
        line = json.dumps(event, sort_keys=True)
        with self._lock:
            with open(self._events_path(session_id), "a") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def read_events(self, session_id: str) -> list[dict]:
        path = self._record_dir("sessions", session_id) / "events.jsonl"
        if not path.is_file():
            return []
        events = []
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError:
                break  # trailing partial line from an abrupt stop
        return events
