"""File-backed session store with optimistic concurrency.

One JSON document per session under a data directory. Writers supply the
version they read; a mismatch raises StaleVersionError so the caller can
reload and retry. Writes are atomic (temp file + rename), and a process
lock serializes them.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from .errors import StaleVersionError, UnknownSessionError

_SESSION_ID = re.compile(r"^[0-9a-f]{32}$")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionStore:
    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        if not _SESSION_ID.match(session_id):
            raise UnknownSessionError(session_id)
        return self.directory / f"{session_id}.json"

    def _write(self, session_id: str, doc: dict[str, Any]) -> None:
        path = self._path(session_id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True, indent=2), encoding="utf-8")
        os.replace(tmp, path)

    def create(self) -> dict[str, Any]:
        session_id = uuid.uuid4().hex
        now = _now()
        doc = {
            "v": 1,
            "id": session_id,
            "version": 0,
            "created_at": now,
            "updated_at": now,
            "step1": None,
            "step2": None,
            "step3": {"results": []},
        }
        with self._lock:
            self._write(session_id, doc)
        return doc

    def get(self, session_id: str) -> dict[str, Any]:
        path = self._path(session_id)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UnknownSessionError(session_id) from None

    def update(
        self,
        session_id: str,
        expected_version: int,
        mutate: Callable[[dict[str, Any]], None],
    ) -> dict[str, Any]:
        """Compare-and-set: apply mutate only if the stored version matches."""
        with self._lock:
            doc = self.get(session_id)
            if doc["version"] != expected_version:
                raise StaleVersionError(expected_version, doc["version"])
            mutate(doc)
            doc["version"] = expected_version + 1
            doc["updated_at"] = _now()
            self._write(session_id, doc)
            return doc

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))
