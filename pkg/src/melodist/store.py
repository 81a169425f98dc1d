"""Embedded persistent store for generation history.

A single sqlite database file in WAL mode with synchronous=FULL, so every
acknowledged write survives a process kill. Writes are serialized through
one lock; reads can run from any thread.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

_SCHEMA = """
CREATE TABLE IF NOT EXISTS songs (
    id TEXT PRIMARY KEY,
    created_at TEXT NOT NULL,
    input_kind TEXT NOT NULL,
    title TEXT NOT NULL,
    lyrics TEXT NOT NULL,
    key TEXT NOT NULL,
    time_signature TEXT NOT NULL,
    seed INTEGER NOT NULL,
    instrument INTEGER NOT NULL,
    lyrical INTEGER NOT NULL,
    musicxml BLOB NOT NULL,
    midi BLOB NOT NULL,
    report TEXT NOT NULL,
    rating INTEGER
);
CREATE INDEX IF NOT EXISTS songs_created_at ON songs (created_at DESC);
"""


@dataclass(frozen=True)
class SongRecord:
    id: str
    created_at: str
    input_kind: str
    title: str
    lyrics: str
    key: str
    time_signature: str
    seed: int
    instrument: int
    lyrical: bool
    musicxml: bytes
    midi: bytes
    report: dict
    rating: int | None = None

    def public_dict(self) -> dict:
        """JSON shape returned by the API (binary payloads as links)."""
        return {
            "id": self.id,
            "created_at": self.created_at,
            "input_kind": self.input_kind,
            "title": self.title,
            "lyrics": self.lyrics,
            "key": self.key,
            "time_signature": self.time_signature,
            "seed": self.seed,
            "instrument": self.instrument,
            "output": "song" if self.lyrical else "music",
            "report": self.report,
            "rating": self.rating,
            "links": {
                "musicxml": f"/songs/{self.id}/musicxml",
                "midi": f"/songs/{self.id}/midi",
            },
        }


def new_record_id() -> str:
    return uuid.uuid4().hex


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SongStore:
    def __init__(self, path: str | Path):
        self.path = str(path)
        self._lock = threading.Lock()
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA synchronous=FULL")
        with self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        self._conn.close()

    def add(self, record: SongRecord) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO songs VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    record.id, record.created_at, record.input_kind, record.title,
                    record.lyrics, record.key, record.time_signature, record.seed,
                    record.instrument, int(record.lyrical), record.musicxml,
                    record.midi, json.dumps(record.report), record.rating,
                ),
            )

    def get(self, record_id: str) -> SongRecord | None:
        row = self._conn.execute(
            "SELECT * FROM songs WHERE id = ?", (record_id,)
        ).fetchone()
        return self._from_row(row) if row else None

    def list(self, limit: int = 50, offset: int = 0) -> tuple[int, list[SongRecord]]:
        """Reverse-chronological page plus the total count."""
        total = self._conn.execute("SELECT COUNT(*) FROM songs").fetchone()[0]
        rows = self._conn.execute(
            "SELECT * FROM songs ORDER BY created_at DESC, id DESC LIMIT ? OFFSET ?",
            (limit, offset),
        ).fetchall()
        return total, [self._from_row(row) for row in rows]

    def set_rating(self, record_id: str, stars: int) -> SongRecord | None:
        if not 1 <= stars <= 5:
            raise ValueError("rating must be between 1 and 5 stars")
        with self._lock, self._conn:
            updated = self._conn.execute(
                "UPDATE songs SET rating = ? WHERE id = ?", (stars, record_id)
            ).rowcount
        return self.get(record_id) if updated else None

    @staticmethod
    def _from_row(row: tuple) -> SongRecord:
        return SongRecord(
            id=row[0], created_at=row[1], input_kind=row[2], title=row[3],
            lyrics=row[4], key=row[5], time_signature=row[6], seed=row[7],
            instrument=row[8], lyrical=bool(row[9]), musicxml=row[10],
            midi=row[11], report=json.loads(row[12]), rating=row[13],
        )
