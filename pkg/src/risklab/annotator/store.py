"""Append-only JSON-Lines audit log with snapshot support.

Every analyst mutation is appended (and flushed) before it is acknowledged;
replaying the log from empty state reproduces the session. Snapshots only
shortcut replay, they never replace the log.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

__all__ = ["LogEntry", "AuditLog"]


@dataclass(frozen=True)
class LogEntry:
    offset: int
    kind: str
    at: str
    payload: dict

    def to_record(self) -> dict:
        return {"offset": self.offset, "kind": self.kind, "at": self.at, "payload": self.payload}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class AuditLog:
    """Offset-addressed append-only log under one state directory."""

    def __init__(self, state_dir: str | Path):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.state_dir / "audit.jsonl"
        self.snapshot_path = self.state_dir / "snapshot.json"
        self._next_offset = len(self._read_all())

    def _read_all(self) -> list[LogEntry]:
        if not self.log_path.exists():
            return []
        entries = []
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    entries.append(
                        LogEntry(rec["offset"], rec["kind"], rec["at"], rec["payload"])
                    )
        return entries

    def __len__(self) -> int:
        return self._next_offset

    def append(self, kind: str, payload: dict, at: str | None = None) -> LogEntry:
        entry = LogEntry(offset=self._next_offset, kind=kind, at=at or _now(), payload=payload)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry.to_record(), ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._next_offset += 1
        return entry

    def entries(self, since: int = 0) -> list[LogEntry]:
        return [e for e in self._read_all() if e.offset >= since]

    def write_snapshot(self, state: dict) -> None:
        tmp = self.snapshot_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(state, ensure_ascii=False), encoding="utf-8")
        tmp.replace(self.snapshot_path)

    def read_snapshot(self) -> dict | None:
        if not self.snapshot_path.exists():
            return None
        return json.loads(self.snapshot_path.read_text("utf-8"))
