"""Append-only event log with gapless sequence numbers and resumable streaming.

Persistence is a newline-delimited JSON file; on open the tail is scanned so
restarts resume from the correct sequence with no duplicates. Stream readers
follow the log by index under a condition variable, so every subscriber sees
every record exactly once, in order, resumable from any seq.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .events import Event, EventKind


class StorageFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class EventLogRecord:
    seq: int
    wrote_at: float
    event: Event

    def to_dict(self) -> dict:
        return {"seq": self.seq, "wrote_at": self.wrote_at, "event": self.event.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "EventLogRecord":
        return cls(seq=d["seq"], wrote_at=d["wrote_at"], event=Event.from_dict(d["event"]))


class EventLog:
    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._records: list[EventLogRecord] = []
        self._cond = threading.Condition()
        self._fh = None
        if path is not None:
            self._recover(path)
            try:
                self._fh = open(path, "a", encoding="utf-8")
            except OSError as e:
                raise StorageFailure(str(e)) from e

    def _recover(self, path: str):
        if not os.path.exists(path):
            return
        good_end = 0
        with open(path, "rb") as fh:
            for raw in fh:
                line = raw.decode("utf-8", errors="replace").strip()
                if line:
                    try:
                        rec = EventLogRecord.from_dict(json.loads(line))
                    except (ValueError, KeyError):
                        continue  # torn write from a crash; drop it
                    if rec.seq == len(self._records) + 1:
                        self._records.append(rec)
                    else:
                        continue
                good_end = fh.tell()
        # chop any torn tail so the next append starts on a clean line
        if good_end < os.path.getsize(path):
            with open(path, "r+b") as fh:
                fh.truncate(good_end)

    @property
    def last_seq(self) -> int:
        return len(self._records)

    def append(self, event: Event, wrote_at: Optional[float] = None) -> EventLogRecord:
        with self._cond:
            seq = len(self._records) + 1
            event.id = seq
            rec = EventLogRecord(seq=seq, wrote_at=wrote_at if wrote_at is not None else time.time(),
                                 event=event)
            if self._fh is not None:
                try:
                    self._fh.write(json.dumps(rec.to_dict()) + "\n")
                    self._fh.flush()
                except OSError as e:
                    raise StorageFailure(str(e)) from e
            self._records.append(rec)
            self._cond.notify_all()
            return rec

    def query(self, kind: Optional[EventKind] = None, since_seq: int = 0,
              since_t: Optional[float] = None, limit: Optional[int] = None
              ) -> list[EventLogRecord]:
        with self._cond:
            out = self._records[since_seq:]
        if kind is not None:
            out = [r for r in out if r.event.kind is kind]
        if since_t is not None:
            out = [r for r in out if r.event.timestamp >= since_t]
        if limit is not None:
            out = out[:limit]
        return list(out)

    def wait_for(self, since_seq: int, timeout: float = 0.5) -> list[EventLogRecord]:
        """Records after since_seq, blocking up to timeout if none yet."""
        with self._cond:
            if since_seq >= len(self._records):
                self._cond.wait(timeout=timeout)
            return self._records[since_seq:]

    def stream(self, since_seq: int = 0, poll_timeout: float = 0.5,
               stop: Optional[threading.Event] = None) -> Iterator[EventLogRecord]:
        """Yield every record after since_seq, blocking for new ones until stopped."""
        cursor = since_seq
        while stop is None or not stop.is_set():
            with self._cond:
                if cursor >= len(self._records):
                    self._cond.wait(timeout=poll_timeout)
                batch = self._records[cursor:]
            for rec in batch:
                yield rec
                cursor = rec.seq
            if stop is None and not batch:
                # Callers without a stop event use a generator close to end.
                continue

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None
