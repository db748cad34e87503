"""Per-MMSI report histories, dead-reckoned predictions, consistent snapshots.

Single-writer / multi-reader: one ingestion sequence mutates the store, any
number of readers take snapshots. Snapshots are immutable values.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .ais import AisPositionReport, AisStaticReport
from .geo import GeoPoint, dead_reckon


class TrackError(KeyError):
    pass


class UnknownMmsi(TrackError):
    pass


class NoReportBefore(TrackError):
    pass


class Verification(str, Enum):
    UNVERIFIED = "Unverified"
    CUE_PENDING = "CuePending"
    VERIFIED = "Verified"
    FLAGGED = "Flagged"


class Presence(str, Enum):
    ACTIVE = "Active"
    DISAPPEARED = "Disappeared"


@dataclass
class Track:
    mmsi: int
    reports: list[AisPositionReport] = field(default_factory=list)
    static_info: Optional[AisStaticReport] = None
    verification_state: Verification = Verification.UNVERIFIED
    presence: Presence = Presence.ACTIVE

    @property
    def last_seen(self) -> float:
        return self.reports[-1].timestamp

    @property
    def last_report(self) -> AisPositionReport:
        return self.reports[-1]


@dataclass(frozen=True)
class Prediction:
    position: GeoPoint
    staleness: float
    held: bool  # kinematics unavailable: last position held in place


@dataclass(frozen=True)
class SnapshotEntry:
    mmsi: int
    last_report: AisPositionReport
    predicted: GeoPoint
    staleness: float
    held: bool
    verification_state: Verification
    presence: Presence
    vessel_name: Optional[str]


@dataclass(frozen=True)
class TrackSnapshot:
    as_of: float
    entries: tuple[SnapshotEntry, ...]

    def get(self, mmsi: int) -> Optional[SnapshotEntry]:
        for e in self.entries:
            if e.mmsi == mmsi:
                return e
        return None


@dataclass(frozen=True)
class IngestDelta:
    created: bool
    is_new_latest: bool


def _predict_from(report: AisPositionReport, t: float) -> Prediction:
    staleness = t - report.timestamp
    base = GeoPoint(report.lat, report.lon)
    if report.sog is None or report.cog is None:
        return Prediction(base, staleness, held=True)
    return Prediction(dead_reckon(base, report.cog, report.sog, staleness), staleness, held=False)


class TrackStore:
    def __init__(self, eviction_age_s: float = 24 * 3600.0):
        self.eviction_age_s = eviction_age_s
        self._tracks: dict[int, Track] = {}
        self._lock = threading.Lock()
        self.evicted = 0

    def ingest_report(self, report: AisPositionReport) -> IngestDelta:
        """Insert in time order; duplicates (same mmsi+timestamp) are dropped."""
        if not report.has_position:
            return IngestDelta(created=False, is_new_latest=False)
        with self._lock:
            track = self._tracks.get(report.mmsi)
            if track is None or not track.reports:
                if track is None:
                    track = Track(report.mmsi)
                    self._tracks[report.mmsi] = track
                track.reports.append(report)
                return IngestDelta(created=True, is_new_latest=True)
            times = [r.timestamp for r in track.reports]
            i = bisect.bisect_left(times, report.timestamp)
            if i < len(times) and times[i] == report.timestamp:
                return IngestDelta(created=False, is_new_latest=False)
            track.reports.insert(i, report)
            return IngestDelta(created=False, is_new_latest=(i == len(times)))

    def set_static(self, info: AisStaticReport):
        with self._lock:
            track = self._tracks.get(info.mmsi)
            if track is None:
                track = Track(info.mmsi)
                self._tracks[info.mmsi] = track
            track.static_info = info

    def get(self, mmsi: int) -> Track:
        track = self._tracks.get(mmsi)
        if track is None:
            raise UnknownMmsi(mmsi)
        return track

    def __contains__(self, mmsi: int) -> bool:
        return mmsi in self._tracks

    def mmsis(self) -> list[int]:
        return sorted(self._tracks)

    def predict_position(self, mmsi: int, t: float) -> Prediction:
        with self._lock:
            track = self.get(mmsi)
            report = self._newest_at_or_before(track, t)
            return _predict_from(report, t)

    @staticmethod
    def _newest_at_or_before(track: Track, t: float) -> AisPositionReport:
        candidates = [r for r in track.reports if r.timestamp <= t]
        if not candidates:
            raise NoReportBefore(f"mmsi {track.mmsi} has no report at or before {t}")
        return candidates[-1]

    def snapshot(self, t: float) -> TrackSnapshot:
        """Consistent view of every track with >=1 report at or before t."""
        with self._lock:
            entries = []
            for mmsi in sorted(self._tracks):
                track = self._tracks[mmsi]
                if not track.reports or track.reports[0].timestamp > t:
                    continue
                report = self._newest_at_or_before(track, t)
                pred = _predict_from(report, t)
                name = track.static_info.vessel_name if track.static_info else None
                entries.append(SnapshotEntry(
                    mmsi=mmsi, last_report=report, predicted=pred.position,
                    staleness=pred.staleness, held=pred.held,
                    verification_state=track.verification_state,
                    presence=track.presence, vessel_name=name))
            return TrackSnapshot(as_of=t, entries=tuple(entries))

    def evict_stale(self, now: float):
        """Archive tracks silent longer than the eviction age out of the live store."""
        with self._lock:
            stale = [m for m, tr in self._tracks.items()
                     if tr.reports and now - tr.last_seen > self.eviction_age_s]
            for m in stale:
                del self._tracks[m]
                self.evicted += 1
