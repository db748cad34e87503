"""AIS/FMV correlation, vessel verification, tip-and-cue, dark-vessel flagging.

Association is greedy gated nearest-neighbor: pairs sorted by (distance,
mmsi, detection_id), taken one-to-one within the gate. Verification is a
per-track state machine driven by geofence entries, correlations, and cue
deadlines; Verified and the terminal cue states are absorbing for the
session.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .events import Event, EventKind, EventSource
from .fmv import DetectionRecord
from .geo import GeoPoint, haversine_distance
from .tracks import TrackSnapshot, TrackStore, Verification


@dataclass
class FusionConfig:
    gate_m: float = 200.0
    max_track_age: float = 600.0
    dark_frames: int = 3
    cue_window: float = 1200.0
    vessel_classes: frozenset[str] = frozenset({"boat", "ship", "vessel"})

    def __post_init__(self):
        if self.gate_m <= 0 or self.max_track_age <= 0:
            raise ValueError("gate_m and max_track_age must be positive")
        if self.dark_frames <= 0 or self.cue_window <= 0:
            raise ValueError("dark_frames and cue_window must be positive")
        if not self.vessel_classes:
            raise ValueError("vessel_classes must be non-empty")
        object.__setattr__(self, "vessel_classes", frozenset(self.vessel_classes))


@dataclass(frozen=True)
class CorrelationRecord:
    detection_id: str
    mmsi: int
    distance: float
    timestamp: float


class CueState(str, Enum):
    PENDING = "Pending"
    ACTIVE = "Active"
    COMPLETED = "Completed"
    EXPIRED = "Expired"


@dataclass
class CueTask:
    cue_id: str
    target: GeoPoint
    reason: str
    created_at: float
    deadline: float
    subject_mmsi: int
    state: CueState = CueState.PENDING

    def to_dict(self) -> dict:
        return {"cue_id": self.cue_id, "target": {"lat": self.target.lat, "lon": self.target.lon},
                "reason": self.reason, "created_at": self.created_at,
                "deadline": self.deadline, "subject_mmsi": self.subject_mmsi,
                "state": self.state.value}


@dataclass(frozen=True)
class FrameCorrelation:
    timestamp: float
    matches: tuple[CorrelationRecord, ...]
    unmatched_detections: tuple[str, ...]
    unmatched_tracks_in_view: tuple[int, ...]


def correlate_frame(detections: list[DetectionRecord], snapshot: TrackSnapshot,
                    config: FusionConfig) -> FrameCorrelation:
    """Greedy one-to-one association of vessel detections to fresh tracks."""
    dets = [d for d in detections
            if d.class_label in config.vessel_classes and d.geolocation is not None]
    candidates = [e for e in snapshot.entries if e.staleness <= config.max_track_age]

    pairs = []
    dist = {}
    for det in dets:
        for entry in candidates:
            d = haversine_distance(det.geolocation, entry.predicted)
            dist[(det.detection_id, entry.mmsi)] = d
            if d <= config.gate_m:
                pairs.append((d, entry.mmsi, det.detection_id))
    pairs.sort()

    matched_dets: set[str] = set()
    matched_mmsis: set[int] = set()
    matches = []
    for d, mmsi, det_id in pairs:
        if det_id in matched_dets or mmsi in matched_mmsis:
            continue
        matched_dets.add(det_id)
        matched_mmsis.add(mmsi)
        matches.append(CorrelationRecord(det_id, mmsi, d, snapshot.as_of))

    unmatched_dets = tuple(d.detection_id for d in dets
                           if d.detection_id not in matched_dets)
    # "In view" tracks: unmatched candidates within 2x gate of any detection.
    in_view = tuple(sorted(
        e.mmsi for e in candidates
        if e.mmsi not in matched_mmsis and dets
        and min(dist[(d.detection_id, e.mmsi)] for d in dets) <= 2 * config.gate_m))
    return FrameCorrelation(snapshot.as_of, tuple(matches), unmatched_dets, in_view)


@dataclass
class _DarkCluster:
    center: GeoPoint
    streak: int = 1
    emitted: bool = False


class FusionEngine:
    """Verification state machine plus dark-vessel episode tracking."""

    def __init__(self, store: TrackStore, config: FusionConfig | None = None):
        self.store = store
        self.config = config or FusionConfig()
        self.cues: dict[str, CueTask] = {}
        self.correlation_history: list[CorrelationRecord] = []
        self._cue_seq = 0
        self._clusters: list[_DarkCluster] = []

    # -- cue creation on geofence entry ---------------------------------------

    def on_geofence_enter(self, event: Event) -> list[CueTask]:
        """Create a cue for an Unverified track entering a fence."""
        created = []
        for subject in event.subjects:
            mmsi = int(subject)
            if mmsi not in self.store:
                continue
            track = self.store.get(mmsi)
            if track.verification_state is not Verification.UNVERIFIED:
                continue
            self._cue_seq += 1
            cue = CueTask(cue_id=f"cue-{self._cue_seq}",
                          target=event.location,
                          reason=f"geofence entry {event.details.get('fence_id', '')}".strip(),
                          created_at=event.timestamp,
                          deadline=event.timestamp + self.config.cue_window,
                          subject_mmsi=mmsi)
            self.cues[cue.cue_id] = cue
            track.verification_state = Verification.CUE_PENDING
            created.append(cue)
        return created

    def create_manual_cue(self, mmsi: int, target: GeoPoint, t: float,
                          reason: str = "manual") -> CueTask:
        self._cue_seq += 1
        cue = CueTask(cue_id=f"cue-{self._cue_seq}", target=target, reason=reason,
                      created_at=t, deadline=t + self.config.cue_window,
                      subject_mmsi=mmsi)
        self.cues[cue.cue_id] = cue
        if mmsi in self.store:
            track = self.store.get(mmsi)
            if track.verification_state is Verification.UNVERIFIED:
                track.verification_state = Verification.CUE_PENDING
        return cue

    # -- per correlated frame ---------------------------------------------------

    def on_frame(self, correlation: FrameCorrelation,
                 detections_by_id: dict[str, DetectionRecord]) -> list[Event]:
        events = []
        self.correlation_history.extend(correlation.matches)
        t = correlation.timestamp
        for match in correlation.matches:
            track = self.store.get(match.mmsi)
            det = detections_by_id.get(match.detection_id)
            if det is not None and det.class_label not in self.config.vessel_classes:
                events.append(Event(EventKind.VESSEL_MISMATCH, t,
                                    [str(match.mmsi), match.detection_id],
                                    EventSource.FUSION, det.geolocation,
                                    {"reason": "class conflict",
                                     "class_label": det.class_label}))
                continue
            if track.verification_state is Verification.CUE_PENDING:
                cue = self._pending_cue_for(match.mmsi)
                if cue is not None and t <= cue.deadline:
                    cue.state = CueState.COMPLETED
                    track.verification_state = Verification.VERIFIED
                    loc = det.geolocation if det else None
                    events.append(Event(EventKind.VESSEL_VERIFIED, t,
                                        [str(match.mmsi), match.detection_id],
                                        EventSource.FUSION, loc,
                                        {"cue_id": cue.cue_id,
                                         "distance_m": match.distance}))
        return events

    def _pending_cue_for(self, mmsi: int) -> Optional[CueTask]:
        live = [c for c in self.cues.values()
                if c.subject_mmsi == mmsi and c.state in (CueState.PENDING, CueState.ACTIVE)]
        return min(live, key=lambda c: c.cue_id) if live else None

    # -- per epoch: cue expiry ----------------------------------------------------

    def on_epoch(self, t: float, snapshot: TrackSnapshot) -> list[Event]:
        events = []
        for cue in sorted(self.cues.values(), key=lambda c: c.cue_id):
            if cue.state in (CueState.COMPLETED, CueState.EXPIRED):
                continue
            if t > cue.deadline:
                cue.state = CueState.EXPIRED
                if cue.subject_mmsi in self.store:
                    track = self.store.get(cue.subject_mmsi)
                    if track.verification_state is Verification.CUE_PENDING:
                        track.verification_state = Verification.FLAGGED
                entry = snapshot.get(cue.subject_mmsi)
                events.append(Event(EventKind.VESSEL_MISMATCH, t,
                                    [str(cue.subject_mmsi)], EventSource.FUSION,
                                    entry.predicted if entry else cue.target,
                                    {"reason": "cue window elapsed",
                                     "cue_id": cue.cue_id}))
        return events

    # -- dark vessel scan ----------------------------------------------------------

    def dark_vessel_scan(self, correlation: FrameCorrelation,
                         detections_by_id: dict[str, DetectionRecord],
                         snapshot: TrackSnapshot) -> list[Event]:
        """Track clusters of unmatched vessel detections across consecutive frames."""
        radius = 2 * self.config.gate_m
        events = []
        survivors: list[_DarkCluster] = []
        unmatched = [detections_by_id[i] for i in correlation.unmatched_detections
                     if detections_by_id[i].geolocation is not None]
        unmatched.sort(key=lambda d: d.detection_id)
        used: set[int] = set()
        for cluster in self._clusters:
            hit = None
            for det in unmatched:
                if id(det) in used:
                    continue
                if haversine_distance(cluster.center, det.geolocation) <= radius:
                    hit = det
                    break
            if hit is None:
                continue  # streak broken; cluster episode ends
            used.add(id(hit))
            cluster.center = hit.geolocation
            cluster.streak += 1
            survivors.append(cluster)
            if cluster.streak >= self.config.dark_frames and not cluster.emitted:
                if self._track_nearby(hit.geolocation, snapshot, radius):
                    continue
                cluster.emitted = True
                events.append(Event(EventKind.DARK_VESSEL, correlation.timestamp,
                                    [hit.detection_id], EventSource.FUSION,
                                    hit.geolocation,
                                    {"frames": cluster.streak}))
        for det in unmatched:
            if id(det) not in used:
                survivors.append(_DarkCluster(center=det.geolocation))
        self._clusters = survivors
        return events

    def _track_nearby(self, p: GeoPoint, snapshot: TrackSnapshot, radius: float) -> bool:
        return any(haversine_distance(p, e.predicted) <= radius
                   for e in snapshot.entries)
