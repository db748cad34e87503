"""Event model plus the AIS rule engine.

The engine evaluates appearance/off-course rules on each new-latest report
and disappearance/co-location/geofence rules on a periodic epoch tick.
Event ids are assigned by the event log at append time; the engine only
guarantees emission order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .ais import AisPositionReport
from .geo import GeoPoint, GeofenceBox, dead_reckon, haversine_distance, point_in_box
from .tracks import Presence, Track, TrackSnapshot, TrackStore


class EventKind(str, Enum):
    APPEARANCE = "Appearance"
    DISAPPEARANCE = "Disappearance"
    OFF_COURSE = "OffCourse"
    COLOCATION = "Colocation"
    GEOFENCE_ENTER = "GeofenceEnter"
    GEOFENCE_EXIT = "GeofenceExit"
    GEOFENCE_PROJECTED_ENTER = "GeofenceProjectedEnter"
    DARK_VESSEL = "DarkVessel"
    VESSEL_VERIFIED = "VesselVerified"
    VESSEL_MISMATCH = "VesselMismatch"
    MEETING = "Meeting"
    GATHERING = "Gathering"
    COUNT_ANOMALY = "CountAnomaly"


class EventSource(str, Enum):
    AIS = "AIS"
    FMV = "FMV"
    FUSION = "FUSION"
    ANALYTICS = "ANALYTICS"


@dataclass
class Event:
    kind: EventKind
    timestamp: float
    subjects: list[str]
    source: EventSource
    location: Optional[GeoPoint] = None
    details: dict = field(default_factory=dict)
    id: Optional[int] = None  # assigned by the event log

    def __post_init__(self):
        if self.kind is not EventKind.COUNT_ANOMALY and not self.subjects:
            raise ValueError(f"{self.kind.value} event requires subjects")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "timestamp": self.timestamp,
            "subjects": list(self.subjects),
            "source": self.source.value,
            "location": ({"lat": self.location.lat, "lon": self.location.lon}
                         if self.location else None),
            "details": dict(self.details),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Event":
        loc = d.get("location")
        return cls(kind=EventKind(d["kind"]), timestamp=d["timestamp"],
                   subjects=list(d["subjects"]), source=EventSource(d["source"]),
                   location=GeoPoint(loc["lat"], loc["lon"]) if loc else None,
                   details=dict(d.get("details", {})), id=d.get("id"))


@dataclass
class EventConfig:
    t_gone: float = 900.0          # silence before Disappearance, seconds
    theta_off: float = 1000.0      # off-course positional deviation, meters
    horizon_off: float = 600.0     # off-course lookback / suppression window, seconds
    d_coloc: float = 100.0         # co-location distance, meters
    debounce_coloc: int = 2        # consecutive epochs within d_coloc
    epoch: float = 60.0            # evaluation cadence, seconds
    horizon_proj: float = 1800.0   # projected-entry lookahead, seconds
    proj_step: float = 60.0        # projected-entry sampling step, seconds

    def __post_init__(self):
        for name in ("t_gone", "theta_off", "horizon_off", "d_coloc",
                     "debounce_coloc", "epoch", "horizon_proj", "proj_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"EventConfig.{name} must be positive")


@dataclass
class _PairState:
    streak: int = 0
    in_episode: bool = False


@dataclass
class _FenceState:
    inside: bool
    projected: bool = False


class AisEventEngine:
    """Stateful evaluator for the AIS event rules over one track store."""

    def __init__(self, store: TrackStore, config: EventConfig | None = None):
        self.store = store
        self.config = config or EventConfig()
        self._last_offcourse: dict[int, float] = {}
        self._pairs: dict[tuple[int, int], _PairState] = {}
        self._fence_states: dict[tuple[int, str], _FenceState] = {}
        self.unknown_fence_skips = 0

    # -- per new-latest report ------------------------------------------------

    def on_new_latest(self, report: AisPositionReport, track: Track,
                      created: bool) -> list[Event]:
        events: list[Event] = []
        cfg = self.config
        here = GeoPoint(report.lat, report.lon)
        if created or track.presence is Presence.DISAPPEARED:
            track.presence = Presence.ACTIVE
            events.append(Event(EventKind.APPEARANCE, report.timestamp,
                                [str(report.mmsi)], EventSource.AIS, here,
                                {"first_report": created}))
        if not created:
            events.extend(self._check_off_course(report, track, here))
        return events

    def _check_off_course(self, report: AisPositionReport, track: Track,
                          here: GeoPoint) -> list[Event]:
        cfg = self.config
        last = self._last_offcourse.get(report.mmsi)
        if last is not None and report.timestamp - last < cfg.horizon_off:
            return []
        # Existential over priors in the lookback window: any prior fix whose
        # dead-reckoned prediction misses by more than theta_off trips the rule.
        for prior in reversed(track.reports[:-1]):
            age = report.timestamp - prior.timestamp
            if age < cfg.epoch:
                continue
            if age > cfg.horizon_off:
                break
            if prior.sog is None or prior.cog is None or not prior.has_position:
                continue
            predicted = dead_reckon(GeoPoint(prior.lat, prior.lon),
                                    prior.cog, prior.sog, age)
            deviation = haversine_distance(here, predicted)
            if deviation > cfg.theta_off:
                self._last_offcourse[report.mmsi] = report.timestamp
                self._clear_projections(report.mmsi)
                return [Event(EventKind.OFF_COURSE, report.timestamp,
                              [str(report.mmsi)], EventSource.AIS, here,
                              {"deviation_m": deviation,
                               "prior_timestamp": prior.timestamp})]
        return []

    def _clear_projections(self, mmsi: int):
        for key, state in self._fence_states.items():
            if key[0] == mmsi:
                state.projected = False

    # -- per epoch tick --------------------------------------------------------

    def on_epoch(self, t: float, snapshot: TrackSnapshot) -> list[Event]:
        return self._check_disappearance(t, snapshot) + self._check_colocation(t, snapshot)

    def _check_disappearance(self, t: float, snapshot: TrackSnapshot) -> list[Event]:
        cfg = self.config
        events = []
        for entry in snapshot.entries:
            if entry.presence is not Presence.ACTIVE:
                continue
            if t - entry.last_report.timestamp > cfg.t_gone:
                self.store.get(entry.mmsi).presence = Presence.DISAPPEARED
                events.append(Event(EventKind.DISAPPEARANCE, t,
                                    [str(entry.mmsi)], EventSource.AIS,
                                    entry.predicted,
                                    {"silent_for_s": t - entry.last_report.timestamp}))
        return events

    def _check_colocation(self, t: float, snapshot: TrackSnapshot) -> list[Event]:
        cfg = self.config
        events = []
        active = [e for e in snapshot.entries if e.presence is Presence.ACTIVE]
        seen_pairs = set()
        for i, a in enumerate(active):
            for b in active[i + 1:]:
                key = (min(a.mmsi, b.mmsi), max(a.mmsi, b.mmsi))
                seen_pairs.add(key)
                state = self._pairs.setdefault(key, _PairState())
                d = haversine_distance(a.predicted, b.predicted)
                if d <= cfg.d_coloc:
                    state.streak += 1
                else:
                    state.streak = 0
                    if d > 2 * cfg.d_coloc:
                        state.in_episode = False
                if state.streak >= cfg.debounce_coloc and not state.in_episode:
                    state.in_episode = True
                    events.append(Event(EventKind.COLOCATION, t,
                                        [str(key[0]), str(key[1])],
                                        EventSource.AIS, a.predicted,
                                        {"distance_m": d}))
        # Pairs that dropped out of the snapshot lose their streak.
        for key in list(self._pairs):
            if key not in seen_pairs:
                del self._pairs[key]
        return events

    def evaluate_geofences(self, t: float, snapshot: TrackSnapshot,
                           fences: dict[str, GeofenceBox]) -> list[Event]:
        cfg = self.config
        events = []
        for entry in snapshot.entries:
            for fence_id in sorted(fences):
                fence = fences.get(fence_id)
                if fence is None:
                    self.unknown_fence_skips += 1
                    continue
                key = (entry.mmsi, fence_id)
                inside = point_in_box(entry.predicted, fence)
                state = self._fence_states.get(key)
                if state is None:
                    state = _FenceState(inside=inside)
                    self._fence_states[key] = state
                    if inside:
                        events.append(self._fence_event(
                            EventKind.GEOFENCE_ENTER, t, entry, fence_id))
                    # fall through so a brand-new outside track can project
                elif inside != state.inside:
                    state.inside = inside
                    kind = EventKind.GEOFENCE_ENTER if inside else EventKind.GEOFENCE_EXIT
                    events.append(self._fence_event(kind, t, entry, fence_id))
                if inside:
                    state.projected = False
                    continue
                hit = self._projected_hit(entry, t, fence)
                if hit and not state.projected:
                    state.projected = True
                    events.append(self._fence_event(
                        EventKind.GEOFENCE_PROJECTED_ENTER, t, entry, fence_id))
                elif not hit:
                    state.projected = False
        return events

    def _projected_hit(self, entry, t: float, fence: GeofenceBox) -> bool:
        cfg = self.config
        report = entry.last_report
        if report.sog is None or report.cog is None:
            return False
        origin = GeoPoint(report.lat, report.lon)
        base_dt = t - report.timestamp
        steps = int(cfg.horizon_proj // cfg.proj_step)
        for k in range(1, steps + 1):
            p = dead_reckon(origin, report.cog, report.sog, base_dt + k * cfg.proj_step)
            if point_in_box(p, fence):
                return True
        return False

    @staticmethod
    def _fence_event(kind: EventKind, t: float, entry, fence_id: str) -> Event:
        return Event(kind, t, [str(entry.mmsi)], EventSource.AIS,
                     entry.predicted, {"fence_id": fence_id})

    def drop_fence(self, fence_id: str):
        for key in [k for k in self._fence_states if k[1] == fence_id]:
            del self._fence_states[key]
