"""Composition root: wires decoder, store, rule engines, fusion, analytics,
similarity, and the event log into one deterministic pipeline.

All inputs carry a receipt time; epoch ticks are interleaved with inputs on
that clock, so (input log, config) fully determines the event payload
sequence, live or replayed.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .ais import AisDecoder, AisPositionReport, AisStaticReport
from .analytics import AnalyticsEngine, AnomalyConfig
from .eventlog import EventLog
from .events import AisEventEngine, Event, EventConfig, EventKind
from .fmv import BBox, DetectionRecord, FmvProcessor, FrameMeta
from .fusion import FusionConfig, FusionEngine, correlate_frame
from .geo import GeoPoint, GeofenceBox
from .similarity import ProjectionConfig, VectorStore
from .tracks import TrackStore


@dataclass
class AppConfig:
    events: EventConfig = field(default_factory=EventConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    anomaly: AnomalyConfig = field(default_factory=AnomalyConfig)
    min_confidence: float = 0.5
    fragment_timeout_s: float = 30.0
    track_eviction_s: float = 24 * 3600.0

    @classmethod
    def from_yaml(cls, path: str) -> "AppConfig":
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "AppConfig":
        fusion_raw = dict(raw.get("fusion", {}))
        if "vessel_classes" in fusion_raw:
            fusion_raw["vessel_classes"] = frozenset(fusion_raw["vessel_classes"])
        return cls(
            events=EventConfig(**raw.get("events", {})),
            fusion=FusionConfig(**fusion_raw),
            projection=ProjectionConfig(**raw.get("projection", {})),
            anomaly=AnomalyConfig(**raw.get("anomaly", {})),
            min_confidence=raw.get("min_confidence", 0.5),
            fragment_timeout_s=raw.get("fragment_timeout_s", 30.0),
            track_eviction_s=raw.get("track_eviction_s", 24 * 3600.0),
        )


class CorruptInputRecord(ValueError):
    pass


class CopEngine:
    """One ingestion/evaluation sequence feeding a single event-log writer."""

    def __init__(self, config: Optional[AppConfig] = None,
                 log_dir: Optional[str] = None):
        self.config = config or AppConfig()
        self.log_dir = log_dir
        event_log_path = None
        self._input_log = None
        if log_dir is not None:
            os.makedirs(log_dir, exist_ok=True)
            event_log_path = os.path.join(log_dir, "events.jsonl")
            self._input_log = open(os.path.join(log_dir, "inputs.jsonl"), "a",
                                   encoding="utf-8")
        self.log = EventLog(event_log_path)
        self.decoder = AisDecoder(self.config.fragment_timeout_s)
        self.store = TrackStore(self.config.track_eviction_s)
        self.ais_events = AisEventEngine(self.store, self.config.events)
        self.fmv = FmvProcessor(self.config.min_confidence)
        self.fusion = FusionEngine(self.store, self.config.fusion)
        self.analytics = AnalyticsEngine(self.config.anomaly,
                                         int(self.config.events.epoch))
        self.vectors = VectorStore()
        self.geofences: dict[str, GeofenceBox] = {}
        self._next_epoch = self.config.events.epoch
        self._last_input_t: Optional[float] = None
        self.corrupt_inputs = 0
        self._lock = threading.RLock()

    # -- clock / epochs -----------------------------------------------------

    def advance_to(self, t: float):
        """Run every pending epoch tick at or before t."""
        with self._lock:
            while self._next_epoch <= t:
                self._tick(self._next_epoch)
                self._next_epoch += self.config.events.epoch

    def _tick(self, te: float):
        self.store.evict_stale(te)
        snapshot = self.store.snapshot(te)
        events = self.ais_events.on_epoch(te, snapshot)
        events += self.ais_events.evaluate_geofences(te, snapshot, self.geofences)
        for ev in events:
            self._emit(ev)
        for ev in self.fusion.on_epoch(te, snapshot):
            self._emit(ev)
        closed = int(te) - self.analytics.bucket_seconds
        for ev in self.analytics.on_bucket_close(closed):
            self._emit(ev)

    def _emit(self, event: Event):
        self.log.append(event)
        if event.kind is EventKind.GEOFENCE_ENTER:
            self.fusion.on_geofence_enter(event)

    # -- input ingestion ------------------------------------------------------

    def _record_input(self, t: float, kind: str, data):
        if self._input_log is not None:
            self._input_log.write(json.dumps({"t": t, "kind": kind, "data": data}) + "\n")
            self._input_log.flush()

    def ingest_ais_line(self, line: str, t: float, record: bool = True):
        with self._lock:
            self.advance_to(t)
            if record:
                self._record_input(t, "ais", line.rstrip("\n"))
            self._last_input_t = t
            for report in self.decoder.feed_line(line, t):
                if isinstance(report, AisPositionReport):
                    delta = self.store.ingest_report(report)
                    if delta.is_new_latest:
                        track = self.store.get(report.mmsi)
                        for ev in self.ais_events.on_new_latest(report, track,
                                                                delta.created):
                            self._emit(ev)
                elif isinstance(report, AisStaticReport):
                    self.store.set_static(report)

    def ingest_fmv_record(self, record_obj: dict, t: float, record: bool = True):
        with self._lock:
            self.advance_to(t)
            if record:
                self._record_input(t, "fmv", record_obj)
            self._last_input_t = t
            frame, detections = self._parse_frame(record_obj)
            detections, activity_events = self.fmv.ingest_detection_frame(frame, detections)
            for ev in activity_events:
                self._emit(ev)
            usable = self.fmv.usable(detections)
            self.analytics.update_counts(usable)
            snapshot = self.store.snapshot(frame.timestamp)
            corr = correlate_frame(usable, snapshot, self.config.fusion)
            by_id = {d.detection_id: d for d in usable}
            for ev in self.fusion.on_frame(corr, by_id):
                self._emit(ev)
            for ev in self.fusion.dark_vessel_scan(corr, by_id, snapshot):
                self._emit(ev)

    @staticmethod
    def _parse_frame(obj: dict) -> tuple[FrameMeta, list[DetectionRecord]]:
        try:
            f = obj["frame"]
            frame = FrameMeta(
                frame_id=f["frame_id"], timestamp=f["timestamp"],
                platform=GeoPoint(f["lat"], f["lon"]),
                altitude_agl=f["altitude_agl"], yaw=f["yaw"], pitch=f["pitch"],
                roll=f["roll"], hfov=f["hfov"], vfov=f["vfov"],
                image_width=f["image_width"], image_height=f["image_height"])
            detections = []
            for d in obj.get("detections", []):
                b = d["bbox"]
                detections.append(DetectionRecord(
                    detection_id=d["detection_id"], frame=frame,
                    class_label=d["class_label"], confidence=d["confidence"],
                    bbox=BBox(b["x_min"], b["y_min"], b["x_max"], b["y_max"]),
                    feature_id=d.get("feature_id")))
            return frame, detections
        except (KeyError, TypeError, ValueError) as e:
            raise CorruptInputRecord(str(e)) from e

    def ingest_feature_record(self, obj: dict):
        self.vectors.add_vector(obj["feature_id"], obj["values"],
                                obj.get("metadata"))

    # -- geofence management ----------------------------------------------------

    def add_geofence(self, fence: GeofenceBox, record: bool = True):
        with self._lock:
            self.geofences[fence.id] = fence
            if record:
                self._record_input(self._last_input_t or 0.0, "geofence",
                                   {"id": fence.id, "min_lat": fence.min_lat,
                                    "max_lat": fence.max_lat,
                                    "min_lon": fence.min_lon,
                                    "max_lon": fence.max_lon})

    def delete_geofence(self, fence_id: str) -> bool:
        with self._lock:
            if fence_id not in self.geofences:
                return False
            del self.geofences[fence_id]
            self.ais_events.drop_fence(fence_id)
            return True

    def close(self):
        if self._input_log is not None:
            self._input_log.close()
            self._input_log = None
        self.log.close()


def replay_log(input_path: str, config: Optional[AppConfig] = None,
               speed: Optional[float] = None,
               log_dir: Optional[str] = None) -> CopEngine:
    """Drive a fresh engine from a recorded input log.

    speed=None replays as fast as possible; a positive speed paces the replay
    on the wall clock at that multiple of recorded time.
    """
    engine = CopEngine(config, log_dir)
    records = []
    with open(input_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                rec["t"]
                rec["kind"]
            except (ValueError, KeyError):
                engine.corrupt_inputs += 1
                continue
            records.append(rec)
    records.sort(key=lambda r: r["t"])  # stable: ties keep file order
    prev_t = None
    for rec in records:
        t = rec["t"]
        if speed and prev_t is not None and t > prev_t:
            time.sleep((t - prev_t) / speed)
        prev_t = t
        kind = rec["kind"]
        try:
            if kind == "ais":
                engine.ingest_ais_line(rec["data"], t, record=False)
            elif kind == "fmv":
                engine.ingest_fmv_record(rec["data"], t, record=False)
            elif kind == "vector":
                engine.ingest_feature_record(rec["data"])
            elif kind == "geofence":
                f = rec["data"]
                engine.add_geofence(GeofenceBox(f["id"], f["min_lat"], f["max_lat"],
                                                f["min_lon"], f["max_lon"]),
                                    record=False)
            elif kind == "end":
                engine.advance_to(t)
            else:
                engine.corrupt_inputs += 1
        except CorruptInputRecord:
            engine.corrupt_inputs += 1
    return engine


def event_payloads(engine: CopEngine) -> list[dict]:
    """Event payloads with wall-clock receipt fields excluded (for log diffs)."""
    out = []
    for rec in engine.log.query():
        d = rec.event.to_dict()
        out.append(d)
    return out
