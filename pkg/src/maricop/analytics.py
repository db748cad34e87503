"""Per-class detection count time series with z-score anomaly flagging."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .events import Event, EventKind, EventSource
from .fmv import DetectionRecord


@dataclass
class AnomalyConfig:
    window: int = 30        # trailing closed buckets used for the baseline
    min_history: int = 10   # minimum closed buckets before flagging
    z_threshold: float = 3.0

    def __post_init__(self):
        if self.min_history > self.window:
            raise ValueError("min_history must be <= window")
        if self.z_threshold <= 0:
            raise ValueError("z_threshold must be positive")


@dataclass
class CountSeries:
    class_label: str
    bucket_seconds: int = 60
    buckets: dict[int, int] = field(default_factory=dict)  # bucket_start -> count
    first_bucket: Optional[int] = None

    def bucket_start(self, t: float) -> int:
        return int(t // self.bucket_seconds) * self.bucket_seconds

    def increment(self, t: float):
        start = self.bucket_start(t)
        self.buckets[start] = self.buckets.get(start, 0) + 1
        if self.first_bucket is None or start < self.first_bucket:
            self.first_bucket = start

    def count_at(self, bucket_start: int) -> int:
        return self.buckets.get(bucket_start, 0)

    def closed_counts(self, up_to_exclusive: int, n: int) -> list[int]:
        """Counts of the n buckets ending just before `up_to_exclusive`.

        Buckets before the series started are not materialized; buckets
        between the start and now read as zero when missing.
        """
        if self.first_bucket is None:
            return []
        starts = range(up_to_exclusive - n * self.bucket_seconds,
                       up_to_exclusive, self.bucket_seconds)
        return [self.buckets.get(s, 0) for s in starts if s >= self.first_bucket]

    def as_pairs(self, since_t: Optional[float] = None) -> list[tuple[int, int]]:
        if self.first_bucket is None:
            return []
        out = []
        for start in sorted(self.buckets):
            if since_t is not None and start < since_t:
                continue
            out.append((start, self.buckets[start]))
        return out


class AnalyticsEngine:
    """Sequential per-source counting plus anomaly checks on bucket close."""

    def __init__(self, config: AnomalyConfig | None = None, bucket_seconds: int = 60):
        self.config = config or AnomalyConfig()
        self.bucket_seconds = bucket_seconds
        self.series: dict[str, CountSeries] = {}
        self._last_flagged: dict[str, int] = {}

    def update_counts(self, detections: list[DetectionRecord]):
        for det in detections:
            s = self.series.get(det.class_label)
            if s is None:
                s = CountSeries(det.class_label, self.bucket_seconds)
                self.series[det.class_label] = s
            s.increment(det.frame.timestamp)

    def detect_count_anomaly(self, series: CountSeries,
                             closed_bucket_start: int) -> Optional[Event]:
        """Evaluate one just-closed bucket against its trailing window."""
        cfg = self.config
        if series.first_bucket is None or closed_bucket_start < series.first_bucket:
            return None
        if self._last_flagged.get(series.class_label) == closed_bucket_start:
            return None
        history = series.closed_counts(closed_bucket_start, cfg.window)
        if len(history) < cfg.min_history:
            return None
        x = series.count_at(closed_bucket_start)
        mean = sum(history) / len(history)
        var = sum((c - mean) ** 2 for c in history) / len(history)
        std = var ** 0.5
        if std > 0:
            z = abs(x - mean) / std
            anomalous = z > cfg.z_threshold
        else:
            z = float("inf") if x != mean else 0.0
            anomalous = x != mean
        if not anomalous:
            return None
        self._last_flagged[series.class_label] = closed_bucket_start
        return Event(EventKind.COUNT_ANOMALY, float(closed_bucket_start + series.bucket_seconds),
                     [], EventSource.ANALYTICS, None,
                     {"class_label": series.class_label, "count": x,
                      "mean": mean, "std": std,
                      "z": None if z == float("inf") else z})

    def on_bucket_close(self, closed_bucket_start: int) -> list[Event]:
        events = []
        for label in sorted(self.series):
            ev = self.detect_count_anomaly(self.series[label], closed_bucket_start)
            if ev is not None:
                events.append(ev)
        return events
