"""FMV detection ingest: pixel-to-ground geolocation and activity heuristics.

Detections arrive precomputed (bounding box + class + confidence) together
with platform metadata for the frame. The geolocation model is a pinhole
camera with yaw/pitch/roll attitude, ray-cast onto the horizontal plane at
ground level; footprints are small enough that a flat-earth local
east/north conversion is adequate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .events import Event, EventKind, EventSource
from .geo import GeoPoint, offset_point


class FmvError(ValueError):
    pass


class NoGroundIntersection(FmvError):
    pass


class InvalidBBox(FmvError):
    pass


@dataclass(frozen=True)
class FrameMeta:
    frame_id: str
    timestamp: float
    platform: GeoPoint
    altitude_agl: float     # meters above ground
    yaw: float              # degrees clockwise from north
    pitch: float            # degrees; 0 = horizon, -90 = straight down
    roll: float             # degrees
    hfov: float             # degrees
    vfov: float             # degrees
    image_width: int
    image_height: int

    def __post_init__(self):
        if self.altitude_agl <= 0:
            raise FmvError("altitude_agl must be positive")
        if not 0 < self.hfov < 180 or not 0 < self.vfov < 180:
            raise FmvError("fov must be in (0, 180) degrees")
        if self.image_width < 1 or self.image_height < 1:
            raise FmvError("image dimensions must be >= 1")


@dataclass(frozen=True)
class BBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0

    def intersects(self, other: "BBox") -> bool:
        """Strictly positive intersection area."""
        w = min(self.x_max, other.x_max) - max(self.x_min, other.x_min)
        h = min(self.y_max, other.y_max) - max(self.y_min, other.y_min)
        return w > 0 and h > 0


@dataclass
class DetectionRecord:
    detection_id: str
    frame: FrameMeta
    class_label: str
    confidence: float
    bbox: BBox
    geolocation: Optional[GeoPoint] = None
    feature_id: Optional[str] = None
    geolocation_error: Optional[str] = None

    def __post_init__(self):
        b, f = self.bbox, self.frame
        if not (0 <= b.x_min < b.x_max <= f.image_width
                and 0 <= b.y_min < b.y_max <= f.image_height):
            raise InvalidBBox(f"bbox {b} outside {f.image_width}x{f.image_height} frame")
        if not 0.0 <= self.confidence <= 1.0:
            raise FmvError(f"confidence out of range: {self.confidence}")


def _rot_x(v, a):
    c, s = math.cos(a), math.sin(a)
    return (v[0], c * v[1] - s * v[2], s * v[1] + c * v[2])


def _rot_y(v, a):
    c, s = math.cos(a), math.sin(a)
    return (c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2])


def _rot_z(v, a):
    c, s = math.cos(a), math.sin(a)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1], v[2])


def pixel_ray_ned(frame: FrameMeta, u: float, v: float) -> tuple[float, float, float]:
    """Unit-free ray through pixel (u, v) in the local NED frame.

    Body axes are x forward, y right, z down; the camera boresight is the
    body x axis. Attitude is applied roll, then pitch, then yaw.
    """
    ax = math.atan((2.0 * u / frame.image_width - 1.0) * math.tan(math.radians(frame.hfov) / 2.0))
    ay = math.atan((2.0 * v / frame.image_height - 1.0) * math.tan(math.radians(frame.vfov) / 2.0))
    ray = (1.0, math.tan(ax), math.tan(ay))
    ray = _rot_x(ray, math.radians(frame.roll))
    ray = _rot_y(ray, math.radians(frame.pitch))
    ray = _rot_z(ray, math.radians(frame.yaw))
    return ray


def geolocate_detection(frame: FrameMeta, bbox: BBox) -> GeoPoint:
    """Ground intersection of the ray through the bbox center pixel."""
    if not (bbox.x_min < bbox.x_max and bbox.y_min < bbox.y_max):
        raise InvalidBBox(str(bbox))
    u, v = bbox.center
    north, east, down = pixel_ray_ned(frame, u, v)
    if down <= 0.0:
        raise NoGroundIntersection(
            f"ray at or above horizon for frame {frame.frame_id}, pixel ({u}, {v})")
    scale = frame.altitude_agl / down
    return offset_point(frame.platform, east * scale, north * scale)


def detect_activities(detections: list[DetectionRecord],
                      min_confidence: float = 0.5) -> list[Event]:
    """Meeting/gathering heuristic over person-class boxes of one frame.

    Overlapping person boxes form a graph; each connected component of size 2
    emits a Meeting and size >= 3 a Gathering (which supersedes Meetings for
    its members). Invariant to the ordering of detections within the frame.
    """
    persons = sorted((d for d in detections
                      if d.class_label == "person" and d.confidence >= min_confidence),
                     key=lambda d: d.detection_id)
    n = len(persons)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if persons[i].bbox.intersects(persons[j].bbox):
                parent[find(i)] = find(j)

    components: dict[int, list[DetectionRecord]] = {}
    for i in range(n):
        components.setdefault(find(i), []).append(persons[i])

    events = []
    for members in sorted(components.values(), key=lambda ms: ms[0].detection_id):
        if len(members) < 2:
            continue
        kind = EventKind.GATHERING if len(members) >= 3 else EventKind.MEETING
        located = [m.geolocation for m in members if m.geolocation is not None]
        centroid = None
        if located:
            centroid = GeoPoint(sum(p.lat for p in located) / len(located),
                                sum(p.lon for p in located) / len(located))
        events.append(Event(kind, members[0].frame.timestamp,
                            [m.detection_id for m in members],
                            EventSource.FMV, centroid,
                            {"member_count": len(members)}))
    return events


class FmvProcessor:
    """Sequential frame processor for one video source."""

    def __init__(self, min_confidence: float = 0.5):
        self.min_confidence = min_confidence
        self.records: list[DetectionRecord] = []

    def ingest_detection_frame(self, frame: FrameMeta,
                               detections: list[DetectionRecord]
                               ) -> tuple[list[DetectionRecord], list[Event]]:
        """Geolocate and persist a frame's detections; emit activity events.

        Per-detection geolocation failures are recorded on the detection,
        never rejecting the frame.
        """
        for det in detections:
            if det.frame is not frame and det.frame.frame_id != frame.frame_id:
                raise FmvError(f"detection {det.detection_id} references another frame")
            try:
                det.geolocation = geolocate_detection(frame, det.bbox)
            except NoGroundIntersection as e:
                det.geolocation = None
                det.geolocation_error = str(e)
        self.records.extend(detections)
        events = detect_activities(detections, self.min_confidence)
        return detections, events

    def usable(self, detections: list[DetectionRecord]) -> list[DetectionRecord]:
        """Detections eligible for downstream use (confidence gate + geolocated)."""
        return [d for d in detections
                if d.confidence >= self.min_confidence and d.geolocation is not None]

    def query(self, since_t: float | None = None,
              class_label: str | None = None) -> list[DetectionRecord]:
        out = self.records
        if since_t is not None:
            out = [d for d in out if d.frame.timestamp >= since_t]
        if class_label is not None:
            out = [d for d in out if d.class_label == class_label]
        return list(out)
