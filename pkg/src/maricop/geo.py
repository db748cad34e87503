"""Spherical-earth geodesy primitives shared by prediction, events, and fusion.

All latitudes/longitudes are decimal degrees, bearings are degrees true,
distances are meters. The earth is modeled as a sphere of radius
EARTH_RADIUS_M; threshold-based rules downstream make ellipsoidal error
irrelevant at the scales involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0
KNOTS_TO_MPS = 0.514444
METERS_PER_DEG_LAT = math.pi * EARTH_RADIUS_M / 180.0


class GeoError(ValueError):
    pass


class CoincidentPoints(GeoError):
    pass


class UnavailableKinematics(GeoError):
    pass


def normalize_lon(lon: float) -> float:
    """Wrap a longitude into (-180, 180]."""
    x = math.fmod(lon + 180.0, 360.0)
    if x <= 0.0:
        x += 360.0
    return x - 180.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise GeoError(f"latitude out of range: {self.lat}")
        object.__setattr__(self, "lon", normalize_lon(self.lon))


@dataclass(frozen=True)
class GeofenceBox:
    """Closed, axis-aligned lat/lon box. Antimeridian-spanning boxes rejected."""

    id: str
    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self):
        if not (-90.0 <= self.min_lat <= self.max_lat <= 90.0):
            raise GeoError(f"bad latitude bounds for fence {self.id!r}")
        if not (-180.0 <= self.min_lon <= self.max_lon <= 180.0):
            raise GeoError(f"bad longitude bounds for fence {self.id!r}")


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters."""
    lat1, lon1 = math.radians(a.lat), math.radians(a.lon)
    lat2, lon2 = math.radians(b.lat), math.radians(b.lon)
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def dead_reckon(p: GeoPoint, cog: float | None, sog: float | None, dt: float) -> GeoPoint:
    """Destination point along initial bearing `cog` after `dt` seconds at `sog` knots."""
    if sog is None or cog is None:
        raise UnavailableKinematics("sog/cog unavailable")
    if sog < 0 or dt < 0:
        raise GeoError("sog and dt must be non-negative")
    dist = sog * KNOTS_TO_MPS * dt
    if dist == 0.0:
        return p
    delta = dist / EARTH_RADIUS_M
    theta = math.radians(cog)
    lat1 = math.radians(p.lat)
    lon1 = math.radians(p.lon)
    sin_lat2 = math.sin(lat1) * math.cos(delta) + math.cos(lat1) * math.sin(delta) * math.cos(theta)
    sin_lat2 = max(-1.0, min(1.0, sin_lat2))
    lat2 = math.asin(sin_lat2)
    y = math.sin(theta) * math.sin(delta) * math.cos(lat1)
    x = math.cos(delta) - math.sin(lat1) * sin_lat2
    lon2 = lon1 + math.atan2(y, x)
    return GeoPoint(math.degrees(lat2), math.degrees(lon2))


def initial_bearing(a: GeoPoint, b: GeoPoint) -> float:
    """Forward azimuth of the great circle a -> b, in [0, 360)."""
    if a.lat == b.lat and a.lon == b.lon:
        raise CoincidentPoints("bearing undefined for coincident points")
    lat1, lat2 = math.radians(a.lat), math.radians(b.lat)
    dlon = math.radians(b.lon - a.lon)
    y = math.sin(dlon) * math.cos(lat2)
    x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(dlon)
    return math.degrees(math.atan2(y, x)) % 360.0


def point_in_box(p: GeoPoint, box: GeofenceBox) -> bool:
    """Closed-boundary containment test."""
    return box.min_lat <= p.lat <= box.max_lat and box.min_lon <= p.lon <= box.max_lon


def meters_per_deg_lon(lat: float) -> float:
    """Local east-west meters per degree of longitude at the given latitude."""
    return METERS_PER_DEG_LAT * math.cos(math.radians(lat))


def offset_point(p: GeoPoint, east_m: float, north_m: float) -> GeoPoint:
    """Flat-earth offset of `p` by local east/north meters. Small offsets only."""
    return GeoPoint(p.lat + north_m / METERS_PER_DEG_LAT,
                    p.lon + east_m / meters_per_deg_lon(p.lat))


def local_offset(origin: GeoPoint, p: GeoPoint) -> tuple[float, float]:
    """(east_m, north_m) of `p` relative to `origin`, flat-earth. Inverse of offset_point."""
    north = (p.lat - origin.lat) * METERS_PER_DEG_LAT
    east = (p.lon - origin.lon) * meters_per_deg_lon(origin.lat)
    return east, north
