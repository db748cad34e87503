"""Deterministic scenario generator: AIS sentence and FMV detection streams.

Owns the only AIS encoder in the project, keeping the production decoder
honest against an independent implementation. Produces a replayable input
log plus a ground-truth file for the bundled reference scenarios.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geo import (GeoPoint, GeofenceBox, KNOTS_TO_MPS, dead_reckon,
                  haversine_distance, initial_bearing, local_offset)
from .fmv import FrameMeta, _rot_x, _rot_y, _rot_z


class InvalidScenario(ValueError):
    pass


# ---------------------------------------------------------------------------
# AIS encoding (inverse of maricop.ais, implemented independently)
# ---------------------------------------------------------------------------

def _bits_u(value: int, width: int) -> str:
    if value < 0 or value >= 1 << width:
        raise ValueError(f"unsigned value {value} does not fit in {width} bits")
    return format(value, f"0{width}b")


def _bits_s(value: int, width: int) -> str:
    lo, hi = -(1 << (width - 1)), (1 << (width - 1)) - 1
    if not lo <= value <= hi:
        raise ValueError(f"signed value {value} does not fit in {width} bits")
    return format(value & ((1 << width) - 1), f"0{width}b")


def armor_bits(bits: str) -> tuple[str, int]:
    """6-bit armoring; returns (payload, fill_bits)."""
    fill = (6 - len(bits) % 6) % 6
    bits = bits + "0" * fill
    chars = []
    for i in range(0, len(bits), 6):
        v = int(bits[i:i + 6], 2)
        chars.append(chr(v + 48 if v < 40 else v + 56))
    return "".join(chars), fill


def sentence_checksum(body: str) -> str:
    x = 0
    for ch in body:
        x ^= ord(ch)
    return f"{x:02X}"


def make_sentence(payload: str, fill: int, fragment_count: int = 1,
                  fragment_number: int = 1, sequence_id: str = "",
                  channel: str = "A") -> str:
    body = f"AIVDM,{fragment_count},{fragment_number},{sequence_id},{channel},{payload},{fill}"
    return f"!{body}*{sentence_checksum(body)}"


def encode_position(mmsi: int, lat: Optional[float], lon: Optional[float],
                    sog: Optional[float], cog: Optional[float],
                    heading: Optional[float]) -> str:
    """Encode a type 1 position report as a single AIVDM sentence."""
    raw_sog = 1023 if sog is None else min(1022, int(round(sog * 10)))
    raw_lon = 181 * 600_000 if lon is None else int(round(lon * 600_000))
    raw_lat = 91 * 600_000 if lat is None else int(round(lat * 600_000))
    raw_cog = 3600 if cog is None else int(round(cog * 10)) % 3600
    raw_hdg = 511 if heading is None else int(round(heading)) % 360
    bits = (
        _bits_u(1, 6)            # message type
        + _bits_u(0, 2)          # repeat indicator
        + _bits_u(mmsi, 30)
        + _bits_u(0, 4)          # navigation status
        + _bits_s(-128, 8)       # rate of turn: not available
        + _bits_u(raw_sog, 10)
        + _bits_u(0, 1)          # position accuracy
        + _bits_s(raw_lon, 28)
        + _bits_s(raw_lat, 27)
        + _bits_u(raw_cog, 12)
        + _bits_u(raw_hdg, 9)
        + _bits_u(60, 6)         # UTC second: not available
        + _bits_u(0, 2)          # maneuver indicator
        + _bits_u(0, 3)          # spare
        + _bits_u(0, 1)          # RAIM
        + _bits_u(0, 19)         # radio status
    )
    payload, fill = armor_bits(bits)
    return make_sentence(payload, fill)


_SIXBIT_ENC = {c: i for i, c in enumerate(
    "@ABCDEFGHIJKLMNOPQRSTUVWXYZ[\\]^_ !\"#$%&'()*+,-./0123456789:;<=>?")}


def _bits_text(text: str, n_chars: int) -> str:
    text = text.upper().ljust(n_chars, "@")[:n_chars]
    return "".join(_bits_u(_SIXBIT_ENC[c], 6) for c in text)


def encode_static(mmsi: int, name: str, callsign: str, ship_type: int,
                  sequence_id: int = 1) -> list[str]:
    """Encode a type 5 static report as a two-fragment AIVDM group."""
    bits = (
        _bits_u(5, 6)
        + _bits_u(0, 2)
        + _bits_u(mmsi, 30)
        + _bits_u(0, 2)           # AIS version
        + _bits_u(0, 30)          # IMO number
        + _bits_text(callsign, 7)
        + _bits_text(name, 20)
        + _bits_u(ship_type, 8)
        + _bits_u(0, 30)          # dimensions
        + _bits_u(0, 4)           # EPFD
        + _bits_u(0, 20)          # ETA
        + _bits_u(0, 8)           # draught
        + _bits_text("", 20)      # destination
        + _bits_u(0, 1)           # DTE
        + _bits_u(0, 1)           # spare
    )
    payload, fill = armor_bits(bits)
    split = 40
    first, second = payload[:split], payload[split:]
    return [
        make_sentence(first, 0, 2, 1, str(sequence_id)),
        make_sentence(second, fill, 2, 2, str(sequence_id)),
    ]


# ---------------------------------------------------------------------------
# Scenario model
# ---------------------------------------------------------------------------

@dataclass
class Leg:
    to: GeoPoint
    speed_kn: float


@dataclass
class VesselSpec:
    mmsi: int
    name: str
    start: GeoPoint
    legs: list[Leg]
    report_interval: float = 60.0
    dark: bool = False
    silence_after: Optional[float] = None
    ship_type: int = 70


@dataclass
class UavSpec:
    orbit_center: GeoPoint
    orbit_radius_m: float
    orbit_period_s: float
    altitude_m: float
    hfov: float = 80.0
    vfov: float = 60.0
    image_width: int = 1920
    image_height: int = 1080
    frame_interval: float = 10.0
    pitch: float = -90.0


@dataclass
class Scenario:
    name: str
    seed: int
    duration: float
    vessels: list[VesselSpec]
    uav: Optional[UavSpec] = None
    detection_noise_sigma: float = 0.0
    geofences: list[GeofenceBox] = field(default_factory=list)

    def validate(self):
        if self.duration <= 0:
            raise InvalidScenario("duration must be positive")
        for v in self.vessels:
            if v.report_interval <= 0:
                raise InvalidScenario(f"vessel {v.mmsi}: report_interval must be positive")
            for leg in v.legs:
                if leg.speed_kn <= 0:
                    raise InvalidScenario(f"vessel {v.mmsi}: leg speeds must be positive")
        if self.uav is not None and self.uav.frame_interval <= 0:
            raise InvalidScenario("uav frame_interval must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        vessels = []
        for v in d["vessels"]:
            start = GeoPoint(v["start"]["lat"], v["start"]["lon"])
            legs = [Leg(GeoPoint(l["to"]["lat"], l["to"]["lon"]), l["speed_kn"])
                    for l in v.get("legs", [])]
            vessels.append(VesselSpec(
                mmsi=v["mmsi"], name=v.get("name", str(v["mmsi"])), start=start,
                legs=legs, report_interval=v.get("report_interval", 60.0),
                dark=v.get("dark", False), silence_after=v.get("silence_after"),
                ship_type=v.get("ship_type", 70)))
        uav = None
        if d.get("uav"):
            u = d["uav"]
            uav = UavSpec(orbit_center=GeoPoint(u["orbit_center"]["lat"], u["orbit_center"]["lon"]),
                          orbit_radius_m=u.get("orbit_radius_m", 0.0),
                          orbit_period_s=u.get("orbit_period_s", 600.0),
                          altitude_m=u["altitude_m"], hfov=u.get("hfov", 80.0),
                          vfov=u.get("vfov", 60.0), image_width=u.get("image_width", 1920),
                          image_height=u.get("image_height", 1080),
                          frame_interval=u.get("frame_interval", 10.0),
                          pitch=u.get("pitch", -90.0))
        fences = [GeofenceBox(f["id"], f["min_lat"], f["max_lat"], f["min_lon"], f["max_lon"])
                  for f in d.get("geofences", [])]
        return cls(name=d.get("name", "scenario"), seed=d.get("seed", 0),
                   duration=d["duration"], vessels=vessels, uav=uav,
                   detection_noise_sigma=d.get("detection_noise_sigma", 0.0),
                   geofences=fences)


# ---------------------------------------------------------------------------
# Vessel motion along waypoint legs (great-circle segments, dead-reckoned)
# ---------------------------------------------------------------------------

@dataclass
class _Segment:
    t0: float
    t1: float
    start: GeoPoint
    end: GeoPoint
    bearing: float
    speed_kn: float


class VesselPath:
    def __init__(self, spec: VesselSpec):
        self.spec = spec
        self.segments: list[_Segment] = []
        t = 0.0
        pos = spec.start
        for leg in spec.legs:
            dist = haversine_distance(pos, leg.to)
            if dist == 0.0:
                continue
            dur = dist / (leg.speed_kn * KNOTS_TO_MPS)
            self.segments.append(_Segment(t, t + dur, pos,
                                          leg.to, initial_bearing(pos, leg.to),
                                          leg.speed_kn))
            t += dur
            pos = leg.to
        self.final_pos = pos
        self.final_t = t

    def state(self, t: float) -> tuple[GeoPoint, float, float]:
        """(position, sog_kn, cog_deg) at time t."""
        for seg in self.segments:
            if seg.t0 <= t < seg.t1:
                pos = dead_reckon(seg.start, seg.bearing, seg.speed_kn, t - seg.t0)
                # local course along the great circle toward the waypoint
                cog = initial_bearing(pos, seg.end) if pos != seg.end else seg.bearing
                return pos, seg.speed_kn, cog
        if t >= self.final_t:
            cog = (initial_bearing_safe(self.segments[-1].start, self.final_pos)
                   if self.segments else 0.0)
            return self.final_pos, 0.0, cog
        return self.spec.start, 0.0, 0.0


def initial_bearing_safe(a: GeoPoint, b: GeoPoint) -> float:
    if a.lat == b.lat and a.lon == b.lon:
        return 0.0
    return initial_bearing(a, b)


# ---------------------------------------------------------------------------
# UAV camera: forward position model + ground-to-pixel inverse
# ---------------------------------------------------------------------------

def uav_frame(uav: UavSpec, frame_id: str, t: float) -> FrameMeta:
    theta = 2.0 * math.pi * (t / uav.orbit_period_s)
    east = uav.orbit_radius_m * math.sin(theta)
    north = uav.orbit_radius_m * math.cos(theta)
    from .geo import offset_point
    platform = offset_point(uav.orbit_center, east, north)
    return FrameMeta(frame_id=frame_id, timestamp=t, platform=platform,
                     altitude_agl=uav.altitude_m, yaw=0.0, pitch=uav.pitch,
                     roll=0.0, hfov=uav.hfov, vfov=uav.vfov,
                     image_width=uav.image_width, image_height=uav.image_height)


def ground_to_pixel(frame: FrameMeta, point: GeoPoint) -> Optional[tuple[float, float]]:
    """Pixel seeing `point`, or None when outside the frustum. Inverse of
    the production pixel-to-ground model (same conventions)."""
    east, north = local_offset(frame.platform, point)
    v = (north, east, frame.altitude_agl)
    v = _rot_z(v, -math.radians(frame.yaw))
    v = _rot_y(v, -math.radians(frame.pitch))
    v = _rot_x(v, -math.radians(frame.roll))
    bf, br, bd = v
    if bf <= 0:
        return None
    tx = (br / bf) / math.tan(math.radians(frame.hfov) / 2.0)
    ty = (bd / bf) / math.tan(math.radians(frame.vfov) / 2.0)
    if not (-1.0 <= tx <= 1.0 and -1.0 <= ty <= 1.0):
        return None
    return (tx + 1.0) / 2.0 * frame.image_width, (ty + 1.0) / 2.0 * frame.image_height


# ---------------------------------------------------------------------------
# Scenario execution
# ---------------------------------------------------------------------------

BBOX_W, BBOX_H = 24.0, 12.0


def run_scenario(scenario: Scenario, out_dir: str) -> dict:
    """Generate input and ground-truth files; returns the truth dict."""
    scenario.validate()
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(scenario.seed)
    paths = {v.mmsi: VesselPath(v) for v in scenario.vessels}

    inputs: list[tuple[float, int, str, object]] = []  # (t, priority, kind, data)
    order = 0
    truth_states: list[dict] = []
    truth_detections: list[dict] = []

    # AIS sentences
    for v in scenario.vessels:
        if v.dark:
            continue
        statics = encode_static(v.mmsi, v.name, f"CS{v.mmsi % 10000}", v.ship_type,
                                sequence_id=(v.mmsi % 10))
        for s in statics:
            inputs.append((0.0, order, "ais", s))
            order += 1
        t = 0.0
        end = scenario.duration if v.silence_after is None else min(
            scenario.duration, v.silence_after)
        while t <= end + 1e-9:
            pos, sog, cog = paths[v.mmsi].state(t)
            inputs.append((t, order, "ais",
                           encode_position(v.mmsi, pos.lat, pos.lon, sog, cog,
                                           cog)))
            order += 1
            truth_states.append({"t": t, "mmsi": v.mmsi, "lat": pos.lat,
                                 "lon": pos.lon, "sog": sog, "cog": cog})
            t += v.report_interval

    # FMV frames
    if scenario.uav is not None:
        t = 0.0
        fno = 0
        while t <= scenario.duration + 1e-9:
            frame_id = f"{scenario.name}-f{fno:05d}"
            frame = uav_frame(scenario.uav, frame_id, t)
            detections = []
            for v in scenario.vessels:
                pos, _, _ = paths[v.mmsi].state(t)
                if scenario.detection_noise_sigma > 0:
                    de, dn = rng.normal(0.0, scenario.detection_noise_sigma, 2)
                    from .geo import offset_point
                    pos = offset_point(pos, float(de), float(dn))
                px = ground_to_pixel(frame, pos)
                if px is None:
                    continue
                u, pv = px
                if not (BBOX_W / 2 <= u <= frame.image_width - BBOX_W / 2
                        and BBOX_H / 2 <= pv <= frame.image_height - BBOX_H / 2):
                    continue
                det_id = f"{frame_id}:{v.mmsi}"
                detections.append({
                    "detection_id": det_id, "class_label": "boat",
                    "confidence": 0.9,
                    "bbox": {"x_min": u - BBOX_W / 2, "y_min": pv - BBOX_H / 2,
                             "x_max": u + BBOX_W / 2, "y_max": pv + BBOX_H / 2},
                })
                truth_detections.append({"detection_id": det_id, "t": t,
                                         "mmsi": v.mmsi, "dark": v.dark,
                                         "true_lat": pos.lat, "true_lon": pos.lon})
            record = {
                "frame": {"frame_id": frame_id, "timestamp": t,
                          "lat": frame.platform.lat, "lon": frame.platform.lon,
                          "altitude_agl": frame.altitude_agl, "yaw": frame.yaw,
                          "pitch": frame.pitch, "roll": frame.roll,
                          "hfov": frame.hfov, "vfov": frame.vfov,
                          "image_width": frame.image_width,
                          "image_height": frame.image_height},
                "detections": detections,
            }
            inputs.append((t, order, "fmv", record))
            order += 1
            t += scenario.uav.frame_interval
            fno += 1

    inputs.sort(key=lambda x: (x[0], x[1]))

    with open(os.path.join(out_dir, "inputs.jsonl"), "w", encoding="utf-8") as fh:
        for f in scenario.geofences:
            fh.write(json.dumps({"t": 0.0, "kind": "geofence",
                                 "data": {"id": f.id, "min_lat": f.min_lat,
                                          "max_lat": f.max_lat, "min_lon": f.min_lon,
                                          "max_lon": f.max_lon}}) + "\n")
        for t, _, kind, data in inputs:
            fh.write(json.dumps({"t": t, "kind": kind, "data": data}) + "\n")
        fh.write(json.dumps({"t": scenario.duration, "kind": "end"}) + "\n")

    with open(os.path.join(out_dir, "ais.nmea"), "w", encoding="utf-8") as fh:
        for t, _, kind, data in inputs:
            if kind == "ais":
                fh.write(data + "\n")

    truth = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "duration": scenario.duration,
        "states": truth_states,
        "detections": truth_detections,
        "expected_events": expected_events(scenario, paths),
        "geofences": [{"id": f.id, "min_lat": f.min_lat, "max_lat": f.max_lat,
                       "min_lon": f.min_lon, "max_lon": f.max_lon}
                      for f in scenario.geofences],
    }
    with open(os.path.join(out_dir, "truth.json"), "w", encoding="utf-8") as fh:
        json.dump(truth, fh, indent=1)
    return truth


# ---------------------------------------------------------------------------
# Ground-truth expected events for the bundled reference scenarios
# ---------------------------------------------------------------------------

EXPECTED_EVENT_BUILDERS = {}


def expected_events(scenario: Scenario, paths: dict) -> list[dict]:
    builder = EXPECTED_EVENT_BUILDERS.get(scenario.name)
    return builder(scenario, paths) if builder else []


def _expects(name):
    def deco(fn):
        EXPECTED_EVENT_BUILDERS[name] = fn
        return fn
    return deco


def _next_epoch(t: float, epoch: float = 60.0) -> float:
    """First epoch tick strictly after t."""
    return (math.floor(t / epoch) + 1) * epoch


def _crossing_time(path: VesselPath, predicate, duration: float,
                   step: float = 1.0) -> Optional[float]:
    """First time the predicate on position flips to True, by bisection."""
    prev = predicate(path.state(0.0)[0])
    if prev:
        return 0.0
    t = step
    while t <= duration + 1e-9:
        cur = predicate(path.state(t)[0])
        if cur:
            lo, hi = t - step, t
            for _ in range(50):
                mid = (lo + hi) / 2.0
                if predicate(path.state(mid)[0]):
                    hi = mid
                else:
                    lo = mid
            return hi
        t += step
    return None


def _ev(kind: str, subjects: list[str], t: Optional[float] = None) -> dict:
    d = {"kind": kind, "subjects": subjects}
    if t is not None:
        d["t"] = t
    return d


@_expects("transit")
def _transit_truth(scenario: Scenario, paths: dict) -> list[dict]:
    from .geo import point_in_box
    v = scenario.vessels[0]
    fence = scenario.geofences[0]
    path = paths[v.mmsi]
    t_in = _crossing_time(path, lambda p: point_in_box(p, fence), scenario.duration)
    t_out = _crossing_time(path, lambda p: not point_in_box(p, fence) and
                           p.lon > fence.max_lon, scenario.duration)
    m = str(v.mmsi)
    return [_ev("Appearance", [m], 0.0),
            _ev("GeofenceProjectedEnter", [m], 60.0),
            _ev("GeofenceEnter", [m], _next_epoch(t_in)),
            _ev("GeofenceExit", [m], _next_epoch(t_out))]


@_expects("projected")
def _projected_truth(scenario: Scenario, paths: dict) -> list[dict]:
    m = str(scenario.vessels[0].mmsi)
    return [_ev("Appearance", [m], 0.0),
            _ev("GeofenceProjectedEnter", [m], 60.0)]


@_expects("offcourse")
def _offcourse_truth(scenario: Scenario, paths: dict) -> list[dict]:
    # A right-angle turn: against any pre-turn fix the prediction overshoots
    # along the old course while the vessel moves along the new one, so the
    # deviation grows as sqrt(2) * speed * (T - t_turn).
    v = scenario.vessels[0]
    path = paths[v.mmsi]
    t_turn = path.segments[0].t1
    rate = path.segments[0].speed_kn * KNOTS_TO_MPS
    t_trip = t_turn + 1000.0 / (math.sqrt(2.0) * rate)
    t_report = (math.floor(t_trip / v.report_interval) + 1) * v.report_interval
    m = str(v.mmsi)
    return [_ev("Appearance", [m], 0.0),
            _ev("OffCourse", [m], t_report)]


@_expects("rendezvous")
def _rendezvous_truth(scenario: Scenario, paths: dict) -> list[dict]:
    a, b = scenario.vessels
    pa, pb = paths[a.mmsi], paths[b.mmsi]
    # First epoch pair within colocation distance, plus one debounce epoch.
    t = 60.0
    first = None
    while t <= scenario.duration:
        d = haversine_distance(pa.state(t)[0], pb.state(t)[0])
        if d <= 100.0:
            first = t
            break
        t += 60.0
    t_coloc = (first + 60.0) if first is not None else None
    subjects = sorted([str(a.mmsi), str(b.mmsi)])
    return [_ev("Appearance", [str(a.mmsi)], 0.0),
            _ev("Appearance", [str(b.mmsi)], 0.0),
            _ev("Colocation", subjects, t_coloc)]


@_expects("disappearance")
def _disappearance_truth(scenario: Scenario, paths: dict) -> list[dict]:
    v = scenario.vessels[0]
    m = str(v.mmsi)
    last_report = v.silence_after if v.silence_after is not None else scenario.duration
    # fires at the first epoch where t - last_seen strictly exceeds t_gone
    t_gone = 900.0
    t = _next_epoch(last_report + t_gone)
    return [_ev("Appearance", [m], 0.0),
            _ev("Disappearance", [m], t)]


@_expects("dark")
def _dark_truth(scenario: Scenario, paths: dict) -> list[dict]:
    lit = next(v for v in scenario.vessels if not v.dark)
    frame_dt = scenario.uav.frame_interval
    # third consecutive unmatched frame, frames starting at t=0
    return [_ev("Appearance", [str(lit.mmsi)], 0.0),
            _ev("DarkVessel", None, 2 * frame_dt)]


@_expects("tipcue")
def _tipcue_truth(scenario: Scenario, paths: dict) -> list[dict]:
    from .geo import point_in_box
    v = scenario.vessels[0]
    fence = scenario.geofences[0]
    path = paths[v.mmsi]
    t_in = _crossing_time(path, lambda p: point_in_box(p, fence), scenario.duration)
    t_enter = _next_epoch(t_in)
    # first frame at or after cue creation
    frame_dt = scenario.uav.frame_interval
    t_verify = math.ceil(t_enter / frame_dt) * frame_dt
    m = str(v.mmsi)
    return [_ev("Appearance", [m], 0.0),
            _ev("GeofenceProjectedEnter", [m], 60.0),
            _ev("GeofenceEnter", [m], t_enter),
            _ev("VesselVerified", None, t_verify)]


# ---------------------------------------------------------------------------
# Bundled reference scenarios
# ---------------------------------------------------------------------------

def reference_scenarios() -> dict[str, Scenario]:
    fence = GeofenceBox("box", -0.01, 0.01, -0.02, 0.02)
    scenarios = {}

    scenarios["transit"] = Scenario(
        name="transit", seed=11, duration=2400.0,
        vessels=[VesselSpec(211000001, "HAVBLIK", GeoPoint(0.0, -0.08),
                            [Leg(GeoPoint(0.0, 0.08), 10.0)])],
        geofences=[fence])

    scenarios["projected"] = Scenario(
        name="projected", seed=12, duration=900.0,
        vessels=[VesselSpec(211000002, "SKARVEN", GeoPoint(0.0, -0.11),
                            [Leg(GeoPoint(0.0, 0.1), 20.0)])],
        geofences=[fence])

    scenarios["offcourse"] = Scenario(
        name="offcourse", seed=13, duration=1200.0,
        vessels=[VesselSpec(211000003, "NORDLYS", GeoPoint(0.0, 0.0),
                            [Leg(GeoPoint(0.03, 0.0), 12.0),
                             Leg(GeoPoint(0.03, 0.05), 12.0)])])

    scenarios["rendezvous"] = Scenario(
        name="rendezvous", seed=14, duration=1300.0,
        vessels=[VesselSpec(211000004, "VESTAVIND", GeoPoint(0.0, -0.01),
                            [Leg(GeoPoint(0.0, -0.0003), 2.0)]),
                 VesselSpec(211000005, "SOLGLIMT", GeoPoint(0.0, 0.01),
                            [Leg(GeoPoint(0.0, 0.0003), 2.0)])])

    scenarios["disappearance"] = Scenario(
        name="disappearance", seed=15, duration=2700.0,
        vessels=[VesselSpec(211000006, "MAAKEN", GeoPoint(0.0, 0.0),
                            [Leg(GeoPoint(0.0, 0.06), 8.0)],
                            silence_after=600.0)])

    scenarios["dark"] = Scenario(
        name="dark", seed=16, duration=600.0, detection_noise_sigma=10.0,
        vessels=[VesselSpec(211000010, "LYSFISK", GeoPoint(0.003, -0.004),
                            [Leg(GeoPoint(0.003, 0.004), 3.0)]),
                 VesselSpec(211000666, "GHOST", GeoPoint(-0.003, -0.004),
                            [Leg(GeoPoint(-0.003, 0.004), 3.0)], dark=True)],
        uav=UavSpec(orbit_center=GeoPoint(0.0, 0.0), orbit_radius_m=0.0,
                    orbit_period_s=600.0, altitude_m=1000.0,
                    hfov=80.0, vfov=60.0, frame_interval=10.0))

    scenarios["tipcue"] = Scenario(
        name="tipcue", seed=17, duration=900.0, detection_noise_sigma=10.0,
        vessels=[VesselSpec(211000011, "TINDRA", GeoPoint(0.0, -0.05),
                            [Leg(GeoPoint(0.0, 0.05), 10.0)])],
        geofences=[fence],
        uav=UavSpec(orbit_center=GeoPoint(0.0, -0.015), orbit_radius_m=0.0,
                    orbit_period_s=600.0, altitude_m=1000.0,
                    hfov=80.0, vfov=60.0, frame_interval=10.0))

    return scenarios
