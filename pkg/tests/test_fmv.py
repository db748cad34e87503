import math
import random

import pytest

from maricop.events import EventKind
from maricop.fmv import (BBox, DetectionRecord, FmvProcessor, FrameMeta,
                         NoGroundIntersection, detect_activities,
                         geolocate_detection, pixel_ray_ned)
from maricop.geo import GeoPoint, haversine_distance, local_offset


def frame(yaw=0.0, pitch=-90.0, roll=0.0, alt=1000.0, lat=0.0, lon=0.0,
          hfov=80.0, vfov=60.0, w=1920, h=1080, t=0.0, fid="f0"):
    return FrameMeta(frame_id=fid, timestamp=t, platform=GeoPoint(lat, lon),
                     altitude_agl=alt, yaw=yaw, pitch=pitch, roll=roll,
                     hfov=hfov, vfov=vfov, image_width=w, image_height=h)


def center_box(f, half=10.0):
    cx, cy = f.image_width / 2.0, f.image_height / 2.0
    return BBox(cx - half, cy - half, cx + half, cy + half)


class TestGeolocation:
    def test_nadir_center_pixel_is_platform(self):
        f = frame(pitch=-90.0)
        p = geolocate_detection(f, center_box(f))
        assert haversine_distance(p, f.platform) < 1e-6

    def test_nadir_yaw_irrelevant_at_center(self):
        for yaw in (0.0, 37.0, 182.5, 359.0):
            f = frame(yaw=yaw, pitch=-90.0)
            p = geolocate_detection(f, center_box(f))
            assert haversine_distance(p, f.platform) < 1e-6

    def test_forward_slant_lands_north(self):
        # pitch -45, yaw 0, altitude 100 m: boresight strikes the ground
        # exactly 100 m north of the platform (tan 45 = 1).
        f = frame(pitch=-45.0, alt=100.0)
        p = geolocate_detection(f, center_box(f))
        east, north = local_offset(f.platform, p)
        assert north == pytest.approx(100.0, abs=1e-6)
        assert east == pytest.approx(0.0, abs=1e-9)

    def test_yaw_rotates_ground_point(self):
        f = frame(yaw=90.0, pitch=-45.0, alt=100.0)
        p = geolocate_detection(f, center_box(f))
        east, north = local_offset(f.platform, p)
        assert east == pytest.approx(100.0, abs=1e-6)
        assert north == pytest.approx(0.0, abs=1e-6)

    def test_horizontal_pixel_angle(self):
        # nadir camera, pixel at the right edge center: the ray tilts by
        # hfov/2 toward body +y, so ground offset = alt * tan(hfov/2).
        f = frame(pitch=-90.0, alt=500.0)
        box = BBox(f.image_width - 1, f.image_height / 2 - 1,
                   f.image_width, f.image_height / 2 + 1)
        u, _ = box.center
        expected = 500.0 * math.tan(
            math.atan((2 * u / f.image_width - 1) * math.tan(math.radians(40.0))))
        p = geolocate_detection(f, box)
        east, north = local_offset(f.platform, p)
        assert east == pytest.approx(expected, rel=1e-9)
        assert north == pytest.approx(0.0, abs=1e-6)

    def test_above_horizon_raises(self):
        f = frame(pitch=0.0)  # level camera: center ray parallel to ground
        with pytest.raises(NoGroundIntersection):
            geolocate_detection(f, center_box(f))

    def test_ray_is_invariant_under_scale(self):
        f = frame(yaw=123.0, pitch=-37.0, roll=5.0)
        r = pixel_ray_ned(f, 300.0, 800.0)
        norm = math.sqrt(sum(c * c for c in r))
        assert norm > 0.5  # rotations preserve the un-normalized length >= 1

    def test_roll_moves_off_center_pixels(self):
        # roll is about the boresight, so the center ray is fixed but an
        # off-center pixel's ground point rotates around it
        box = BBox(100, 100, 140, 140)
        base = geolocate_detection(frame(pitch=-45.0, alt=100.0), box)
        rolled = geolocate_detection(frame(pitch=-45.0, roll=10.0, alt=100.0), box)
        assert haversine_distance(base, rolled) > 1.0
        f = frame(pitch=-45.0, roll=10.0, alt=100.0)
        center = geolocate_detection(f, center_box(f))
        unrolled_center = geolocate_detection(frame(pitch=-45.0, alt=100.0),
                                              center_box(f))
        assert haversine_distance(center, unrolled_center) < 1e-6


class TestValidation:
    def test_bbox_outside_frame(self):
        f = frame()
        with pytest.raises(Exception):
            DetectionRecord("d1", f, "boat", 0.9, BBox(-5, 0, 10, 10))
        with pytest.raises(Exception):
            DetectionRecord("d1", f, "boat", 0.9, BBox(0, 0, 5000, 10))

    def test_confidence_range(self):
        f = frame()
        with pytest.raises(Exception):
            DetectionRecord("d1", f, "boat", 1.5, center_box(f))

    def test_meta_validation(self):
        with pytest.raises(Exception):
            frame(alt=0.0)
        with pytest.raises(Exception):
            frame(hfov=200.0)


def person(f, det_id, x, y, w=40, h=80, conf=0.9):
    return DetectionRecord(det_id, f, "person", conf, BBox(x, y, x + w, y + h))


class TestActivities:
    def test_pair_is_meeting(self):
        f = frame()
        evs = detect_activities([person(f, "a", 100, 100), person(f, "b", 120, 120)])
        assert [e.kind for e in evs] == [EventKind.MEETING]
        assert sorted(evs[0].subjects) == ["a", "b"]

    def test_disjoint_boxes_nothing(self):
        f = frame()
        evs = detect_activities([person(f, "a", 100, 100), person(f, "b", 500, 500)])
        assert evs == []

    def test_touching_edges_do_not_count(self):
        f = frame()
        evs = detect_activities([person(f, "a", 100, 100, w=40),
                                 person(f, "b", 140, 100, w=40)])
        assert evs == []

    def test_chain_of_three_is_gathering(self):
        # a overlaps b, b overlaps c, a and c disjoint: one component of 3.
        f = frame()
        dets = [person(f, "a", 100, 100), person(f, "b", 130, 100),
                person(f, "c", 160, 100)]
        assert not dets[0].bbox.intersects(dets[2].bbox)
        evs = detect_activities(dets)
        assert [e.kind for e in evs] == [EventKind.GATHERING]
        assert sorted(evs[0].subjects) == ["a", "b", "c"]
        assert evs[0].details["member_count"] == 3

    def test_gathering_supersedes_meeting(self):
        f = frame()
        dets = [person(f, "a", 100, 100), person(f, "b", 120, 110),
                person(f, "c", 140, 120)]
        evs = detect_activities(dets)
        assert [e.kind for e in evs] == [EventKind.GATHERING]

    def test_non_person_classes_ignored(self):
        f = frame()
        a = DetectionRecord("a", f, "boat", 0.9, BBox(100, 100, 180, 200))
        b = DetectionRecord("b", f, "car", 0.9, BBox(120, 120, 200, 220))
        assert detect_activities([a, b]) == []

    def test_low_confidence_excluded(self):
        f = frame()
        evs = detect_activities([person(f, "a", 100, 100, conf=0.3),
                                 person(f, "b", 120, 120, conf=0.9)],
                                min_confidence=0.5)
        assert evs == []

    def test_order_invariance(self):
        f = frame()
        dets = [person(f, c, 100 + 25 * i, 100) for i, c in enumerate("abcdefg")]
        base = [(e.kind, tuple(e.subjects)) for e in detect_activities(dets)]
        rng = random.Random(7)
        for _ in range(20):
            rng.shuffle(dets)
            got = [(e.kind, tuple(e.subjects)) for e in detect_activities(dets)]
            assert got == base


class TestProcessor:
    def test_frame_ingest_geolocates_and_queries(self):
        proc = FmvProcessor(min_confidence=0.5)
        f = frame(t=10.0)
        dets = [DetectionRecord("d1", f, "boat", 0.8, center_box(f)),
                DetectionRecord("d2", f, "boat", 0.2, center_box(f))]
        out, evs = proc.ingest_detection_frame(f, dets)
        assert all(d.geolocation is not None for d in out)
        assert [d.detection_id for d in proc.usable(out)] == ["d1"]
        assert [d.detection_id for d in proc.query(class_label="boat")] == ["d1", "d2"]
        assert proc.query(since_t=11.0) == []

    def test_horizon_failure_is_per_detection(self):
        proc = FmvProcessor()
        f = frame(pitch=-5.0, vfov=60.0)  # top half of frame looks above horizon
        sky = DetectionRecord("sky", f, "boat", 0.9, BBox(900, 0, 1000, 20))
        sea = DetectionRecord("sea", f, "boat", 0.9,
                              BBox(900, f.image_height - 20, 1000, f.image_height))
        out, _ = proc.ingest_detection_frame(f, [sky, sea])
        by_id = {d.detection_id: d for d in out}
        assert by_id["sky"].geolocation is None
        assert by_id["sky"].geolocation_error
        assert by_id["sea"].geolocation is not None
        assert proc.usable(out) == [by_id["sea"]]
