import random

import pytest

from maricop.ais import AisPositionReport
from maricop.events import Event, EventKind, EventSource
from maricop.fmv import BBox, DetectionRecord, FrameMeta
from maricop.fusion import (CorrelationRecord, CueState, FusionConfig,
                            FusionEngine, correlate_frame)
from maricop.geo import GeoPoint, offset_point
from maricop.tracks import TrackStore, Verification

T1, T2 = 200000001, 200000002


def add_track(store, mmsi, point, t=0.0):
    store.ingest_report(AisPositionReport(mmsi=mmsi, timestamp=t,
                                          lat=point.lat, lon=point.lon,
                                          sog=0.0, cog=0.0, heading=0.0))


def detection(det_id, point, label="boat", conf=0.9, t=0.0):
    f = FrameMeta(frame_id=f"fr-{t}", timestamp=t, platform=point,
                  altitude_agl=1000.0, yaw=0.0, pitch=-90.0, roll=0.0,
                  hfov=80.0, vfov=60.0, image_width=1920, image_height=1080)
    d = DetectionRecord(det_id, f, label, conf, BBox(950, 530, 970, 550))
    d.geolocation = point
    return d


ORIGIN = GeoPoint(0.0, 0.0)


def east(m):
    return offset_point(ORIGIN, m, 0.0)


class TestCorrelation:
    def test_greedy_prefers_global_smallest_first(self):
        # d(D1,T1)=40, d(D1,T2)=60, d(D2,T1)=50, d(D2,T2)=180:
        # greedy takes D1-T1 (40), discards D2-T1 (50, track taken),
        # then D2-T2 (180). Nearest-neighbor per detection would also pick
        # D2-T1 for D2; the layout below realizes those exact distances.
        store = TrackStore()
        add_track(store, T1, east(0.0))
        add_track(store, T2, east(100.0))
        d1 = detection("D1", east(40.0))    # 40 from T1, 60 from T2
        d2 = detection("D2", east(-80.0))   # 80 from T1, 180 from T2
        corr = correlate_frame([d1, d2], store.snapshot(0.0), FusionConfig())
        got = {(m.detection_id, m.mmsi) for m in corr.matches}
        assert got == {("D1", T1), ("D2", T2)}
        by_det = {m.detection_id: m.distance for m in corr.matches}
        assert by_det["D1"] == pytest.approx(40.0, rel=1e-6)
        assert by_det["D2"] == pytest.approx(180.0, rel=1e-6)

    def test_gate_excludes_far_pairs(self):
        store = TrackStore()
        add_track(store, T1, ORIGIN)
        corr = correlate_frame([detection("D1", east(250.0))],
                               store.snapshot(0.0), FusionConfig(gate_m=200.0))
        assert corr.matches == ()
        assert corr.unmatched_detections == ("D1",)
        # 250 m <= 2 * gate, so the track still counts as in view
        assert corr.unmatched_tracks_in_view == (T1,)

    def test_stale_tracks_not_candidates(self):
        store = TrackStore()
        add_track(store, T1, ORIGIN, t=0.0)
        snap = store.snapshot(700.0)  # staleness 700 > max_track_age 600
        corr = correlate_frame([detection("D1", ORIGIN, t=700.0)], snap, FusionConfig())
        assert corr.matches == ()
        assert corr.unmatched_tracks_in_view == ()

    def test_non_vessel_and_ungeolocated_ignored(self):
        store = TrackStore()
        add_track(store, T1, ORIGIN)
        person = detection("P1", ORIGIN, label="person")
        lost = detection("D1", ORIGIN)
        lost.geolocation = None
        corr = correlate_frame([person, lost], store.snapshot(0.0), FusionConfig())
        assert corr.matches == ()
        assert corr.unmatched_detections == ()

    def test_tie_breaks_deterministic(self):
        # two tracks exactly equidistant from one detection: lower mmsi wins
        store = TrackStore()
        add_track(store, T2, east(50.0))
        add_track(store, T1, east(-50.0))
        corr = correlate_frame([detection("D1", ORIGIN)], store.snapshot(0.0),
                               FusionConfig())
        assert [(m.detection_id, m.mmsi) for m in corr.matches] == [("D1", T1)]

    def test_one_to_one(self):
        store = TrackStore()
        add_track(store, T1, ORIGIN)
        dets = [detection("D1", east(10.0)), detection("D2", east(20.0))]
        corr = correlate_frame(dets, store.snapshot(0.0), FusionConfig())
        assert len(corr.matches) == 1
        assert corr.unmatched_detections == ("D2",)


def fence_enter(mmsi, t=0.0, loc=ORIGIN):
    return Event(EventKind.GEOFENCE_ENTER, t, [str(mmsi)], EventSource.AIS,
                 loc, {"fence_id": "f1"})


class TestVerification:
    def setup_engine(self):
        store = TrackStore()
        add_track(store, T1, ORIGIN)
        return store, FusionEngine(store, FusionConfig())

    def test_geofence_enter_creates_cue(self):
        store, eng = self.setup_engine()
        cues = eng.on_geofence_enter(fence_enter(T1, t=100.0))
        assert len(cues) == 1
        cue = cues[0]
        assert cue.state is CueState.PENDING
        assert cue.deadline == 100.0 + 1200.0
        assert store.get(T1).verification_state is Verification.CUE_PENDING

    def test_correlation_within_window_verifies(self):
        store, eng = self.setup_engine()
        eng.on_geofence_enter(fence_enter(T1, t=100.0))
        det = detection("D1", east(10.0), t=200.0)
        corr = correlate_frame([det], store.snapshot(200.0), eng.config)
        evs = eng.on_frame(corr, {"D1": det})
        assert [e.kind for e in evs] == [EventKind.VESSEL_VERIFIED]
        assert store.get(T1).verification_state is Verification.VERIFIED
        assert eng.cues["cue-1"].state is CueState.COMPLETED

    def test_verified_is_absorbing(self):
        store, eng = self.setup_engine()
        eng.on_geofence_enter(fence_enter(T1, t=0.0))
        det = detection("D1", east(10.0), t=50.0)
        corr = correlate_frame([det], store.snapshot(50.0), eng.config)
        eng.on_frame(corr, {"D1": det})
        # later fence entry must not re-open a cue
        assert eng.on_geofence_enter(fence_enter(T1, t=500.0)) == []
        assert store.get(T1).verification_state is Verification.VERIFIED

    def test_cue_expiry_flags(self):
        store, eng = self.setup_engine()
        eng.on_geofence_enter(fence_enter(T1, t=0.0))
        assert eng.on_epoch(1200.0, store.snapshot(1200.0)) == []  # t == deadline: still open
        evs = eng.on_epoch(1260.0, store.snapshot(1260.0))
        assert [e.kind for e in evs] == [EventKind.VESSEL_MISMATCH]
        assert evs[0].details["reason"] == "cue window elapsed"
        assert store.get(T1).verification_state is Verification.FLAGGED
        assert eng.cues["cue-1"].state is CueState.EXPIRED
        # expiry fires exactly once
        assert eng.on_epoch(1320.0, store.snapshot(1320.0)) == []

    def test_late_correlation_does_not_verify(self):
        store, eng = self.setup_engine()
        eng.on_geofence_enter(fence_enter(T1, t=0.0))
        eng.on_epoch(1300.0, store.snapshot(1300.0))
        det = detection("D1", east(10.0), t=1400.0)
        corr = correlate_frame([det], store.snapshot(1400.0), eng.config)
        evs = eng.on_frame(corr, {"D1": det})
        assert evs == []
        assert store.get(T1).verification_state is Verification.FLAGGED

    def test_class_conflict_emits_mismatch(self):
        store, eng = self.setup_engine()
        eng.on_geofence_enter(fence_enter(T1, t=0.0))
        det = detection("D1", east(10.0), t=50.0)
        corr = correlate_frame([det], store.snapshot(50.0), eng.config)
        # rewrite the class after gating to simulate a conflicting label
        conflicted = detection("D1", east(10.0), label="car", t=50.0)
        evs = eng.on_frame(corr, {"D1": conflicted})
        assert [e.kind for e in evs] == [EventKind.VESSEL_MISMATCH]
        assert evs[0].details["reason"] == "class conflict"
        # the conflicting match must not verify the track
        assert store.get(T1).verification_state is Verification.CUE_PENDING

    def test_manual_cue(self):
        store, eng = self.setup_engine()
        cue = eng.create_manual_cue(T1, ORIGIN, 10.0, reason="operator")
        assert cue.reason == "operator"
        assert store.get(T1).verification_state is Verification.CUE_PENDING


class TestStateMachineSafety:
    """Random interleavings never reach an illegal transition."""

    LEGAL = {
        Verification.UNVERIFIED: {Verification.UNVERIFIED, Verification.CUE_PENDING},
        Verification.CUE_PENDING: {Verification.CUE_PENDING, Verification.VERIFIED,
                                   Verification.FLAGGED},
        Verification.VERIFIED: {Verification.VERIFIED},
        Verification.FLAGGED: {Verification.FLAGGED},
    }

    def test_random_interleavings(self):
        rng = random.Random(42)
        for trial in range(300):
            store = TrackStore()
            add_track(store, T1, ORIGIN)
            eng = FusionEngine(store, FusionConfig(cue_window=300.0))
            t = 0.0
            prev = store.get(T1).verification_state
            for _ in range(30):
                t += rng.choice([10.0, 60.0, 200.0])
                op = rng.randrange(3)
                if op == 0:
                    eng.on_geofence_enter(fence_enter(T1, t=t, loc=ORIGIN))
                elif op == 1:
                    det = detection("D1", east(rng.uniform(0, 500)), t=t)
                    corr = correlate_frame([det], store.snapshot(t), eng.config)
                    eng.on_frame(corr, {"D1": det})
                else:
                    eng.on_epoch(t, store.snapshot(t))
                cur = store.get(T1).verification_state
                assert cur in self.LEGAL[prev], (trial, prev, cur)
                prev = cur


class TestDarkVessel:
    def run_frames(self, eng, store, positions, start=0.0, step=10.0,
                   det_prefix="D"):
        """Feed one unmatched detection per frame; returns emitted events."""
        out = []
        for i, pos in enumerate(positions):
            t = start + i * step
            snap = store.snapshot(t)
            det = detection(f"{det_prefix}{i}", pos, t=t)
            corr = correlate_frame([det], snap, eng.config)
            eng.on_frame(corr, {det.detection_id: det})
            out += eng.dark_vessel_scan(corr, {det.detection_id: det}, snap)
        return out

    def test_three_consecutive_frames_fire_once(self):
        store = TrackStore()
        eng = FusionEngine(store, FusionConfig(dark_frames=3))
        evs = self.run_frames(eng, store, [east(5000.0)] * 6)
        assert [e.kind for e in evs] == [EventKind.DARK_VESSEL]
        assert evs[0].timestamp == 20.0  # third frame
        assert evs[0].details["frames"] == 3

    def test_streak_broken_resets(self):
        store = TrackStore()
        eng = FusionEngine(store, FusionConfig(dark_frames=3))
        p = east(5000.0)
        evs = []
        for i, pos in enumerate([p, p, None, p, p]):
            t = 10.0 * i
            snap = store.snapshot(t)
            if pos is None:
                corr = correlate_frame([], snap, eng.config)
                evs += eng.dark_vessel_scan(corr, {}, snap)
                continue
            det = detection(f"D{i}", pos, t=t)
            corr = correlate_frame([det], snap, eng.config)
            evs += eng.dark_vessel_scan(corr, {det.detection_id: det}, snap)
        assert evs == []  # never 3 in a row

    def test_moving_cluster_tracked_within_radius(self):
        store = TrackStore()
        eng = FusionEngine(store, FusionConfig(dark_frames=3, gate_m=200.0))
        # drifts 100 m per frame, well inside the 400 m association radius
        evs = self.run_frames(eng, store,
                              [east(5000.0 + 100.0 * i) for i in range(4)])
        assert [e.kind for e in evs] == [EventKind.DARK_VESSEL]

    def test_nearby_track_suppresses(self):
        store = TrackStore()
        add_track(store, T1, east(5300.0))  # 300 m from detections, inside 2*gate
        eng = FusionEngine(store, FusionConfig(dark_frames=3))
        evs = self.run_frames(eng, store, [east(5000.0)] * 5)
        assert evs == []

    def test_matched_detection_never_dark(self):
        store = TrackStore()
        add_track(store, T1, east(5000.0))
        eng = FusionEngine(store, FusionConfig(dark_frames=3))
        evs = self.run_frames(eng, store, [east(5010.0)] * 5)
        assert evs == []
