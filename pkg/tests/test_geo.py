import math

import pytest
from hypothesis import given, settings, strategies as st

from maricop.geo import (CoincidentPoints, EARTH_RADIUS_M, GeoError, GeoPoint,
                         GeofenceBox, KNOTS_TO_MPS, UnavailableKinematics,
                         dead_reckon, haversine_distance, initial_bearing,
                         normalize_lon, point_in_box)

from oracles import mp_bearing, mp_destination, mp_haversine

lats = st.floats(min_value=-89.0, max_value=89.0)
lons = st.floats(min_value=-180.0, max_value=180.0)
points = st.builds(GeoPoint, lats, lons)


def test_haversine_identity():
    p = GeoPoint(12.5, -33.0)
    assert haversine_distance(p, p) == 0.0


def test_haversine_antipodal():
    d = haversine_distance(GeoPoint(0, 0), GeoPoint(0, 180))
    assert d == pytest.approx(math.pi * EARTH_RADIUS_M, rel=1e-9)


def test_haversine_one_degree_equator():
    # independent closed form: one degree of arc = 2*pi*R/360
    expected = 2 * math.pi * EARTH_RADIUS_M / 360.0
    d = haversine_distance(GeoPoint(0, 0), GeoPoint(0, 1))
    assert d == pytest.approx(expected, rel=1e-12)
    assert d == pytest.approx(111_194.9, abs=0.1)


def test_dead_reckon_zero_speed():
    p = GeoPoint(10.0, 20.0)
    assert dead_reckon(p, 45.0, 0.0, 9999.0) == p


def test_dead_reckon_due_north_closed_form():
    p = dead_reckon(GeoPoint(0, 0), 0.0, 60.0, 3600.0)
    dist = 60.0 * KNOTS_TO_MPS * 3600.0
    exp_lat, exp_lon = mp_destination(0, 0, 0, dist)
    assert p.lat == pytest.approx(exp_lat, abs=1e-12)
    assert p.lon == pytest.approx(0.0, abs=1e-12)
    assert p.lat == pytest.approx(0.99933, abs=1e-4)


def test_dead_reckon_high_latitude_lon_scaling():
    # at 60N, cos(lat)=0.5: the same distance spans ~2x the equatorial dlon
    eq = dead_reckon(GeoPoint(0, 0), 90.0, 10.0, 600.0)
    hi = dead_reckon(GeoPoint(60, 0), 90.0, 10.0, 600.0)
    assert hi.lon / eq.lon == pytest.approx(2.0, rel=1e-3)
    exp_lat, exp_lon = mp_destination(60, 0, 90, 10.0 * KNOTS_TO_MPS * 600.0)
    assert hi.lat == pytest.approx(exp_lat, rel=1e-9)
    assert hi.lon == pytest.approx(exp_lon, rel=1e-9)


def test_dead_reckon_unavailable_kinematics():
    with pytest.raises(UnavailableKinematics):
        dead_reckon(GeoPoint(0, 0), None, 5.0, 60.0)
    with pytest.raises(UnavailableKinematics):
        dead_reckon(GeoPoint(0, 0), 90.0, None, 60.0)


def test_initial_bearing_cardinal():
    assert initial_bearing(GeoPoint(0, 0), GeoPoint(1, 0)) == pytest.approx(0.0, abs=1e-12)
    assert initial_bearing(GeoPoint(0, 0), GeoPoint(0, 1)) == pytest.approx(90.0, abs=1e-12)


def test_initial_bearing_oracle():
    got = initial_bearing(GeoPoint(10, 10), GeoPoint(20, 25))
    assert got == pytest.approx(mp_bearing(10, 10, 20, 25), rel=1e-9)


def test_initial_bearing_coincident():
    with pytest.raises(CoincidentPoints):
        initial_bearing(GeoPoint(5, 5), GeoPoint(5, 5))


def test_point_in_box():
    box = GeofenceBox("b", -1, 1, -2, 2)
    assert point_in_box(GeoPoint(0, 0), box)
    assert point_in_box(GeoPoint(1, 2), box)       # closed boundary
    assert not point_in_box(GeoPoint(0, 2.001), box)


def test_geofence_validation():
    with pytest.raises(GeoError):
        GeofenceBox("bad", 2, 1, 0, 1)
    with pytest.raises(GeoError):
        GeofenceBox("bad", 0, 1, 170, -170)  # antimeridian span rejected


def test_normalize_lon_range():
    assert normalize_lon(180.0) == 180.0
    assert normalize_lon(-180.0) == 180.0
    assert normalize_lon(540.0) == 180.0
    assert normalize_lon(-190.0) == 170.0


@given(points, points, points)
@settings(max_examples=200, deadline=None)
def test_triangle_inequality(a, b, c):
    ab = haversine_distance(a, b)
    bc = haversine_distance(b, c)
    ac = haversine_distance(a, c)
    assert ac <= ab + bc + 1e-6 * (ab + bc + 1.0)


@given(points, st.floats(min_value=0, max_value=360), st.floats(min_value=0.01, max_value=40),
       st.floats(min_value=1, max_value=3600))
@settings(max_examples=200, deadline=None)
def test_dead_reckon_distance_consistency(p, bearing, sog, dt):
    q = dead_reckon(p, bearing, sog, dt)
    expected = sog * KNOTS_TO_MPS * dt
    assert haversine_distance(p, q) == pytest.approx(expected, rel=1e-9, abs=1e-6)


@given(st.floats(min_value=-179, max_value=179), st.floats(min_value=-179, max_value=179))
@settings(max_examples=100, deadline=None)
def test_equatorial_reciprocal_bearing(lon1, lon2):
    a, b = GeoPoint(0, lon1), GeoPoint(0, lon2)
    if a == b or abs(lon1 - lon2) >= 180:
        return
    fwd = initial_bearing(a, b)
    back = initial_bearing(b, a)
    assert abs(fwd - back) == pytest.approx(180.0, abs=1e-9)


@given(points, points)
@settings(max_examples=300, deadline=None)
def test_haversine_matches_mp_oracle(a, b):
    got = haversine_distance(a, b)
    exp = float(mp_haversine(a.lat, a.lon, b.lat, b.lon))
    assert got == pytest.approx(exp, rel=1e-6, abs=1e-6)
