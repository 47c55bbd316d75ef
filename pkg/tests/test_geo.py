from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from routemirror.geo import (
    GeoConfig,
    LatLng,
    MEAN_EARTH_RADIUS_M,
    haversine_distance,
    matched_fraction,
    point_at_arc_length,
    points_similar,
    polyline_length,
    resample_polyline,
)

# First two observation coordinates of the bundled example problem; expected
# distance frozen from an independent spherical-law-of-cosines oracle.
OBS_A = LatLng(51.502179, -0.1746681)
OBS_B = LatLng(51.511215, -0.0732266)
OBS_DISTANCE_M = 7092.337386630478


def vector_angle_oracle(a: LatLng, b: LatLng) -> float:
    """Independent great-circle oracle: central angle via 3D vectors and atan2."""

    def unit(p: LatLng):
        lat, lng = math.radians(p.lat), math.radians(p.lng)
        return (
            math.cos(lat) * math.cos(lng),
            math.cos(lat) * math.sin(lng),
            math.sin(lat),
        )

    ux, uy, uz = unit(a)
    vx, vy, vz = unit(b)
    cx, cy, cz = uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx
    cross = math.sqrt(cx * cx + cy * cy + cz * cz)
    dot = ux * vx + uy * vy + uz * vz
    return math.atan2(cross, dot)


finite_lats = st.floats(min_value=-90.0, max_value=90.0, allow_nan=False)
finite_lngs = st.floats(min_value=-179.999, max_value=180.0, allow_nan=False)
latlngs = st.builds(LatLng, finite_lats, finite_lngs)


class TestLatLng:
    def test_rejects_out_of_range_latitude(self):
        with pytest.raises(ValueError):
            LatLng(90.0001, 0.0)
        with pytest.raises(ValueError):
            LatLng(-91.0, 0.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            LatLng(float("nan"), 0.0)
        with pytest.raises(ValueError):
            LatLng(0.0, float("inf"))

    @pytest.mark.parametrize(
        "raw, expected",
        [(181.0, -179.0), (-181.0, 179.0), (360.0, 0.0), (-180.0, 180.0), (540.0, 180.0), (180.0, 180.0)],
    )
    def test_normalizes_longitude(self, raw, expected):
        assert LatLng(0.0, raw).lng == pytest.approx(expected, abs=1e-12)


class TestHaversine:
    def test_identical_points_are_zero(self):
        p = LatLng(51.502179, -0.1746681)
        assert haversine_distance(p, p) == 0.0

    def test_antipodal_equator_pair_is_half_circumference(self):
        d = haversine_distance(LatLng(0, 0), LatLng(0, 180))
        assert d == pytest.approx(math.pi * MEAN_EARTH_RADIUS_M, rel=1e-9)

    def test_observation_pair_matches_frozen_oracle_value(self):
        d = haversine_distance(OBS_A, OBS_B)
        assert d == pytest.approx(OBS_DISTANCE_M, rel=1e-6)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            haversine_distance(OBS_A, OBS_B, radius_m=0.0)

    def test_agreement_with_independent_oracle_on_seeded_pairs(self):
        rng = random.Random(42)
        for _ in range(1000):
            a = LatLng(rng.uniform(-89.9, 89.9), rng.uniform(-180.0, 180.0))
            b = LatLng(rng.uniform(-89.9, 89.9), rng.uniform(-180.0, 180.0))
            expected = MEAN_EARTH_RADIUS_M * vector_angle_oracle(a, b)
            got = haversine_distance(a, b)
            assert got == pytest.approx(expected, rel=1e-6, abs=1e-6)

    @given(latlngs, latlngs)
    @settings(max_examples=200, deadline=None)
    def test_symmetry_nonnegativity_and_bound(self, a, b):
        d_ab = haversine_distance(a, b)
        d_ba = haversine_distance(b, a)
        assert d_ab == d_ba
        assert d_ab >= 0.0
        assert d_ab <= math.pi * MEAN_EARTH_RADIUS_M

    def test_antimeridian_wraparound(self):
        a = LatLng(0.0, 179.9)
        b = LatLng(0.0, -179.9)
        # 0.2 degrees across the date line, not 359.8 degrees around.
        expected = math.radians(0.2) * MEAN_EARTH_RADIUS_M
        assert haversine_distance(a, b) == pytest.approx(expected, rel=1e-9)


class TestPointsSimilar:
    def test_identical_points_within_any_threshold(self):
        p = LatLng(12.0, 34.0)
        assert points_similar(p, p, GeoConfig(similarity_threshold_m=50.0))

    def test_antipodal_points_are_not_similar(self):
        cfg = GeoConfig(similarity_threshold_m=50.0)
        assert not points_similar(LatLng(0, 0), LatLng(0, 180), cfg)

    def test_forty_five_meter_pair_with_fifty_meter_threshold(self):
        # Oracle distance for this pair is 44.478 m (law of cosines), below 50 m.
        a = LatLng(51.5000, -0.1000)
        b = LatLng(51.5004, -0.1000)
        assert haversine_distance(a, b) == pytest.approx(44.47803374306945, rel=1e-6)
        assert points_similar(a, b, GeoConfig(similarity_threshold_m=50.0))
        assert not points_similar(a, b, GeoConfig(similarity_threshold_m=40.0))

    def test_config_rejects_nonpositive_values(self):
        with pytest.raises(ValueError):
            GeoConfig(similarity_threshold_m=0.0)
        with pytest.raises(ValueError):
            GeoConfig(sphere_radius_m=-1.0)
        with pytest.raises(ValueError):
            GeoConfig(resample_spacing_m=0.0)


class TestResample:
    def test_empty_polyline_is_an_error(self):
        with pytest.raises(ValueError, match="empty polyline"):
            resample_polyline([], 25.0)

    def test_single_point_returns_itself(self):
        p = LatLng(1.0, 2.0)
        assert resample_polyline([p], 25.0) == [p]

    def test_hundred_meter_segment_quartered(self):
        a = LatLng(51.5, -0.1)
        b = LatLng(51.5 + math.degrees(100.0 / MEAN_EARTH_RADIUS_M), -0.1)
        seg = haversine_distance(a, b)
        out = resample_polyline([a, b], seg / 4.0)
        assert len(out) == 5
        assert out[0] == a and out[-1] == b
        gaps = [haversine_distance(p, q) for p, q in zip(out, out[1:])]
        for gap in gaps:
            assert gap == pytest.approx(seg / 4.0, abs=1e-6)

    def test_preserves_endpoints_and_total_length(self):
        rng = random.Random(7)
        base = LatLng(48.0, 11.0)
        for _ in range(25):
            points = [base]
            for _ in range(rng.randint(1, 8)):
                prev = points[-1]
                points.append(
                    LatLng(
                        prev.lat + rng.uniform(-0.002, 0.002),
                        prev.lng + rng.uniform(-0.002, 0.002),
                    )
                )
            out = resample_polyline(points, 25.0)
            assert out[0] == points[0] and out[-1] == points[-1]
            assert polyline_length(out) == pytest.approx(polyline_length(points), rel=1e-6)

    def test_gaps_never_exceed_spacing(self):
        points = [LatLng(0.0, 0.0), LatLng(0.003, 0.001), LatLng(0.001, 0.004)]
        out = resample_polyline(points, 30.0)
        for p, q in zip(out, out[1:]):
            assert haversine_distance(p, q) <= 30.0 + 1e-6

    def test_rejects_nonpositive_spacing(self):
        with pytest.raises(ValueError):
            resample_polyline([LatLng(0, 0), LatLng(0, 1)], 0.0)


class TestPointAtArcLength:
    def test_zero_distance_is_the_start(self):
        pts = [LatLng(0, 0), LatLng(0, 0.01)]
        assert point_at_arc_length(pts, 0.0) == pts[0]

    def test_beyond_total_clamps_to_end(self):
        pts = [LatLng(0, 0), LatLng(0, 0.01)]
        assert point_at_arc_length(pts, 1e9) == pts[-1]

    def test_midpoint_is_equidistant(self):
        pts = [LatLng(0, 0), LatLng(0, 0.01)]
        total = polyline_length(pts)
        mid = point_at_arc_length(pts, total / 2.0)
        assert haversine_distance(pts[0], mid) == pytest.approx(total / 2.0, rel=1e-9)


class TestMatchedFraction:
    def test_identical_sets_fully_match(self):
        cfg = GeoConfig()
        pts = [LatLng(51.5, -0.1), LatLng(51.501, -0.101)]
        assert matched_fraction(pts, pts, cfg) == 1.0

    def test_disjoint_sets_do_not_match(self):
        cfg = GeoConfig(similarity_threshold_m=50.0)
        probe = [LatLng(51.5, -0.1)]
        reference = [LatLng(51.6, -0.1)]
        assert matched_fraction(probe, reference, cfg) == 0.0

    def test_agrees_with_scalar_similarity(self):
        rng = random.Random(3)
        cfg = GeoConfig(similarity_threshold_m=120.0)
        base = LatLng(40.0, -3.0)
        probe = [
            LatLng(base.lat + rng.uniform(-0.002, 0.002), base.lng + rng.uniform(-0.002, 0.002))
            for _ in range(17)
        ]
        reference = [
            LatLng(base.lat + rng.uniform(-0.002, 0.002), base.lng + rng.uniform(-0.002, 0.002))
            for _ in range(13)
        ]
        expected = sum(
            1 for p in probe if any(points_similar(p, q, cfg) for q in reference)
        ) / len(probe)
        assert matched_fraction(probe, reference, cfg) == pytest.approx(expected, abs=1e-12)

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            matched_fraction([], [LatLng(0, 0)], GeoConfig())
