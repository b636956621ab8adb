import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import star_profiles
from reebsys.errors import ValidationError
from reebsys.numerics import Numerics
from reebsys.profiles import (EllipsoidProfile, LpProfile, SplineProfile,
                              profile_from_json)

HALF_PI = math.pi / 2


def central_diff(f, x, y, h=1e-6):
    return ((f(x + h, y) - f(x - h, y)) / (2 * h),
            (f(x, y + h) - f(x, y - h)) / (2 * h))


class TestGradient:
    def test_ellipsoid_gradient_constant(self):
        p = EllipsoidProfile(2.0, 5.0)
        for pt in [(0.3, 0.4), (2.0, 0.0), (0.0, 1.0), (7.0, 3.0)]:
            d1, d2 = p.gradient(*pt)
            assert d1 == pytest.approx(0.5, abs=1e-14)
            assert d2 == pytest.approx(0.2, abs=1e-14)

    def test_round_gradient_on_axis_vs_finite_differences(self, round_p):
        # oracle: central differences of sqrt(x^2 + y^2), frozen at (0, 1)
        f = lambda x, y: math.hypot(x, y)
        d1_fd, d2_fd = central_diff(f, 0.0, 1.0)
        d1, d2 = round_p.gradient(0.0, 1.0)
        assert d1 == pytest.approx(d1_fd, abs=1e-9)
        assert d2 == pytest.approx(d2_fd, abs=1e-9)
        assert (float(d1), float(d2)) == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_gradient_interior_vs_finite_differences(self, profile_matrix):
        for p in profile_matrix:
            for x, y in [(0.4, 0.2), (0.9, 1.1), (0.05, 0.6)]:
                d1_fd, d2_fd = central_diff(lambda u, v: float(p.value(u, v)), x, y)
                d1, d2 = p.gradient(x, y)
                assert float(d1) == pytest.approx(d1_fd, abs=2e-8)
                assert float(d2) == pytest.approx(d2_fd, abs=2e-8)

    def test_gradient_zero_homogeneous(self, profile_matrix):
        rng = np.random.default_rng(5)
        for p in profile_matrix:
            x = rng.uniform(0.05, 2.0, 20)
            y = rng.uniform(0.05, 2.0, 20)
            d1a, d2a = p.gradient(x, y)
            d1b, d2b = p.gradient(2 * x, 2 * y)
            assert np.max(np.abs(d1a - d1b)) < 1e-9
            assert np.max(np.abs(d2a - d2b)) < 1e-9

    def test_gradient_at_origin_rejected(self, round_p):
        with pytest.raises(ValidationError):
            round_p.gradient(0.0, 0.0)

    def test_negative_coordinates_rejected(self, round_p):
        with pytest.raises(ValidationError):
            round_p.value(-0.5, 1.0)


class TestArea:
    def test_ellipsoid_area_is_half_product(self):
        assert EllipsoidProfile(1.0, 2.0).quadrant_area() == pytest.approx(1.0, abs=1e-12)
        assert EllipsoidProfile(3.0, 5.0).quadrant_area() == pytest.approx(7.5, abs=1e-11)

    def test_round_area_quarter_disk(self, round_p):
        assert round_p.quadrant_area() == pytest.approx(math.pi / 4, abs=1e-10)

    def test_area_consistent_with_parameter_length(self, profile_matrix):
        for p in profile_matrix:
            assert p.two_area == pytest.approx(2 * p.quadrant_area(), rel=1e-12)


class TestAreaParametrization:
    def test_round_parameter_equals_angle(self, round_p):
        # sector area is theta/2, so t(theta) = theta
        for t in [math.pi / 8, math.pi / 4, 0.3, 1.2]:
            bp = round_p.boundary_point(t)
            assert bp.x == pytest.approx(math.cos(t), abs=1e-12)
            assert bp.y == pytest.approx(math.sin(t), abs=1e-12)

    def test_endpoints_hit_intercepts(self, profile_matrix):
        for p in profile_matrix:
            ic = p.intercepts()
            start = p.boundary_point(0.0)
            end = p.boundary_point(p.two_area)
            assert (start.x, start.y) == pytest.approx((ic.a, 0.0), abs=1e-10)
            assert (end.x, end.y) == pytest.approx((0.0, ic.b), abs=1e-10)

    def test_unit_ellipsoid_midpoint_on_diagonal(self, e11):
        bp = e11.boundary_point(0.5)
        assert (bp.x, bp.y) == pytest.approx((0.5, 0.5), abs=1e-12)

    def test_out_of_range_rejected(self, round_p):
        with pytest.raises(ValidationError):
            round_p.boundary_point(-0.1)
        with pytest.raises(ValidationError):
            round_p.boundary_point(round_p.two_area + 0.1)

    def test_hamilton_and_area_rate_residuals(self, profile_matrix):
        h = 1e-5
        rng = np.random.default_rng(11)
        for p in profile_matrix:
            ts = rng.uniform(0.05 * p.two_area, 0.95 * p.two_area, 100)
            xp, yp, _, _ = p.boundary_arrays(ts + h)
            xm, ym, _, _ = p.boundary_arrays(ts - h)
            x0, y0, d1, d2 = p.boundary_arrays(ts)
            xdot = (xp - xm) / (2 * h)
            ydot = (yp - ym) / (2 * h)
            assert np.max(np.abs(xdot + d2) + np.abs(ydot - d1)) < 1e-6
            assert np.max(np.abs(x0 * ydot - y0 * xdot - 1.0)) < 1e-6

    def test_euler_identity_on_boundary(self, profile_matrix):
        rng = np.random.default_rng(3)
        for p in profile_matrix:
            ts = rng.uniform(0.0, p.two_area, 500)
            x, y, d1, d2 = p.boundary_arrays(ts)
            assert np.max(np.abs(x * d1 + y * d2 - 1.0)) < 1e-8

    def test_boundary_points_on_unit_level_set(self, profile_matrix):
        rng = np.random.default_rng(4)
        for p in profile_matrix:
            ts = rng.uniform(0.0, p.two_area, 50)
            x, y, _, _ = p.boundary_arrays(ts)
            vals = p.value(x, y)
            assert np.max(np.abs(np.asarray(vals) - 1.0)) < 1e-10


class TestIntercepts:
    def test_values(self, round_p):
        ic35 = EllipsoidProfile(3.0, 5.0).intercepts()
        assert (ic35.a, ic35.b) == pytest.approx((3.0, 5.0))
        ic = round_p.intercepts()
        assert (ic.a, ic.b) == pytest.approx((1.0, 1.0), abs=1e-12)

    def test_euler_consistency_on_axes(self, profile_matrix):
        for p in profile_matrix:
            ic = p.intercepts()
            assert ic.a * ic.d1_at_a == pytest.approx(1.0, abs=1e-9)
            assert ic.b * ic.d2_at_b == pytest.approx(1.0, abs=1e-9)


class TestSampledProfiles:
    def test_spline_matches_analytic_round(self, round_p):
        theta = np.linspace(0.0, HALF_PI, 256)
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
        sp = SplineProfile(pts)
        assert sp.quadrant_area() == pytest.approx(round_p.quadrant_area(), abs=1e-7)
        ts = np.linspace(0.05, sp.two_area - 0.05, 40)
        d1s = sp.boundary_arrays(ts)[2]
        d1r = round_p.boundary_arrays(ts)[2]
        assert np.max(np.abs(d1s - d1r)) < 1e-4

    def test_corner_data_rejected_with_curvature_bound(self):
        theta = np.linspace(0.0, HALF_PI, 400)
        r = 1.0 / np.maximum(np.cos(theta), np.sin(theta))  # kink at pi/4
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        strict = Numerics(curvature_bound=100.0)
        with pytest.raises(ValidationError, match="curvature"):
            SplineProfile(pts, strict)
        smooth = np.column_stack([np.cos(theta), np.sin(theta)])
        SplineProfile(smooth, strict)  # smooth data passes the same bound

    def test_star_shape_violations_rejected(self):
        theta = np.linspace(0.0, HALF_PI, 50)
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
        with pytest.raises(ValidationError):
            SplineProfile(pts[5:])  # misses the x-axis end
        doubled = np.vstack([pts, pts[25]])
        with pytest.raises(ValidationError):
            SplineProfile(doubled)  # repeated polar angle


class TestJson:
    def test_roundtrip(self, profile_matrix):
        for p in profile_matrix:
            q = profile_from_json(p.to_json())
            assert q.kind == p.kind
            assert q.quadrant_area() == pytest.approx(p.quadrant_area(), rel=1e-9)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError, match="unknown"):
            profile_from_json({"kind": "ellipsoid", "a": 1.0, "b": 1.0, "c": 3})
        with pytest.raises(ValidationError, match="unknown"):
            profile_from_json({"kind": "lp", "p": 2.0, "radius": 1.0})

    def test_bad_values_rejected(self):
        with pytest.raises(ValidationError):
            profile_from_json({"kind": "ellipsoid", "a": -1.0, "b": 1.0})
        with pytest.raises(ValidationError):
            profile_from_json({"kind": "lp", "p": 0.5})
        with pytest.raises(ValidationError):
            profile_from_json(["not", "an", "object"])

    def test_numerics_overrides(self):
        p = profile_from_json({"kind": "ellipsoid", "a": 1.0, "b": 1.0,
                               "numerics": {"quad_tol": 1e-8}})
        assert p.numerics.quad_tol == 1e-8
        with pytest.raises(ValidationError):
            profile_from_json({"kind": "ellipsoid", "a": 1.0, "b": 1.0,
                               "numerics": {"nope": 1}})


@given(star_profiles())
def test_random_star_profiles_satisfy_euler(profile):
    ts = np.linspace(0.0, profile.two_area, 64)
    x, y, d1, d2 = profile.boundary_arrays(ts)
    assert np.max(np.abs(x * d1 + y * d2 - 1.0)) < 1e-8
    assert profile.quadrant_area() > 0


@given(st.floats(0.5, 3.0), st.floats(0.5, 3.0))
def test_ellipsoid_area_formula(a, b):
    assert EllipsoidProfile(a, b).quadrant_area() == pytest.approx(a * b / 2, rel=1e-10)


@given(st.floats(1.0, 5.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0),
       st.floats(0.0, 1.0))
def test_lp_gradient_zero_homogeneity(p, a, b, frac):
    profile = LpProfile(p, a, b)
    theta = frac * HALF_PI
    x, y = 0.7 * math.cos(theta) + 1e-6, 0.7 * math.sin(theta) + 1e-6
    d1a, d2a = profile.gradient(x, y)
    d1b, d2b = profile.gradient(3 * x, 3 * y)
    assert float(d1a) == pytest.approx(float(d1b), abs=1e-9)
    assert float(d2a) == pytest.approx(float(d2b), abs=1e-9)
