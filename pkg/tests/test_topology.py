import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reebsys.errors import (ResolutionError, StatisticalError,
                            ValidationError)
from reebsys.flows import FlowPoint, make_trajectory
from reebsys.systolic import (axis_orbit, contact_volume, enumerate_tori,
                              pairing_orbit_orbit)
from reebsys.topology import (ClosedCurve, action_linking_verify,
                              asymptotic_rate, axis_disk, check_statistical,
                              crossing_count, linking_number, page_surface,
                              signed_sweep_count, toric_orbit_curve)

PI = math.pi


class TestCrossings:
    def test_unit_ellipsoid_one_sweep_per_period(self, e11):
        traj = make_trajectory(e11, FlowPoint(0.5, 1.0, 2.0), PI)
        rec = crossing_count(traj, axis_disk(e11, "y", angle=0.3))
        assert len(rec.times) == 1
        assert rec.signs.tolist() == [1]
        assert 0 < rec.times[0] <= PI
        assert rec.rate == pytest.approx(1 / PI)

    def test_zero_duration(self, e11):
        traj = make_trajectory(e11, FlowPoint(0.5, 1.0, 2.0), 0.0)
        rec = crossing_count(traj, axis_disk(e11, "y"))
        assert len(rec.times) == 0

    def test_torus_orbit_crosses_p_times(self, round_p):
        t23 = [t for t in enumerate_tori(round_p, 3) if (t.p, t.q) == (2, 3)][0]
        traj = make_trajectory(round_p, FlowPoint(t23.t, 0.3, 0.7), t23.period)
        rec = crossing_count(traj, axis_disk(round_p, "y", angle=0.1))
        assert int(rec.signs.sum()) == 2
        rec_x = crossing_count(traj, axis_disk(round_p, "x", angle=0.1))
        assert int(rec_x.signs.sum()) == 3

    def test_orientation_flip_negates(self, round_p):
        traj = make_trajectory(round_p, FlowPoint(0.4, 0.0, 0.0), 7.0)
        plus = crossing_count(traj, axis_disk(round_p, "y", angle=1.0))
        minus = crossing_count(traj, axis_disk(round_p, "y", angle=1.0).flipped())
        assert np.array_equal(plus.times, minus.times)
        assert np.array_equal(plus.signs, -minus.signs)

    def test_iterate_covariance(self, round_p):
        t11 = enumerate_tori(round_p, 1)[0]
        disk = axis_disk(round_p, "y", angle=0.2)
        one = crossing_count(make_trajectory(
            round_p, FlowPoint(t11.t, 0.5, 0.5), t11.period), disk)
        two = crossing_count(make_trajectory(
            round_p, FlowPoint(t11.t, 0.5, 0.5), 2 * t11.period), disk)
        assert int(two.signs.sum()) == 2 * int(one.signs.sum())

    def test_trajectory_inside_surface_rejected(self, round_p):
        # at the y-intercept the first angle is frozen
        t_end = round_p.two_area
        traj = make_trajectory(round_p, FlowPoint(t_end, 0.7, 0.1), 5.0)
        assert abs(traj.omega1) < 1e-9
        with pytest.raises(ValidationError, match="inside"):
            crossing_count(traj, axis_disk(round_p, "y", angle=0.7))
        ok = crossing_count(traj, axis_disk(round_p, "y", angle=1.9))
        assert len(ok.times) == 0

    @given(st.floats(0, 2 * PI), st.floats(-8, 8), st.floats(0, 40),
           st.floats(0, 40), st.floats(0, 2 * PI))
    def test_sweep_count_additive(self, phase0, omega, d1, d2, star):
        mid = phase0 + omega * d1
        end = mid + omega * d2
        total = signed_sweep_count(phase0, end, star)
        assert total == signed_sweep_count(phase0, mid, star) + \
            signed_sweep_count(mid, end, star)


class TestAsymptoticRate:
    def test_rational_orbit_rate_exact(self, round_p):
        t23 = [t for t in enumerate_tori(round_p, 3) if (t.p, t.q) == (2, 3)][0]
        est = asymptotic_rate(round_p, FlowPoint(t23.t, 0.3, 0.7),
                              axis_disk(round_p, "y"), horizon=100.0)
        assert est.rate == pytest.approx(2 / t23.period, abs=1e-14)
        assert not est.used_fallback

    def test_irrational_rate_against_sweep_rate(self, round_p):
        disk = axis_disk(round_p, "y")
        for frac in (0.15, 0.37, 0.52, 0.81):
            t = frac * round_p.two_area
            _, _, d1, _ = round_p.boundary_arrays(t)
            est = asymptotic_rate(round_p, FlowPoint(t, 0.0, 0.0), disk,
                                  horizon=1000.0)
            assert abs(est.rate - d1 / PI) <= est.error_bar
            assert abs(est.rate - d1 / PI) < 1e-4

    def test_irrational_rate_second_angle(self, round_p):
        # the x-axis disk counts theta2 sweeps; the near-return chord can
        # contribute a crossing there, and the closed-loop count still
        # tracks the sweep rate
        disk = axis_disk(round_p, "x")
        for frac in (0.2, 0.45, 0.7):
            t = frac * round_p.two_area
            _, _, _, d2 = round_p.boundary_arrays(t)
            est = asymptotic_rate(round_p, FlowPoint(t, 0.0, 0.0), disk,
                                  horizon=1000.0)
            assert abs(est.rate - d2 / PI) <= est.error_bar

    def test_orientation_flip(self, round_p):
        pt = FlowPoint(0.37 * round_p.two_area, 0.0, 0.0)
        plus = asymptotic_rate(round_p, pt, axis_disk(round_p, "y"), 500.0)
        minus = asymptotic_rate(round_p, pt, axis_disk(round_p, "y").flipped(),
                                500.0)
        assert minus.rate == pytest.approx(-plus.rate, abs=1e-15)

    def test_no_return_raises_and_fallback_works(self, round_p):
        # near the y-intercept the first rate is tiny: no return in time 1
        t = round_p.two_area * (1 - 1e-9)
        pt = FlowPoint(t, 0.0, 0.0)
        with pytest.raises(ResolutionError, match="horizon"):
            asymptotic_rate(round_p, pt, axis_disk(round_p, "y"), horizon=1.0)
        est = asymptotic_rate(round_p, pt, axis_disk(round_p, "y"),
                              horizon=1.0, on_no_return="horizon")
        assert est.used_fallback
        assert est.return_time == 1.0


class TestActionLinkingVerify:
    def test_ellipsoid_exact(self, e12):
        for axis, expected in (("y", 2 * PI), ("x", PI)):
            rep = action_linking_verify(e12, axis_disk(e12, axis),
                                        n_samples=2000, horizon=1000.0, seed=5)
            assert abs(rep.lhs - rep.rhs) < 1e-10
            assert rep.rhs == pytest.approx(expected, abs=1e-10)
            assert rep.stderr == 0.0 and rep.z == 0.0

    def test_round_statistically_consistent(self, round_p):
        rep = action_linking_verify(round_p, axis_disk(round_p, "y"),
                                    n_samples=20000, horizon=1000.0, seed=5)
        assert rep.rhs == pytest.approx(PI, abs=1e-12)
        assert rep.z <= 4.0
        check_statistical(rep, 4.0)
        with pytest.raises(StatisticalError):
            check_statistical(rep, rep.z / 2)

    def test_orientation_flip_negates_both_sides(self, round_p):
        kw = dict(n_samples=5000, horizon=500.0, seed=8)
        plus = action_linking_verify(round_p, axis_disk(round_p, "y"), **kw)
        minus = action_linking_verify(round_p, axis_disk(round_p, "y").flipped(),
                                      **kw)
        assert minus.lhs == pytest.approx(-plus.lhs, abs=1e-13)
        assert minus.rhs == pytest.approx(-plus.rhs, abs=1e-13)
        assert minus.z == pytest.approx(plus.z, abs=1e-9)

    def test_seed_reproducibility_and_thread_invariance(self, round_p):
        kw = dict(n_samples=4000, horizon=500.0, seed=21)
        a = action_linking_verify(round_p, axis_disk(round_p, "y"), **kw)
        b = action_linking_verify(round_p, axis_disk(round_p, "y"), **kw)
        c = action_linking_verify(round_p, axis_disk(round_p, "y"), threads=4,
                                  **kw)
        assert (a.lhs, a.stderr) == (b.lhs, b.stderr)
        assert (a.lhs, a.stderr) == (c.lhs, c.stderr)

    def test_pairing_definition_cross_check(self, round_p, spline_p):
        # crossings * vol / (T * T(disk)) against the closed-form pairing
        for p in (round_p, spline_p):
            disk = axis_disk(p, "y")
            vol = contact_volume(p)
            for torus in enumerate_tori(p, 4)[:8]:
                traj = make_trajectory(p, FlowPoint(torus.t, 0.2, 1.1),
                                       torus.period)
                crossings = int(crossing_count(traj, disk).signs.sum())
                rho = crossings * vol / (torus.period * disk.contact_area)
                oracle = pairing_orbit_orbit(p, torus, axis_orbit(p, "y"))
                assert rho == pytest.approx(oracle, rel=1e-8)


class TestClosedCurves:
    def test_validation(self):
        open_arc = np.column_stack([np.cos(np.linspace(0, 3, 32)),
                                    np.sin(np.linspace(0, 3, 32)),
                                    np.zeros(32), np.zeros(32)])
        with pytest.raises(ValidationError, match="closed"):
            ClosedCurve.from_points(open_arc)
        sparse = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 0, 0],
                           [0, -1, 0, 0], [1, 0, 0, 0]], float)
        with pytest.raises(ValidationError, match="chord"):
            ClosedCurve.from_points(sparse, chord_bound=0.5)

    def test_radial_projection_normalizes(self):
        ang = np.linspace(0, 2 * PI, 64)
        pts = 3.0 * np.column_stack([np.cos(ang), np.sin(ang),
                                     np.zeros(64), np.zeros(64)])
        pts[-1] = pts[0]
        curve = ClosedCurve.from_points(pts)
        assert np.allclose(np.linalg.norm(curve.points, axis=1), 1.0)


class TestLinking:
    def test_hopf_link(self, e11):
        c1 = toric_orbit_curve(e11, axis_orbit(e11, "y"), 200)
        c2 = toric_orbit_curve(e11, axis_orbit(e11, "x"), 200)
        res = linking_number(c1, c2)
        assert res.link == 1
        assert res.residual < 1e-9

    def test_torus_orbit_vs_axis_orbits(self, round_p):
        t23 = [t for t in enumerate_tori(round_p, 3) if (t.p, t.q) == (2, 3)][0]
        c = toric_orbit_curve(round_p, t23, 1024)
        cy = toric_orbit_curve(round_p, axis_orbit(round_p, "y"), 200)
        cx = toric_orbit_curve(round_p, axis_orbit(round_p, "x"), 200)
        assert linking_number(c, cy).link == 2   # winds twice in theta1
        assert linking_number(c, cx).link == 3   # winds thrice in theta2

    def test_two_torus_orbits(self, round_p):
        tori = enumerate_tori(round_p, 2)
        t12 = [t for t in tori if (t.p, t.q) == (1, 2)][0]
        t21 = [t for t in tori if (t.p, t.q) == (2, 1)][0]
        res = linking_number(toric_orbit_curve(round_p, t12, 1024),
                             toric_orbit_curve(round_p, t21, 1024))
        # the (1, 2) torus sits closer to the y-intercept orbit: the link is
        # (p of the farther) * (q of the nearer) = 2 * 2
        assert res.link == 4

    def test_disjointness_enforced(self, round_p):
        t11 = enumerate_tori(round_p, 1)[0]
        c = toric_orbit_curve(round_p, t11, 256)
        with pytest.raises(ValidationError, match="within"):
            linking_number(c, c)

    def test_same_torus_distinct_orbits(self, round_p):
        # two orbits on one torus are disjoint and link like nearby tori
        t11 = enumerate_tori(round_p, 1)[0]
        c1 = toric_orbit_curve(round_p, t11, 512, phase2=0.0)
        c2 = toric_orbit_curve(round_p, t11, 512, phase2=PI)
        assert linking_number(c1, c2).link == 1

    def test_parallel_tori_on_nonconvex_profile(self):
        # two distinct tori of the same class on a non-convex boundary
        from reebsys.profiles import perturbed_ellipsoid_profile
        bumpy = perturbed_ellipsoid_profile(1.0, 1.0, (0.06, -0.05), n=256)
        pair = [t for t in enumerate_tori(bumpy, 1) if (t.p, t.q) == (1, 1)]
        assert len(pair) == 2
        res = linking_number(toric_orbit_curve(bumpy, pair[0], 768),
                             toric_orbit_curve(bumpy, pair[1], 768))
        assert res.link == 1
        rho = pairing_orbit_orbit(bumpy, pair[0], pair[1])
        vol = contact_volume(bumpy)
        assert rho == pytest.approx(
            res.link * vol / (pair[0].period * pair[1].period), rel=1e-8)


class TestSurfaces:
    def test_contact_area_matches_boundary_period(self, profile_matrix):
        for p in profile_matrix:
            for axis in ("x", "y"):
                disk = axis_disk(p, axis)
                assert disk.contact_area == pytest.approx(
                    axis_orbit(p, axis).period, abs=1e-10)

    def test_flip_negates_area(self, round_p):
        disk = axis_disk(round_p, "y")
        assert disk.flipped().contact_area == -disk.contact_area

    def test_page_surface(self):
        page = page_surface(angle=0.25)
        assert page.contact_area == pytest.approx(PI)
        with pytest.raises(ValidationError):
            page.phase_index
