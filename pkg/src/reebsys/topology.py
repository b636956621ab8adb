"""Surfaces, signed crossings, asymptotic intersection rates and linking.

The surfaces handled here are the disks bounded by the two axis orbits,
{theta1 = const} bounded by the y-axis orbit and {theta2 = const} bounded
by the x-axis orbit, together with the page {time = const} of a suspension
(handled by the disk-map module through the same sweep counter).  Their
contact area equals the period of the boundary orbit, by Stokes.

For the linear toric flow a trajectory crosses an axis disk exactly when
the corresponding angle sweeps through the disk's angle, so signed counts
are floor differences of the angle history and are exact.  Asymptotic
crossing rates are estimated along near-return times of the trajectory,
located through continued-fraction convergents of the rotation ratio; the
loop is closed by the short geodesic chord on the torus, whose crossing
contribution is included and bounded by one.

The Liouville-averaged crossing rate with a surface, scaled by the contact
volume, recovers the contact area of the surface; action_linking_verify
checks this identity by seeded Monte Carlo and reports a z score.

Linking numbers of closed curves on the 3-sphere are computed by
stereographic projection followed by the exact solid-angle (Gauss) sum
over polyline segment pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (NumericalError, ResolutionError, StatisticalError,
                     ValidationError)
from .numerics import wrap_to_pi
from .profiles import ToricProfile
from .systolic import AxisOrbit, RationalTorus, axis_orbit, contact_volume
from .flows import RNG_NAME, FlowPoint, Trajectory, liouville_sample

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SeifertSurfaceSpec:
    """An oriented surface adapted to the flow with its contact area.

    kind 'axis-disk-y' is {theta1 = angle}, bounded by the y-axis orbit;
    kind 'axis-disk-x' is {theta2 = angle}, bounded by the x-axis orbit;
    kind 'page' is a {time = angle} slice of a suspension.  Flipping the
    orientation negates the contact area and every signed crossing, so
    pairings with the surface are orientation independent.
    """

    kind: str
    angle: float
    orientation: int
    contact_area: float

    def flipped(self) -> "SeifertSurfaceSpec":
        return SeifertSurfaceSpec(self.kind, self.angle, -self.orientation,
                                  -self.contact_area)

    @property
    def phase_index(self) -> int:
        if self.kind == "axis-disk-y":
            return 0            # crossings sweep theta1
        if self.kind == "axis-disk-x":
            return 1            # crossings sweep theta2
        raise ValidationError(f"surface kind {self.kind!r} has no torus phase")


def axis_disk(profile: ToricProfile, axis: str, angle: float = 0.0,
              orientation: int = 1) -> SeifertSurfaceSpec:
    """The disk bounded by the orbit over the x- or y-intercept.

    Its contact area equals the period of the boundary orbit (pi times the
    opposite intercept), signed by orientation.
    """
    if orientation not in (1, -1):
        raise ValidationError("orientation must be +1 or -1")
    boundary = axis_orbit(profile, axis)
    kind = "axis-disk-y" if axis == "y" else "axis-disk-x"
    return SeifertSurfaceSpec(kind, float(angle), orientation,
                              orientation * boundary.period)


def page_surface(angle: float = 0.0, orientation: int = 1,
                 contact_area: float = math.pi) -> SeifertSurfaceSpec:
    """A page {time = angle} of a suspension over the unit disk."""
    if orientation not in (1, -1):
        raise ValidationError("orientation must be +1 or -1")
    return SeifertSurfaceSpec("page", float(angle), orientation,
                              orientation * contact_area)


def signed_sweep_count(phase_a, phase_b, phase_star, period: float = TWO_PI):
    """Signed number of sweeps of a linear phase across phase_star.

    Counts solutions of phase = phase_star (mod period) on the half-open
    phase interval (phase_a, phase_b], with sign from the sweep direction.
    Being a floor difference, it is exactly additive over concatenations
    that share the intermediate phase value.
    """
    fa = np.floor((np.asarray(phase_a, float) - phase_star) / period)
    fb = np.floor((np.asarray(phase_b, float) - phase_star) / period)
    return fb - fa


@dataclass(frozen=True)
class CrossingRecord:
    times: np.ndarray
    signs: np.ndarray
    duration: float
    rate: float


def crossing_count(traj: Trajectory, surface: SeifertSurfaceSpec) -> CrossingRecord:
    """All crossings of a trajectory with an axis disk, with times and signs.

    Exact for the linear flow: crossing times solve a linear congruence.
    A trajectory lying inside the surface (zero rate, starting on the
    disk's angle) is degenerate and rejected.
    """
    idx = surface.phase_index
    phase0 = (traj.start.theta1, traj.start.theta2)[idx]
    omega = (traj.omega1, traj.omega2)[idx]
    if abs(omega) * max(traj.duration, 1.0) < 1e-12:
        if abs(wrap_to_pi(phase0 - surface.angle)) < 1e-9:
            raise ValidationError("trajectory lies inside the surface "
                                  "(zero sweep rate on the surface angle)")
        times = np.empty(0)
        signs = np.empty(0, dtype=int)
        return CrossingRecord(times, signs, traj.duration, 0.0)
    phase1 = phase0 + omega * traj.duration
    fa = math.floor((phase0 - surface.angle) / TWO_PI)
    fb = math.floor((phase1 - surface.angle) / TWO_PI)
    if omega > 0:
        ks = np.arange(fa + 1, fb + 1)
    else:
        ks = np.arange(fa, fb, -1)
    times = (surface.angle + TWO_PI * ks - phase0) / omega
    sign = surface.orientation * (1 if omega > 0 else -1)
    signs = np.full(times.shape, sign, dtype=int)
    total = int(signs.sum())
    rate = total / traj.duration if traj.duration > 0 else 0.0
    return CrossingRecord(times, signs, traj.duration, float(rate))


# ---------------------------------------------------------------------------
# near-return times by continued-fraction convergents


def _best_convergents(alpha, q_cap):
    """Largest continued-fraction convergent denominators q <= q_cap.

    alpha and q_cap are arrays.  Returns (p, q, err) with err = |q*alpha - p|;
    lanes with q_cap < 1 come back with q = 0 (no admissible return).
    """
    alpha = np.asarray(alpha, float)
    q_cap = np.asarray(q_cap, float)
    n = alpha.shape[0]
    a0 = np.floor(alpha)
    p_prev, q_prev = np.ones(n), np.zeros(n)
    p_cur, q_cur = a0.copy(), np.ones(n)
    x = alpha - a0
    feasible = q_cap >= 1.0
    best_p = np.where(feasible, p_cur, 0.0)
    best_q = np.where(feasible, 1.0, 0.0)
    active = feasible & (x > 1e-15)
    for _ in range(80):
        if not active.any():
            break
        inv = np.where(active, 1.0 / np.where(active, x, 1.0), 0.0)
        a = np.floor(inv)
        x_next = inv - a
        p_next = a * p_cur + p_prev
        q_next = a * q_cur + q_prev
        ok = active & (q_next <= q_cap)
        best_p = np.where(ok, p_next, best_p)
        best_q = np.where(ok, q_next, best_q)
        p_prev = np.where(ok, p_cur, p_prev)
        q_prev = np.where(ok, q_cur, q_prev)
        p_cur = np.where(ok, p_next, p_cur)
        q_cur = np.where(ok, q_next, q_cur)
        x = np.where(ok, x_next, x)
        active = ok & (x > 1e-15)
    err = np.abs(best_q * alpha - best_p)
    return best_p, best_q, err


def _batch_rates(profile, samples, surface, horizon, return_tol,
                 allow_fallback):
    """Per-sample signed crossing rates at near-return times.

    samples is an (n, 3) array of (t, theta1, theta2).  Returns
    (rates, return_times, fallback_mask).  Samples without an admissible
    near-return either raise (allow_fallback False) or fall back to the
    homologically closed loop at the full horizon, whose rate error is
    bounded by 2/horizon.
    """
    t = samples[:, 0]
    _, _, d1, d2 = profile.boundary_arrays(t)
    w1 = 2.0 * np.asarray(d1, float)
    w2 = 2.0 * np.asarray(d2, float)

    usable = w1 > 1e-12
    alpha = np.where(usable, w2 / np.where(usable, w1, 1.0), 0.0)
    q_cap = np.where(usable, w1 * horizon / TWO_PI, 0.0)
    _, q_c, err = _best_convergents(alpha, q_cap)

    with np.errstate(divide="ignore", invalid="ignore"):
        mult = np.where(q_c >= 1, np.floor(q_cap / np.where(q_c >= 1, q_c, 1.0)), 0.0)
    mult = np.maximum(mult, 1.0)
    angle_err = TWO_PI * mult * err
    over_tol = angle_err > return_tol
    mult = np.where(over_tol, 1.0, mult)
    angle_err = np.where(over_tol, TWO_PI * err, angle_err)
    good = usable & (q_c >= 1.0) & (angle_err <= return_tol)

    if not allow_fallback and not good.all():
        bad = int(np.argmin(good))
        raise ResolutionError(
            f"no near-return within horizon {horizon:g} at tolerance "
            f"{return_tol:g} for the torus at t = {t[bad]:.6g}; "
            "increase the horizon")

    t_ret = np.where(good, TWO_PI * mult * np.maximum(q_c, 1.0)
                     / np.where(usable, w1, 1.0), horizon)

    idx = surface.phase_index
    omega = (w1, w2)[idx]
    # the loop closed by the short chord winds an exact integer number of
    # times, and a closed loop crosses the disk its winding number of times
    # whatever the disk angle and start phase; rounding makes this exact
    sweep = omega * t_ret
    chord = wrap_to_pi(-sweep)
    counts = np.round((sweep + chord) / TWO_PI)
    rates = surface.orientation * counts / t_ret
    return rates, t_ret, ~good


@dataclass(frozen=True)
class RateEstimate:
    rate: float
    error_bar: float
    return_time: float
    used_fallback: bool


def asymptotic_rate(profile: ToricProfile, point: FlowPoint,
                    surface: SeifertSurfaceSpec, horizon: float,
                    return_tol: float = 0.1,
                    on_no_return: str = "raise") -> RateEstimate:
    """Asymptotic signed crossing rate of one trajectory with a surface.

    The rate is the crossing count of the loop closed at the largest
    admissible near-return time up to the horizon, divided by that time.
    For a rational torus this is exact (p/period for the y-axis disk).
    The error bar combines the 1/t resolution with the chord's at most
    one crossing.

    on_no_return selects the behaviour when no near-return exists within
    the horizon: 'raise' (default) or 'horizon', which closes the loop at
    the full horizon instead.
    """
    if horizon <= 0:
        raise ValidationError("horizon must be positive")
    if on_no_return not in ("raise", "horizon"):
        raise ValidationError("on_no_return must be 'raise' or 'horizon'")
    samples = np.array([[point.t, point.theta1, point.theta2]])
    rates, t_ret, fallback = _batch_rates(
        profile, samples, surface, horizon, return_tol,
        allow_fallback=(on_no_return == "horizon"))
    err = 2.0 / float(t_ret[0])
    return RateEstimate(float(rates[0]), err, float(t_ret[0]), bool(fallback[0]))


@dataclass(frozen=True)
class ActionLinkingReport:
    """Monte Carlo check that vol * E[crossing rate] equals T(surface)."""

    lhs: float
    rhs: float
    stderr: float
    z: float
    n_samples: int
    horizon: float
    seed: int
    rng: str
    n_fallback: int
    surface_kind: str
    orientation: int


def action_linking_verify(profile: ToricProfile, surface: SeifertSurfaceSpec,
                          n_samples: int, horizon: float, seed: int,
                          return_tol: float = 0.1,
                          threads: int = 1) -> ActionLinkingReport:
    """Verify the crossing-rate identity for a surface by Monte Carlo.

    lhs is the contact volume times the sample mean of the asymptotic
    crossing rate over Liouville draws; rhs is the surface's contact area.
    The report carries the standard error of lhs and z = |lhs - rhs| over
    it.  A constant-rate profile (ellipsoid) has zero variance, in which
    case z is 0 when the identity holds to 1e-9 and infinity otherwise.

    Samples with no admissible near-return (tori near the axes, where one
    angular rate nearly vanishes) use the horizon-closed loop; their count
    is reported.
    """
    samples = liouville_sample(profile, n_samples, seed)
    vol = contact_volume(profile)
    profile.boundary_arrays(0.0)   # build the profile caches before fan-out
    chunks = max(1, int(threads))
    bounds = np.linspace(0, len(samples), chunks + 1, dtype=int)

    def work(lo, hi):
        return _batch_rates(profile, samples[lo:hi], surface, horizon,
                            return_tol, allow_fallback=True)

    if chunks == 1:
        parts = [work(0, len(samples))]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=chunks) as pool:
            parts = list(pool.map(lambda ab: work(*ab),
                                  zip(bounds[:-1], bounds[1:])))
    rates = np.concatenate([p[0] for p in parts])
    n_fallback = int(sum(int(p[2].sum()) for p in parts))

    mean = math.fsum(rates) / n_samples
    lhs = vol * mean
    rhs = surface.contact_area
    if n_samples > 1:
        var = math.fsum((r - mean) ** 2 for r in rates) / (n_samples - 1)
    else:
        var = 0.0
    stderr = vol * math.sqrt(var / n_samples)
    diff = abs(lhs - rhs)
    if stderr == 0.0:
        z = 0.0 if diff <= 1e-9 else math.inf
    else:
        z = diff / stderr
    return ActionLinkingReport(float(lhs), float(rhs), float(stderr), float(z),
                               int(n_samples), float(horizon), int(seed),
                               RNG_NAME, n_fallback, surface.kind,
                               surface.orientation)


# ---------------------------------------------------------------------------
# closed curves on the 3-sphere and Gauss linking


@dataclass(frozen=True)
class ClosedCurve:
    """Closed polyline on the unit 3-sphere, rows of an (n, 4) array.

    Input points are projected radially onto the sphere; the first and
    last rows must then coincide and consecutive samples must stay within
    the chord bound.
    """

    points: np.ndarray

    @staticmethod
    def from_points(points, chord_bound: float = 0.5) -> "ClosedCurve":
        pts = np.asarray(points, float)
        if pts.ndim != 2 or pts.shape[1] != 4 or pts.shape[0] < 4:
            raise ValidationError("a closed curve needs at least 4 points in R^4")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms <= 0):
            raise ValidationError("curve points must be away from the origin")
        pts = pts / norms[:, None]
        if np.linalg.norm(pts[0] - pts[-1]) > 1e-9:
            raise ValidationError("curve is not closed (first point != last)")
        pts[-1] = pts[0]
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if gaps.max(initial=0.0) > chord_bound:
            raise ValidationError(
                f"consecutive samples {gaps.max():.3g} apart exceed the chord "
                f"bound {chord_bound:g}; sample the curve more densely")
        return ClosedCurve(pts)

    def subdivided(self) -> "ClosedCurve":
        """Insert spherical midpoints between consecutive samples."""
        pts = self.points
        mids = 0.5 * (pts[:-1] + pts[1:])
        mids /= np.linalg.norm(mids, axis=1)[:, None]
        out = np.empty((2 * len(pts) - 1, 4))
        out[0::2] = pts
        out[1::2] = mids
        return ClosedCurve(out)


def toric_orbit_curve(profile: ToricProfile, orbit, n: int = 1024,
                      phase2: float = 0.0) -> ClosedCurve:
    """Embed a closed orbit as a curve on the unit 3-sphere.

    A torus orbit at parameter t winds (p, q) times around the two circle
    angles; the embedding uses the square roots of the boundary point as
    circle radii and is then projected radially to the sphere (a
    homeomorphism of the boundary onto the sphere, so linking numbers are
    unchanged).  Axis orbits embed as the two coordinate circles.
    """
    u = np.linspace(0.0, 1.0, n + 1)
    if isinstance(orbit, AxisOrbit):
        ang = TWO_PI * u
        zero = np.zeros_like(ang)
        if orbit.axis == "x":
            pts = np.column_stack([np.cos(ang), np.sin(ang), zero, zero])
        else:
            pts = np.column_stack([zero, zero, np.cos(ang), np.sin(ang)])
    elif isinstance(orbit, RationalTorus):
        x, y, _, _ = profile.boundary_arrays(orbit.t)
        r1, r2 = math.sqrt(float(x)), math.sqrt(float(y))
        th1 = TWO_PI * orbit.p * u
        th2 = phase2 + TWO_PI * orbit.q * u
        pts = np.column_stack([r1 * np.cos(th1), r1 * np.sin(th1),
                               r2 * np.cos(th2), r2 * np.sin(th2)])
    else:
        raise ValidationError(f"cannot embed orbit of type {type(orbit).__name__}")
    pts[-1] = pts[0]
    return ClosedCurve.from_points(pts, chord_bound=1.0)


# Candidate projection poles avoid the coordinate circles (where the axis
# orbits live); the asymmetric ones also miss every torus curve with equal
# circle radii, which passes through all symmetric sign patterns.
_POLES = np.array([
    [1, 1, 1, 1], [1, -1, 1, -1], [-1, -1, -1, -1], [-1, 1, -1, 1],
    [2, 1, -1, 1], [-1, 2, 1, 1], [1, -1, 2, -1], [-1, 1, 1, 2],
], dtype=float)
_POLES /= np.linalg.norm(_POLES, axis=1)[:, None]


def _stereographic(points: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Project S^3 minus the pole to R^3, pole moved to (0, 0, 0, 1).

    The pole is moved by a rotation (a Householder reflection composed
    with a coordinate flip), keeping the map orientation-preserving so
    linking signs survive the projection.
    """
    w = pole - np.array([0.0, 0.0, 0.0, 1.0])
    nw = np.dot(w, w)
    if nw < 1e-15:
        rotated = points
    else:
        rotated = points - 2.0 * np.outer(points @ w, w) / nw
        rotated = rotated.copy()
        rotated[:, 0] = -rotated[:, 0]
    denom = 1.0 - rotated[:, 3]
    if np.any(np.abs(denom) < 1e-9):
        raise NumericalError("curve passes through the projection pole")
    return rotated[:, :3] / denom[:, None]


def _gauss_linking_sum(P: np.ndarray, Q: np.ndarray, block: int = 64) -> float:
    """Exact linking number of two closed polylines in R^3.

    Sums, over all segment pairs, the signed solid angle subtended by one
    segment from the other via the two-triangle arctangent formula; the
    total divided by 4*pi is the linking number up to rounding error.
    """
    total = 0.0
    segs_p0, segs_p1 = P[:-1], P[1:]
    for start in range(0, len(Q) - 1, block):
        q0 = Q[start:start + block + 1][:-1]
        q1 = Q[start + 1:start + block + 1]
        a = segs_p0[None, :, :] - q0[:, None, :]
        b = segs_p0[None, :, :] - q1[:, None, :]
        c = segs_p1[None, :, :] - q1[:, None, :]
        d = segs_p1[None, :, :] - q0[:, None, :]
        cross_bc = np.cross(b, c)
        p = np.einsum("ijk,ijk->ij", a, cross_bc)
        an = np.linalg.norm(a, axis=2)
        bn = np.linalg.norm(b, axis=2)
        cn = np.linalg.norm(c, axis=2)
        dn = np.linalg.norm(d, axis=2)
        ab = np.einsum("ijk,ijk->ij", a, b)
        bc = np.einsum("ijk,ijk->ij", b, c)
        ca = np.einsum("ijk,ijk->ij", c, a)
        ad = np.einsum("ijk,ijk->ij", a, d)
        dc = np.einsum("ijk,ijk->ij", d, c)
        d1 = an * bn * cn + ab * cn + bc * an + ca * bn
        d2 = an * dn * cn + ad * cn + dc * an + ca * dn
        total += float(np.sum(np.arctan2(p, d1) + np.arctan2(p, d2)))
    return total / TWO_PI


@dataclass(frozen=True)
class LinkResult:
    link: int
    residual: float
    raw: float
    pole_index: int
    subdivisions: int


def linking_number(curve1: ClosedCurve, curve2: ClosedCurve,
                   min_separation: float = 1e-6,
                   residual_tol: float = 0.1) -> LinkResult:
    """Linking number of two disjoint closed curves on the 3-sphere.

    The pole for stereographic projection is chosen among the eight
    coordinate poles to maximize the distance to both curves; the Gauss
    sum in R^3 is rounded to the nearest integer and |raw - integer| is
    reported as the residual.  On a residual above the tolerance other
    poles and spherically subdivided copies of the curves are tried.
    """
    p1, p2 = curve1.points, curve2.points
    min_dist = math.inf
    for start in range(0, len(p1), 512):
        blockp = p1[start:start + 512]
        diff = blockp[:, None, :] - p2[None, :, :]
        min_dist = min(min_dist, float(np.sqrt((diff ** 2).sum(axis=2)).min()))
    if min_dist < min_separation:
        raise ValidationError(
            f"curves come within {min_dist:.3g} of each other "
            f"(bound {min_separation:g}); linking is undefined")

    scores = []
    for i, pole in enumerate(_POLES):
        d1 = np.linalg.norm(p1 - pole, axis=1).min()
        d2 = np.linalg.norm(p2 - pole, axis=1).min()
        scores.append((min(d1, d2), i))
    order = [i for _, i in sorted(scores, reverse=True)]

    c1, c2 = curve1, curve2
    best_residual = math.inf
    for level in range(3):
        for i in order:
            try:
                P = _stereographic(c1.points, _POLES[i])
                Q = _stereographic(c2.points, _POLES[i])
            except NumericalError:
                continue
            raw = _gauss_linking_sum(P, Q)
            residual = abs(raw - round(raw))
            best_residual = min(best_residual, residual)
            if residual < residual_tol:
                return LinkResult(int(round(raw)), float(residual), float(raw),
                                  i, level)
        c1, c2 = c1.subdivided(), c2.subdivided()
    raise NumericalError(
        f"Gauss sum residual {best_residual:.3g} still above {residual_tol:g} "
        "after pole changes and curve refinement")


def check_statistical(report: ActionLinkingReport, z_threshold: float = 4.0):
    """Raise StatisticalError when a verification z score exceeds the bound."""
    if not (report.z <= z_threshold):
        raise StatisticalError(
            f"action-linking z score {report.z:.3g} exceeds {z_threshold:g} "
            f"(lhs {report.lhs:.12g}, rhs {report.rhs:.12g}, "
            f"stderr {report.stderr:.3g})")
    return report
