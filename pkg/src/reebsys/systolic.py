"""Systolic invariants of toric boundary spheres.

On the boundary sphere of a toric domain, the induced flow preserves every
torus over an interior point of the boundary curve, plus the two circle
orbits over the intercepts (a, 0) and (0, b).  The tori carrying closed
orbits are the rational ones where the gradient of F points along a
coprime integer direction (p, q); orbits there have primitive period
pi*p/D1F = pi*q/D2F, and the pairing

    rho(orbit, orbit') = link * volume / (T * T')

reduces to the closed form 2A * D1F(C(t_low)) * D2F(C(t_high)) where
t_low <= t_high are the area parameters of the two tori (ordering along
the curve, with the x-intercept orbit at t = 0 and the y-intercept orbit
at t = 2A).  The systolic interval is the closure of pairing values over
distinct orbit pairs; on toric boundaries it is the range of the separable
function g(t, t^) = 2A * D1F(C(t)) * D2F(C(t^)) over the parameter square,
and adding the diagonal values (the limit of pairings of nearby orbits,
the "enlarged" interval) does not change it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError
from .numerics import adaptive_gauss, refine_extremum
from .profiles import HALF_PI, ToricProfile

TWO_PI_SQ = 2.0 * math.pi * math.pi


@dataclass(frozen=True)
class RationalTorus:
    """Invariant torus whose gradient direction is the coprime pair (p, q).

    t is the area parameter of the torus on the boundary curve and period
    is the primitive period of the closed orbits foliating it.  continuum
    marks representatives of a one-parameter family (constant-gradient
    profiles, where every torus is a (p, q)-torus).
    """

    p: int
    q: int
    t: float
    period: float
    continuum: bool = False


@dataclass(frozen=True)
class AxisOrbit:
    """One of the two circle orbits over the intercepts.

    axis 'x' is the orbit over (a, 0) (t = 0, period pi*a), axis 'y' is the
    orbit over (0, b) (t = 2A, period pi*b).  For linking bookkeeping they
    behave like degenerate (1, 0)- and (0, 1)-tori.
    """

    axis: str
    t: float
    period: float

    @property
    def p(self) -> int:
        return 1 if self.axis == "x" else 0

    @property
    def q(self) -> int:
        return 0 if self.axis == "x" else 1


def axis_orbit(profile: ToricProfile, axis: str) -> AxisOrbit:
    ic = profile.intercepts()
    if axis == "x":
        return AxisOrbit("x", 0.0, math.pi * ic.a)
    if axis == "y":
        return AxisOrbit("y", profile.two_area, math.pi * ic.b)
    raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")


@dataclass(frozen=True)
class Witness:
    """An extremal parameter value with the nearest enumerated torus."""

    extremum: str          # 'lo' or 'hi'
    slot: str              # 'd1' or 'd2'
    t: float
    value: float           # the extremal partial-derivative value
    torus: RationalTorus | None


@dataclass(frozen=True)
class SystolicReport:
    volume: float
    interval: tuple
    enlarged_interval: tuple
    norm: float
    contains_one: bool
    witnesses: tuple
    tori: tuple
    grid_n: int
    pairing_values: dict = field(default_factory=dict)


def require_positive_partials(profile: ToricProfile, grid_n: int = 4096):
    """Systolic formulas assume D1F, D2F >= 0 along the boundary; refuse
    profiles violating that and report where."""
    m1, M1, m2, M2 = profile.partials_range(grid_n)
    if m1 < -1e-10 or m2 < -1e-10:
        raise ValidationError(
            "profile has negative partial derivatives along the boundary "
            f"(min D1F = {m1:.3g}, min D2F = {m2:.3g}); systolic invariants "
            "are only computed for profiles with nonnegative partials")


def contact_volume(profile: ToricProfile) -> float:
    """Contact volume of the boundary sphere, 2 * pi^2 * A."""
    return TWO_PI_SQ * profile.quadrant_area()


def _position(orbit) -> float:
    return float(orbit.t)


def pairing_orbit_orbit(profile: ToricProfile, orbit1, orbit2) -> float:
    """Pairing of two geometrically distinct orbits from the closed form.

    Orbits are RationalTorus or AxisOrbit values.  The orbit with the
    smaller area parameter takes the D1F slot, the other the D2F slot;
    this is the ordering of the two solid tori the dividing torus cuts.
    """
    t1, t2 = _position(orbit1), _position(orbit2)
    scale = max(1.0, profile.two_area)
    if abs(t1 - t2) <= 1e-12 * scale:
        raise ValidationError("pairing requires geometrically distinct orbits "
                              f"(both at area parameter {t1:.12g})")
    t_lo, t_hi = min(t1, t2), max(t1, t2)
    _, _, d1, _ = profile.boundary_arrays(t_lo)
    _, _, _, d2 = profile.boundary_arrays(t_hi)
    return float(2.0 * profile.quadrant_area() * d1 * d2)


def pairing_from_definition(profile: ToricProfile, orbit1, orbit2) -> float:
    """The same pairing assembled from link * vol / (T * T').

    The linking number of the two orbits is p_far * q_near where "near"
    means closer to the y-intercept orbit (larger area parameter).  Used
    as a cross-check of the closed form.
    """
    t1, t2 = _position(orbit1), _position(orbit2)
    near, far = (orbit1, orbit2) if t1 > t2 else (orbit2, orbit1)
    link = far.p * near.q
    vol = contact_volume(profile)
    return float(link * vol / (near.period * far.period))


def enumerate_tori(profile: ToricProfile, max_pq: int, grid_n: int = 4096,
                   continuum_samples: int = 65):
    """All rational tori with coprime 1 <= p, q and max(p, q) <= max_pq.

    Roots of q*D1F - p*D2F along the boundary are located by a sign-change
    scan plus bracketed bisection; several roots per class may exist for
    non-convex profiles.  When the class equation vanishes identically
    (constant-gradient profiles with a commensurable direction) the family
    is a continuum and equally spaced representatives are returned with
    continuum=True.
    """
    if max_pq < 1:
        raise ValidationError("max_pq must be at least 1")
    theta = np.linspace(0.0, HALF_PI, grid_n)
    d1g, d2g = profile.gradient_theta(theta)
    scale = float(np.max(np.abs(d1g)) + np.max(np.abs(d2g)))
    tori = []
    for p in range(1, max_pq + 1):
        for q in range(1, max_pq + 1):
            if math.gcd(p, q) != 1:
                continue
            h = q * d1g - p * d2g
            if np.max(np.abs(h)) <= 1e-12 * (p + q) * scale:
                ts = np.linspace(0.0, profile.two_area, continuum_samples + 2)[1:-1]
                period = math.pi * p / float(d1g[0])
                tori.extend(RationalTorus(p, q, float(t), period, True) for t in ts)
                continue
            sign_change = np.nonzero(h[:-1] * h[1:] < 0)[0]
            for i in sign_change:
                f = lambda th: float(q * profile.gradient_theta(th)[0]
                                     - p * profile.gradient_theta(th)[1])
                root = brentq(f, theta[i], theta[i + 1], xtol=1e-15, rtol=1e-15)
                d1r, d2r = profile.gradient_theta(root)
                period = math.pi * p / float(d1r)
                t_root = float(profile.t_of_theta(root))
                tori.append(RationalTorus(p, q, t_root, period, False))
    tori.sort(key=lambda T: (max(T.p, T.q), T.p, T.t))
    return tori


def _partials_on_grid(profile: ToricProfile, grid_n: int):
    theta = np.linspace(0.0, HALF_PI, grid_n)
    d1g, d2g = profile.gradient_theta(theta)
    return theta, np.asarray(d1g, float), np.asarray(d2g, float)


def _nearest_torus(tori, t):
    if not tori:
        return None
    return min(tori, key=lambda T: abs(T.t - t))


def systolic_interval(profile: ToricProfile, grid_n: int = 4096,
                      max_pq_witness: int = 12) -> SystolicReport:
    """Systolic interval, norm and enlarged interval of the boundary sphere.

    g(t, t^) = 2A * D1F(C(t)) * D2F(C(t^)) is separable with nonnegative
    factors, so its extrema over the parameter square are products of 1D
    extrema; those are located by a grid scan refined by golden-section
    search.  The enlarged interval is recomputed independently from the
    raw grid including the diagonal values g(t, t) and reported separately.
    """
    if grid_n < 8:
        raise ValidationError("grid_n must be at least 8")
    require_positive_partials(profile, grid_n)
    theta, d1g, d2g = _partials_on_grid(profile, grid_n)
    two_a = profile.two_area

    f1 = lambda th: float(profile.gradient_theta(th)[0])
    f2 = lambda th: float(profile.gradient_theta(th)[1])
    th_m1, m1 = refine_extremum(f1, theta, d1g, "min")
    th_M1, M1 = refine_extremum(f1, theta, d1g, "max")
    th_m2, m2 = refine_extremum(f2, theta, d2g, "min")
    th_M2, M2 = refine_extremum(f2, theta, d2g, "max")
    lo = two_a * m1 * m2
    hi = two_a * M1 * M2

    # independent brute-force route: a dense scan of the factor values with
    # the diagonal products included.  Kinks of spline-backed partials make
    # grid extrema first-order accurate, hence the much finer grid here.
    dense = np.linspace(0.0, HALF_PI, max(grid_n, 1 << 19))
    d1d, d2d = profile.gradient_theta(dense)
    diag = d1d * d2d
    enlarged_lo = two_a * min(float(d1d.min() * d2d.min()), float(diag.min()))
    enlarged_hi = two_a * max(float(d1d.max() * d2d.max()), float(diag.max()))

    tol = 1e-9
    contains_one = (lo - tol <= 1.0 <= hi + tol)
    tori = tuple(enumerate_tori(profile, max_pq_witness, grid_n=grid_n))
    witnesses = tuple(
        Witness(ext, slot, float(profile.t_of_theta(th_star)), val,
                _nearest_torus(tori, float(profile.t_of_theta(th_star))))
        for ext, slot, th_star, val in (
            ("lo", "d1", th_m1, m1), ("lo", "d2", th_m2, m2),
            ("hi", "d1", th_M1, M1), ("hi", "d2", th_M2, M2)))

    pairing_values = {}
    reps = [T for T in tori if not T.continuum] or list(tori)
    reps = reps[:40]
    vals = [pairing_orbit_orbit(profile, reps[i], reps[j])
            for i in range(len(reps)) for j in range(i + 1, len(reps))
            if abs(reps[i].t - reps[j].t) > 1e-9 * max(1.0, two_a)]
    if vals:
        pairing_values = {"count": len(vals), "min": float(min(vals)),
                          "max": float(max(vals))}

    return SystolicReport(
        volume=contact_volume(profile),
        interval=(float(lo), float(hi)),
        enlarged_interval=(float(enlarged_lo), float(enlarged_hi)),
        norm=float(hi - lo),
        contains_one=bool(contains_one),
        witnesses=witnesses,
        tori=tori,
        grid_n=grid_n,
        pairing_values=pairing_values,
    )


def average_identity_residual(profile: ToricProfile) -> float:
    """Residual of the boundary-average identity.

    The double integral of D1F(C(t1)) * D2F(C(t2)) over the parameter
    square factorizes, and each factor is a total derivative along the
    curve: the integrals equal b and a.  Returns |I1 * I2 - a * b| with
    the factors evaluated by adaptive quadrature in the polar angle.
    """
    rate = profile._sector_rate
    i1, _ = adaptive_gauss(lambda th: profile.gradient_theta(th)[0] * rate(th),
                           0.0, HALF_PI, tol=profile.numerics.quad_tol)
    i2, _ = adaptive_gauss(lambda th: profile.gradient_theta(th)[1] * rate(th),
                           0.0, HALF_PI, tol=profile.numerics.quad_tol)
    ic = profile.intercepts()
    return float(abs(i1 * i2 - ic.a * ic.b))


@dataclass(frozen=True)
class WitnessMeasure:
    """Liouville fractions of tori paired above/below 1 with an axis disk."""

    fraction_ge: float   # measure of {rho(torus, disk) >= 1 - epsilon}
    fraction_le: float   # measure of {rho(torus, disk) <= 1 + epsilon}
    epsilon: float
    axis: str


def _superlevel_fraction(profile: ToricProfile, values_of_theta, level: float,
                         grid_n: int = 8192) -> float:
    """Fraction of the area-parameter length where values >= level.

    The Liouville measure is uniform in the area parameter, so set sizes
    are differences of t at the level-crossing angles.
    """
    theta = np.linspace(0.0, HALF_PI, grid_n)
    f = np.asarray(values_of_theta(theta), float) - level
    roots = []
    sign_change = np.nonzero(f[:-1] * f[1:] < 0)[0]
    for i in sign_change:
        g = lambda th: float(values_of_theta(th) - level)
        roots.append(brentq(g, theta[i], theta[i + 1], xtol=1e-15, rtol=1e-15))
    edges = [0.0] + sorted(roots) + [HALF_PI]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        midval = float(values_of_theta(0.5 * (a + b))) - level
        if midval >= 0:
            total += float(profile.t_of_theta(b) - profile.t_of_theta(a))
    return total / profile.two_area


def witness_measure(profile: ToricProfile, axis: str, epsilon: float) -> WitnessMeasure:
    """Normalized Liouville measure of the tori paired near 1 with a disk.

    The disk is the one bounded by the axis orbit; for the y-axis disk the
    pairing of the torus at parameter t is 2A * D1F(C(t)) * D2F(0, b), for
    the x-axis disk the roles of the partials swap.  Both the superlevel
    set {rho >= 1 - epsilon} and the sublevel set {rho <= 1 + epsilon} are
    measured as fractions of the parameter length.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValidationError("epsilon must lie in (0, 1)")
    require_positive_partials(profile)
    two_a = profile.two_area
    ic = profile.intercepts()
    if axis == "y":
        const = ic.d2_at_b

        def rho_of_theta(th):
            return two_a * profile.gradient_theta(th)[0] * const
    elif axis == "x":
        const = ic.d1_at_a

        def rho_of_theta(th):
            return two_a * profile.gradient_theta(th)[1] * const
    else:
        raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")

    frac_ge = _superlevel_fraction(profile, rho_of_theta, 1.0 - epsilon)
    frac_le = _superlevel_fraction(profile, lambda th: -np.asarray(rho_of_theta(th)),
                                   -(1.0 + epsilon))
    return WitnessMeasure(float(frac_ge), float(frac_le), float(epsilon), axis)
