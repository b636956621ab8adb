"""Star-shaped boundary profiles of toric domains.

A profile encodes a positively 1-homogeneous function F >= 0 on the closed
first quadrant of the (x, y) = (r1^2, r2^2) plane through its unit level
set {F = 1}.  The level set is a curve from the x-intercept (a, 0) to the
y-intercept (0, b); star-shapedness makes its polar radius r(theta) single
valued for theta in [0, pi/2], and F extends off the curve by homogeneity,
F(P) = |P| / r(angle of P).

The area parametrization C(t) = (x(t), y(t)), t in [0, 2A] with A the
first-quadrant area of {F <= 1}, traverses the curve so that the swept
sector area grows at the constant rate 1/2.  Under it the curve solves
x' = -D2F, y' = D1F and satisfies x y' - y x' = 1, which is what makes t
the natural coordinate for the induced circle-invariant flow on the
boundary 3-sphere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ValidationError
from .numerics import Numerics, adaptive_gauss, panel_gauss_many

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class BoundaryPoint:
    """A point C(t) on the unit level set with the gradient of F there."""

    t: float
    x: float
    y: float
    d1: float
    d2: float


@dataclass(frozen=True)
class Intercepts:
    a: float
    b: float
    d1_at_a: float  # D1F(a, 0); equals 1/a by the Euler identity
    d2_at_b: float  # D2F(0, b); equals 1/b


def _as_quadrant_points(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if np.any(x < -1e-12) or np.any(y < -1e-12):
        raise ValidationError("profile evaluation requires x, y >= 0")
    if np.any(np.hypot(x, y) == 0.0):
        raise ValidationError("gradient and value are undefined at the origin")
    return np.clip(x, 0.0, None), np.clip(y, 0.0, None)


class ToricProfile:
    """Base class; concrete kinds supply the boundary radius r(theta)."""

    kind = "abstract"

    def __init__(self, numerics: Numerics | None = None):
        self.numerics = numerics or Numerics()
        self._table = None
        self._area = None

    # -- subclass surface -------------------------------------------------

    def boundary_radius(self, theta):
        raise NotImplementedError

    def boundary_radius_deriv(self, theta):
        raise NotImplementedError

    def scaled(self, s: float) -> "ToricProfile":
        """Profile whose defining function is F/s, i.e. boundary dilated by s."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # -- evaluation --------------------------------------------------------

    def value(self, x, y):
        """F(x, y) on the closed first quadrant minus the origin."""
        x, y = _as_quadrant_points(x, y)
        theta = np.arctan2(y, x)
        return np.hypot(x, y) / self.boundary_radius(theta)

    def gradient(self, x, y):
        """(D1F, D2F) at (x, y).  The gradient is 0-homogeneous."""
        x, y = _as_quadrant_points(x, y)
        theta = np.arctan2(y, x)
        return self.gradient_theta(theta)

    def gradient_theta(self, theta):
        """Gradient along the ray of polar angle theta, from r and r'."""
        theta = np.asarray(theta, float)
        r = self.boundary_radius(theta)
        dr = self.boundary_radius_deriv(theta)
        c, s = np.cos(theta), np.sin(theta)
        d1 = c / r + s * dr / (r * r)
        d2 = s / r - c * dr / (r * r)
        return d1, d2

    # -- area parametrization ----------------------------------------------

    def _sector_rate(self, theta):
        r = self.boundary_radius(theta)
        return r * r

    def _area_table(self):
        if self._table is None:
            n = self.numerics.table_panels
            theta = np.linspace(0.0, HALF_PI, n + 1)
            inc = panel_gauss_many(self._sector_rate, theta[:-1], theta[1:])
            t = np.concatenate([[0.0], np.cumsum(inc)])
            self._table = (theta, t)
        return self._table

    def quadrant_area(self):
        """Area A of {F <= 1} in the first quadrant, by adaptive quadrature."""
        if self._area is None:
            val, _res = adaptive_gauss(lambda th: 0.5 * self._sector_rate(th),
                                       0.0, HALF_PI, tol=self.numerics.quad_tol)
            self._area = float(val)
        return self._area

    @property
    def area(self) -> float:
        return self.quadrant_area()

    @property
    def two_area(self) -> float:
        return 2.0 * self.quadrant_area()

    def t_of_theta(self, theta):
        """Forward map theta -> t = twice the swept sector area."""
        theta = np.asarray(theta, float)
        scalar = theta.ndim == 0
        theta = np.atleast_1d(np.clip(theta, 0.0, HALF_PI))
        nodes, tnodes = self._area_table()
        j = np.clip(np.searchsorted(nodes, theta, side="right") - 1,
                    0, len(nodes) - 2)
        t = tnodes[j] + panel_gauss_many(self._sector_rate, nodes[j], theta)
        return float(t[0]) if scalar else t

    def theta_of_t(self, t):
        """Inverse of the strictly monotone map t(theta); vectorized."""
        t = np.asarray(t, float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        nodes, tnodes = self._area_table()
        t_max = tnodes[-1]
        slack = 1e-9 * max(1.0, t_max)
        if np.any(t < -slack) or np.any(t > self.two_area + slack):
            raise ValidationError(
                f"area parameter out of range [0, {self.two_area:.12g}]")
        tc = np.clip(t, 0.0, t_max)
        j = np.clip(np.searchsorted(tnodes, tc, side="right") - 1,
                    0, len(tnodes) - 2)
        lo = nodes[j].copy()
        hi = nodes[j + 1].copy()
        tlo = tnodes[j]
        width = tnodes[j + 1] - tlo
        frac = np.where(width > 0, (tc - tlo) / np.where(width > 0, width, 1.0), 0.0)
        th = lo + (hi - lo) * frac
        base = nodes[j]
        tol = 1e-14 * max(1.0, t_max)
        done = np.zeros(t.shape, dtype=bool)
        for _ in range(80):
            f = tlo + panel_gauss_many(self._sector_rate, base, th) - tc
            done = np.abs(f) <= tol
            if done.all():
                break
            hi = np.where(~done & (f > 0), th, hi)
            lo = np.where(~done & (f < 0), th, lo)
            step = f / np.maximum(self._sector_rate(th), 1e-300)
            cand = th - step
            bad = ~np.isfinite(cand) | (cand <= lo) | (cand >= hi)
            th = np.where(done, th, np.where(bad, 0.5 * (lo + hi), cand))
        return float(th[0]) if scalar else th

    def boundary_arrays(self, t):
        """(x, y, d1, d2) along C(t); accepts scalars or arrays."""
        theta = self.theta_of_t(t)
        r = self.boundary_radius(theta)
        x = r * np.cos(theta)
        y = r * np.sin(theta)
        d1, d2 = self.gradient_theta(theta)
        return x, y, d1, d2

    def boundary_point(self, t: float) -> BoundaryPoint:
        """The area-parametrized boundary point C(t) with the gradient there."""
        x, y, d1, d2 = self.boundary_arrays(float(t))
        return BoundaryPoint(float(t), float(x), float(y), float(d1), float(d2))

    def intercepts(self) -> Intercepts:
        """Axis intersections (a, 0) and (0, b) with the Euler consistency pair."""
        a = float(self.boundary_radius(0.0))
        b = float(self.boundary_radius(HALF_PI))
        d1a, _ = self.gradient_theta(0.0)
        _, d2b = self.gradient_theta(HALF_PI)
        return Intercepts(a, b, float(d1a), float(d2b))

    def partials_range(self, grid_n: int = 4096):
        """(min d1, max d1, min d2, max d2) over a dense boundary grid."""
        theta = np.linspace(0.0, HALF_PI, grid_n)
        d1, d2 = self.gradient_theta(theta)
        return float(d1.min()), float(d1.max()), float(d2.min()), float(d2.max())

    def has_positive_partials(self, grid_n: int = 4096, tol: float = 1e-10) -> bool:
        m1, _, m2, _ = self.partials_range(grid_n)
        return m1 >= -tol and m2 >= -tol


class EllipsoidProfile(ToricProfile):
    """F(x, y) = x/a + y/b.  The unit level set is the segment between
    (a, 0) and (0, b) and the gradient is the constant (1/a, 1/b)."""

    kind = "ellipsoid"

    def __init__(self, a: float, b: float, numerics: Numerics | None = None):
        super().__init__(numerics)
        if not (a > 0 and b > 0):
            raise ValidationError("ellipsoid intercepts must be positive")
        self.a = float(a)
        self.b = float(b)

    def boundary_radius(self, theta):
        theta = np.asarray(theta, float)
        return 1.0 / (np.cos(theta) / self.a + np.sin(theta) / self.b)

    def boundary_radius_deriv(self, theta):
        theta = np.asarray(theta, float)
        r = self.boundary_radius(theta)
        return r * r * (np.sin(theta) / self.a - np.cos(theta) / self.b)

    def value(self, x, y):
        x, y = _as_quadrant_points(x, y)
        return x / self.a + y / self.b

    def gradient(self, x, y):
        x, y = _as_quadrant_points(x, y)
        shape = np.broadcast(x, y).shape
        return (np.full(shape, 1.0 / self.a), np.full(shape, 1.0 / self.b))

    def gradient_theta(self, theta):
        shape = np.asarray(theta, float).shape
        return (np.full(shape, 1.0 / self.a), np.full(shape, 1.0 / self.b))

    def quadrant_area(self):
        return 0.5 * self.a * self.b

    def scaled(self, s: float):
        return EllipsoidProfile(self.a * s, self.b * s, self.numerics)

    def to_json(self):
        return {"kind": "ellipsoid", "a": self.a, "b": self.b,
                "numerics": self.numerics.to_json()}


class LpProfile(ToricProfile):
    """F(x, y) = ((x/a)^p + (y/b)^p)^(1/p) with p >= 1.

    p = 2 with a = b = 1 is the round profile whose unit level set is the
    quarter circle; p = 1 degenerates to the ellipsoid.
    """

    kind = "lp"

    def __init__(self, p: float, a: float = 1.0, b: float = 1.0,
                 numerics: Numerics | None = None):
        super().__init__(numerics)
        if not p >= 1.0:
            raise ValidationError("lp exponent must satisfy p >= 1")
        if not (a > 0 and b > 0):
            raise ValidationError("lp intercepts must be positive")
        self.p = float(p)
        self.a = float(a)
        self.b = float(b)

    def _unit_value(self, theta):
        # F along the unit circle direction (cos theta, sin theta)
        c = np.clip(np.cos(theta), 0.0, None)
        s = np.clip(np.sin(theta), 0.0, None)
        return ((c / self.a) ** self.p + (s / self.b) ** self.p) ** (1.0 / self.p)

    def boundary_radius(self, theta):
        theta = np.asarray(theta, float)
        return 1.0 / self._unit_value(theta)

    def boundary_radius_deriv(self, theta):
        theta = np.asarray(theta, float)
        p = self.p
        c = np.clip(np.cos(theta), 0.0, None)
        s = np.clip(np.sin(theta), 0.0, None)
        u = self._unit_value(theta)
        du = u ** (1.0 - p) * ((s / self.b) ** (p - 1.0) * c / self.b
                               - (c / self.a) ** (p - 1.0) * s / self.a)
        return -du / (u * u)

    def value(self, x, y):
        x, y = _as_quadrant_points(x, y)
        return ((x / self.a) ** self.p + (y / self.b) ** self.p) ** (1.0 / self.p)

    def gradient(self, x, y):
        x, y = _as_quadrant_points(x, y)
        f = self.value(x, y)
        scale = f ** (1.0 - self.p)
        d1 = scale * (x / self.a) ** (self.p - 1.0) / self.a
        d2 = scale * (y / self.b) ** (self.p - 1.0) / self.b
        return d1, d2

    def gradient_theta(self, theta):
        theta = np.asarray(theta, float)
        r = self.boundary_radius(theta)
        x = r * np.clip(np.cos(theta), 0.0, None)
        y = r * np.clip(np.sin(theta), 0.0, None)
        d1 = (x / self.a) ** (self.p - 1.0) / self.a
        d2 = (y / self.b) ** (self.p - 1.0) / self.b
        return d1, d2

    def scaled(self, s: float):
        return LpProfile(self.p, self.a * s, self.b * s, self.numerics)

    def to_json(self):
        return {"kind": "lp", "p": self.p, "a": self.a, "b": self.b,
                "numerics": self.numerics.to_json()}


def round_profile(numerics: Numerics | None = None) -> LpProfile:
    """The radius-one round profile F = sqrt(x^2 + y^2)."""
    return LpProfile(2.0, 1.0, 1.0, numerics)


class SplineProfile(ToricProfile):
    """Boundary given by sampled points, interpolated by a monotone cubic
    (PCHIP) spline of the polar radius in the polar angle.

    The samples must be star-shaped (strictly increasing polar angle),
    cover the whole quadrant from the positive x-axis to the positive
    y-axis, and be free of corner-like kinks: construction rejects data
    whose spline second derivative exceeds the configured curvature bound.
    """

    kind = "sampled"

    def __init__(self, points, numerics: Numerics | None = None):
        super().__init__(numerics)
        pts = np.asarray(points, float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
            raise ValidationError("sampled profile needs at least 4 (x, y) points")
        if np.any(pts < -1e-12):
            raise ValidationError("sampled boundary points must lie in the first quadrant")
        pts = np.clip(pts, 0.0, None)
        r = np.hypot(pts[:, 0], pts[:, 1])
        if np.any(r <= 0):
            raise ValidationError("sampled boundary points must be away from the origin")
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        order = np.argsort(theta)
        theta, r = theta[order], r[order]
        if np.any(np.diff(theta) <= 0):
            raise ValidationError("polar angles must be strictly increasing "
                                  "(star-shaped, single-valued radius)")
        if theta[0] > 1e-8 or theta[-1] < HALF_PI - 1e-8:
            raise ValidationError("samples must cover the polar angle range "
                                  "[0, pi/2] including both axes")
        theta[0], theta[-1] = 0.0, HALF_PI
        self._points = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        self._spline = PchipInterpolator(theta, r, extrapolate=False)
        self._spline_d1 = self._spline.derivative(1)
        self._spline_d2 = self._spline.derivative(2)
        dense = np.linspace(0.0, HALF_PI, 4096)
        curv = np.abs(self._spline_d2(dense))
        if np.nanmax(curv) > self.numerics.curvature_bound:
            raise ValidationError(
                f"boundary curvature {np.nanmax(curv):.3g} exceeds bound "
                f"{self.numerics.curvature_bound:.3g}; data looks cornered")

    def boundary_radius(self, theta):
        theta = np.clip(np.asarray(theta, float), 0.0, HALF_PI)
        return self._spline(theta)

    def boundary_radius_deriv(self, theta):
        theta = np.clip(np.asarray(theta, float), 0.0, HALF_PI)
        return self._spline_d1(theta)

    def scaled(self, s: float):
        return SplineProfile(self._points * s, self.numerics)

    def to_json(self):
        return {"kind": "sampled", "points": self._points.tolist(),
                "numerics": self.numerics.to_json()}


def perturbed_ellipsoid_points(a: float, b: float, coeffs, n: int = 256):
    """Boundary samples of an ellipsoid whose polar radius is modulated by
    1 + sum_k c_k sin(2 k theta).  Small coefficients keep the partial
    derivatives of the induced F positive."""
    theta = np.linspace(0.0, HALF_PI, n)
    base = 1.0 / (np.cos(theta) / a + np.sin(theta) / b)
    bump = np.ones_like(theta)
    for k, c in enumerate(coeffs, start=1):
        bump += c * np.sin(2.0 * k * theta)
    r = base * bump
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def perturbed_ellipsoid_profile(a: float, b: float, coeffs, n: int = 256,
                                numerics: Numerics | None = None) -> SplineProfile:
    return SplineProfile(perturbed_ellipsoid_points(a, b, coeffs, n), numerics)


_PROFILE_KEYS = {
    "ellipsoid": {"kind", "a", "b", "numerics"},
    "lp": {"kind", "p", "a", "b", "numerics"},
    "sampled": {"kind", "points", "numerics"},
}


def profile_from_json(obj) -> ToricProfile:
    """Build a profile from its JSON document.

    Accepted forms:
      {"kind": "ellipsoid", "a": 1.0, "b": 2.0}
      {"kind": "lp", "p": 2.0, "a": 1.0, "b": 1.0}
      {"kind": "sampled", "points": [[x, y], ...]}
    each with an optional "numerics" object of tolerance overrides.
    """
    if not isinstance(obj, dict):
        raise ValidationError("profile specification must be a JSON object")
    kind = obj.get("kind")
    if kind not in _PROFILE_KEYS:
        raise ValidationError(f"unknown profile kind: {kind!r}")
    unknown = set(obj) - _PROFILE_KEYS[kind]
    if unknown:
        raise ValidationError(f"unknown profile keys: {sorted(unknown)}")
    numerics = Numerics.from_json(obj.get("numerics"))
    try:
        if kind == "ellipsoid":
            return EllipsoidProfile(float(obj["a"]), float(obj["b"]), numerics)
        if kind == "lp":
            return LpProfile(float(obj["p"]), float(obj.get("a", 1.0)),
                             float(obj.get("b", 1.0)), numerics)
        return SplineProfile(obj["points"], numerics)
    except KeyError as exc:
        raise ValidationError(f"profile field missing: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad profile field: {exc}") from exc
