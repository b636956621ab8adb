"""Quadrature helpers and shared tolerance settings.

All 1D integrands in this package are smooth on closed intervals, so the
workhorse is a composite Gauss-Legendre rule with panel doubling until two
successive refinements agree.  A vectorized single-panel rule supports the
cumulative sector-area tables used to invert area parametrizations.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericalError, ValidationError


@dataclass(frozen=True)
class Numerics:
    """Tolerances controlling quadrature, root finding and validation."""

    quad_tol: float = 1e-10       # absolute tolerance for adaptive quadrature
    root_tol: float = 1e-13      # parameter tolerance for bracketed root finding
    curvature_bound: float = 1e4  # max |r''(theta)| accepted for sampled boundaries
    table_panels: int = 2048      # panels in the cached cumulative-area table

    @staticmethod
    def from_json(obj) -> "Numerics":
        if obj is None:
            return Numerics()
        if not isinstance(obj, dict):
            raise ValidationError("'numerics' must be an object")
        known = {f.name for f in dataclasses.fields(Numerics)}
        unknown = set(obj) - known
        if unknown:
            raise ValidationError(f"unknown numerics keys: {sorted(unknown)}")
        return Numerics(**obj)

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@lru_cache(maxsize=None)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def fixed_gauss(f, a: float, b: float, n_panels: int, order: int = 20) -> float:
    """Composite Gauss-Legendre integral of f over [a, b] with n_panels panels."""
    x, w = _leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return float(np.sum(vals * w[None, :] * half[:, None]))


def adaptive_gauss(f, a: float, b: float, tol: float = 1e-10, order: int = 20,
                   max_panels: int = 1 << 14):
    """Panel-doubling composite Gauss rule.

    Returns (value, residual) where residual is the difference between the
    last two refinements.  Raises NumericalError if the residual never drops
    below tol.
    """
    n = 8
    prev = fixed_gauss(f, a, b, n, order)
    while n < max_panels:
        n *= 2
        cur = fixed_gauss(f, a, b, n, order)
        res = abs(cur - prev)
        if res <= tol:
            return cur, res
        prev = cur
    raise NumericalError(
        f"quadrature over [{a:g}, {b:g}] did not converge to tol={tol:g}; "
        f"achieved residual {res:g}")


def panel_gauss_many(f, a, b, order: int = 20):
    """Gauss-Legendre integral of f over each interval [a_i, b_i].

    a and b are equal-length arrays; returns the array of panel integrals.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    x, w = _leggauss(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[None, :] + half[None, :] * x[:, None]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return np.einsum("i,ij->j", w, vals) * half


def refine_extremum(f, xs, fs, mode: str, xtol: float = 1e-12):
    """Refine a grid extremum of f by golden-section search.

    xs, fs are the scan grid and its values.  mode is 'min' or 'max'.
    Returns (x, f(x)).  Falls back to the grid value when the extremum sits
    on the boundary or the bracket is degenerate (flat function).
    """
    from scipy.optimize import minimize_scalar

    sign = 1.0 if mode == "min" else -1.0
    g = sign * np.asarray(fs, float)
    i = int(np.argmin(g))
    if i == 0 or i == len(xs) - 1:
        return float(xs[i]), float(fs[i])
    if not (g[i] < g[i - 1] and g[i] < g[i + 1]):
        return float(xs[i]), float(fs[i])
    try:
        res = minimize_scalar(lambda x: sign * float(f(x)),
                              bracket=(xs[i - 1], xs[i], xs[i + 1]),
                              method="golden", options={"xtol": xtol})
        x_star = float(res.x)
    except Exception:
        return float(xs[i]), float(fs[i])
    if not np.isfinite(x_star):
        return float(xs[i]), float(fs[i])
    x_star = float(np.clip(x_star, xs[i - 1], xs[i + 1]))
    return x_star, float(f(x_star))


def wrap_angle(theta):
    """Reduce angles to [0, 2*pi)."""
    two_pi = 2.0 * np.pi
    return np.mod(theta, two_pi)


def wrap_to_pi(theta):
    """Reduce angles to [-pi, pi)."""
    two_pi = 2.0 * np.pi
    return np.mod(np.asarray(theta, float) + np.pi, two_pi) - np.pi
