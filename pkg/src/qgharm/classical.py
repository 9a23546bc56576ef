"""Classical Lp norms of central elements via one-dimensional Weyl quadrature.

Central elements of oplus:N (resp. splus:N) have the same joint character
moments as SU(2) (resp. SO(3)) class functions, because the fusion rules
coincide; their Lp norms therefore reduce to integrals against the Weyl
measure on [0, pi]:

    su2:  density (2/pi) sin^2(theta),     characters sin((k+1)t)/sin(t)
    so3:  density (2/pi) sin^2(theta/2),   characters sin((2k+1)t/2)/sin(t/2)

Characters are evaluated through the Chebyshev recurrence in cos(theta),
which is stable at the endpoints where the sine quotients degenerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentRangeError, NoClassicalModelError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)

_TARGETS = {"oplus": "su2", "su2": "su2", "splus": "so3", "so3": "so3"}


def classical_target(group) -> str:
    """"su2" or "so3" for groups whose central elements have a classical model."""
    target = _TARGETS.get(group.kind)
    if target is None:
        raise NoClassicalModelError(f"{group}: no classical model")
    return target


def su2_casimir(k: int) -> int:
    """Casimir eigenvalue normalization k(k+2) on the SU(2) side."""
    return k * (k + 2)


# ---------------------------------------------------------------------------
# Characters


def _cheb_u(indices, x):
    """U_j(x) for each j in ``indices`` (sorted unique), x array-like.

    Returns an array of shape (len(indices),) + x.shape.
    """
    x = np.asarray(x, dtype=float)
    jmax = max(indices)
    wanted = {j: pos for pos, j in enumerate(indices)}
    out = np.empty((len(indices),) + x.shape, dtype=float)
    prev = np.ones_like(x)
    if 0 in wanted:
        out[wanted[0]] = prev
    if jmax >= 1:
        cur = 2.0 * x
        if 1 in wanted:
            out[wanted[1]] = cur
        for j in range(2, jmax + 1):
            prev, cur = cur, 2.0 * x * cur - prev
            if j in wanted:
                out[wanted[j]] = cur
    return out


def su2_character(k: int, theta):
    """sin((k+1)theta)/sin(theta), with the removable singularities filled in."""
    if k < 0:
        raise ValueError("k must be >= 0")
    vals = _cheb_u([k], np.cos(np.asarray(theta, dtype=float)))[0]
    return vals if np.ndim(theta) else float(vals)


def so3_character(k: int, theta):
    """sin((2k+1)theta/2)/sin(theta/2), evaluated as U_{2k}(cos(theta/2))."""
    if k < 0:
        raise ValueError("k must be >= 0")
    vals = _cheb_u([2 * k], np.cos(np.asarray(theta, dtype=float) / 2.0))[0]
    return vals if np.ndim(theta) else float(vals)


def evaluate_central(f, theta):
    """Classical model of a central element: sum_k a_k char_k(theta)."""
    target = classical_target(f.group)
    theta = np.asarray(theta, dtype=float)
    if not f.coeffs:
        return np.zeros_like(theta, dtype=complex)
    if target == "su2":
        indices = sorted(f.coeffs)
        x = np.cos(theta)
        u = _cheb_u(indices, x)
        coeff = {k: f.coeffs[k] for k in indices}
    else:
        indices = sorted(2 * k for k in f.coeffs)
        x = np.cos(theta / 2.0)
        u = _cheb_u(indices, x)
        coeff = {2 * k: f.coeffs[k] for k in f.coeffs}
    total = np.zeros_like(theta, dtype=complex)
    for pos, j in enumerate(indices):
        total = total + complex(coeff[j]) * u[pos]
    return total


@dataclass(frozen=True)
class WeylMeasure:
    """Weyl measure on [0, pi] for the given classical target."""

    target: str

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.target == "su2":
            return (2.0 / math.pi) * np.sin(theta) ** 2
        if self.target == "so3":
            return (2.0 / math.pi) * np.sin(theta / 2.0) ** 2
        raise ValueError(f"unknown target {self.target!r}")

    def total_mass(self) -> float:
        return integrate_adaptive(self.density, 0.0, math.pi)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Legendre quadrature


def _gl_panel(f, a, b):
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * _GL_NODES
    return half * float(np.dot(_GL_WEIGHTS, f(nodes)))


def integrate_adaptive(f, a, b, abs_tol=1e-12, max_depth=48):
    """Adaptive bisection with 32-point Gauss-Legendre panels.

    A panel is accepted when the one-panel and two-half-panel estimates agree
    to the panel's share of ``abs_tol`` (or to 1e-12 relative to the running
    scale).  Deterministic left-to-right evaluation order.
    """
    scale = abs(_gl_panel(f, a, b)) + abs_tol

    def recurse(lo, hi, whole, budget, depth):
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        err = abs(left + right - whole)
        if err <= max(budget, 1e-12 * scale) or depth >= max_depth:
            return left + right
        return recurse(lo, mid, left, 0.5 * budget, depth + 1) + recurse(
            mid, hi, right, 0.5 * budget, depth + 1
        )

    return recurse(a, b, _gl_panel(f, a, b), abs_tol, 0)


# ---------------------------------------------------------------------------
# Lp and Linf norms


def central_lp_norm(f, p: float) -> float:
    """(integral of |f~|^p against the Weyl measure)^(1/p)."""
    if p < 1:
        raise ExponentRangeError(f"p must be >= 1, got {p}")
    if p == math.inf:
        return central_linf_norm(f)
    target = classical_target(f.group)
    measure = WeylMeasure(target)

    def integrand(theta):
        return np.abs(evaluate_central(f, theta)) ** p * measure.density(theta)

    value = integrate_adaptive(integrand, 0.0, math.pi, abs_tol=1e-10)
    return max(value, 0.0) ** (1.0 / p)


_LINF_GRID_POINTS = 4096
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(g, lo, hi, iters=80):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _GOLDEN * (b - a)
            gd = g(d)
    return max(gc, gd)


def central_linf_norm(f) -> float:
    """Sup of |f~| on [0, pi]: dense grid plus golden-section refinement.

    Certified within ~1e-6 for smooth class functions of degree <= 200.
    """
    classical_target(f.group)
    thetas = np.linspace(0.0, math.pi, _LINF_GRID_POINTS)
    values = np.abs(evaluate_central(f, thetas))
    best = float(values.max())
    top = np.argsort(values)[-8:]

    def g(theta):
        return float(np.abs(evaluate_central(f, np.asarray([theta])))[0])

    h = thetas[1] - thetas[0]
    for idx in top:
        lo = max(0.0, thetas[idx] - h)
        hi = min(math.pi, thetas[idx] + h)
        best = max(best, _golden_max(g, lo, hi))
    return best


def character_gram(target: str, kmax: int) -> np.ndarray:
    """Gram matrix <char_j, char_k> under the Weyl measure, j,k <= kmax."""
    measure = WeylMeasure(target)
    char = su2_character if target == "su2" else so3_character

    gram = np.empty((kmax + 1, kmax + 1))
    for j in range(kmax + 1):
        for k in range(j, kmax + 1):

            def integrand(theta, j=j, k=k):
                return char(j, theta) * char(k, theta) * measure.density(theta)

            gram[j, k] = gram[k, j] = integrate_adaptive(integrand, 0.0, math.pi)
    return gram
