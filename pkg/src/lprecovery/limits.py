"""Limiting recovery thresholds in the nearly-square regime (m/n -> 1).

The strong threshold for exponent p comes from the split point z* at which
the upper truncated moment of |X| equals half the full moment:

    integral_{z*}^inf x^p f(x) dx = E[|X|^p] / 2,

giving rho*(p) = 1 - F(z*).  The truncated moment is continuous and
strictly decreasing in the cut, so z* is unique; a bracketing bisection
followed by a Newton polish (the derivative of the truncated moment is
-z^p f(z)) recovers it to full precision.

The weak and sectional limits are constants (2/3 below p = 1, 1 at p = 1;
1/2 for all p) and are exposed as functions only for a uniform surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import _SQRT_2_OVER_PI, abs_moment, half_normal_cdf, half_normal_pdf
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate

__all__ = [
    "LimitThreshold",
    "solve_z_star",
    "strong_limit_threshold",
    "strong_threshold_derivative",
    "weak_limit_threshold",
    "sectional_limit_threshold",
]

_BISECT_WIDTH = 1e-12
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class LimitThreshold:
    """Strong limiting threshold with solver provenance."""

    p: float
    z_star: float
    rho_star: float
    derivative: float
    solver_iters: int
    residual: float


def _upper_truncated_moment(z: float, p: float, cfg: QuadratureConfig) -> float:
    """integral_z^U x^p f(x) dx with U the configured tail cutoff."""
    upper = cfg.tail_cutoff_sigma
    if z >= upper:
        return 0.0

    def integrand(x):
        return np.power(x, p) * _SQRT_2_OVER_PI * np.exp(-0.5 * x * x)

    return integrate(integrand, z, upper, cfg)


def _solve_z_star(p: float, cfg: QuadratureConfig):
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    mu = abs_moment(p, cfg)
    target = 0.5 * mu
    lo, hi = 0.0, cfg.tail_cutoff_sigma
    g_lo = mu - target  # g(0) - target = mu/2 > 0
    g_hi = _upper_truncated_moment(hi, p, cfg) - target
    if not (g_lo > 0 > g_hi):
        raise RuntimeError("half-moment split not bracketed; quadrature misconfigured")
    iters = 0
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if _upper_truncated_moment(mid, p, cfg) - target > 0:
            lo = mid
        else:
            hi = mid
        iters += 1
    z = 0.5 * (lo + hi)
    # Newton polish: d/dz integral_z^inf x^p f = -z^p f(z)
    for _ in range(3):
        res = _upper_truncated_moment(z, p, cfg) - target
        z -= res / (z**p * half_normal_pdf(z))
        iters += 1
    residual = abs(mu - 2.0 * _upper_truncated_moment(z, p, cfg))
    if residual > _RESIDUAL_TOL:
        raise RuntimeError(f"split-point residual {residual:.2e} above {_RESIDUAL_TOL}")
    return z, iters, residual


def solve_z_star(p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Split point z* of the half-moment equation for exponent p."""
    return _solve_z_star(p, cfg)[0]


def strong_threshold_derivative(p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Closed-form d(rho*)/dp; strictly negative on (0, 1].

    The log factor is integrable at zero but slow for adaptive rules, so
    [0, 1e-3] is handled with the substitution x = e^u.
    """
    z = solve_z_star(p, cfg)
    upper = cfg.tail_cutoff_sigma

    def integrand(x):
        return np.power(x, p) * np.log(x) * _SQRT_2_OVER_PI * np.exp(-0.5 * x * x)

    cut = 1e-3

    def integrand_log(u):
        x = np.exp(u)
        return np.power(x, p + 1.0) * u * _SQRT_2_OVER_PI * np.exp(-0.5 * x * x)

    head = integrate(integrand_log, -60.0, math.log(cut), cfg)
    lower_part = head + integrate(integrand, cut, z, cfg)
    upper_part = integrate(integrand, z, upper, cfg, points=(min(z + 1.0, upper * 0.999),))
    return (lower_part - upper_part) / (2.0 * z**p)


def strong_limit_threshold(p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> LimitThreshold:
    """Strong limiting threshold rho*(p) = 1 - F(z*(p))."""
    z, iters, residual = _solve_z_star(p, cfg)
    rho = 1.0 - half_normal_cdf(z)
    return LimitThreshold(
        p=p,
        z_star=z,
        rho_star=rho,
        derivative=strong_threshold_derivative(p, cfg),
        solver_iters=iters,
        residual=residual,
    )


def weak_limit_threshold(p: float) -> float:
    """Weak limiting threshold: 2/3 for p in [0, 1), 1 at p = 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return 1.0 if p == 1.0 else 2.0 / 3.0


def sectional_limit_threshold(p: float) -> float:
    """Sectional limiting threshold: 1/2 for every p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return 0.5
