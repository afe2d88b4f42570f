"""Scalar integrals of the half-normal distribution.

Everything downstream (limiting thresholds, Chernoff exponents) reduces to
integrals of x^p against the folded standard normal density

    f(x) = sqrt(2/pi) * exp(-x^2/2),   x >= 0,

and to three moment generating functions of |X|^p for X ~ N(0, 1):

* ``mgf_pos``       E[exp( t |X|^p)]            (t >= 0)
* ``mgf_neg``       E[exp(-t |X|^p)]            (t > 0)
* ``mgf_indicator`` E[exp( t |X|^p S)] with S the indicator of a sign
  mismatch against a fixed pattern; S is Bernoulli(1/2) independent of
  |X|, so this equals (mgf_pos + 1) / 2.

Exponentials are evaluated in log space with the integrand's peak factored
out, so arbitrarily large tilts t stay finite.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate

__all__ = [
    "half_normal_pdf",
    "half_normal_cdf",
    "abs_moment",
    "mgf_pos",
    "log_mgf_pos",
    "mgf_neg",
    "mgf_indicator",
    "log_mgf_indicator",
    "mgf_neg_log_upper_bound",
    "tilted_moment_ratio",
    "indicator_tilted_moment_ratio",
]

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)


def _origin_ladder(head: float, floor: float = 1e-14, factor: float = 4.0):
    """Geometric break points from ``head`` down toward 0.

    x^p has unbounded derivatives at the origin for p < 1; pre-placing
    shrinking panels there resolves the cusp in one vectorized pass instead
    of many sequential refinement rounds.
    """
    pts = []
    x = head
    while x > floor:
        pts.append(x)
        x /= factor
    return pts


def half_normal_pdf(z: float) -> float:
    """Density of |X| for X ~ N(0,1); zero for negative arguments."""
    if z < 0:
        return 0.0
    return _SQRT_2_OVER_PI * math.exp(-0.5 * z * z)


def half_normal_cdf(z: float) -> float:
    """CDF of |X|: erf(z / sqrt(2)) for z >= 0, zero below."""
    if z < 0:
        return 0.0
    return math.erf(z / math.sqrt(2.0))


def _check_exponent(p: float) -> None:
    if not 0.0 < p <= 1.0:
        raise ValueError(f"exponent p must lie in (0, 1], got {p}")


@lru_cache(maxsize=None)
def abs_moment(p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """E[|X|^p] for X ~ N(0,1), by quadrature.

    Valid for any p > 0 (p = 2 gives the unit variance); matches the
    gamma-function closed form 2^{p/2} Gamma((p+1)/2) / sqrt(pi) to the
    configured relative tolerance.
    """
    if not p > 0:
        raise ValueError(f"abs_moment requires p > 0, got {p}")
    upper = cfg.tail_cutoff_sigma

    def integrand(x):
        return x**p * _SQRT_2_OVER_PI * np.exp(-0.5 * x * x)

    pts = _origin_ladder(1.0) + [2.0, 4.0]
    return integrate(integrand, 0.0, upper, cfg, points=tuple(pts))


def _tilt_peak(t: float, p: float) -> float:
    """Stationary point of t*x^p - x^2/2 on (0, inf); 0 when t <= 0."""
    if t <= 0.0:
        return 0.0
    return (p * t) ** (1.0 / (2.0 - p))


def _tilt_upper(t: float, p: float, cfg: QuadratureConfig) -> float:
    return cfg.tail_cutoff_sigma * max(1.0, t ** (1.0 / (2.0 - p))) if t > 0 else cfg.tail_cutoff_sigma


_BUMP_STEPS = (-26.0, -18.0, -12.0, -8.0, -5.0, -3.0, -1.5, -0.5, 0.5, 1.5, 3.0, 5.0, 8.0, 12.0, 18.0, 26.0)


def _log_tilted_integral(t: float, p: float, cfg: QuadratureConfig, moment: int = 0):
    """log of integral_0^U x^(moment*p) exp(t x^p - x^2/2) dx, peak factored.

    Returns (log_integral, g_max) with g_max the factored peak value, so the
    caller reconstructs the full logarithm without overflow.
    """
    peak = _tilt_peak(t, p)
    if peak > 50.0:
        return _log_tilted_integral_shifted(t, p, peak, cfg, moment)
    upper = _tilt_upper(t, p, cfg)
    g_max = t * peak**p - 0.5 * peak * peak if peak > 0 else 0.0

    def integrand(x):
        g = t * np.power(x, p) - 0.5 * x * x - g_max
        val = np.exp(g)
        if moment:
            val = val * np.power(x, moment * p)
        return val

    # Peak curvature is universal: g''(peak) = p - 2, so the bump always has
    # width near 1 / sqrt(2 - p); lay unit-scale panels across it and a
    # geometric ladder over the origin cusp.
    if peak > 0:
        width = 1.0 / math.sqrt(2.0 - p)
        bump = [peak + width * k for k in _BUMP_STEPS]
        pts = _origin_ladder(max(peak / 4, 1.0)) + [x for x in bump if 0.0 < x < upper]
    else:
        pts = _origin_ladder(1.0) + [2.0, 4.0]
    value = integrate(integrand, 0.0, upper, cfg, points=tuple(pts))
    return math.log(value), g_max


def _log_tilted_integral_shifted(t: float, p: float, peak: float, cfg: QuadratureConfig, moment: int):
    """Far-from-origin peaks: integrate in s = x - peak coordinates.

    Both exponent terms are then huge while their difference is order one;
    expm1/log1p keeps the difference exact.  Beyond ~30 bump widths the
    integrand is below 1e-300, so narrow limits lose nothing.
    """
    tpow = t * peak**p
    g_max = tpow - 0.5 * peak * peak
    width = 1.0 / math.sqrt(2.0 - p)
    span = 2.5 * cfg.tail_cutoff_sigma * width
    lo = max(-peak, -span)

    def integrand(s):
        r = s / peak
        g = tpow * np.expm1(p * np.log1p(r)) - peak * s - 0.5 * s * s
        val = np.exp(g)
        if moment:
            val = val * np.power(1.0 + r, moment * p)
        return val

    pts = tuple(width * k for k in _BUMP_STEPS)
    value = integrate(integrand, lo, span, cfg, points=pts)
    logv = math.log(value)
    if moment:
        logv += moment * p * math.log(peak)
    return logv, g_max


def log_mgf_pos(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """log E[exp(t |X|^p)].  Stable for large t via peak factoring."""
    _check_exponent(p)
    if t < 0 and p < 1.0:
        raise ValueError("mgf_pos requires t >= 0 for p < 1")
    log_int, g_max = _log_tilted_integral(t, p, cfg)
    return math.log(_SQRT_2_OVER_PI) + g_max + log_int


def mgf_pos(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """E[exp(t |X|^p)]; at least 1 and strictly increasing in t."""
    return math.exp(log_mgf_pos(t, p, cfg))


def mgf_neg(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """E[exp(-t |X|^p)] in (0, 1) for t > 0.

    For large t the mass concentrates on the scale x ~ t^{-1/p}; a ladder of
    break points around that scale keeps the adaptive rule honest.
    """
    _check_exponent(p)
    if not t > 0:
        raise ValueError(f"mgf_neg requires t > 0, got {t}")
    upper = cfg.tail_cutoff_sigma

    def integrand(x):
        return _SQRT_2_OVER_PI * np.exp(-t * np.power(x, p) - 0.5 * x * x)

    scale = min(t ** (-1.0 / p), 1.0)
    pts = _origin_ladder(scale)
    step = scale
    while step < upper:
        pts.append(step)
        step *= 4.0
    return integrate(integrand, 0.0, upper, cfg, points=tuple(pts))


def mgf_neg_log_upper_bound(t: float, p: float) -> float:
    """log of the closed-form bound t^{-1/p} sqrt(2/pi) Gamma(1/p) / p.

    Derived by dropping the Gaussian factor after the substitution
    x = t^{-1/p} y; an upper bound on log mgf_neg for every t > 0.
    """
    _check_exponent(p)
    if not t > 0:
        raise ValueError("bound requires t > 0")
    return -math.log(t) / p + 0.5 * math.log(2.0 / math.pi) + math.lgamma(1.0 / p) - math.log(p)


def log_mgf_indicator(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """log E[exp(t |X|^p S)] with S ~ Bernoulli(1/2) independent of |X|."""
    lm = log_mgf_pos(t, p, cfg)
    return np.logaddexp(lm, 0.0) - math.log(2.0)


def mgf_indicator(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """E[exp(t |X|^p S)] = (mgf_pos(t, p) + 1) / 2."""
    return math.exp(log_mgf_indicator(t, p, cfg))


def tilted_moment_ratio(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """d/dt log mgf_pos: the mean of |X|^p under the exponentially tilted law.

    Equals the stationarity ratio of the positive-tilt Chernoff objective,
    so optimizer residuals can be checked without finite differences.
    """
    _check_exponent(p)
    log_num, _ = _log_tilted_integral(t, p, cfg, moment=1)
    log_den, _ = _log_tilted_integral(t, p, cfg, moment=0)
    # both integrals share the same factored peak, so it cancels
    return math.exp(log_num - log_den)


def tilted_second_moment_ratio(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Mean of |X|^{2p} under the tilted law; gives d/dt of the tilted mean
    as second_moment - mean^2 (the tilted variance)."""
    _check_exponent(p)
    log_num, _ = _log_tilted_integral(t, p, cfg, moment=2)
    log_den, _ = _log_tilted_integral(t, p, cfg, moment=0)
    return math.exp(log_num - log_den)


def indicator_tilted_moment_ratio(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """d/dt log mgf_indicator; denominator carries the sqrt(pi/2) mass at 0."""
    _check_exponent(p)
    log_num, g_max = _log_tilted_integral(t, p, cfg, moment=1)
    log_den, _ = _log_tilted_integral(t, p, cfg, moment=0)
    # denominator: integral e^{g} dx + sqrt(pi/2), peak e^{g_max} factored out
    den = math.exp(log_den) + _SQRT_PI_OVER_2 * math.exp(-g_max)
    return math.exp(log_num) / den


def indicator_tilted_second_moment_ratio(t: float, p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Companion second moment for the indicator tilt (same denominator)."""
    _check_exponent(p)
    log_num, g_max = _log_tilted_integral(t, p, cfg, moment=2)
    log_den, _ = _log_tilted_integral(t, p, cfg, moment=0)
    den = math.exp(log_den) + _SQRT_PI_OVER_2 * math.exp(-g_max)
    return math.exp(log_num) / den
