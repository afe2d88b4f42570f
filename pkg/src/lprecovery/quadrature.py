"""Adaptive Gauss-Kronrod quadrature over finite intervals.

All semi-infinite integrals in this package are truncated to a finite
interval first (the integrands carry an exp(-x^2/2) factor, so a cutoff of
a dozen standard deviations is far below double precision).  Panels are
refined adaptively and every refinement round evaluates the integrand on
all new nodes in a single vectorized call, which keeps the hot
exponent-optimization loops cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureConfig", "QuadratureError", "integrate", "DEFAULT_QUADRATURE"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits for the adaptive quadrature.

    ``tail_cutoff_sigma`` is the truncation point of semi-infinite integrals
    in standard deviations; callers scale it when the integrand peaks away
    from the origin.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 512
    tail_cutoff_sigma: float = 12.0

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if not self.tail_cutoff_sigma >= 8:
            raise ValueError("tail_cutoff_sigma must be at least 8")


DEFAULT_QUADRATURE = QuadratureConfig()


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best value and the achieved error estimate so callers can
    diagnose misconfigured integrands.
    """

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(f"{message} (value={value:.6e}, error_estimate={error_estimate:.3e})")
        self.value = value
        self.error_estimate = error_estimate


# 15-point Kronrod nodes on [-1, 1] and weights, with the embedded 7-point
# Gauss weights aligned node-for-node (zero on Kronrod-only nodes).
_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_KRONROD_W = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_GAUSS_W = np.array(
    [
        0.0,
        0.129484966168870,
        0.0,
        0.279705391489277,
        0.0,
        0.381830050505119,
        0.0,
        0.417959183673469,
        0.0,
        0.381830050505119,
        0.0,
        0.279705391489277,
        0.0,
        0.129484966168870,
        0.0,
    ]
)


def _panel_rule(f, lo: np.ndarray, hi: np.ndarray):
    """Apply the G7/K15 pair to each panel; returns (kronrod, err) arrays."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = mid[:, None] + half[:, None] * _NODES[None, :]
    fs = np.asarray(f(xs.ravel()), dtype=float).reshape(xs.shape)
    k = half * (fs @ _KRONROD_W)
    g = half * (fs @ _GAUSS_W)
    # QUADPACK-style error model: rescale |K - G| by the variation of the
    # integrand so the estimate tracks the true Kronrod error.
    mean = k / np.maximum(2.0 * half, 1e-300)
    resasc = half * (np.abs(fs - mean[:, None]) @ _KRONROD_W)
    diff = np.abs(k - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0.0, np.minimum(1.0, (200.0 * diff / np.maximum(resasc, 1e-300)) ** 1.5), 0.0)
    err = np.where(resasc > 0.0, resasc * scaled, diff)
    return k, err


def integrate(f, a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE, points=()):
    """Integrate a vectorized callable ``f`` over [a, b].

    ``points`` lists interior break points (peaks, decay scales) that seed
    the initial panel layout.  Raises :class:`QuadratureError` if the
    tolerance is not met within ``cfg.max_subdivisions`` panels.
    """
    if not b > a:
        if b == a:
            return 0.0
        raise ValueError("integration bounds must satisfy a < b")
    sep = 1e-14 * (b - a)
    edges = [a]
    for pt in sorted(p for p in points if a < p < b):
        if pt - edges[-1] > sep and b - pt > sep:
            edges.append(pt)
    edges.append(b)
    lo = np.array(edges[:-1], dtype=float)
    hi = np.array(edges[1:], dtype=float)
    vals, errs = _panel_rule(f, lo, hi)

    while True:
        total = float(vals.sum())
        err_total = float(errs.sum())
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err_total <= target:
            return total
        if len(lo) >= cfg.max_subdivisions:
            raise QuadratureError("quadrature did not converge", total, err_total)
        # Split every panel carrying more than its share of the budget.
        split = errs > 0.5 * target / max(len(lo), 1)
        if not split.any():
            split = errs == errs.max()
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[~split], lo[split], mid])
        new_hi = np.concatenate([hi[~split], mid, hi[split]])
        new_vals, new_errs = _panel_rule(f, np.concatenate([lo[split], mid]), np.concatenate([mid, hi[split]]))
        vals = np.concatenate([vals[~split], new_vals])
        errs = np.concatenate([errs[~split], new_errs])
        lo, hi = new_lo, new_hi
