"""Null-space recovery conditions: evaluation and falsification search.

All conditions quantify over every nonzero z in the kernel-coefficient
space.  They are positively homogeneous in z, so only unit directions
matter; for a one-dimensional kernel the two directions +-1 decide the
verdict exactly.  In higher dimension the quantifier is undecidable by
sampling, so ``certify`` reports either a concrete counterexample (with a
re-verifiable witness) or "not falsified within budget", flagged through
``certificate_exact``.

Modes and their inequalities at a given z (B_i the rows of the basis):

* strong     sum of the s largest |B_i z|^p  <  remaining sum     (strict)
* weak_l1    ||B_{T-}z||_1 < ||B_{Tc}z||_1 + ||B_{T+}z||_1        (strict)
* weak_lp    ||B_{T-}z||_p^p <= ||B_{Tc}z||_p^p, strict when B_{T+}z = 0
* weak_l0    ||B_{T-}z||_0 < ||B_{Tc}z||_0                        (strict)
* sectional  ||B_T z||_p^p < ||B_{Tc}z||_p^p                      (strict)

T- collects support indices whose kernel direction fights the sign
pattern; ties (B_i z = 0) follow the sign-agreeing side uniformly across
all modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import RngSeed

__all__ = [
    "SupportPattern",
    "ConditionVerdict",
    "SearchBudget",
    "MODES",
    "partition_support",
    "strong_condition_holds_for",
    "weak_condition_holds_for",
    "sectional_condition_holds_for",
    "certify",
]

MODES = ("strong", "weak_l1", "weak_lp", "weak_l0", "sectional")
_ZERO_REL_TOL = 1e-12


@dataclass(frozen=True)
class SupportPattern:
    """Support indices with one sign (+-1) per index; a weak-recovery class."""

    support: tuple
    signs: tuple

    def __post_init__(self) -> None:
        if len(set(self.support)) != len(self.support):
            raise ValueError("support indices must be distinct")
        if list(self.support) != sorted(self.support):
            raise ValueError("support must be sorted")
        if any(i < 0 for i in self.support):
            raise ValueError("support indices must be nonnegative")
        if len(self.signs) != len(self.support) or any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +-1, one per support index")

    @classmethod
    def nonnegative(cls, size: int) -> "SupportPattern":
        """The all-plus pattern on the first ``size`` indices."""
        return cls(support=tuple(range(size)), signs=(1,) * size)


@dataclass(frozen=True)
class SearchBudget:
    sphere_samples: int = 256
    refine_steps: int = 120
    step_shrink: float = 0.5
    seed: RngSeed = RngSeed(0)

    def __post_init__(self) -> None:
        if self.sphere_samples < 1:
            raise ValueError("sphere_samples must be at least 1")
        if not 0.0 < self.step_shrink < 1.0:
            raise ValueError("step_shrink must lie in (0, 1)")


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of a certification run.

    ``holds`` means "not falsified"; it is a proof only when
    ``certificate_exact`` is set (one-dimensional kernels).  A falsified
    verdict carries a witness (z, lhs, rhs) that re-evaluates to a violation
    with the public condition evaluators alone.
    """

    mode: str
    holds: bool
    certificate_exact: bool
    witness: dict | None = None
    detail: dict = field(default_factory=dict, compare=False)


def partition_support(B: np.ndarray, z: np.ndarray, pat: SupportPattern):
    """Split the support into sign-fighting (T-) and sign-agreeing (T+) parts.

    An index fights the pattern when sign(B_i z) * sign_i < 0; exact zeros
    (relative tolerance 1e-12) count as agreeing.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    z = np.asarray(z, dtype=float)
    rows = np.fromiter(pat.support, dtype=int)
    vals = B[rows] @ z
    scale = _ZERO_REL_TOL * np.linalg.norm(z) * np.linalg.norm(B[rows], axis=1)
    signs = np.where(np.abs(vals) <= scale, 0.0, np.sign(vals))
    fighting = signs * np.asarray(pat.signs) < 0
    t_minus = tuple(int(i) for i in rows[fighting])
    t_plus = tuple(int(i) for i in rows[~fighting])
    return t_minus, t_plus


def strong_condition_holds_for(B: np.ndarray, z: np.ndarray, p: float, rho_n: int):
    """(lhs, rhs) of the strong condition at this z for supports of size rho_n.

    The adversarial support is the set of the rho_n largest |B_i z|^p, so
    lhs is that top sum and rhs the rest; the caller compares lhs < rhs.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if not 0 <= rho_n <= B.shape[0]:
        raise ValueError("support size out of range")
    vals = _entry_powers(B @ np.asarray(z, dtype=float), p)
    vals.sort()
    lhs = float(vals[len(vals) - rho_n :].sum()) if rho_n else 0.0
    return lhs, float(vals.sum() - lhs)


def _entry_powers(bz: np.ndarray, p: float) -> np.ndarray:
    if p == 0.0:
        scale = np.abs(bz).max() if bz.size else 0.0
        if scale == 0.0:
            return np.zeros_like(bz)
        return (np.abs(bz) > _ZERO_REL_TOL * scale).astype(float)
    return np.abs(bz) ** p


def weak_condition_holds_for(B: np.ndarray, z: np.ndarray, p: float, pat: SupportPattern):
    """Evaluate the weak condition for this z -> (holds_at_z, lhs, rhs)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    B = np.atleast_2d(np.asarray(B, dtype=float))
    z = np.asarray(z, dtype=float)
    t_minus, t_plus = partition_support(B, z, pat)
    comp = sorted(set(range(B.shape[0])) - set(pat.support))
    bz_minus = B[list(t_minus)] @ z if t_minus else np.zeros(0)
    bz_comp = B[comp] @ z if comp else np.zeros(0)
    if p == 1.0:
        bz_plus = B[list(t_plus)] @ z if t_plus else np.zeros(0)
        lhs = float(np.abs(bz_minus).sum())
        rhs = float(np.abs(bz_comp).sum() + np.abs(bz_plus).sum())
        return lhs < rhs, lhs, rhs
    lhs = float(_entry_powers(bz_minus, p).sum())
    rhs = float(_entry_powers(bz_comp, p).sum())
    if p == 0.0:
        return lhs < rhs, lhs, rhs
    bz_plus = B[list(t_plus)] @ z if t_plus else np.zeros(0)
    plus_scale = np.linalg.norm(z) * max(1.0, float(np.abs(B).max()))
    plus_vanishes = bool(np.all(np.abs(bz_plus) <= _ZERO_REL_TOL * plus_scale))
    holds = lhs < rhs if plus_vanishes else lhs <= rhs
    return holds, lhs, rhs


def sectional_condition_holds_for(B: np.ndarray, z: np.ndarray, p: float, support):
    """(lhs, rhs) of the sectional condition on a fixed support."""
    B = np.atleast_2d(np.asarray(B, dtype=float))
    z = np.asarray(z, dtype=float)
    support = sorted(set(int(i) for i in support))
    if support and (support[0] < 0 or support[-1] >= B.shape[0]):
        raise ValueError("support index out of range")
    comp = sorted(set(range(B.shape[0])) - set(support))
    lhs = float(_entry_powers(B[support] @ z if support else np.zeros(0), p).sum())
    rhs = float(_entry_powers(B[comp] @ z if comp else np.zeros(0), p).sum())
    return lhs, rhs


def _violation(B: np.ndarray, mode: str, p: float, spec, z: np.ndarray):
    """(violated, margin, lhs, rhs) at z; margin = rhs - lhs."""
    if mode == "strong":
        lhs, rhs = strong_condition_holds_for(B, z, p, spec)
        return lhs >= rhs, rhs - lhs, lhs, rhs
    if mode == "sectional":
        lhs, rhs = sectional_condition_holds_for(B, z, p, spec)
        return lhs >= rhs, rhs - lhs, lhs, rhs
    if mode in ("weak_l1", "weak_lp", "weak_l0"):
        holds, lhs, rhs = weak_condition_holds_for(B, z, p, spec)
        return not holds, rhs - lhs, lhs, rhs
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _mode_p(mode: str, p: float) -> float:
    if mode == "weak_l1":
        return 1.0
    if mode == "weak_l0":
        return 0.0
    return p


def certify(B: np.ndarray, mode: str, p: float, pattern_or_rho, budget: SearchBudget = SearchBudget()) -> ConditionVerdict:
    """Certify or falsify a null-space condition over all kernel directions.

    One-column B: exact (z = +-1 by homogeneity).  Two columns: dense angle
    sweep plus refinement.  Otherwise: random unit directions followed by a
    derivative-free pattern search with shrinking steps on the best
    candidates; any violation is returned as a witness.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if B.shape[1] < 1:
        raise ValueError("basis must have at least one column")
    p = _mode_p(mode, p)
    spec = pattern_or_rho
    if mode == "strong":
        spec = int(pattern_or_rho)
    elif mode == "sectional":
        spec = tuple(int(i) for i in pattern_or_rho)
    elif not isinstance(spec, SupportPattern):
        raise ValueError("weak modes need a SupportPattern")

    dim = B.shape[1]
    if dim == 1:
        return _certify_exact_1d(B, mode, p, spec)
    if dim == 2:
        candidates = _angle_candidates(max(budget.sphere_samples, 4096))
    else:
        rng = budget.seed.generator()
        candidates = rng.normal(size=(budget.sphere_samples, dim))
        candidates /= np.linalg.norm(candidates, axis=1, keepdims=True)

    margins = []
    for z in candidates:
        violated, margin, lhs, rhs = _violation(B, mode, p, spec, z)
        if violated:
            return _falsified(mode, z, lhs, rhs)
        margins.append(margin)
    order = np.argsort(margins)
    rng = budget.seed.child(1).generator()
    best_margin = float(margins[order[0]])
    for idx in order[: max(1, min(8, len(order)))]:
        z = candidates[idx].copy()
        found, witness = _refine(B, mode, p, spec, z, budget, rng)
        if found:
            return _falsified(mode, *witness)
        best_margin = min(best_margin, witness[3])
    return ConditionVerdict(
        mode=mode,
        holds=True,
        certificate_exact=False,
        witness=None,
        detail={"min_margin": best_margin, "samples": len(candidates)},
    )


def _angle_candidates(count: int) -> np.ndarray:
    # full circle: z and -z are not equivalent for the weak conditions
    angles = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _certify_exact_1d(B: np.ndarray, mode: str, p: float, spec) -> ConditionVerdict:
    for direction in (1.0, -1.0):
        z = np.array([direction])
        violated, margin, lhs, rhs = _violation(B, mode, p, spec, z)
        if violated:
            verdict = _falsified(mode, z, lhs, rhs)
            return ConditionVerdict(
                mode=mode,
                holds=False,
                certificate_exact=True,
                witness=verdict.witness,
                detail=verdict.detail,
            )
    return ConditionVerdict(mode=mode, holds=True, certificate_exact=True, witness=None)


def _falsified(mode: str, z: np.ndarray, lhs: float, rhs: float) -> ConditionVerdict:
    return ConditionVerdict(
        mode=mode,
        holds=False,
        certificate_exact=False,
        witness={"z": [float(v) for v in np.asarray(z).ravel()], "lhs": lhs, "rhs": rhs},
        detail={"margin": rhs - lhs},
    )


def _refine(B, mode, p, spec, z, budget: SearchBudget, rng):
    """Pattern search minimizing the margin; the sort and sign partition make
    the margin non-smooth, so no gradients."""
    dim = z.size
    _, margin, lhs, rhs = _violation(B, mode, p, spec, z)
    step = 0.5
    for _ in range(budget.refine_steps):
        improved = False
        for j in rng.permutation(dim):
            for direction in (1.0, -1.0):
                trial = z.copy()
                trial[j] += direction * step
                norm = np.linalg.norm(trial)
                if norm == 0.0:
                    continue
                trial /= norm
                violated, m, l, r = _violation(B, mode, p, spec, trial)
                if violated:
                    return True, (trial, l, r)
                if m < margin:
                    z, margin, lhs, rhs = trial, m, l, r
                    improved = True
        if not improved:
            step *= budget.step_shrink
            if step < 1e-9:
                break
    return False, (z, lhs, rhs, margin)
