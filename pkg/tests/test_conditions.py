import itertools

import numpy as np
import pytest

from lprecovery import conditions as C
from lprecovery import linalg as la
from lprecovery import solvers as sv
from lprecovery.experiments import example1_kernel, example1_matrix


def kernel_column(k: int) -> np.ndarray:
    return example1_kernel(k).reshape(-1, 1)


def test_pattern_validation():
    with pytest.raises(ValueError):
        C.SupportPattern(support=(2, 1), signs=(1, 1))
    with pytest.raises(ValueError):
        C.SupportPattern(support=(1, 1), signs=(1, 1))
    with pytest.raises(ValueError):
        C.SupportPattern(support=(0, 1), signs=(1, 2))
    pat = C.SupportPattern.nonnegative(3)
    assert pat.support == (0, 1, 2)
    assert pat.signs == (1, 1, 1)


def test_partition_on_the_explicit_kernel():
    k = 2
    B = kernel_column(k)
    pat = C.SupportPattern.nonnegative(2 * k)
    t_minus, t_plus = C.partition_support(B, np.array([1.0]), pat)
    assert t_minus == (2, 3)  # the -1 block fights the all-plus pattern
    assert t_plus == (0, 1)
    # flipping z swaps the fighting set
    t_minus_f, t_plus_f = C.partition_support(B, np.array([-1.0]), pat)
    assert t_minus_f == (0, 1)
    assert t_plus_f == (2, 3)


def test_partition_zero_rows_count_as_agreeing():
    B = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    pat = C.SupportPattern(support=(0, 1), signs=(1, 1))
    t_minus, t_plus = C.partition_support(B, np.array([0.0, 1.0]), pat)
    assert t_minus == ()
    assert t_plus == (0, 1)


def test_strong_condition_explicit_tables():
    for k in (2, 5, 9):
        B = kernel_column(k)
        z = np.array([1.0])
        # exponent one: total mass 33k/16, unit entries dominate
        for s in range(1, 2 * k + 1):
            lhs, rhs = C.strong_condition_holds_for(B, z, 1.0, s)
            assert lhs == pytest.approx(float(s), abs=1e-12)
            assert rhs == pytest.approx(33.0 * k / 16.0 - s, abs=1e-10)
        lhs, rhs = C.strong_condition_holds_for(B, z, 0.5, 2 * k)
        assert lhs == pytest.approx(2.0 * k, abs=1e-10)
        assert rhs == pytest.approx(0.5 * k, abs=1e-10)


def test_strong_condition_equal_rows_symmetry():
    B = np.ones((10, 1))
    z = np.array([1.0])
    for s in range(11):
        lhs, rhs = C.strong_condition_holds_for(B, z, 1.0, s)
        assert (lhs < rhs) == (s < 5)


def test_strong_top_set_matches_enumeration():
    base = la.RngSeed(606)
    B = la.sample_gaussian_matrix(9, 3, base)
    z = la.sample_gaussian_vector(3, base.child(1))
    powers = np.abs(B @ z) ** 0.7
    for s in (1, 3, 5):
        lhs, _ = C.strong_condition_holds_for(B, z, 0.7, s)
        best = max(sum(powers[list(T)]) for T in itertools.combinations(range(9), s))
        assert lhs == pytest.approx(best, rel=1e-12)


def test_weak_condition_explicit_values():
    k = 3
    B = kernel_column(k)
    pat = C.SupportPattern.nonnegative(2 * k)
    z = np.array([1.0])
    holds, lhs, rhs = C.weak_condition_holds_for(B, z, 0.5, pat)
    assert not holds and lhs == pytest.approx(k, abs=1e-12) and rhs == pytest.approx(k / 2.0, abs=1e-12)
    holds, lhs, rhs = C.weak_condition_holds_for(B, z, 1.0, pat)
    assert holds and lhs == pytest.approx(k, abs=1e-12)
    assert rhs == pytest.approx(k + k / 16.0, abs=1e-12)


def test_weak_condition_orthogonal_direction_is_safe():
    B = np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [2.0, 0.0]])
    pat = C.SupportPattern(support=(0, 1), signs=(1, -1))
    z = np.array([1.0, 0.0])  # kills every support row
    holds, lhs, rhs = C.weak_condition_holds_for(B, z, 0.5, pat)
    assert holds and lhs == 0.0 and rhs > 0.0


def test_weak_lp_strict_branch_when_agreeing_rows_vanish():
    # support rows: one fighting, one exactly zero -> strict comparison
    B = np.array([[-1.0], [0.0], [1.0]])
    pat = C.SupportPattern(support=(0, 1), signs=(1, 1))
    holds, lhs, rhs = C.weak_condition_holds_for(B, np.array([1.0]), 0.5, pat)
    assert lhs == rhs == 1.0
    assert not holds  # equality fails the strict branch
    # with a genuinely agreeing row the comparison is non-strict
    B2 = np.array([[-1.0], [0.5], [1.0]])
    holds2, lhs2, rhs2 = C.weak_condition_holds_for(B2, np.array([1.0]), 0.5, pat)
    assert lhs2 == rhs2 == 1.0
    assert holds2


def test_weak_l0_counts():
    B = np.array([[-2.0], [3.0], [1e-15], [1.0]])
    pat = C.SupportPattern(support=(0, 1), signs=(1, 1))
    holds, lhs, rhs = C.weak_condition_holds_for(B, np.array([1.0]), 0.0, pat)
    assert lhs == 1.0  # only the fighting row counts
    assert rhs == 1.0  # the 1e-15 entry is a numerical zero
    assert not holds


def test_sectional_explicit_counterexample():
    B1 = np.array([16.0, 16.0, 1.0, 36.0]).reshape(-1, 1)
    z = np.array([1.0])
    assert C.sectional_condition_holds_for(B1, z, 1.0, (0, 1)) == (32.0, 37.0)
    assert C.sectional_condition_holds_for(B1, z, 0.5, (0, 1)) == (8.0, 7.0)
    B2 = np.array([1.0, 4.0, 1.0, 9.0]).reshape(-1, 1)
    assert C.sectional_condition_holds_for(B2, z, 0.5, (0, 1)) == (3.0, 4.0)
    assert C.sectional_condition_holds_for(B2, z, 1.0, (0, 1)) == (5.0, 10.0)
    assert C.certify(B1, "sectional", 1.0, (0, 1)).holds
    bad = C.certify(B1, "sectional", 0.5, (0, 1))
    assert not bad.holds and bad.certificate_exact
    assert C.certify(B2, "sectional", 0.5, (0, 1)).holds
    assert C.certify(B2, "sectional", 1.0, (0, 1)).holds


def test_certify_one_dimensional_is_exact():
    k = 4
    B = kernel_column(k)
    pat = C.SupportPattern.nonnegative(2 * k)
    strong_ok = C.certify(B, "strong", 0.5, 2 * k // 2 + k // 4 - 1)
    assert strong_ok.holds and strong_ok.certificate_exact
    weak_bad = C.certify(B, "weak_lp", 0.5, pat)
    assert (not weak_bad.holds) and weak_bad.certificate_exact
    assert weak_bad.witness is not None
    # witness re-verification through the public evaluators only
    z = np.asarray(weak_bad.witness["z"])
    holds, lhs, rhs = C.weak_condition_holds_for(B, z, 0.5, pat)
    assert not holds
    assert lhs == weak_bad.witness["lhs"]
    assert rhs == weak_bad.witness["rhs"]


@pytest.mark.parametrize("mode,p", [("strong", 0.5), ("weak_lp", 0.5), ("sectional", 1.0)])
def test_scale_invariance_of_verdicts(mode, p):
    base = la.RngSeed(8888)
    B = la.sample_gaussian_matrix(30, 4, base)
    z = la.sample_gaussian_vector(4, base.child(1))
    pat = C.SupportPattern.nonnegative(10)
    for c in (0.01, 1.0, 250.0):
        if mode == "strong":
            lhs, rhs = C.strong_condition_holds_for(B, z, p, 10)
            lhs_c, rhs_c = C.strong_condition_holds_for(B, c * z, p, 10)
            assert (lhs < rhs) == (lhs_c < rhs_c)
        elif mode == "weak_lp":
            assert (
                C.weak_condition_holds_for(B, z, p, pat)[0]
                == C.weak_condition_holds_for(B, c * z, p, pat)[0]
            )
        else:
            lhs, rhs = C.sectional_condition_holds_for(B, z, p, range(10))
            lhs_c, rhs_c = C.sectional_condition_holds_for(B, c * z, p, range(10))
            assert (lhs < rhs) == (lhs_c < rhs_c)


def test_strong_margin_monotone_in_support_size():
    base = la.RngSeed(246)
    B = la.sample_gaussian_matrix(25, 3, base)
    z = la.sample_gaussian_vector(3, base.child(1))
    margins = []
    for s in range(0, 26, 5):
        lhs, rhs = C.strong_condition_holds_for(B, z, 0.5, s)
        margins.append(rhs - lhs)
    assert all(b <= a + 1e-12 for a, b in zip(margins, margins[1:]))


def test_certified_strong_size_implies_l1_recovery():
    # one-dimensional kernel: the exact strong certificate at size 2 must
    # translate into universal recovery by the convex program
    k = 2
    A = example1_matrix(k)
    B = la.null_space_basis(A)
    verdict = C.certify(B, "strong", 1.0, 2)
    assert verdict.holds and verdict.certificate_exact
    n = 6 * k
    for trial in range(100):
        rng = la.RngSeed(7000 + trial).generator()
        support = rng.choice(n, size=2, replace=False)
        x = np.zeros(n)
        amps = rng.normal(size=2)
        amps[np.abs(amps) < 1e-2] = 1.0
        x[support] = amps
        inst = sv.RecoveryInstance(A=A, y=A @ x, p=1.0, x_true=x)
        assert sv.solve_l1(inst).recovered


def test_search_falsifies_above_the_weak_limit():
    falsified = 0
    for seed in range(20):
        B = la.sample_gaussian_matrix(300, 6, 42_000 + seed)
        pat = C.SupportPattern.nonnegative(240)  # rho = 0.8 > 2/3
        verdict = C.certify(B, "weak_lp", 0.5, pat, C.SearchBudget(seed=la.RngSeed(seed)))
        falsified += not verdict.holds
    assert falsified >= 18


def test_two_dimensional_angle_sweep():
    base = la.RngSeed(13)
    B = la.sample_gaussian_matrix(200, 2, base)
    pat = C.SupportPattern.nonnegative(160)  # rho = 0.8
    verdict = C.certify(B, "weak_lp", 0.5, pat, C.SearchBudget(sphere_samples=64, seed=base))
    assert not verdict.holds
    assert len(verdict.witness["z"]) == 2


def test_certify_input_validation():
    B = kernel_column(2)
    with pytest.raises(ValueError):
        C.certify(B, "nonsense", 0.5, 1)
    with pytest.raises(ValueError):
        C.certify(B, "weak_lp", 0.5, 3)  # weak modes need a pattern
    with pytest.raises(ValueError):
        C.SearchBudget(sphere_samples=0)
