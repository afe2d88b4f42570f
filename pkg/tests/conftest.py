import numpy as np
import pytest

from lprecovery.experiments import example1_kernel, example1_matrix


@pytest.fixture
def kernel_k2():
    return example1_kernel(2)


@pytest.fixture
def matrix_k2():
    return example1_matrix(2)


def seeded_sparse_instance(seed: int, m: int, n: int, sparsity: int, p: float):
    """Deterministic (A, x_true) pair with a random support and amplitudes."""
    from lprecovery.linalg import RngSeed, sample_gaussian_matrix
    from lprecovery.solvers import RecoveryInstance

    A = sample_gaussian_matrix(m, n, RngSeed(seed))
    rng = RngSeed(seed).child(1).generator()
    support = rng.choice(n, size=sparsity, replace=False)
    x = np.zeros(n)
    amps = rng.normal(size=sparsity)
    amps[np.abs(amps) < 1e-3] = 1.0  # keep entries visibly nonzero
    x[support] = amps
    return RecoveryInstance(A=A, y=A @ x, p=p, x_true=x)
