import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from lprecovery.quadrature import DEFAULT_QUADRATURE, QuadratureConfig, QuadratureError, integrate


@pytest.mark.parametrize(
    "f,a,b",
    [
        (lambda x: np.exp(-0.5 * x * x), 0.0, 12.0),
        (lambda x: np.sqrt(np.abs(x)), 0.0, 3.0),
        (lambda x: np.sin(7 * x) * np.exp(-x), 0.0, 9.0),
        (lambda x: 1.0 / (1.0 + x * x), -4.0, 4.0),
    ],
)
def test_matches_scipy_quadpack(f, a, b):
    want, _ = scipy_quad(lambda x: float(f(np.array([x]))[0]), a, b, epsabs=1e-13, epsrel=1e-13, limit=300)
    got = integrate(f, a, b)
    assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_break_points_help_sharp_features():
    scale = 1e-6
    f = lambda x: np.exp(-x / scale)
    got = integrate(f, 0.0, 1.0, points=tuple(scale * 10.0**k for k in range(0, 6)))
    assert got == pytest.approx(scale, rel=1e-9)


def test_empty_interval_and_bad_bounds():
    assert integrate(lambda x: x, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        integrate(lambda x: x, 2.0, 1.0)


def test_nonconvergence_raises_with_estimate():
    cfg = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=4)
    f = lambda x: np.sin(40 * x) ** 2 + np.sqrt(np.abs(x - 0.3))
    with pytest.raises(QuadratureError) as err:
        integrate(f, 0.0, 5.0, cfg)
    assert err.value.error_estimate > 0


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadratureConfig(tail_cutoff_sigma=4.0)
    assert DEFAULT_QUADRATURE.tail_cutoff_sigma >= 8


def test_duplicate_break_points_are_harmless():
    got = integrate(lambda x: np.ones_like(x), 0.0, 1.0, points=(0.5, 0.5, 0.5 + 1e-17))
    assert got == pytest.approx(1.0, rel=1e-12)
