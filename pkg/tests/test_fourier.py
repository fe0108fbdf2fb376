import math

import numpy as np
import pytest
from scipy.special import sici

from opmoduli.errors import PreconditionError
from opmoduli.fourier import (
    PERIODIZATION_LIMIT,
    exp_ray_bound,
    hat_norm_estimate,
    hat_norm_quadrature,
    hat_norm_quadrature_detailed,
    lip_extension_bound,
    periodization_coefficients,
    periodization_partial_sums,
    polya_bound,
    tanh_half_interval_bound,
)
from opmoduli.functions import abs_fn, fa_kernel, kappa, linear_fn, tanh_half


def triangle(t):
    return np.maximum(1.0 - np.abs(t), 0.0)


def test_quadrature_triangle_is_one():
    # nonnegative inverse transform (Fejer kernel): L1 norm equals f(0) = 1
    res = hat_norm_quadrature_detailed(triangle, window=16.0, grid_step=1e-3)
    assert res.value == pytest.approx(1.0, abs=1e-3)


def test_quadrature_gaussian_exact():
    res = hat_norm_quadrature_detailed(lambda t: np.exp(-(t**2)), window=30.0, grid_step=2e-3)
    assert res.value == pytest.approx(1.0, abs=1e-6)
    assert res.error_bound < 1e-4


def _fa_reference_l1(a: float) -> float:
    """Independent oracle: the inverse transform of f_a has the closed form
    (i/pi)[(sin(a x) - a x cos(a x))/(a^2 x^2) + pi/2 - Si(a x)]; integrate its
    modulus by adaptive quadrature on oscillation-sized pieces."""
    from scipy.integrate import quad

    def absg(x):
        si, _ = sici(a * x)
        val = (np.sin(a * x) - a * x * np.cos(a * x)) / (a**2 * x**2) + np.pi / 2 - si
        return abs(val) / np.pi

    total = 0.0
    cuts = np.concatenate([[1e-9, 0.5 / a], np.arange(1, 8001) * np.pi / a])
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        v, _ = quad(absg, lo, hi, limit=60)
        total += v
    return 2.0 * total


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 4.0])
def test_quadrature_fa_brackets(a):
    val = hat_norm_quadrature(fa_kernel(a), window=250.0 * a, grid_step=a / 512.0)
    assert 1.0 / a - 1e-3 <= val <= 2.0 / a + 1e-3


def test_quadrature_fa_against_si_oracle():
    ref = _fa_reference_l1(1.0)
    val = hat_norm_quadrature(fa_kernel(1.0), window=250.0, grid_step=1.0 / 512.0)
    assert val == pytest.approx(ref, abs=5e-3)
    assert ref == pytest.approx(1.576, abs=2e-3)  # frozen from the oracle


def test_quadrature_rejects_nondecaying():
    with pytest.raises(PreconditionError):
        hat_norm_quadrature(lambda t: np.ones_like(t), window=10.0, grid_step=1e-2)


def test_polya_exp_on_negative_ray():
    assert polya_bound(np.exp, (-math.inf, 0.0)) == pytest.approx(1.0)


def test_polya_reciprocal_on_ray():
    assert polya_bound(lambda t: 1.0 / t, (2.0, math.inf)) == pytest.approx(0.5)


def test_polya_logistic_ray():
    for a in (-1.0, 0.0):
        val = polya_bound(lambda t: np.exp(t) / (1 + np.exp(t)), (-math.inf, a))
        assert val == pytest.approx(math.exp(a) / (1 + math.exp(a)), rel=1e-9)


def test_polya_rejects_nonmonotone():
    with pytest.raises(PreconditionError):
        polya_bound(lambda t: np.sin(t) / (1 + t**2), (0.0, math.inf))


def test_tanh_interval_bound_values():
    assert tanh_half_interval_bound((-0.5, 0.5)) == pytest.approx(12.0**-0.25, rel=1e-12)
    # |J| = 4: both branches evaluated, short branch wins
    assert tanh_half_interval_bound((-2.0, 2.0)) == pytest.approx(4.0 / 12.0**0.25, rel=1e-12)
    # |J| = 100: logarithmic branch wins
    assert tanh_half_interval_bound((-50.0, 50.0)) == pytest.approx(
        5.0 + (4.0 / math.pi) * math.log(50.0), rel=1e-12
    )
    with pytest.raises(PreconditionError):
        tanh_half_interval_bound((1.0, 3.0))


def test_exp_ray_bound_values():
    assert exp_ray_bound(2.0) == pytest.approx(2.0 + (2.0 / math.pi) * math.log(2.0), rel=1e-12)
    assert exp_ray_bound(math.e) == pytest.approx(2.0 + 2.0 / math.pi, rel=1e-12)
    assert exp_ray_bound(10.0) == pytest.approx(2.0 + (2.0 / math.pi) * math.log(10.0), rel=1e-12)
    assert exp_ray_bound(10.0) == pytest.approx(3.4659, abs=1e-4)
    with pytest.raises(PreconditionError):
        exp_ray_bound(1.0)


def test_lip_extension_bound_values():
    assert lip_extension_bound(abs_fn(), (-0.5, 0.5)) == pytest.approx(2.0 / 12.0**0.25, rel=1e-12)
    assert lip_extension_bound(kappa(), (-1.0, 1.0)) == pytest.approx(4.0 / 12.0**0.25, rel=1e-12)
    assert lip_extension_bound(linear_fn(0.0), (-1.0, 1.0)) == 0.0
    with pytest.raises(PreconditionError):
        lip_extension_bound(linear_fn(1.0, 5.0), (-1.0, 1.0))  # f(0) != 0


def test_periodization_signs_and_limit():
    res = periodization_coefficients(64)
    N = 64
    a_pos = res.coefficients[N:]
    signs = (-1.0) ** np.arange(N + 1) * a_pos
    assert signs.min() >= -1e-9
    assert res.coefficients[N + 1] == pytest.approx(res.coefficients[N - 1])  # even
    assert a_pos[0] > 1.0  # positive mean exceeds 1
    assert res.partial_sum <= PERIODIZATION_LIMIT + 1e-6
    assert res.sum_abs == pytest.approx(PERIODIZATION_LIMIT, abs=1e-3)


def test_periodization_partial_sums_monotone():
    res = periodization_coefficients(48)
    sums = periodization_partial_sums(res.coefficients)
    assert np.all(np.diff(sums) >= -1e-15)
    assert sums[-1] == pytest.approx(res.partial_sum)
    # partial sums approach the limit from below as N grows
    gap48 = PERIODIZATION_LIMIT - sums[-1]
    res96 = periodization_coefficients(96)
    gap96 = PERIODIZATION_LIMIT - res96.partial_sum
    assert 0 < gap96 < gap48


def test_hat_norm_estimate_tanh():
    est = hat_norm_estimate(tanh_half(), (-0.5, 0.5))
    assert est.method == "lip-extension"
    assert est.lower <= est.upper + 1e-6
    est_big = hat_norm_estimate(tanh_half(), (-50.0, 50.0))
    assert est_big.method == "logaa"
    assert est_big.lower <= est_big.upper


def test_hat_norm_estimate_lower_is_sup():
    est = hat_norm_estimate(kappa(), (-0.25, 0.25))
    assert est.lower == pytest.approx(0.25, abs=1e-6)
