import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmoduli.errors import DomainError, PreconditionError
from opmoduli.functions import (
    Grid,
    abs_fn,
    divided_diff,
    divided_diff_values,
    fa_kernel,
    fn_from_descriptor,
    geometric_grid,
    integer_window,
    kappa,
    lacunary_signed,
    linear_fn,
    lip_const,
    phi_s,
    piecewise_linear,
    roots_of_unity,
    scalar_modulus,
    second_derivative_summary,
    tanh_half,
    trig_poly,
    uniform_grid,
)


# --- evaluation ------------------------------------------------------------


def test_kappa_values():
    k = kappa()
    assert k(0.5) == pytest.approx(0.5)
    assert k(7.0) == pytest.approx(1.0)
    assert k(-7.0) == pytest.approx(-1.0)
    assert k(-1.0) == pytest.approx(-1.0)


def test_phi_s_zero_at_zero():
    for s in (-3.0, -0.5, 0.0, 0.7, 3.0):
        assert phi_s(s)(0.0) == pytest.approx(0.0, abs=1e-15)


def test_fa_branches_agree_at_a():
    f = fa_kernel(2.0)
    assert f(2.0) == pytest.approx(0.5)
    assert f(-2.0) == pytest.approx(-0.5)
    # both branch formulas give 1/a there
    assert 2.0 / 2.0**2 == pytest.approx(1.0 / 2.0)


def test_phi_s_kappa_identity():
    # phi_s(t) = (|s|/2) kappa(2t/s - 1) + |s|/2 for s != 0
    rng = np.random.default_rng(0)
    for s in (-4.0, -1.0, 0.3, 2.0, 17.0):
        t = rng.uniform(-30, 30, 200)
        lhs = phi_s(s)(t)
        rhs = (abs(s) / 2) * kappa()(2 * t / s - 1) + abs(s) / 2
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_piecewise_linear_eval_and_slopes():
    f = piecewise_linear([(0.0, 0.0), (1.0, 1.0)], left_slope=0.0, right_slope=0.0)
    assert f(-5.0) == 0.0
    assert f(0.5) == pytest.approx(0.5)
    assert f(9.0) == pytest.approx(1.0)
    assert f.lip == 1.0


def test_trig_poly_eval_and_derivative():
    # f(z) = z^2: f'(z) = 2z
    f = trig_poly([0, 0, 0, 0, 1])
    z = np.exp(0.3j)
    assert f(z) == pytest.approx(z**2)
    assert f.derivative(z) == pytest.approx(2 * z)
    assert f.fhat(2) == 1.0 and f.fhat(1) == 0.0 and f.fhat(5) == 0.0


def test_trig_poly_rejects_offcircle():
    f = trig_poly([0, 0, 1])
    with pytest.raises(DomainError):
        f(1.5)


def test_lacunary_signed_coefficients():
    f = lacunary_signed([1, -1, 1], [1.0, 0.25, 0.0625])
    assert f.fhat(1) == pytest.approx(1.0)
    assert f.fhat(2) == pytest.approx(-0.25)
    assert f.fhat(4) == pytest.approx(0.0625)
    assert f.degree == 4


def test_descriptor_roundtrip():
    for f in (abs_fn(), kappa(), phi_s(2.5), tanh_half(), fa_kernel(0.5),
              piecewise_linear([(0, 0), (1, 2)], 1, 0), lacunary_signed([1, -1], [1, 0.5])):
        g = fn_from_descriptor(f.to_descriptor())
        t = np.linspace(-3, 3, 17) if f.domain == "real" else np.exp(1j * np.linspace(0, 6, 17))
        np.testing.assert_allclose(np.asarray(f(t)), np.asarray(g(t)), atol=1e-14)


# --- grids -------------------------------------------------------------------


def test_grid_sorts_and_rejects_duplicates():
    g = Grid("real", [3.0, 1.0, 2.0])
    np.testing.assert_allclose(g.points, [1.0, 2.0, 3.0])
    with pytest.raises(PreconditionError):
        Grid("real", [1.0, 1.0 + 1e-12])


def test_geometric_and_integer_grids():
    g = geometric_grid(1.0, 2.0, 5)
    np.testing.assert_allclose(g.points, [1, 2, 4, 8, 16])
    w = integer_window(3)
    np.testing.assert_allclose(w.points, [-3, -2, -1, 0, 1, 2, 3])


def test_roots_of_unity_grid():
    g = roots_of_unity(4)
    assert g.size == 4
    np.testing.assert_allclose(np.sort(np.abs(g.points)), np.ones(4))
    assert np.isclose(g.points**4, 1.0).all()


# --- divided differences ------------------------------------------------------


def test_divided_diff_abs_entries():
    X = Grid("real", [-2.0, -1.0, 1.0, 2.0])
    dd = divided_diff(abs_fn(), X, X, rule="zero")
    xs = X.points
    i = np.where(xs == 2.0)[0][0]
    j = np.where(xs == -1.0)[0][0]
    assert dd.entries[i, j] == pytest.approx(1.0 / 3.0)
    i1 = np.where(xs == 1.0)[0][0]
    assert dd.entries[i1, j] == pytest.approx(0.0, abs=1e-15)
    assert np.all(np.diag(dd.entries) == 0)


def test_divided_diff_singleton_zero_rule():
    X = Grid("real", [0.7])
    dd = divided_diff(kappa(), X, X, rule="zero")
    assert dd.entries.shape == (1, 1) and dd.entries[0, 0] == 0


def test_divided_diff_tanh_derivative_diagonal():
    X = Grid("real", [0.0])
    dd = divided_diff(tanh_half(), X, X, rule="derivative")
    assert dd.entries[0, 0] == pytest.approx(0.5)


def test_divided_diff_derivative_rule_errors_at_kink():
    X = Grid("real", [0.0])
    with pytest.raises(DomainError):
        divided_diff(abs_fn(), X, X, rule="derivative")


def test_divided_diff_hermitian_for_real_fn():
    X = uniform_grid(-2, 2, 9)
    dd = divided_diff(kappa(), X, X, rule="zero")
    assert np.abs(dd.entries - dd.entries.conj().T).max() < 1e-14


def test_divided_diff_entries_bounded_by_lip():
    for f in (abs_fn(), kappa(), phi_s(1.5), tanh_half()):
        X = uniform_grid(-3, 3, 25)
        dd = divided_diff(f, X, X, rule="zero")
        assert np.abs(dd.entries).max() <= lip_const(f, (-3, 3)) + 1e-12


def test_divided_diff_values_allows_repeats():
    xs = np.array([1.0, 1.0, 2.0])
    out = divided_diff_values(abs_fn(), xs, xs, rule="zero")
    assert out[0, 1] == 0.0 and out[0, 2] == pytest.approx(1.0)


def test_divided_diff_circle():
    X = roots_of_unity(6)
    f = trig_poly([0, 0, 0, 1, 0])  # f(z) = z
    dd = divided_diff(f, X, X, rule="zero")
    off = ~np.eye(6, dtype=bool)
    np.testing.assert_allclose(dd.entries[off], 1.0, atol=1e-12)


# --- moduli and Lipschitz constants ----------------------------------------


def test_scalar_modulus_abs_kappa_exact():
    probe = uniform_grid(-10, 10, 101)
    assert scalar_modulus(abs_fn(), 0.37, probe) == pytest.approx(0.37)
    assert scalar_modulus(kappa(), 5.0, probe) == pytest.approx(2.0)
    assert scalar_modulus(phi_s(3.0), 5.0, probe) == pytest.approx(3.0)


def test_scalar_modulus_tanh_brute_force():
    # sup at symmetric points: 2*tanh(delta/4); brute force over a fine probe
    probe = uniform_grid(-10, 10, 20001)
    got = scalar_modulus(tanh_half(), 1.0, probe)
    exact = 2 * np.tanh(0.25)
    assert exact * 0.999 <= got <= exact + 1e-12


def test_scalar_modulus_monotone_and_subadditive():
    probe = uniform_grid(-5, 5, 2001)
    f = tanh_half()
    deltas = [0.25, 0.5, 1.0, 2.0]
    vals = [scalar_modulus(f, d, probe) for d in deltas]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
    # subadditivity within probe resolution
    res = 10.0 / 2000
    w1 = scalar_modulus(f, 0.7, probe)
    w2 = scalar_modulus(f, 0.9, probe)
    w12 = scalar_modulus(f, 1.6, probe)
    assert w12 <= w1 + w2 + res


def test_lip_const_registry_values():
    assert lip_const(abs_fn()) == 1.0
    assert lip_const(tanh_half()) == 0.5
    assert lip_const(fa_kernel(2.0), (-2, 2)) == pytest.approx(0.25)
    assert lip_const(kappa()) == 1.0


def test_lip_exact_flags():
    assert abs_fn().lip_exact and tanh_half().lip_exact
    assert not trig_poly([0, 0, 1]).lip_exact


# --- second derivative summaries ----------------------------------------------


def test_second_derivative_phi3():
    ms = second_derivative_summary(phi_s(3.0))
    assert ms.atoms == ((0.0, 1.0 + 0j), (3.0, -1.0 + 0j))
    assert ms.total_variation == pytest.approx(2.0)
    assert ms.total_mass() == pytest.approx(0.0)


def test_second_derivative_abs():
    ms = second_derivative_summary(abs_fn())
    assert ms.atoms == ((0.0, 2.0 + 0j),)


def test_second_derivative_kappa():
    ms = second_derivative_summary(kappa())
    assert ms.atoms == ((-1.0, 1.0 + 0j), (1.0, -1.0 + 0j))


def test_second_derivative_piecewise():
    f = piecewise_linear([(0.0, 0.0), (1.0, 1.0)], left_slope=0.0, right_slope=0.0)
    ms = second_derivative_summary(f)
    assert ms.atoms == ((0.0, 1.0 + 0j), (1.0, -1.0 + 0j))


def test_second_derivative_unsupported():
    with pytest.raises(DomainError):
        second_derivative_summary(tanh_half())


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-20, max_value=20, allow_nan=False),
       st.floats(min_value=-20, max_value=20, allow_nan=False))
def test_registry_lipschitz_property(x, y):
    for f in (abs_fn(), kappa(), phi_s(2.0), tanh_half(), fa_kernel(1.0)):
        L = lip_const(f, (-25, 25))
        assert abs(float(np.real(f(x))) - float(np.real(f(y)))) <= L * abs(x - y) + 1e-12
