import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmoduli.errors import DomainError, PreconditionError
from opmoduli.functions import abs_fn, kappa, linear_fn, phi_s
from opmoduli.spectral import (
    HermitianMatrix,
    apply_fn,
    eig_hermitian,
    op_norm,
    random_general,
    random_hermitian,
    random_unitary,
)


def test_eig_diagonal_is_sorted_permutation():
    A = HermitianMatrix(np.diag([3.0, 1.0, 2.0]))
    dec = eig_hermitian(A)
    np.testing.assert_allclose(dec.eigenvalues, [1.0, 2.0, 3.0], atol=1e-12)
    # basis columns are (signed) standard basis vectors
    np.testing.assert_allclose(np.abs(dec.basis), np.eye(3)[:, [1, 2, 0]], atol=1e-12)


def test_eig_identity():
    dec = eig_hermitian(HermitianMatrix(np.eye(4)))
    np.testing.assert_allclose(dec.eigenvalues, np.ones(4), atol=1e-14)


def test_eig_2x2_offdiagonal():
    # characteristic polynomial of [[0,1],[1,0]] is z^2 - 1
    dec = eig_hermitian(HermitianMatrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_eig_rejects_bad_tol():
    with pytest.raises(PreconditionError):
        eig_hermitian(HermitianMatrix(np.eye(2)), tol=1e-3)


def test_hermitian_rejects_asymmetric():
    with pytest.raises(PreconditionError):
        HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_op_norm_diagonal():
    assert op_norm(np.diag([1.0, -2.0])) == pytest.approx(2.0, abs=1e-12)


def test_op_norm_rank_one():
    u = np.array([1.0, 2.0, 2.0])
    v = np.array([3.0, 4.0])
    M = np.outer(u, v)
    assert op_norm(M) == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-12)


def test_op_norm_all_ones_2x2():
    assert op_norm(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-12)


def test_op_norm_zero():
    assert op_norm(np.zeros((3, 5))) == 0.0


def test_apply_fn_abs_diagonal():
    A = HermitianMatrix(np.diag([-2.0, 3.0]))
    out = apply_fn(abs_fn(), A)
    np.testing.assert_allclose(out.entries, np.diag([2.0, 3.0]), atol=1e-12)


def test_apply_fn_kappa_clips():
    A = HermitianMatrix(np.diag([-5.0, 0.5, 5.0]))
    out = apply_fn(kappa(), A)
    np.testing.assert_allclose(out.entries, np.diag([-1.0, 0.5, 1.0]), atol=1e-12)


def test_apply_fn_phi2_pointwise():
    # phi_2 ramps from 0 at 0 to 2 at 2, then stays flat
    A = HermitianMatrix(np.diag([0.0, 1.0, 2.0, 3.0]))
    out = apply_fn(phi_s(2.0), A)
    np.testing.assert_allclose(out.entries, np.diag([0.0, 1.0, 2.0, 2.0]), atol=1e-12)


def test_apply_fn_commutes_with_argument():
    A = random_hermitian(6, (-2, 2), seed=3)
    F = apply_fn(abs_fn(), A)
    comm = F.entries @ A.entries - A.entries @ F.entries
    assert op_norm(comm) <= 1e-9


def test_apply_fn_identity_reproduces():
    A = random_hermitian(7, (-3, 5), seed=11)
    out = apply_fn(linear_fn(1.0), A)
    assert op_norm(out.entries - A.entries) <= 1e-10 * (1 + op_norm(A))


def test_apply_fn_composition():
    # kappa(kappa(x)) = kappa(x)
    A = random_hermitian(6, (-4, 4), seed=5)
    once = apply_fn(kappa(), A)
    twice = apply_fn(kappa(), once)
    assert op_norm(twice.entries - once.entries) <= 1e-8


def test_random_hermitian_spectrum_box_and_determinism():
    A = random_hermitian(8, (-1, 1), seed=7)
    B = random_hermitian(8, (-1, 1), seed=7)
    assert np.array_equal(A.entries, B.entries)
    lam = eig_hermitian(A).eigenvalues
    assert lam.min() >= -1 - 1e-12 and lam.max() <= 1 + 1e-12


def test_random_hermitian_dim1():
    A = random_hermitian(1, (0, 1), seed=0)
    assert 0 <= A.entries[0, 0].real <= 1


def test_op_norm_equals_max_abs_eigenvalue():
    for seed in range(5):
        A = random_hermitian(6, (-3, 2), seed=seed)
        lam = eig_hermitian(A).eigenvalues
        assert op_norm(A) == pytest.approx(np.abs(lam).max(), abs=1e-9)


def test_unitary_invariance_of_op_norm():
    M = random_general(5, 5, seed=1).entries
    U = random_unitary(5, seed=2)
    V = random_unitary(5, seed=3)
    assert op_norm(U @ M @ V) == pytest.approx(op_norm(M), abs=1e-9)


def test_apply_fn_domain_error_lists_eigenvalue():
    from opmoduli.functions import trig_poly

    A = HermitianMatrix(np.diag([0.5, 1.5]))
    with pytest.raises(DomainError):
        apply_fn(trig_poly([0, 1, 0]), A)


def test_matrix_json_roundtrip():
    A = random_hermitian(4, (-1, 3), seed=9)
    B = HermitianMatrix.from_json(A.to_json())
    assert np.allclose(A.entries, B.entries)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_reconstruction_invariant(dim, seed):
    A = random_hermitian(dim, (-5, 5), seed=seed)
    dec = eig_hermitian(A)
    assert op_norm(dec.reconstruct() - A.entries) <= 1e-10 * (1 + op_norm(A))
    assert np.all(np.diff(dec.eigenvalues) >= -1e-14)
