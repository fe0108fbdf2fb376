"""Dense complex Hermitian linear algebra: eigensystems, operator norms,
functional calculus, and seeded random instances.

Everything here is a pure function of its inputs; matrix wrappers are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError, SolverStall

_HERM_SYM_TOL = 1e-12


def _as_array(m) -> np.ndarray:
    """Accept a wrapper type or a plain array-like and return its ndarray."""
    if isinstance(m, (HermitianMatrix, GeneralMatrix)):
        return m.entries
    return np.asarray(m)


class HermitianMatrix:
    """A finite self-adjoint operator, stored as a dense complex matrix.

    Construction symmetrizes the input, so ``entries[i, j] == conj(entries[j, i])``
    holds exactly afterwards.  Inputs further than ``1e-12 * scale`` from
    Hermitian are rejected rather than silently fixed.
    """

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        a = np.asarray(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise PreconditionError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise PreconditionError("matrix entries must be finite")
        scale = max(1.0, float(np.abs(a).max()))
        dev = float(np.abs(a - a.conj().T).max())
        if dev > 2 * _HERM_SYM_TOL * scale:
            raise PreconditionError(
                f"matrix is not Hermitian: max |A - A*| = {dev:.3e} exceeds "
                f"{2 * _HERM_SYM_TOL * scale:.3e}"
            )
        a = (a + a.conj().T) / 2.0
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    def __setattr__(self, *_):  # pragma: no cover - guard only
        raise AttributeError("HermitianMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def diagonal(values) -> "HermitianMatrix":
        v = np.asarray(values, dtype=float)
        return HermitianMatrix(np.diag(v.astype(complex)))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.entries.real.ravel().tolist(),
            "im": self.entries.imag.ravel().tolist(),
        }

    @staticmethod
    def from_json(obj: dict) -> "HermitianMatrix":
        dim = int(obj["dim"])
        a = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        return HermitianMatrix(a.reshape(dim, dim))

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True)
class GeneralMatrix:
    """An arbitrary bounded operator between finite-dimensional spaces."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or min(a.shape) < 1:
            raise PreconditionError(f"expected a 2-d matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise PreconditionError("matrix entries must be finite")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "re": self.entries.real.ravel().tolist(),
            "im": self.entries.imag.ravel().tolist(),
        }


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix: ascending eigenvalues and a unitary
    basis whose columns are the corresponding eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


def eig_hermitian(A, tol: float = 1e-10) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Backed by LAPACK's Hermitian eigensolver; the returned decomposition is
    checked against the requested tolerance (unitarity of the basis and
    reconstruction of ``A``) before it is handed out.
    """
    if not (0 < tol <= 1e-6):
        raise PreconditionError(f"tol must lie in (0, 1e-6], got {tol}")
    if not isinstance(A, HermitianMatrix):
        A = HermitianMatrix(_as_array(A))
    a = A.entries
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise SolverStall(
            f"eigensolver did not converge for matrix with Frobenius norm "
            f"{np.linalg.norm(a):.3e} within the LAPACK iteration cap (30n)"
        ) from exc
    w = np.asarray(w, dtype=float)
    unit_dev = float(np.abs(v.conj().T @ v - np.eye(A.dim)).max())
    scale = 1.0 + (float(np.abs(w).max()) if A.dim else 0.0)
    rec_dev = op_norm((v * w) @ v.conj().T - a)
    if unit_dev > tol or rec_dev > tol * scale:
        raise SolverStall(
            f"eigendecomposition failed its own check: unitarity deviation "
            f"{unit_dev:.3e}, reconstruction deviation {rec_dev:.3e} at tol {tol}"
        )
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, basis=v)


def op_norm(M) -> float:
    """Operator (spectral) norm: the largest singular value of ``M``."""
    a = _as_array(M)
    if a.size == 0:
        return 0.0
    if not np.all(np.isfinite(a)):
        raise PreconditionError("op_norm requires finite entries")
    if np.count_nonzero(a) == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def apply_fn(f, A) -> HermitianMatrix:
    """Evaluate a real-valued scalar function of a Hermitian matrix.

    ``f`` may be a ScalarFn or any callable defined on the spectrum of ``A``.
    The result is ``basis @ diag(f(lambda)) @ basis*``.
    """
    if not isinstance(A, HermitianMatrix):
        A = HermitianMatrix(_as_array(A))
    dec = eig_hermitian(A)
    lam = dec.eigenvalues
    domain_check = getattr(f, "check_domain", None)
    if domain_check is not None:
        domain_check(lam)
    vals = np.asarray(f(lam), dtype=complex)
    if np.abs(vals.imag).max(initial=0.0) > 1e-12 * (1.0 + np.abs(vals).max(initial=0.0)):
        raise DomainError(
            "apply_fn needs a real-valued function on the spectrum; "
            f"got imaginary part up to {np.abs(vals.imag).max():.3e}"
        )
    out = (dec.basis * vals.real) @ dec.basis.conj().T
    return HermitianMatrix((out + out.conj().T) / 2.0)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-like random unitary: QR of a complex Gaussian with phase fixing."""
    if dim < 1:
        raise PreconditionError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, spectrum_box: tuple, seed: int) -> HermitianMatrix:
    """Seeded random Hermitian matrix with eigenvalues drawn uniformly from
    ``spectrum_box`` and a Haar-like random eigenbasis."""
    lo, hi = float(spectrum_box[0]), float(spectrum_box[1])
    if dim < 1:
        raise PreconditionError("dim must be >= 1")
    if not lo <= hi:
        raise PreconditionError(f"empty spectrum box ({lo}, {hi})")
    rng = np.random.default_rng(seed)
    lam = np.sort(rng.uniform(lo, hi, size=dim))
    u = random_unitary(dim, seed=int(rng.integers(0, 2**63 - 1)))
    return HermitianMatrix((u * lam) @ u.conj().T)


def random_general(rows: int, cols: int, seed: int, norm_cap: float | None = None) -> GeneralMatrix:
    """Seeded random complex matrix, optionally rescaled to ``op_norm <= norm_cap``."""
    if rows < 1 or cols < 1:
        raise PreconditionError("rows and cols must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    if norm_cap is not None:
        nrm = op_norm(z)
        if nrm > 0:
            z = z * (norm_cap / nrm)
    return GeneralMatrix(z)
