"""opmoduli: a desk-scale numerical laboratory for operator moduli of continuity.

The package computes certified two-sided brackets on Schur multiplier norms of
divided-difference matrices, checks double-operator-integral identities in
finite dimensions, evaluates Fourier-analytic upper bounds on hat-norms,
constructs extremal operator pairs witnessing lower bounds, transfers grid
norms to the continuum through band-limited sampling identities, and measures
entropy-based quasicommutator bounds.
"""

__version__ = "0.1.0"

from .errors import DomainError, PreconditionError, SolverStall
from .spectral import (
    GeneralMatrix,
    HermitianMatrix,
    SpectralDecomposition,
    apply_fn,
    eig_hermitian,
    op_norm,
    random_general,
    random_hermitian,
    random_unitary,
)
from .functions import (
    DividedDiffMatrix,
    Grid,
    MeasureSummary,
    ScalarFn,
    abs_fn,
    divided_diff,
    fa_kernel,
    kappa,
    lacunary_signed,
    linear_fn,
    lip_const,
    phi_s,
    piecewise_linear,
    scalar_modulus,
    second_derivative_summary,
    tanh_half,
    trig_poly,
)
from .schur import (
    MultiplierCertificate,
    MultiplierProblem,
    difference_quotient_problem,
    hilbert_multiplier,
    mult_lower_search,
    mult_norm,
    sum_ratio_problem,
    toral_lambda,
)

__all__ = [name for name in dir() if not name.startswith("_")]
