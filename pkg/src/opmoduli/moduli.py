"""Operator-modulus machinery.

The quantities measured here bracket the operator modulus of continuity
Omega_f(delta) = sup ||f(A) - f(B)|| over self-adjoint pairs with spectra in a
prescribed set and ||A - B|| <= delta, and its commutator variant
Omega^flat (sup of ||f(A)R - Rf(B)|| over contractions R with
||AR - RB|| <= delta; the two satisfy Omega <= Omega^flat <= 2 Omega).

Lower bounds are constructive: every reported number is realized by an
explicit (A, B, R) triple whose three norms re-verify directly.  Upper bounds
come from net arguments, integral transforms of the scalar modulus, and
entropy counts of the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .functions import (
    Grid,
    ScalarFn,
    MeasureSummary,
    divided_diff_values,
    fa_kernel,
    lip_const,
    phi_s,
    piecewise_linear,
    scalar_modulus,
    uniform_grid,
)
from .reporting import BoundRecord
from .schur import MultiplierCertificate, MultiplierProblem, mult_norm
from .spectral import GeneralMatrix, HermitianMatrix, apply_fn, eig_hermitian, op_norm


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorTriple:
    """A quasicommutator instance: R maps B's space into A's space."""

    A: HermitianMatrix
    B: HermitianMatrix
    R: GeneralMatrix
    label: str = ""

    def __post_init__(self):
        if self.R.rows != self.A.dim or self.R.cols != self.B.dim:
            raise PreconditionError(
                f"shape mismatch: R is {self.R.rows}x{self.R.cols}, "
                f"A is {self.A.dim}-dim, B is {self.B.dim}-dim"
            )

    def commutator(self) -> np.ndarray:
        return self.A.entries @ self.R.entries - self.R.entries @ self.B.entries


@dataclass(frozen=True)
class WitnessBundle:
    """A constructive lower-bound witness for the commutator modulus."""

    triple: OperatorTriple
    delta: float
    norm_R: float
    norm_commut: float
    norm_fcommut: float
    certified_lower: float
    fn: ScalarFn

    def verify(self) -> None:
        """Re-measure the three norms directly, independent of the solver."""
        t = self.triple
        nr = op_norm(t.R)
        nc = op_norm(t.commutator())
        nf = op_norm(quasicommutator(self.fn, t))
        if nr > 1.0 + 1e-9:
            raise AssertionError(f"witness R has norm {nr} > 1 + 1e-9")
        if nc > self.delta + 1e-9:
            raise AssertionError(f"witness commutator norm {nc} exceeds delta {self.delta}")
        if nf < self.certified_lower - 1e-8:
            raise AssertionError(
                f"measured f-commutator {nf} below certified lower {self.certified_lower}"
            )


@dataclass(frozen=True)
class CompactSetDescr:
    """A compact subset of the line: disjoint closed intervals plus points."""

    intervals: tuple = ()
    points: tuple = ()

    @staticmethod
    def make(intervals=(), points=()) -> "CompactSetDescr":
        ivs = sorted((float(a), float(b)) for a, b in intervals)
        for a, b in ivs:
            if not (math.isfinite(a) and math.isfinite(b) and a <= b):
                raise PreconditionError(f"bad interval ({a}, {b})")
        pts = sorted(float(p) for p in points)
        # merge overlaps, absorb points covered by intervals
        merged: list[list[float]] = []
        for a, b in ivs:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        keep = [p for p in pts if not any(a <= p <= b for a, b in merged)]
        return CompactSetDescr(
            intervals=tuple((a, b) for a, b in merged), points=tuple(keep)
        )

    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    def components(self) -> list[tuple[float, float]]:
        comps = list(self.intervals) + [(p, p) for p in self.points]
        return sorted(comps)

    def hull(self) -> tuple[float, float]:
        comps = self.components()
        if not comps:
            raise PreconditionError("empty set has no hull")
        return comps[0][0], comps[-1][1]

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return any(a - slack <= x <= b + slack for a, b in self.components())

    def sample(self, resolution: float) -> np.ndarray:
        """All points of the set on a grid of the given resolution."""
        out = []
        for a, b in self.components():
            if b - a < resolution:
                out.append(np.array([a, b]) if b > a else np.array([a]))
            else:
                out.append(np.linspace(a, b, int(np.ceil((b - a) / resolution)) + 1))
        return np.unique(np.concatenate(out))


# ---------------------------------------------------------------------------
# double operator integrals and quasicommutators
# ---------------------------------------------------------------------------


def quasicommutator(fn: ScalarFn, t: OperatorTriple) -> np.ndarray:
    """f(A) R - R f(B), computed directly through the functional calculus."""
    fa = apply_fn(fn, t.A).entries
    fb = apply_fn(fn, t.B).entries
    return fa @ t.R.entries - t.R.entries @ fb


def doi_identity_residual(fn: ScalarFn, t: OperatorTriple) -> float:
    """Distance between the direct quasicommutator and its double-integral
    form: rotate AR - RB into the eigenbases, multiply entrywise by the
    divided differences of f over the two spectra, and rotate back.

    The two routes agree exactly in finite dimensions; the residual is pure
    floating-point noise and is required to stay below
    1e-9 (1 + ||AR - RB||)(1 + Lip(f)).
    """
    da = eig_hermitian(t.A)
    db = eig_hermitian(t.B)
    K = da.basis.conj().T @ t.commutator() @ db.basis
    D = divided_diff_values(fn, da.eigenvalues, db.eigenvalues, rule="zero")
    doi = da.basis @ (D * K) @ db.basis.conj().T
    return op_norm(doi - quasicommutator(fn, t))


def doi_residual_contract(fn: ScalarFn, t: OperatorTriple) -> float:
    """The contractual ceiling for :func:`doi_identity_residual`."""
    la = eig_hermitian(t.A).eigenvalues
    lb = eig_hermitian(t.B).eigenvalues
    L = lip_const(fn, (min(la.min(), lb.min()), max(la.max(), lb.max())))
    return 1e-9 * (1.0 + op_norm(t.commutator())) * (1.0 + L)


# ---------------------------------------------------------------------------
# constructive lower bounds
# ---------------------------------------------------------------------------


def _separation_ok(lam: np.ndarray, mu: np.ndarray, delta: float) -> tuple[bool, tuple]:
    diffs = lam[:, None] - mu[None, :]
    bad = (np.abs(diffs) < delta) & (diffs != 0.0)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        return False, (float(lam[i]), float(mu[j]))
    return True, ()


def omega_lower_witness(
    fn: ScalarFn,
    Lam: Grid,
    Mu: Grid,
    delta: float,
    cert: MultiplierCertificate,
) -> WitnessBundle:
    """Build the extremal triple realizing the commutator-modulus lower bound
    (delta/2) * ||divided differences of f on Lam x Mu||.

    Requires the grid difference set to avoid (-delta, delta) except 0.  The
    construction: A, B are the diagonal grids, k is the certificate's lower
    witness normalized to unit operator norm (coincident entries zeroed), and
    R = (delta/2) * (Phi . k) where Phi is the two-variable multiplier
    x, y -> f_delta(x - y) built from the reciprocal-outside kernel of scale
    delta, whose multiplier norm is at most 2/delta.  Then AR - RB recovers
    (delta/2) k and f(A)R - Rf(B) recovers (delta/2) (divdiff . k).
    """
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    lam, mu = Lam.points, Mu.points
    ok, pair = _separation_ok(lam, mu, delta)
    if not ok:
        raise PreconditionError(
            f"grid separation violated: points {pair[0]} and {pair[1]} are closer "
            f"than delta={delta} without being equal"
        )
    k = np.asarray(cert.lower.witness, dtype=complex)
    if k.shape != (lam.size, mu.size):
        raise PreconditionError(
            f"certificate witness shape {k.shape} does not match grids "
            f"({lam.size}, {mu.size})"
        )
    nk = op_norm(k)
    if nk == 0:
        raise PreconditionError("certificate witness is zero")
    k = k / nk
    coincide = lam[:, None] == mu[None, :]
    k0 = np.where(coincide, 0.0, k)

    f_delta = fa_kernel(delta)
    Phi = np.asarray(f_delta(lam[:, None] - mu[None, :]), dtype=complex)
    R = (delta / 2.0) * (Phi * k0)
    nr = op_norm(R)
    if nr > 1.0:
        R = R / (nr * (1.0 + 1e-15))

    A = HermitianMatrix.diagonal(lam)
    B = HermitianMatrix.diagonal(mu)
    triple = OperatorTriple(A=A, B=B, R=GeneralMatrix(R), label=f"kme-lower[{fn.kind}]")

    D = divided_diff_values(fn, lam, mu, rule="zero")
    certified = (delta / 2.0) * op_norm(D * k0) / max(1.0, nr)

    bundle = WitnessBundle(
        triple=triple,
        delta=float(delta),
        norm_R=op_norm(R),
        norm_commut=op_norm(triple.commutator()),
        norm_fcommut=op_norm(quasicommutator(fn, triple)),
        certified_lower=float(certified),
        fn=fn,
    )
    bundle.verify()
    return bundle


def kato_grids(a: float, delta: float, ratio: float = 2.0) -> tuple[Grid, Grid]:
    """Separated grids for the absolute-value experiment: a geometric grid of
    [delta, a] and its negative plus 0 on the other side."""
    if not 0 < delta < a:
        raise PreconditionError("need 0 < delta < a")
    count = int(math.floor(math.log(a / delta) / math.log(ratio))) + 1
    pos = delta * ratio ** np.arange(count)
    pos = pos[pos <= a * (1 + 1e-12)]
    Mu = Grid("real", pos)
    Lam = Grid("real", np.concatenate([-pos[::-1], [0.0]]))
    return Lam, Mu


# ---------------------------------------------------------------------------
# net upper bounds
# ---------------------------------------------------------------------------


def half_delta_net(F: CompactSetDescr, delta: float, resolution: float) -> Grid:
    """Greedy delta/2-net of F chosen inside F (interval positions are
    discretized at ``resolution``)."""
    if F.is_empty():
        raise PreconditionError("cannot build a net of an empty set")
    if resolution > delta / 2.0 + 1e-15:
        raise PreconditionError("net resolution must be at most delta/2")
    half = delta / 2.0
    chosen: list[float] = []
    for a, b in F.components():
        cover = a
        first = True
        while first or cover < b - 1e-12 * max(1.0, abs(b)):
            first = False
            # rightmost admissible net point inside [cover, cover+half] and F
            p = min(cover + half, b)
            if p > a:
                steps = math.floor((p - a) / resolution)
                p = min(a + steps * resolution, b)
            if p < cover - 1e-15:
                p = min(cover + half, b)
            chosen.append(p)
            cover = p + half
    return Grid("real", np.unique(np.asarray(chosen)))


def omega_upper_net(
    fn: ScalarFn,
    F: CompactSetDescr,
    delta: float,
    net_resolution: float,
    tol: float = 1e-3,
    seed: int = 0,
    profile: float | None = None,
) -> BoundRecord:
    """Net upper bound for the commutator modulus at ``delta``:
    2 omega_f(delta/2) + 2 delta ||divdiff of f on the net||_upper.

    The record's lhs is the computed bound; rhs is a reference growth profile
    (delta log(1 + log(1 + 1/delta)) unless supplied) so sweeps read as
    measured-vs-theoretical rows.
    """
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    net = half_delta_net(F, delta, net_resolution)
    probe = Grid("real", F.sample(min(net_resolution, delta / 8.0)))
    omega = scalar_modulus(fn, delta / 2.0, probe)
    entries = divided_diff_values(fn, net.points, net.points, rule="zero")
    problem = MultiplierProblem(entries, label=f"net[{fn.kind},{net.size}]")
    big = net.size > 80
    cert = mult_norm(
        problem,
        tol=min(max(tol, 1e-6), 1e-2),
        seed=seed,
        cap=max(1024, net.size),
        rank_cap=48 if big else None,
        max_outer=6 if big else 24,
        inner_iters=150 if big else 300,
        lower_trials=4 if big else 50,
        lower_maxiter=60 if big else 600,
    )
    bound = 2.0 * omega + 2.0 * delta * cert.upper.value
    ref = profile if profile is not None else delta * math.log(1.0 + math.log(1.0 + 1.0 / delta))
    return BoundRecord.make(
        name="omega-upper-net",
        params={"fn": fn.kind, "delta": delta, "net_cardinality": net.size},
        lhs=bound,
        rhs=ref,
        notes="upper bound on the commutator modulus; rhs is the growth profile",
    )


# ---------------------------------------------------------------------------
# integral upper bounds
# ---------------------------------------------------------------------------


def _check_concave_profile(fn: ScalarFn) -> None:
    """Probe checks: vanishes on the negative axis, nondecreasing and concave
    on the positive axis, sublinear (f(t)/t nonincreasing)."""
    neg = np.asarray(fn(np.linspace(-50.0, 0.0, 101)), dtype=float)
    if np.abs(neg).max() > 1e-12:
        raise PreconditionError("function does not vanish on the negative axis")
    t = np.geomspace(1e-6, 1e6, 400)
    v = np.asarray(fn(t), dtype=float)
    if np.any(np.diff(v) < -1e-12 * max(1.0, np.abs(v).max())):
        raise PreconditionError("function is not nondecreasing on the positive axis")
    slopes = np.diff(v) / np.diff(t)
    if np.any(np.diff(slopes) > 1e-10 * max(1.0, np.abs(slopes).max())):
        raise PreconditionError("function is not concave on the positive axis")
    ratio = v[t > 1e-3] / t[t > 1e-3]
    if np.any(np.diff(ratio) > 1e-12 * max(1.0, ratio.max())):
        raise PreconditionError("function is not sublinear: f(t)/t increases")


def _adaptive_log_integral(fn: ScalarFn, delta: float, tail_rel: float = 1e-6) -> float:
    """integral_e^inf f(delta s) / (s^2 log s) ds via u = log s panels with
    Simpson's rule, doubling the range until the increments certify a
    geometric tail below ``tail_rel`` of the total."""

    def panel(u_lo: float, u_hi: float, m: int = 257) -> float:
        u = np.linspace(u_lo, u_hi, m)
        s = np.exp(u)
        vals = np.asarray(fn(delta * s), dtype=float) * np.exp(-u) / u
        from scipy.integrate import simpson

        return float(simpson(vals, x=u))

    total = panel(1.0, 2.0)
    u_lo, width = 2.0, 2.0
    incs = []
    for _ in range(60):
        inc = panel(u_lo, u_lo + width)
        total += inc
        incs.append(inc)
        u_lo += width
        if len(incs) >= 2 and incs[-2] > 0:
            r = incs[-1] / incs[-2]
            if r < 0.9:
                tail = incs[-1] * r / (1.0 - r)
                if tail <= tail_rel * max(total, 1e-300):
                    return total + tail
        if len(incs) >= 4 and incs[-1] > 0.99 * incs[-4] > 0:
            raise PreconditionError(
                "integral does not converge: increments are not decaying "
                f"(last increments {incs[-4]:.3e} .. {incs[-1]:.3e})"
            )
    raise PreconditionError("integral tail did not certify within the panel budget")


def concave_upper_integral(fn: ScalarFn, delta: float) -> float:
    """The integral transform integral_e^inf f(delta s)/(s^2 log s) ds bounding
    the operator modulus of a nondecreasing concave function vanishing on the
    negative axis (multiplicative constant unspecified, reported as 1)."""
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    _check_concave_profile(fn)
    return _adaptive_log_integral(fn, delta)


def modnep_upper_integral(fn: ScalarFn, delta: float, probe: Grid) -> float:
    """Window version of the modulus-integral bound:
    delta * integral_delta^W omega_f(t)/t^2 dt + delta * omega_f(W)/W,
    with W the probe half-width and omega measured on the probe."""
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    W = float(np.abs(probe.points).max())
    if W <= 0:
        raise PreconditionError("probe window is degenerate")
    omega_W = scalar_modulus(fn, W, probe)
    if delta >= W:
        return omega_W
    us = np.linspace(math.log(delta), math.log(W), 257)
    ts = np.exp(us)
    om = np.array([scalar_modulus(fn, t, probe) for t in ts])
    from scipy.integrate import simpson

    integral = float(simpson(om / ts, x=us))  # omega(t)/t^2 dt with t = e^u
    return delta * integral + delta * omega_W / W


def fM_upper(mu: MeasureSummary, delta: float) -> float:
    """Atomic-second-derivative upper profile
    ||mu|| * delta * log(log(1/delta + 3)); requires total mass 0 (otherwise
    the operator modulus is infinite and the call errors)."""
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    mass = mu.total_mass()
    if abs(mass) > 1e-12:
        raise DomainError(
            f"second-derivative measure has nonzero total mass {mass}; the "
            "operator modulus of continuity is infinite for every delta"
        )
    return mu.total_variation * delta * math.log(math.log(1.0 / delta + 3.0))


def growth_bound_evaluators(kind: str, **params) -> float:
    """The parameterized growth bounds (constants factored out, reported as 1).

    * ``lipconv``: a delta log(log(M/(a delta))) for delta < M/(3a);
    * ``holconv``: log(2/(1-alpha)) * holder_norm * delta^alpha, 0 <= alpha < 1;
    * ``bound911``: x / log(log(x)) for x >= 4.
    """
    if kind == "lipconv":
        a, M, delta = params["a"], params["M"], params["delta"]
        if not (a > 0 and M > 0 and 0 < delta < M / (3.0 * a)):
            raise PreconditionError("lipconv needs a, M > 0 and delta < M/(3a)")
        return a * delta * math.log(math.log(M / (a * delta)))
    if kind == "holconv":
        alpha = params["alpha"]
        delta = params["delta"]
        hnorm = params.get("holder_norm", 1.0)
        if not (0 <= alpha < 1):
            raise PreconditionError("holconv needs 0 <= alpha < 1")
        return math.log(2.0 / (1.0 - alpha)) * hnorm * delta**alpha
    if kind == "bound911":
        x = params["x"]
        if x < 4.0:
            raise PreconditionError("bound911 needs x >= 4")
        return x / math.log(math.log(x))
    raise PreconditionError(f"unknown growth bound kind {kind!r}")


# ---------------------------------------------------------------------------
# entropy and quasicommutator ratios
# ---------------------------------------------------------------------------


def epsilon_entropy(F: CompactSetDescr, eps: float) -> tuple[float, Grid]:
    """Minimal covering of F by closed intervals [t - eps, t + eps], by the
    left-to-right greedy placement (optimal in one dimension).  Returns the
    natural log of the cardinality and the realizing net."""
    if F.is_empty():
        raise PreconditionError("empty set has no entropy")
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    centers: list[float] = []
    covered = -math.inf  # the prefix (-inf, covered] is already covered
    for a, b in F.components():
        tiny = 1e-12 * max(1.0, abs(a), abs(b))
        while b > covered + tiny:
            x = max(a, covered)  # leftmost uncovered coordinate of the component
            c = x + eps
            centers.append(c)
            covered = c + eps
    net = Grid("real", np.asarray(centers))
    return math.log(len(centers)), net


def net_covers(F: CompactSetDescr, net: Grid, eps: float, resolution: float = 1e-4) -> bool:
    pts = F.sample(resolution * max(1.0, eps))
    dist = np.abs(pts[:, None] - net.points[None, :]).min(axis=1)
    return bool(dist.max() <= eps * (1 + 1e-9))


def qcom_ratio(fn: ScalarFn, t: OperatorTriple, F: CompactSetDescr) -> BoundRecord:
    """Measured quasicommutator norm against the entropy bound
    (1 + K_eps(F)) * Lip(f) * ||AR - RB|| with eps = ||AR - RB||."""
    lamA = eig_hermitian(t.A).eigenvalues
    if not all(F.contains(x, slack=1e-9) for x in lamA):
        raise PreconditionError("spectrum of A is not contained in F")
    eps = op_norm(t.commutator())
    if eps == 0:
        return BoundRecord.make(
            name="qcom-ratio",
            params={"fn": fn.kind, "eps": 0.0, "entropy": 0.0},
            lhs=op_norm(quasicommutator(fn, t)),
            rhs=0.0,
            notes="degenerate: AR = RB",
        )
    K, _ = epsilon_entropy(F, eps)
    lamB = eig_hermitian(t.B).eigenvalues
    lo = min(lamA.min(), lamB.min())
    hi = max(lamA.max(), lamB.max())
    L = lip_const(fn, (lo, hi))
    lhs = op_norm(quasicommutator(fn, t))
    rhs = (1.0 + K) * L * eps
    return BoundRecord.make(
        name="qcom-ratio",
        params={"fn": fn.kind, "eps": eps, "entropy": K},
        lhs=lhs,
        rhs=rhs,
        notes="entropy quasicommutator bound, constant reported as 1",
    )


def logn_sharp_constant(X: Grid, tol: float = 1e-4, seed: int = 0,
                        extra_lower_starts=None) -> tuple[BoundRecord, MultiplierCertificate]:
    """Multiplier norm of the divided differences of |x| on X x X against the
    1 + log(card X) law for finite spectra."""
    from .functions import abs_fn

    entries = divided_diff_values(abs_fn(), X.points, X.points, rule="zero")
    cert = mult_norm(
        MultiplierProblem(entries, label=f"divdiff[abs,{X.size}]"),
        tol=tol,
        seed=seed,
        extra_lower_starts=extra_lower_starts,
    )
    rec = BoundRecord.make(
        name="logn-sharp",
        params={"cardinality": X.size},
        lhs=cert.upper.value,
        rhs=1.0 + math.log(X.size),
        notes="best quasicommutator constant over this spectrum vs log-cardinality law",
    )
    return rec, cert


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def kato_experiment(
    a: float,
    delta_list,
    tol: float = 1e-4,
    seed: int = 0,
) -> list[tuple[BoundRecord, WitnessBundle]]:
    """Absolute-value sharpness sweep.

    For each delta < a, a geometric grid pair across the spectral gap yields a
    certified commutator-modulus lower bound L(delta) = (delta/2) * multiplier
    norm of the divided differences; the reference profile is
    delta log(2 + log(a/delta)).  Witnesses from smaller windows seed larger
    ones, so certified lowers inherit the true monotonicity.

    The bundles certify the commutator modulus; the plain modulus obeys
    Omega >= L/2 (noted on each record).
    """
    from .functions import abs_fn
    from .schur import difference_quotient_problem

    deltas = sorted(float(d) for d in delta_list)
    if any(d <= 0 or d >= a for d in deltas):
        raise PreconditionError("each delta must lie in (0, a)")
    out = []
    prev: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None  # (witness, lam, mu)
    for delta in deltas[::-1]:
        Lam, Mu = kato_grids(a, delta)
        problem = difference_quotient_problem(abs_fn(), Lam, Mu)
        extra = []
        if prev is not None:
            pad = embed_witness(prev[0], prev[1], prev[2], Lam.points, Mu.points)
            if pad is not None:
                extra = [pad]
        cert = mult_norm(problem, tol=tol, seed=seed, extra_lower_starts=extra)
        prev = (cert.lower.witness, Lam.points, Mu.points)
        bundle = omega_lower_witness(abs_fn(), Lam, Mu, delta, cert)
        profile = delta * math.log(2.0 + math.log(a / delta))
        rec = BoundRecord.make(
            name="kato-lower",
            params={"a": a, "delta": delta},
            lhs=bundle.certified_lower,
            rhs=profile,
            notes="commutator-modulus lower; plain modulus >= lhs/2",
        )
        out.append((rec, bundle))
    out.sort(key=lambda pair: pair[0].params["delta"])
    return out


def embed_witness(
    witness: np.ndarray,
    old_rows: np.ndarray,
    old_cols: np.ndarray,
    new_rows: np.ndarray,
    new_cols: np.ndarray,
) -> np.ndarray | None:
    """Zero-pad a witness from a sub-grid into a super-grid by matching point
    values; the padded witness certifies at least the old ratio on the larger
    divided-difference matrix.  Returns None when the grids do not nest."""
    ri = np.searchsorted(new_rows, old_rows)
    ci = np.searchsorted(new_cols, old_cols)
    if (
        ri.max(initial=-1) >= new_rows.size
        or ci.max(initial=-1) >= new_cols.size
        or not np.allclose(new_rows[np.clip(ri, 0, new_rows.size - 1)], old_rows)
        or not np.allclose(new_cols[np.clip(ci, 0, new_cols.size - 1)], old_cols)
    ):
        return None
    pad = np.zeros((new_rows.size, new_cols.size), dtype=complex)
    pad[np.ix_(ri, ci)] = witness
    return pad


def fit_profile_constant(records: list[BoundRecord]) -> tuple[float, float]:
    """Least-squares constant c for lhs ~ c * rhs over a sweep, plus the
    maximum relative fit residual."""
    lhs = np.array([r.lhs for r in records])
    rhs = np.array([r.rhs for r in records])
    if np.any(rhs <= 0):
        raise PreconditionError("profile fit needs positive reference values")
    c = float((lhs * rhs).sum() / (rhs * rhs).sum())
    resid = float(np.abs(lhs - c * rhs).max() / (c * rhs).min()) if c > 0 else math.inf
    rel = float(np.max(np.abs(lhs - c * rhs) / (c * rhs))) if c > 0 else math.inf
    return c, rel


def pathological_series(
    s_list,
    seed: int = 0,
    tol: float = 1e-3,
) -> tuple[ScalarFn, list[OperatorTriple], list[BoundRecord]]:
    """Finite truncation of the slowly-divergent ramp series
    f = sum_n alpha_n phi_{s_n}, alpha_n = n / log log s_n, together with
    per-level witness triples rescaled into the band (s/2, 3s/2).

    Levels must satisfy s_1 >= 10 and s_{n+1} >= 2 s_n; the growth condition
    log log s_n >= n^3 is a desk-scale warning, not an error.
    """
    import warnings

    s = [float(x) for x in s_list]
    if not s:
        raise PreconditionError("need at least one level")
    if s[0] < 10.0:
        raise PreconditionError("first level must be >= 10")
    for x, y in zip(s[:-1], s[1:]):
        if y < 2.0 * x:
            raise PreconditionError(f"levels must at least double: {y} < 2*{x}")
    alphas = [(n + 1) / math.log(math.log(sn)) for n, sn in enumerate(s)]
    for n, sn in enumerate(s):
        if math.log(math.log(sn)) < (n + 1) ** 3:
            warnings.warn(
                f"level {n + 1}: log log s = {math.log(math.log(sn)):.3f} is below "
                f"{(n + 1) ** 3}; asymptotic growth regime not reached at desk scale",
                stacklevel=2,
            )
            break

    # piecewise-linear profile of the truncated series: slope above s_k is
    # the sum of alphas of the deeper levels
    knots = [(0.0, 0.0)]
    val = 0.0
    for k, sk in enumerate(s):
        prev_x = knots[-1][0]
        slope = sum(alphas[k:])
        val += slope * (sk - prev_x)
        knots.append((sk, val))
    series_fn = piecewise_linear(knots, left_slope=0.0, right_slope=0.0)

    triples = []
    records = []
    from .functions import abs_fn
    from .schur import difference_quotient_problem

    for n, (sn, an) in enumerate(zip(s, alphas)):
        delta0 = 2.0 / sn
        Lam, Mu = kato_grids(0.999, min(delta0, 0.5))
        cert = mult_norm(difference_quotient_problem(abs_fn(), Lam, Mu), tol=tol, seed=seed)
        bundle = omega_lower_witness(abs_fn(), Lam, Mu, min(delta0, 0.5), cert)
        A = HermitianMatrix.diagonal(sn + (sn / 2.0) * Lam.points)
        B = HermitianMatrix.diagonal(sn + (sn / 2.0) * Mu.points)
        triple = OperatorTriple(A=A, B=B, R=bundle.triple.R, label=f"level[{n + 1}]")
        triples.append(triple)
        measured = op_norm(quasicommutator(series_fn, triple))
        records.append(
            BoundRecord.make(
                name="pathological-level",
                params={"level": n + 1, "s": sn, "alpha": an},
                lhs=measured,
                rhs=an * math.log(math.log(sn)),
                notes="measured series quasicommutator vs alpha*loglog(s) target",
            )
        )
    return series_fn, triples, records


def series_decomposition_residual(
    series_fn: ScalarFn, s_list, level: int, triple: OperatorTriple
) -> float:
    """Check the per-level split of the series quasicommutator: levels below
    act as constants (contribute zero), levels above act linearly."""
    s = [float(x) for x in s_list]
    alphas = [(n + 1) / math.log(math.log(sn)) for n, sn in enumerate(s)]
    n = level - 1
    total = quasicommutator(series_fn, triple)
    own = alphas[n] * quasicommutator(phi_s(s[n]), triple)
    linear_part = sum(alphas[k] for k in range(n + 1, len(s))) * triple.commutator()
    return op_norm(total - own - linear_part)
