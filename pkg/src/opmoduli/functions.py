"""The scalar function zoo, finite grids, and divided-difference matrices.

Registry functions carry exact metadata (Lipschitz constants, sup norms,
atomic second derivatives) where closed forms exist; everything else is
probe-based and flagged as a lower bound via ``fn.lip_exact``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

_MIN_REL_SPACING = 1e-9


# ---------------------------------------------------------------------------
# scalar functions
# ---------------------------------------------------------------------------


class ScalarFn:
    """Base scalar test function.

    Subclasses set ``kind``, ``domain`` ('real' or 'circle'), and, when a
    closed form exists, the exact Lipschitz constant ``lip`` (``lip_exact``
    True) and the exact sup norm ``sup``.
    """

    kind: str = "abstract"
    domain: str = "real"
    lip: float | None = None
    lip_exact: bool = False
    sup: float | None = None

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        """Pointwise derivative; raises DomainError at kinks, naming the point."""
        raise DomainError(f"{self.kind} has no implemented derivative")

    def kink_points(self) -> tuple:
        """Points where the derivative jumps (empty for smooth kinds)."""
        return ()

    def check_domain(self, points) -> None:
        pts = np.atleast_1d(np.asarray(points))
        if self.domain == "real":
            if np.iscomplexobj(pts) and np.abs(pts.imag).max(initial=0.0) > 0:
                raise DomainError(f"{self.kind} is defined on the real line, got complex points")
        else:
            mod_dev = np.abs(np.abs(pts) - 1.0).max(initial=0.0)
            if mod_dev > 1e-9:
                raise DomainError(
                    f"{self.kind} is defined on the unit circle; a point is off by {mod_dev:.2e}"
                )

    def params(self) -> dict:
        return {}

    def to_descriptor(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}({inner})"


class _Abs(ScalarFn):
    kind = "abs"
    lip = 1.0
    lip_exact = True
    sup = None

    def __call__(self, t):
        return np.abs(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t == 0):
            raise DomainError("abs is not differentiable at 0")
        return np.sign(t)

    def kink_points(self):
        return (0.0,)


class _Kappa(ScalarFn):
    """kappa(t) = (|1+t| - |1-t|)/2: clips t to [-1, 1]."""

    kind = "kappa"
    lip = 1.0
    lip_exact = True
    sup = 1.0

    def __call__(self, t):
        return 0.5 * (np.abs(1.0 + np.asarray(t)) - np.abs(1.0 - np.asarray(t)))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) == 1.0):
            raise DomainError("kappa is not differentiable at -1 and 1")
        return np.where(np.abs(t) < 1.0, 1.0, 0.0)

    def kink_points(self):
        return (-1.0, 1.0)


class _PhiS(ScalarFn):
    """phi_s(t) = (|t| + |s|)/2 - |t - s|/2: a ramp of height |s| between 0 and s."""

    kind = "phi_s"
    lip_exact = True

    def __init__(self, s: float):
        self.s = float(s)
        self.lip = 1.0 if self.s != 0 else 0.0
        self.sup = abs(self.s)

    def __call__(self, t):
        t = np.asarray(t)
        return 0.5 * (np.abs(t) + abs(self.s)) - 0.5 * np.abs(t - self.s)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t == 0) | (t == self.s)):
            raise DomainError(f"phi_s is not differentiable at 0 and s={self.s}")
        lo, hi = sorted((0.0, self.s))
        inside = (t > lo) & (t < hi)
        return np.where(inside, np.sign(self.s), 0.0)

    def kink_points(self):
        return (0.0, self.s) if self.s != 0 else ()

    def params(self):
        return {"s": self.s}


class _TanhHalf(ScalarFn):
    """(e^x - 1)/(e^x + 1) = tanh(x/2)."""

    kind = "tanh_half"
    lip = 0.5
    lip_exact = True
    sup = 1.0

    def __call__(self, t):
        return np.tanh(np.asarray(t, dtype=float) / 2.0)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return 0.5 / np.cosh(t / 2.0) ** 2


class _FaKernel(ScalarFn):
    """f_a(x) = x/a^2 for |x| <= a and 1/x for |x| >= a (both branches agree
    at |x| = a)."""

    kind = "fa_kernel"
    lip_exact = True

    def __init__(self, a: float):
        if not a > 0:
            raise PreconditionError(f"fa_kernel needs a > 0, got {a}")
        self.a = float(a)
        self.lip = 1.0 / self.a**2
        self.sup = 1.0 / self.a

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inner = np.abs(t) <= self.a
        out = np.empty_like(t)
        out[inner] = t[inner] / self.a**2
        with np.errstate(divide="ignore"):
            out[~inner] = 1.0 / t[~inner]
        return out if out.ndim else float(out)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) == self.a):
            raise DomainError(f"fa_kernel is not differentiable at +/-a = +/-{self.a}")
        return np.where(np.abs(t) < self.a, 1.0 / self.a**2, -1.0 / t**2)

    def kink_points(self):
        return (-self.a, self.a)

    def params(self):
        return {"a": self.a}


class _PiecewiseLinear(ScalarFn):
    """Piecewise linear interpolant through ``knots`` with prescribed slopes
    beyond the first and last knot."""

    kind = "piecewise_linear"
    lip_exact = True

    def __init__(self, knots, left_slope: float, right_slope: float):
        pts = [(float(x), float(y)) for x, y in knots]
        if len(pts) < 1:
            raise PreconditionError("piecewise_linear needs at least one knot")
        xs = np.array([p[0] for p in pts])
        if np.any(np.diff(xs) <= 0):
            raise PreconditionError("knot abscissae must be strictly ascending")
        self.knots = tuple(pts)
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)
        slopes = [self.left_slope]
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
            slopes.append((y1 - y0) / (x1 - x0))
        slopes.append(self.right_slope)
        self._slopes = np.array(slopes)  # slope on each of the len(knots)+1 pieces
        self.lip = float(np.abs(self._slopes).max())
        ys = np.array([p[1] for p in pts])
        self.sup = None if (self.left_slope != 0 or self.right_slope != 0) else float(np.abs(ys).max())

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        xs = np.array([p[0] for p in self.knots])
        ys = np.array([p[1] for p in self.knots])
        idx = np.searchsorted(xs, t, side="right")  # piece index, 0..len(knots)
        anchor = np.clip(idx - 1, 0, len(xs) - 1)
        out = ys[anchor] + self._slopes[idx] * (t - xs[anchor])
        return out if out.ndim else float(out)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        kinks = np.asarray(self.kink_points())
        if kinks.size and np.any(np.isin(t, kinks)):
            bad = t[np.isin(t, kinks)].ravel()[0]
            raise DomainError(f"piecewise_linear is not differentiable at knot {bad}")
        xs = np.array([p[0] for p in self.knots])
        idx = np.searchsorted(xs, t, side="right")
        out = self._slopes[idx]
        return out if out.ndim else float(out)

    def kink_points(self):
        xs = [p[0] for p in self.knots]
        return tuple(
            x for i, x in enumerate(xs) if self._slopes[i] != self._slopes[i + 1]
        )

    def slope_jumps(self) -> list[tuple[float, float]]:
        """(knot, slope jump) for every knot where the slope changes."""
        xs = [p[0] for p in self.knots]
        return [
            (x, float(self._slopes[i + 1] - self._slopes[i]))
            for i, x in enumerate(xs)
            if self._slopes[i + 1] != self._slopes[i]
        ]

    def params(self):
        return {
            "knots": [list(p) for p in self.knots],
            "left_slope": self.left_slope,
            "right_slope": self.right_slope,
        }


class _TrigPoly(ScalarFn):
    """Trigonometric polynomial on the unit circle: sum of c_k z^k, |k| <= degree."""

    kind = "trig_poly"
    domain = "circle"

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise PreconditionError(
                "coeffs must be a flat odd-length array ordered c_{-n}..c_n"
            )
        self.coeffs = c
        self.degree = (c.size - 1) // 2
        self.sup = None
        self.lip = None

    def fhat(self, k: int) -> complex:
        """Coefficient of z^k (0 outside the stored band)."""
        if abs(k) > self.degree:
            return 0.0
        return complex(self.coeffs[k + self.degree])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        self.check_domain(z)
        ks = np.arange(-self.degree, self.degree + 1)
        zp = z[..., None] ** ks
        out = (zp * self.coeffs).sum(axis=-1)
        return out if out.ndim else complex(out)

    def derivative(self, z):
        """Complex derivative sum k c_k z^(k-1); the diagonal value of the
        divided difference (f(z)-f(w))/(z-w) as w -> z."""
        z = np.asarray(z, dtype=complex)
        self.check_domain(z)
        ks = np.arange(-self.degree, self.degree + 1)
        zp = z[..., None] ** (ks - 1)
        out = (zp * (ks * self.coeffs)).sum(axis=-1)
        return out if out.ndim else complex(out)

    def params(self):
        return {
            "re": self.coeffs.real.tolist(),
            "im": self.coeffs.imag.tolist(),
        }


class _LacunarySigned(_TrigPoly):
    """Signed lacunary polynomial sum_j eps_j w_j z^(2^j), j = 0..level."""

    kind = "lacunary_signed"

    def __init__(self, signs, weights):
        signs = [int(e) for e in signs]
        weights = [float(w) for w in weights]
        if len(signs) != len(weights) or not signs:
            raise PreconditionError("signs and weights must be nonempty and equal length")
        if any(e not in (-1, 1) for e in signs):
            raise PreconditionError("signs must be +/-1")
        self.level = len(signs) - 1
        self.signs = tuple(signs)
        self.weights = tuple(weights)
        degree = 2**self.level
        c = np.zeros(2 * degree + 1, dtype=complex)
        for j, (e, w) in enumerate(zip(signs, weights)):
            c[degree + 2**j] += e * w
        super().__init__(c)

    def params(self):
        return {"signs": list(self.signs), "weights": list(self.weights)}


def abs_fn() -> ScalarFn:
    return _Abs()


def kappa() -> ScalarFn:
    return _Kappa()


def phi_s(s: float) -> ScalarFn:
    return _PhiS(s)


def tanh_half() -> ScalarFn:
    return _TanhHalf()


def fa_kernel(a: float) -> ScalarFn:
    return _FaKernel(a)


def piecewise_linear(knots, left_slope: float = 0.0, right_slope: float = 0.0) -> ScalarFn:
    return _PiecewiseLinear(knots, left_slope, right_slope)


def linear_fn(slope: float, intercept: float = 0.0) -> ScalarFn:
    """f(t) = slope * t + intercept as a degenerate piecewise-linear function."""
    return _PiecewiseLinear([(0.0, intercept)], slope, slope)


def trig_poly(coeffs) -> ScalarFn:
    return _TrigPoly(coeffs)


def lacunary_signed(signs, weights) -> ScalarFn:
    return _LacunarySigned(signs, weights)


_DESCRIPTOR_BUILDERS = {
    "abs": lambda p: abs_fn(),
    "kappa": lambda p: kappa(),
    "phi_s": lambda p: phi_s(p["s"]),
    "tanh_half": lambda p: tanh_half(),
    "fa_kernel": lambda p: fa_kernel(p["a"]),
    "piecewise_linear": lambda p: piecewise_linear(
        [tuple(k) for k in p["knots"]], p["left_slope"], p["right_slope"]
    ),
    "trig_poly": lambda p: trig_poly(
        np.asarray(p["re"], dtype=float) + 1j * np.asarray(p["im"], dtype=float)
    ),
    "lacunary_signed": lambda p: lacunary_signed(p["signs"], p["weights"]),
}


def fn_from_descriptor(desc: dict) -> ScalarFn:
    kind = desc["kind"]
    if kind not in _DESCRIPTOR_BUILDERS:
        raise PreconditionError(f"unknown scalar function kind {kind!r}")
    return _DESCRIPTOR_BUILDERS[kind](desc.get("params", {}))


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Finite ordered point set on the real line or the unit circle."""

    carrier: str
    points: np.ndarray

    def __post_init__(self):
        if self.carrier not in ("real", "circle"):
            raise PreconditionError(f"carrier must be 'real' or 'circle', got {self.carrier!r}")
        pts = np.asarray(self.points, dtype=complex if self.carrier == "circle" else float)
        if pts.ndim != 1 or pts.size < 1:
            raise PreconditionError("a grid needs at least one point")
        if self.carrier == "circle":
            if np.abs(np.abs(pts) - 1.0).max() > 1e-9:
                raise PreconditionError("circle grid points must have modulus 1")
            pts = pts[np.argsort(np.angle(pts))]
        else:
            pts = np.sort(pts)
        scale = max(1.0, float(np.abs(pts).max()))
        if pts.size > 1:
            gaps = np.abs(np.diff(pts))
            if self.carrier == "circle":
                gaps = np.append(gaps, np.abs(pts[0] - pts[-1]))
            if gaps.min() < _MIN_REL_SPACING * scale:
                raise PreconditionError(
                    f"grid points closer than {_MIN_REL_SPACING:.0e} * scale; "
                    f"min gap {gaps.min():.3e}"
                )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    def hull(self) -> tuple[float, float]:
        if self.carrier != "real":
            raise PreconditionError("hull is defined for real-line grids")
        return float(self.points[0]), float(self.points[-1])

    def to_json(self) -> dict:
        if self.carrier == "circle":
            return {
                "carrier": self.carrier,
                "re": self.points.real.tolist(),
                "im": self.points.imag.tolist(),
            }
        return {"carrier": self.carrier, "points": self.points.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Grid":
        if obj["carrier"] == "circle":
            pts = np.asarray(obj["re"]) + 1j * np.asarray(obj["im"])
            return Grid("circle", pts)
        return Grid("real", np.asarray(obj["points"], dtype=float))


def uniform_grid(a: float, b: float, n: int) -> Grid:
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if n == 1:
        return Grid("real", np.array([(a + b) / 2.0]))
    return Grid("real", np.linspace(a, b, n))


def geometric_grid(start: float, factor: float, count: int) -> Grid:
    """start, start*factor, ..., start*factor^(count-1)."""
    if count < 1 or factor <= 0 or start == 0:
        raise PreconditionError("need count >= 1, factor > 0, start != 0")
    return Grid("real", start * np.power(float(factor), np.arange(count)))


def integer_window(n: int) -> Grid:
    """The window {-n, ..., n} of the integer lattice."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    return Grid("real", np.arange(-n, n + 1, dtype=float))


def roots_of_unity(n: int, tau: complex = 1.0 + 0.0j) -> Grid:
    """tau * (n-th roots of 1)."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > 1e-12:
        raise PreconditionError("tau must lie on the unit circle")
    return Grid("circle", tau * np.exp(2j * np.pi * np.arange(n) / n))


# ---------------------------------------------------------------------------
# divided differences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DividedDiffMatrix:
    """Matrix of divided differences (f(x)-f(y))/(x-y) over rows x, cols y.

    ``diagonal_rule`` fixes coincident points: 'zero' puts 0 there, while
    'derivative' uses f' and requires differentiability at those points.
    """

    fn: ScalarFn
    rows: Grid
    cols: Grid
    diagonal_rule: str
    entries: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def divided_diff_values(fn: ScalarFn, xs, ys, rule: str = "zero") -> np.ndarray:
    """Divided-difference matrix over raw point vectors.

    Unlike :func:`divided_diff` this allows repeated points (needed for
    eigenvalue clouds); coincidence means exact equality of the stored values.
    """
    if rule not in ("zero", "derivative"):
        raise PreconditionError(f"rule must be 'zero' or 'derivative', got {rule!r}")
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    fn.check_domain(xs)
    fn.check_domain(ys)
    fx = np.asarray(fn(xs), dtype=complex)
    fy = np.asarray(fn(ys), dtype=complex)
    dx = xs[:, None] - ys[None, :]
    coincident = dx == 0
    out = np.where(
        coincident, 0.0, (fx[:, None] - fy[None, :]) / np.where(coincident, 1.0, dx)
    ).astype(complex)
    if rule == "derivative" and coincident.any():
        where_i, where_j = np.nonzero(coincident)
        dvals = fn.derivative(xs[where_i])  # raises DomainError at kinks
        out[where_i, where_j] = np.asarray(dvals, dtype=complex)
    return out


def divided_diff(fn: ScalarFn, X: Grid, Y: Grid, rule: str = "zero") -> DividedDiffMatrix:
    """Divided-difference matrix of ``fn`` over grid pairs X x Y."""
    if X.carrier != Y.carrier:
        raise PreconditionError("grids must share a carrier")
    if (X.carrier == "circle") != (fn.domain == "circle"):
        raise DomainError(
            f"{fn.kind} is defined on the {fn.domain}; grids live on the {X.carrier}"
        )
    entries = divided_diff_values(fn, X.points, Y.points, rule)
    return DividedDiffMatrix(fn=fn, rows=X, cols=Y, diagonal_rule=rule, entries=entries)


# ---------------------------------------------------------------------------
# moduli of continuity and Lipschitz constants
# ---------------------------------------------------------------------------


def scalar_modulus(fn: ScalarFn, delta: float, probe: Grid | None = None) -> float:
    """Scalar modulus of continuity sup{|f(x)-f(y)| : |x-y| <= delta}.

    Exact closed forms are returned for abs, kappa, and phi_s; other kinds are
    maximized over the probe grid, which yields a lower bound on the true
    modulus at the probe's resolution.
    """
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if fn.kind == "abs":
        return float(delta)
    if fn.kind == "kappa":
        return float(min(delta, 2.0))
    if fn.kind == "phi_s":
        return float(min(delta, abs(fn.s)))
    if probe is None or probe.size == 0:
        raise PreconditionError(f"a probe grid is required for kind {fn.kind!r}")
    pts = probe.points
    vals = np.asarray(fn(pts))
    best = 0.0
    # O(n^2) pair scan in blocks; grids are desk-scale.
    block = 512
    for i0 in range(0, pts.size, block):
        sl = slice(i0, min(i0 + block, pts.size))
        gap = np.abs(pts[sl, None] - pts[None, :])
        diff = np.abs(vals[sl, None] - vals[None, :])
        mask = gap <= delta * (1 + 1e-15)
        if mask.any():
            best = max(best, float(diff[mask].max()))
    return best


def lip_const(fn: ScalarFn, window: tuple[float, float] | None = None) -> float:
    """Best Lipschitz constant on ``window`` (or the natural domain).

    Exact for the registry kinds with closed forms; otherwise the supremum of
    difference quotients over a dense documented probe (a lower bound,
    flagged by ``fn.lip_exact`` being False).
    """
    if fn.kind in ("abs", "kappa"):
        return 1.0
    if fn.kind == "phi_s":
        return fn.lip
    if fn.kind == "tanh_half":
        return 0.5
    if fn.kind == "fa_kernel":
        return 1.0 / fn.a**2
    if fn.kind == "piecewise_linear":
        if window is None:
            return fn.lip
        a, b = window
        xs = np.array([p[0] for p in fn.knots])
        lo = int(np.searchsorted(xs, a, side="right"))
        hi = int(np.searchsorted(xs, b, side="left"))
        return float(np.abs(fn._slopes[lo : hi + 1]).max())
    # probe-based lower bound: 2001-point uniform probe of the window
    if fn.domain == "circle":
        th = np.linspace(0, 2 * np.pi, 2001)
        pts = np.exp(1j * th)
    else:
        if window is None:
            raise PreconditionError(f"kind {fn.kind!r} needs an explicit window")
        pts = np.linspace(window[0], window[1], 2001)
    vals = np.asarray(fn(pts))
    dq = np.abs(np.diff(vals)) / np.abs(np.diff(pts))
    return float(dq.max())


@dataclass(frozen=True)
class MeasureSummary:
    """A finite atomic measure: list of (location, weight) plus total variation."""

    atoms: tuple
    total_variation: float

    @staticmethod
    def from_atoms(atoms) -> "MeasureSummary":
        atoms = tuple((float(x), complex(w)) for x, w in atoms)
        tv = float(sum(abs(w) for _, w in atoms))
        return MeasureSummary(atoms=atoms, total_variation=tv)

    def total_mass(self) -> complex:
        return sum(w for _, w in self.atoms)


def second_derivative_summary(fn: ScalarFn) -> MeasureSummary:
    """Distributional second derivative for kinds with purely atomic f''.

    Supported: abs, kappa, phi_s, piecewise_linear (atoms at slope jumps).
    """
    if fn.kind == "abs":
        return MeasureSummary.from_atoms([(0.0, 2.0)])
    if fn.kind == "kappa":
        return MeasureSummary.from_atoms([(-1.0, 1.0), (1.0, -1.0)])
    if fn.kind == "phi_s":
        if fn.s == 0:
            return MeasureSummary.from_atoms([])
        return MeasureSummary.from_atoms([(0.0, 1.0), (fn.s, -1.0)])
    if fn.kind == "piecewise_linear":
        return MeasureSummary.from_atoms(fn.slope_jumps())
    raise DomainError(
        f"second derivative of kind {fn.kind!r} is not purely atomic; unsupported"
    )
