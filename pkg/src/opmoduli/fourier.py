"""Upper and lower estimates for norms in the space of absolutely convergent
Fourier integrals, plus the periodization coefficients used for circle/line
kernel comparisons.

The restriction norm over an interval J is an infimum over extensions and is
never computed exactly: the module reports a certified lower bound (the sup of
|f| on a probe of J) and the best applicable upper construction, tagged by
method ('polya', 'lip-extension', 'logaa', 'quadrature').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import simpson
from scipy.special import polygamma

from .errors import DomainError, PreconditionError
from .functions import ScalarFn, lip_const

QUARTIC_ROOT_12 = 12.0 ** 0.25


@dataclass(frozen=True)
class HatNormEstimate:
    """Two-sided estimate of a restriction hat-norm over an interval."""

    target: str
    interval: tuple[float, float]
    lower: float
    upper: float
    method: str
    error_bound: float = 0.0

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "J": list(self.interval),
            "lower": self.lower,
            "upper": {"value": self.upper, "method": self.method},
            "error_bound": self.error_bound,
        }


class QuadratureResult(NamedTuple):
    value: float
    discretization_error: float
    truncation_error: float
    tail_error: float

    @property
    def error_bound(self) -> float:
        return self.discretization_error + self.truncation_error + self.tail_error


def _l1_of_inverse_transform(samples: np.ndarray, window: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Trapezoid/FFT evaluation of the L1 norm of the inverse transform of a
    function sampled uniformly on [-window, window]."""
    n = samples.size
    h = 2.0 * window / n
    spec = n * np.fft.ifft(samples)  # sum_j f_j e^{+2 pi i jk/n}
    k = np.fft.fftfreq(n, d=1.0 / n)  # 0, 1, ..., -1 ordering
    xi = 2.0 * np.pi * k / (n * h)
    g = (h / (2.0 * np.pi)) * np.exp(-1j * xi * window) * spec
    dxi = 2.0 * np.pi / (n * h)
    order = np.argsort(xi)
    return float(np.abs(g).sum() * dxi), xi[order], np.abs(g)[order]


def hat_norm_quadrature_detailed(
    f: Callable, window: float, grid_step: float
) -> QuadratureResult:
    """L1 norm of the inverse Fourier transform, with reported error bounds.

    The transform is evaluated on a symmetric frequency window by
    trapezoid/FFT quadrature.  Errors reported: Richardson discretization
    estimate, a monotone-envelope bound for truncating the time window, and a
    quadratic-envelope bound for the frequency tail.  Insufficient decay
    (truncation + tail above 10% of the value) raises.
    """
    if window <= 0 or grid_step <= 0 or grid_step >= window:
        raise PreconditionError("need 0 < grid_step < window")
    n = int(2 ** math.ceil(math.log2(max(16, 2.0 * window / grid_step))))
    t = -window + (2.0 * window / n) * np.arange(n)
    samples = np.asarray(f(t), dtype=complex)
    fmax = float(np.abs(samples).max())
    edge = max(abs(complex(np.asarray(f(-window)))), abs(complex(np.asarray(f(window)))))
    if fmax > 0 and edge > 0.1 * fmax:
        raise PreconditionError(
            f"window too small: |f| at the window edge is {edge:.3e}, "
            f"more than 10% of max {fmax:.3e}"
        )
    value, xi, absg = _l1_of_inverse_transform(samples, window)
    value2, _, _ = _l1_of_inverse_transform(samples[::2], window)
    disc = abs(value - value2) / 3.0

    xi_max = float(np.abs(xi).max())
    gmax = float(absg.max())
    if edge <= 1e-13 * max(1.0, fmax):
        trunc = 0.0
    else:
        # |error in g(xi)| <= f(W)/(pi |xi|) for monotone tails; split the
        # frequency axis at the optimal xi0 against the sup bound 2 xi0 gmax
        xi0 = min(max(edge / (math.pi * max(gmax, 1e-300)), xi[xi > 0].min()), xi_max)
        trunc = 2.0 * xi0 * gmax + (2.0 / math.pi) * edge * max(0.0, math.log(xi_max / xi0))
    mask = np.abs(xi) >= xi_max / 8.0
    c2 = float((xi[mask] ** 2 * absg[mask]).max()) if mask.any() else 0.0
    tail = 2.0 * c2 / xi_max

    if value > 0 and (trunc + tail) > 0.1 * value:
        raise PreconditionError(
            f"insufficient decay: truncation+tail bound {trunc + tail:.3e} exceeds "
            f"10% of the computed value {value:.6e}"
        )
    return QuadratureResult(value, disc, trunc, tail)


def hat_norm_quadrature(f: Callable, window: float, grid_step: float) -> float:
    """Upper-estimate workhorse: the L1 norm of the inverse transform of the
    chosen extension ``f`` (a hat-norm upper bound for any subinterval)."""
    return hat_norm_quadrature_detailed(f, window, grid_step).value


def _ray_probe(a: float, direction: int, scale: float) -> np.ndarray:
    offsets = np.concatenate([[0.0], np.geomspace(1e-3 * scale, 1e4 * scale, 60)])
    return a + direction * offsets


def polya_bound(f: Callable, ray: tuple[float, float]) -> float:
    """Hat-norm of a monotone, convex-or-concave function on a closed ray that
    vanishes at infinity: the norm equals max |f| over the ray.

    Preconditions are checked on a geometric probe of the ray: one-signed
    first differences, one-signed slope increments, and decay at the far end.
    """
    lo, hi = ray
    if math.isinf(lo) == math.isinf(hi):
        raise PreconditionError("a ray has exactly one finite endpoint")
    a = hi if math.isinf(lo) else lo
    direction = -1 if math.isinf(lo) else 1
    scale = max(1.0, abs(a))
    t = _ray_probe(a, direction, scale)
    v = np.asarray(f(t), dtype=float)
    dv = np.diff(v)
    if not (np.all(dv <= 1e-12) or np.all(dv >= -1e-12)):
        i = int(np.argmax(np.abs(np.diff(np.sign(dv)))))
        raise PreconditionError(
            f"not monotone on the ray: triple t={t[i]:.6g},{t[i + 1]:.6g},{t[i + 2]:.6g} "
            f"values {v[i]:.6g},{v[i + 1]:.6g},{v[i + 2]:.6g}"
        )
    slopes = dv / np.diff(t)
    ds = np.diff(slopes)
    if not (np.all(ds <= 1e-10) or np.all(ds >= -1e-10)):
        i = int(np.argmax(np.abs(np.diff(np.sign(ds)))))
        raise PreconditionError(
            f"neither convex nor concave on the ray: triple "
            f"t={t[i]:.6g},{t[i + 1]:.6g},{t[i + 2]:.6g}"
        )
    vmax = float(np.abs(v).max())
    if vmax > 0 and abs(v[-1]) > 1e-3 * vmax:
        raise PreconditionError(
            f"does not vanish at infinity: |f({t[-1]:.3g})| = {abs(v[-1]):.3e} "
            f"vs max {vmax:.3e}"
        )
    return vmax


def tanh_half_interval_bound(J: tuple[float, float]) -> float:
    """Hat-norm upper bound for (e^x-1)/(e^x+1) on a bounded interval
    containing 0: min of |J|/12^(1/4) and, for |J| >= 4, 5 + (4/pi) log(|J|/2)."""
    a, b = J
    if not (a <= 0.0 <= b):
        raise PreconditionError(f"interval {J} does not contain 0")
    length = b - a
    small = length / QUARTIC_ROOT_12
    if length >= 4.0:
        return min(small, 5.0 + (4.0 / math.pi) * math.log(length / 2.0))
    return small


def exp_ray_bound(a: float) -> float:
    """Hat-norm upper bound for e^x/(1+e^x) on (-inf, a], a >= 2:
    2 + (2/pi) log a."""
    if a < 2.0:
        raise PreconditionError(
            f"exp_ray_bound covers a >= 2 only (got {a}); for a <= 0 the monotone "
            "ray bound applies instead"
        )
    return 2.0 + (2.0 / math.pi) * math.log(a)


def lip_extension_bound(f: ScalarFn, J: tuple[float, float]) -> float:
    """Hat-norm upper bound for a Lipschitz f with f(0) = 0 on a bounded
    interval containing 0: (2/12^(1/4)) |J| Lip(f)."""
    a, b = J
    if not (a <= 0.0 <= b):
        raise PreconditionError(f"interval {J} does not contain 0")
    f0 = complex(np.asarray(f(0.0)))
    if abs(f0) > 1e-12:
        raise PreconditionError(f"f(0) = {f0} must vanish")
    return (2.0 / QUARTIC_ROOT_12) * (b - a) * lip_const(f, (a, b))


class PeriodizationResult(NamedTuple):
    coefficients: np.ndarray  # a_{-N} .. a_N
    sum_abs: float  # estimate of the full series sum of |a_n|
    partial_sum: float  # sum over |n| <= N only
    tail_estimate: float


PERIODIZATION_LIMIT = 3.0 * math.sqrt(2.0) * math.pi / 4.0


def _xi_kernel(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    small = np.abs(t) < 1e-8
    out[small] = 1.0 + t[small] ** 2 / 24.0
    ts = t[~small]
    out[~small] = ts / (2.0 * np.sin(ts / 2.0))
    return out


def periodization_coefficients(N: int, quad_points: int = 2**15 + 1) -> PeriodizationResult:
    """Fourier coefficients of the even 3*pi-periodic extension of
    t / (2 sin(t/2)) from [-3pi/2, 3pi/2], computed by quadrature.

    The coefficients alternate in sign ((-1)^n a_n >= 0) and their absolute
    series sums to the extension's value at the seam, 3*sqrt(2)*pi/4.
    ``sum_abs`` estimates that full series: the partial sum over |n| <= N plus
    a fitted quadratic-decay tail (the raw partial sums converge only at rate
    ~1/N and stay below the limit).
    """
    if N < 1:
        raise PreconditionError("N must be >= 1")
    t = np.linspace(0.0, 1.5 * math.pi, quad_points)
    base = _xi_kernel(t)
    ns = np.arange(0, N + 1)
    phases = np.cos((2.0 / 3.0) * np.outer(ns, t))
    a_pos = (2.0 / (3.0 * math.pi)) * simpson(base[None, :] * phases, x=t, axis=1)
    coeffs = np.concatenate([a_pos[:0:-1], a_pos])  # a_{-N}..a_N, even symmetry
    partial = float(np.abs(coeffs).sum())
    k = min(5, N)
    c_hat = float(np.mean(ns[-k:] ** 2 * np.abs(a_pos[-k:])))
    tail = 2.0 * c_hat * float(polygamma(1, N + 1))
    return PeriodizationResult(
        coefficients=coeffs,
        sum_abs=partial + tail,
        partial_sum=partial,
        tail_estimate=tail,
    )


def periodization_partial_sums(coefficients: np.ndarray) -> np.ndarray:
    """Partial sums S_m = sum_{|n| <= m} |a_n| from a coefficient vector."""
    N = (coefficients.size - 1) // 2
    a = np.abs(coefficients)
    center = a[N]
    sums = [center]
    for m in range(1, N + 1):
        sums.append(sums[-1] + a[N - m] + a[N + m])
    return np.asarray(sums)


def hat_norm_estimate(
    f: ScalarFn,
    J: tuple[float, float],
    probe_points: int = 4001,
    quadrature: tuple[float, float] | None = None,
) -> HatNormEstimate:
    """Assemble the best two-sided estimate of the restriction hat-norm of a
    registry function on a bounded interval.

    The lower side is always sup |f| over a probe of J.  The upper side takes
    the smallest applicable construction among the Lipschitz extension bound,
    the specialized interval bound for tanh_half (tagged 'logaa' when its
    logarithmic branch wins), and plain quadrature of a given extension.
    """
    a, b = J
    if not a < b:
        raise PreconditionError(f"need a nondegenerate interval, got {J}")
    pts = np.linspace(a, b, probe_points)
    lower = float(np.abs(np.asarray(f(pts))).max())
    candidates: list[tuple[float, str]] = []
    if f.kind == "tanh_half" and a <= 0.0 <= b:
        val = tanh_half_interval_bound(J)
        tag = "logaa" if (b - a >= 4.0 and val < (b - a) / QUARTIC_ROOT_12) else "lip-extension"
        candidates.append((val, tag))
    elif a <= 0.0 <= b and abs(complex(np.asarray(f(0.0)))) <= 1e-12 and f.lip is not None:
        candidates.append((lip_extension_bound(f, J), "lip-extension"))
    if quadrature is not None:
        window, step = quadrature
        candidates.append((hat_norm_quadrature(f, window, step), "quadrature"))
    if not candidates:
        raise PreconditionError(
            f"no applicable upper construction for kind {f.kind!r} on {J}"
        )
    upper, method = min(candidates)
    if lower > upper + 1e-6:
        raise AssertionError(
            f"estimate inconsistent: sup-norm lower {lower:.6g} exceeds upper {upper:.6g}"
        )
    return HatNormEstimate(
        target=f.kind, interval=(float(a), float(b)), lower=lower, upper=upper, method=method
    )
