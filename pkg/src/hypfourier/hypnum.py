"""Complex-parameter special functions and horizontal-line contour quadrature.

Every analytic value is an :class:`AdaptiveComplex`: a double-precision
complex number with an error estimate and the working precision that produced
it.  Series are summed first in hardware floating point.  When the rounding
estimate or the observed cancellation is too large they are re-summed in
software extended precision (mpmath contexts), doubling the mantissa up to a
cap.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np

UNIT_ROUNDOFF = 2.0**-53

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LANCZOS_REL_ERR = 2e-15
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


class PoleError(ValueError):
    """An argument lies on a pole of Γ or on a non-positive integer parameter."""


class BranchCutError(ValueError):
    """A hypergeometric argument lies on the branch cut [1, ∞)."""


class ConvergenceError(ArithmeticError):
    """A computation did not converge; ``partial`` carries the best estimate."""

    def __init__(self, message: str, partial: AdaptiveComplex | None = None) -> None:
        super().__init__(message)
        self.partial = partial


class PrecisionCapError(ConvergenceError):
    """Precision escalation hit the cap before the error target was met."""


class QuadratureError(ConvergenceError):
    """Panel doubling hit its cap before successive estimates agreed."""


@dataclass(frozen=True)
class PrecisionPolicy:
    """Read-only escalation settings.

    A series result is accepted at ``bits`` of working precision when the
    rounding estimate is at most ``target_rel`` times the value and the
    observed cancellation (largest partial sum over final magnitude) is at
    most ``cancellation_limit * 2**(bits - 53)``.
    """

    base_bits: int = 53
    max_bits: int = 512
    cancellation_limit: float = 1e6
    target_rel: float = 1e-13
    max_terms: int = 200_000

    def __post_init__(self) -> None:
        if self.base_bits < 53 or self.max_bits < self.base_bits:
            raise ValueError("need 53 <= base_bits <= max_bits")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class AdaptiveComplex:
    """Complex value with an absolute error estimate.

    Arithmetic between instances propagates first-order error bounds plus one
    rounding of the result.
    """

    re: float
    im: float
    abs_err: float = 0.0
    precision_bits: int = 53

    def __post_init__(self) -> None:
        if not self.abs_err >= 0.0:
            raise ValueError(f"abs_err must be non-negative, got {self.abs_err}")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")

    @classmethod
    def exact(cls, z: complex | float | int) -> AdaptiveComplex:
        z = complex(z)
        return cls(z.real, z.imag, 0.0, 53)

    @classmethod
    def from_complex(cls, z: complex, abs_err: float, bits: int = 53) -> AdaptiveComplex:
        z = complex(z)
        return cls(z.real, z.imag, float(abs_err), bits)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def rel_err(self) -> float:
        mag = abs(self.value)
        return math.inf if mag == 0.0 else self.abs_err / mag

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)

    def conjugate(self) -> AdaptiveComplex:
        return AdaptiveComplex(self.re, -self.im, self.abs_err, self.precision_bits)

    def __neg__(self) -> AdaptiveComplex:
        return AdaptiveComplex(-self.re, -self.im, self.abs_err, self.precision_bits)

    def __add__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        s = self.value + o.value
        err = self.abs_err + o.abs_err + UNIT_ROUNDOFF * abs(s)
        return AdaptiveComplex(s.real, s.imag, err, max(self.precision_bits, o.precision_bits))

    __radd__ = __add__

    def __sub__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.value, o.value
        p = a * b
        err = (
            abs(a) * o.abs_err
            + abs(b) * self.abs_err
            + self.abs_err * o.abs_err
            + 2.0 * UNIT_ROUNDOFF * abs(p)
        )
        return AdaptiveComplex(p.real, p.imag, err, max(self.precision_bits, o.precision_bits))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        b = o.value
        if abs(b) <= o.abs_err:
            raise ZeroDivisionError("divisor not separated from zero by its error bound")
        q = self.value / b
        err = (self.abs_err + abs(q) * o.abs_err) / (abs(b) - o.abs_err)
        err += 2.0 * UNIT_ROUNDOFF * abs(q)
        return AdaptiveComplex(q.real, q.imag, err, max(self.precision_bits, o.precision_bits))

    def __rtruediv__(self, other: object) -> AdaptiveComplex:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self


def _coerce(x: object) -> AdaptiveComplex | None:
    if isinstance(x, AdaptiveComplex):
        return x
    if isinstance(x, (int, float, complex)):
        return AdaptiveComplex.exact(x)
    return None


ZERO = AdaptiveComplex(0.0, 0.0, 0.0, 53)


def _rounded(z: complex, ops: int = 8) -> AdaptiveComplex:
    """Wrap a double computed with about ``ops`` roundings."""
    z = complex(z)
    return AdaptiveComplex(z.real, z.imag, ops * UNIT_ROUNDOFF * abs(z), 53)


# --------------------------------------------------------------------------
# precision escalation


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def _escalate(
    evaluate: Callable[[int], tuple[complex, float, float]],
    policy: PrecisionPolicy,
    what: str,
) -> AdaptiveComplex:
    """Run ``evaluate(bits)`` at doubling precision until it is trustworthy.

    ``evaluate`` returns (value, error estimate, cancellation ratio) at the
    requested working precision.
    """
    bits = policy.base_bits
    previous: tuple[complex, float] | None = None
    while True:
        value, err, cancel = evaluate(bits)
        mag = abs(value)
        cancel_ok = cancel <= policy.cancellation_limit * 2.0 ** (bits - 53)
        err_ok = err <= policy.target_rel * mag or (mag == 0.0 and err == 0.0)
        consistent = previous is None or abs(value - previous[0]) <= 4.0 * (previous[1] + err) + (
            4.0 * UNIT_ROUNDOFF * mag
        )
        if cancel_ok and err_ok and consistent:
            return AdaptiveComplex(value.real, value.imag, err + UNIT_ROUNDOFF * mag, bits)
        if bits >= policy.max_bits:
            partial = AdaptiveComplex(value.real, value.imag, err + UNIT_ROUNDOFF * mag, bits)
            raise PrecisionCapError(
                f"{what}: no stable value at the {policy.max_bits}-bit cap "
                f"(rel_err≈{partial.rel_err:.2e}, cancellation≈{cancel:.2e})",
                partial,
            )
        previous = (value, err)
        bits = min(2 * bits, policy.max_bits)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _hyp_series(
    upper: Sequence,
    lower: Sequence,
    z,
    bits: int,
    max_terms: int,
    what: str,
) -> tuple[complex, float, float]:
    """Sum a generalized hypergeometric series at ``bits`` of precision.

    Returns (value, rounding + truncation error estimate, cancellation ratio).
    With ``bits == 53`` the numbers are Python complex and the terms are
    summed by ``math.fsum``; otherwise they are mpmath numbers.
    """
    floating = bits == 53
    u = 2.0**-bits
    # terms are built by a multiplicative recurrence, so their relative error
    # grows with the index; sqrt growth is the usual random-walk estimate
    gamma = 2.0 * (len(upper) + len(lower) + 1)
    limit_ratio = float(abs(z)) if len(upper) == len(lower) + 1 else 0.0
    j_min = int(max([float(abs(p)) for p in (*upper, *lower)] + [0.0])) + 2

    one = 1.0 + 0.0j if floating else _mp_context(bits).mpc(1)
    t = one
    terms = [one]
    running = one
    peak = 1.0
    absum = 1.0
    weighted = 2.0
    tail = 0.0
    j = 0
    while True:
        num = z
        for a in upper:
            num = num * (a + j)
        den = j + 1
        for b in lower:
            den = den * (b + j)
        ratio = num / den
        rho = float(abs(ratio))
        if j >= j_min or rho == 0.0:
            rho_star = max(rho, limit_ratio)
            if rho == 0.0:
                tail = 0.0
                break
            if rho_star < 1.0:
                tail = float(abs(t)) * rho_star / (1.0 - rho_star)
                if tail <= 0.25 * u * float(abs(running)):
                    break
        t = t * ratio
        j += 1
        if j > max_terms:
            value = complex(running)
            partial = AdaptiveComplex(value.real, value.imag, float(abs(t)) * j, bits)
            raise ConvergenceError(f"{what}: series did not converge in {max_terms} terms", partial)
        at = float(abs(t))
        if at == 0.0:
            tail = 0.0
            break
        terms.append(t)
        running = running + t
        peak = max(peak, float(abs(running)))
        absum += at
        weighted += at * (2.0 + gamma * math.sqrt(j))

    if floating:
        value = complex(math.fsum(x.real for x in terms), math.fsum(x.imag for x in terms))
    else:
        value = complex(_mp_context(bits).fsum(terms))
    mag = abs(value)
    cancel = math.inf if mag == 0.0 else peak / mag
    return value, u * weighted + tail, cancel


def _policy_bits_number(x: complex, bits: int):
    return complex(x) if bits == 53 else _mp_context(bits).mpc(complex(x))


# --------------------------------------------------------------------------
# Γ and B


def _loggamma_lanczos(z: complex) -> tuple[complex, float]:
    """Some branch of log Γ(z) at double precision and an absolute error."""
    if z.real < 0.5:
        lg, err = _loggamma_lanczos(1.0 - z)
        log_sin = cmath.log(cmath.sin(math.pi * z))
        val = _LOG_PI - log_sin - lg
        return val, err + 8.0 * UNIT_ROUNDOFF * (abs(log_sin) + abs(lg) + 2.0)
    w = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (w + i)
    t = w + _LANCZOS_G + 0.5
    log_t = cmath.log(t)
    val = _LOG_SQRT_2PI + (w + 0.5) * log_t - t + cmath.log(x)
    err = _LANCZOS_REL_ERR + 8.0 * UNIT_ROUNDOFF * (abs((w + 0.5) * log_t) + abs(t) + 1.0)
    return val, err


def _loggamma(z: complex, bits: int) -> tuple[complex, float]:
    if bits == 53:
        try:
            return _loggamma_lanczos(z)
        except OverflowError:
            bits = 106
    ctx = _mp_context(bits)
    val = ctx.loggamma(ctx.mpc(z))
    return complex(val), 2.0 ** (3 - bits) * (float(abs(val)) + 1.0)


def _check_gamma_arg(z: complex, what: str) -> None:
    if _is_nonpositive_integer(z):
        raise PoleError(f"{what}: Γ has a pole at {z}")


def complex_gamma(z: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> AdaptiveComplex:
    """Γ(z) for complex z; reflection is used for Re(z) < 1/2."""
    z = complex(z)
    _check_gamma_arg(z, "complex_gamma")
    if z.imag == 0.0 and z.real.is_integer() and 1.0 <= z.real <= 170.0:
        val = float(math.factorial(int(z.real) - 1))
        return AdaptiveComplex(val, 0.0, UNIT_ROUNDOFF * val, 53)

    def evaluate(bits: int) -> tuple[complex, float, float]:
        if bits == 53:
            try:
                lg, lerr = _loggamma_lanczos(z)
                val = cmath.exp(lg)
                return val, abs(val) * math.expm1(lerr), 1.0
            except OverflowError:
                bits = 106
        # stay in the working precision through exp: rounding log Γ to a double
        # would cost |Im log Γ| ulps of phase
        ctx = _mp_context(bits)
        val = complex(ctx.gamma(ctx.mpc(z)))
        return val, abs(val) * (2.0 ** (4 - bits) + UNIT_ROUNDOFF), 1.0

    return _escalate(evaluate, policy, "complex_gamma")


def complex_beta(u: complex, v: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> AdaptiveComplex:
    """B(u, v) = Γ(u)Γ(v)/Γ(u+v), evaluated through log Γ."""
    u, v = complex(u), complex(v)
    for arg in (u, v, u + v):
        _check_gamma_arg(arg, "complex_beta")

    def evaluate(bits: int) -> tuple[complex, float, float]:
        if bits == 53:
            la, ea = _loggamma(u, bits)
            lb, eb = _loggamma(v, bits)
            lc, ec = _loggamma(u + v, bits)
            val = cmath.exp(la + lb - lc)
        else:
            ctx = _mp_context(bits)
            lsum = ctx.loggamma(ctx.mpc(u)) + ctx.loggamma(ctx.mpc(v)) - ctx.loggamma(ctx.mpc(u) + ctx.mpc(v))
            val = complex(ctx.exp(lsum))
            ea = eb = ec = 2.0 ** (3 - bits) * (float(abs(lsum)) + 3.0)
        return val, abs(val) * math.expm1(ea + eb + ec), 1.0

    return _escalate(evaluate, policy, "complex_beta")


# --------------------------------------------------------------------------
# hypergeometric functions


def hyp0f1(b: complex, z: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> AdaptiveComplex:
    """₀F₁(;b;z) by its entire Taylor series."""
    b, z = complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise PoleError(f"hyp0f1: parameter b={b} is a non-positive integer")
    if z == 0:
        return AdaptiveComplex.exact(1.0)

    def evaluate(bits: int) -> tuple[complex, float, float]:
        bb, zz = _policy_bits_number(b, bits), _policy_bits_number(z, bits)
        return _hyp_series([], [bb], zz, bits, policy.max_terms, "hyp0f1")

    return _escalate(evaluate, policy, "hyp0f1")


def hyp1f1(a: complex, b: complex, z: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> AdaptiveComplex:
    """₁F₁(a;b;z); for Re(z) < 0 Kummer's transformation is applied first."""
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise PoleError(f"hyp1f1: parameter b={b} is a non-positive integer")
    if z == 0:
        return AdaptiveComplex.exact(1.0)
    kummer = z.real < 0.0

    def evaluate(bits: int) -> tuple[complex, float, float]:
        aa, bb, zz = (_policy_bits_number(x, bits) for x in (a, b, z))
        if not kummer:
            return _hyp_series([aa], [bb], zz, bits, policy.max_terms, "hyp1f1")
        val, err, cancel = _hyp_series([bb - aa], [bb], -zz, bits, policy.max_terms, "hyp1f1")
        factor = cmath.exp(z) if bits == 53 else complex(_mp_context(bits).exp(zz))
        out = factor * val
        return out, abs(factor) * err + 4.0 * 2.0**-bits * abs(out), cancel

    return _escalate(evaluate, policy, "hyp1f1")


def hyp2f1(
    a: complex, b: complex, c: complex, z: complex, policy: PrecisionPolicy = DEFAULT_POLICY
) -> AdaptiveComplex:
    """₂F₁(a,b;c;z) on the principal branch.

    The series is summed directly for |z| <= 1/2; otherwise the Pfaff image
    z/(z-1) is used when it is smaller in modulus.  Real z >= 1 is refused.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_integer(c):
        raise PoleError(f"hyp2f1: parameter c={c} is a non-positive integer")
    if z.imag == 0.0 and z.real >= 1.0:
        raise BranchCutError(f"hyp2f1: z={z.real} lies on the cut [1, inf)")
    if z == 0:
        return AdaptiveComplex.exact(1.0)
    w = z / (z - 1.0)
    pfaff = abs(z) > 0.5 and abs(w) < abs(z)
    if min(abs(z), abs(w)) >= 1.0:
        raise ValueError(f"hyp2f1: z={z} is outside the supported evaluation zones")

    def evaluate(bits: int) -> tuple[complex, float, float]:
        aa, bb, cc, zz = (_policy_bits_number(x, bits) for x in (a, b, c, z))
        if not pfaff:
            return _hyp_series([aa, bb], [cc], zz, bits, policy.max_terms, "hyp2f1")
        ww = zz / (zz - 1)
        val, err, cancel = _hyp_series([aa, cc - bb], [cc], ww, bits, policy.max_terms, "hyp2f1")
        if bits == 53:
            factor = cmath.exp(-a * cmath.log(1.0 - z))
        else:
            ctx = _mp_context(bits)
            factor = complex(ctx.exp(-aa * ctx.log(1 - zz)))
        out = factor * val
        return out, abs(factor) * err + 8.0 * 2.0**-bits * abs(out) * (1.0 + abs(a)), cancel

    return _escalate(evaluate, policy, "hyp2f1")


# --------------------------------------------------------------------------
# contour quadrature


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def contour_quadrature(
    integrand: Callable[[np.ndarray], np.ndarray],
    im_height: float,
    half_width: float,
    tol: float,
    *,
    center: float = 0.0,
    decay_rate: float | None = None,
    decay_power: float | None = None,
    oscillation: float | None = None,
    order: int = 20,
    min_panels: int = 8,
    max_panels: int = 1 << 14,
) -> AdaptiveComplex:
    """Integrate ``integrand(u) du`` along Im u = im_height, |Re u - center| <= half_width.

    Gauss–Legendre panels are doubled until two successive estimates agree
    within ``tol`` relative to the result (or reach the roundoff floor of the
    integrand's L1 norm).  The returned error adds a tail bound from the
    supplied decay model: ``decay_rate`` for e^{-rate|x|}, ``decay_power`` for
    |u|^{-power}, and ``oscillation`` ω for |u|^{-power} e^{-iωu}, whose tail
    integration by parts bounds by about 2|f|/ω at each end.
    """
    if im_height <= 0.0:
        raise ValueError("im_height must be positive")
    nodes, weights = _gauss_legendre(order)

    def estimate(panels: int) -> tuple[complex, float]:
        edges = np.linspace(center - half_width, center + half_width, panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        x = mid[:, None] + half[:, None] * nodes[None, :]
        vals = np.asarray(integrand(x + 1j * im_height), dtype=complex)
        wv = (weights[None, :] * half[:, None]) * vals
        total = complex(math.fsum(wv.real.ravel()), math.fsum(wv.imag.ravel()))
        return total, float(np.sum(np.abs(wv)))

    ends = np.array([center - half_width, center + half_width]) + 1j * im_height
    f_ends = np.abs(np.asarray(integrand(ends), dtype=complex))
    if oscillation is not None:
        tail = 2.0 * float(np.sum(f_ends)) / oscillation
    elif decay_rate is not None:
        tail = float(np.sum(f_ends)) / decay_rate
    elif decay_power is not None:
        tail = float(np.sum(f_ends * np.abs(ends))) / (decay_power - 1.0)
    else:
        tail = 0.0

    panels = min_panels
    prev, _ = estimate(panels)
    while True:
        panels *= 2
        cur, l1 = estimate(panels)
        diff = abs(cur - prev)
        floor = 64.0 * UNIT_ROUNDOFF * l1
        if diff <= tol * abs(cur) or diff <= floor:
            err = diff + 16.0 * UNIT_ROUNDOFF * l1 + tail
            return AdaptiveComplex(cur.real, cur.imag, err, 53)
        if panels >= max_panels:
            partial = AdaptiveComplex(cur.real, cur.imag, diff + tail, 53)
            raise QuadratureError(f"contour_quadrature: no agreement after {panels} panels", partial)
        prev = cur


# --------------------------------------------------------------------------
# the four integral kernels


@dataclass(frozen=True)
class HypParams:
    """Weight k, hyperbolic length ell and the Fourier indices m, n."""

    k: int
    ell: float
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.k < 4 or self.k % 2:
            raise ValueError(f"weight must be even and at least 4, got {self.k}")
        if not self.ell > 0.0:
            raise ValueError(f"hyperbolic length must be positive, got {self.ell}")

    @property
    def nu_m(self) -> complex:
        """Spectral shift 2πim/ℓ."""
        return 2j * math.pi * self.m / self.ell

    @property
    def nu_n(self) -> complex:
        return 2j * math.pi * self.n / self.ell


def e(x: complex) -> complex:
    """e(x) = exp(2πix), with the real part of x reduced mod 1 first."""
    x = complex(x)
    return cmath.exp(2j * math.pi * complex(x.real - math.floor(x.real), x.imag))


def _sgn(x: float) -> int:
    return 1 if x > 0 else -1


def _parabolic_prefactor(k: int, n: int) -> AdaptiveComplex:
    # (2π)^k n^{k-1} / (e^{πik/2} Γ(k)) with e^{πik/2} = (-1)^{k/2} for even k
    val = (2.0 * math.pi) ** k * float(n) ** (k - 1) / math.factorial(k - 1)
    val *= -1.0 if (k // 2) % 2 else 1.0
    return AdaptiveComplex(val, 0.0, 4.0 * k * UNIT_ROUNDOFF * abs(val), 53)


def _default_tol(tol: float | None) -> float:
    return 1e-12 if tol is None else tol


def _oscillatory_quadrature(
    f: Callable[[np.ndarray], np.ndarray], p: HypParams, y: float, scale: float, min_width: float, tol: float
) -> AdaptiveComplex:
    # integrands of size scale·|u|^{-k}, oscillating like e^{-2πinu} when n ≥ 1
    if p.n >= 1:
        omega = 2.0 * math.pi * p.n
        width = max(min_width, (2.0 * scale / (tol * omega)) ** (1.0 / p.k))
        return contour_quadrature(f, y, width, tol, oscillation=omega)
    width = max(min_width, (scale / (tol * (p.k - 1))) ** (1.0 / (p.k - 1)))
    return contour_quadrature(f, y, width, tol, decay_power=p.k)


def par_par_integrand(p: HypParams, r: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(u: np.ndarray) -> np.ndarray:
        return np.exp(2j * np.pi * (-p.m / (r * r * u) - p.n * u)) * u ** (-p.k)

    return f


def i_par_par(
    p: HypParams, r: float, *, method: str = "closed", tol: float | None = None
) -> AdaptiveComplex:
    """Parabolic/parabolic integral along a horizontal line in the upper half-plane."""
    if r == 0:
        raise ValueError("r must be non-zero")
    if method == "quadrature":
        # the height balancing e^{2πny} against the peak e^{2π|m|/(r²y)} at u = iy
        y = 1.0 / max(1, p.n)
        if p.m < 0 and p.n > 0:
            y = max(y, math.sqrt(-p.m / p.n) / abs(r))
        tol = _default_tol(tol)
        scale = math.exp(2.0 * math.pi * (max(p.n, 0) * y + max(-p.m, 0) / (r * r * y)))
        return _oscillatory_quadrature(par_par_integrand(p, r), p, y, scale, 12.0, tol)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    if p.n <= 0:
        return ZERO
    z = -4.0 * math.pi**2 * p.m * p.n / (r * r)
    return _parabolic_prefactor(p.k, p.n) * hyp0f1(p.k, z)


def hyp_par_integrand(p: HypParams, r: float) -> Callable[[np.ndarray], np.ndarray]:
    s = _sgn(r)
    h = p.k // 2

    def f(u: np.ndarray) -> np.ndarray:
        w = s * (u - r) / (u + r)
        return np.exp(p.nu_m * np.log(w) - 2j * np.pi * p.n * u) / ((u - r) ** h * (u + r) ** h)

    return f


def i_hyp_par(
    p: HypParams, r: float, *, method: str = "closed", tol: float | None = None
) -> AdaptiveComplex:
    """Hyperbolic/parabolic integral; real for even weight, zero for n <= 0."""
    if r == 0:
        raise ValueError("r must be non-zero")
    if method == "quadrature":
        y = 1.0 / max(1, p.n)
        tol = _default_tol(tol)
        scale = math.exp(2.0 * math.pi * max(p.n, 0) * y + math.pi**2 * abs(p.m) / p.ell)
        return _oscillatory_quadrature(hyp_par_integrand(p, r), p, y, scale, max(12.0, 4.0 * abs(r)), tol)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    if p.n <= 0:
        return ZERO
    phase = cmath.exp(math.pi**2 * p.m * (_sgn(r) - 1) / p.ell - 2j * math.pi * p.n * r)
    kern = hyp1f1(p.k / 2 + p.nu_m, p.k, 4j * math.pi * p.n * r)
    return _parabolic_prefactor(p.k, p.n) * _rounded(phase, 16 + abs(p.n * r)) * kern


def par_hyp_integrand(p: HypParams, r: float) -> Callable[[np.ndarray], np.ndarray]:
    s = _sgn(r)
    expo = p.k / 2 - p.nu_n

    def f(u: np.ndarray) -> np.ndarray:
        eu = s * np.exp(u)
        phase = np.exp(2j * np.pi * p.m * (eu - 1.0) / (2.0 * r * (eu + 1.0)))
        return phase * np.exp(u * expo) / (eu + 1.0) ** p.k / p.ell

    return f


def i_par_hyp(
    p: HypParams, r: float, *, method: str = "closed", tol: float | None = None
) -> AdaptiveComplex:
    """Parabolic/hyperbolic integral, the log-periodic kernel of the c_η(n; P_{∞,m}) sum."""
    if r == 0:
        raise ValueError("r must be non-zero")
    if method == "quadrature":
        tol = _default_tol(tol)
        width = (math.log(1.0 / tol) + 12.0) / (p.k / 4.0)
        return contour_quadrature(par_hyp_integrand(p, r), math.pi / 2, width, tol, decay_rate=p.k / 2)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    s = _sgn(r)
    pre = cmath.exp(0.5j * math.pi * (p.k / 2 - p.nu_n) * (1 - s) - 1j * math.pi * p.m / r) / p.ell
    beta = complex_beta(p.k / 2 + p.nu_n, p.k / 2 - p.nu_n)
    kern = hyp1f1(p.k / 2 - p.nu_n, p.k, 2j * math.pi * p.m / r)
    return _rounded(pre, 16 + abs(p.m / r)) * beta * kern


def hyp_hyp_integrand(
    p_eta: HypParams, p_eta2: HypParams, r: float, alpha: int, beta: int
) -> Callable[[np.ndarray], np.ndarray]:
    s = math.sqrt(abs(r / (r - 1.0)))
    t = 1.0 / s
    s1 = _sgn(r - 1.0)
    h = p_eta.k // 2
    nu_m = p_eta.nu_m
    expo = p_eta.k / 2 - p_eta2.nu_n

    def f(u: np.ndarray) -> np.ndarray:
        eu = np.exp(u)
        first = alpha * eu + s1 * t
        second = eu + beta * s
        w = s * first / second
        return np.exp(nu_m * np.log(w) + u * expo) / (first**h * second**h) / p_eta2.ell

    return f


def i_hyp_hyp_route(r: float, alpha: int) -> str:
    """Which evaluation route :func:`i_hyp_hyp` takes for (r, α)."""
    return "quadrature" if 0.0 < r < 1.0 else "ffv2"


def _check_hyp_hyp(p_eta: HypParams, p_eta2: HypParams, r: float, alpha: int, beta: int) -> None:
    if r in (0.0, 1.0):
        raise ValueError("r must avoid 0 and 1")
    if alpha not in (1, -1) or beta not in (1, -1):
        raise ValueError("alpha and beta must be ±1")
    if alpha * beta != _sgn(r):
        raise ValueError(f"invalid sign combination: alpha*beta must equal sgn(r) for r={r}")
    if p_eta.k != p_eta2.k:
        raise ValueError("both parameter sets must share the weight")


def i_hyp_hyp(
    p_eta: HypParams,
    p_eta2: HypParams,
    r: float,
    alpha: int,
    beta: int,
    *,
    method: str = "auto",
    tol: float | None = None,
) -> AdaptiveComplex:
    """Hyperbolic/hyperbolic integral, m and ℓ_η taken from ``p_eta``, n and ℓ_η′ from ``p_eta2``.

    ``method`` is ``"auto"`` (hypergeometric form off (0, 1), quadrature on
    it), ``"ffv2"``, ``"ffv3"`` or ``"quadrature"``.  Both hypergeometric
    forms need ₂F₁ at a real argument above 1 when 0 < r < 1, so that range
    is always integrated numerically.
    """
    _check_hyp_hyp(p_eta, p_eta2, r, alpha, beta)
    if method == "auto":
        method = i_hyp_hyp_route(r, alpha)
    k, m, n = p_eta.k, p_eta.m, p_eta2.n
    ell, ell2 = p_eta.ell, p_eta2.ell
    if method == "quadrature":
        tol = _default_tol(tol)
        shift = 0.5 * abs(math.log(abs(r / (r - 1.0))))
        width = shift + (math.log(1.0 / tol) + 12.0) / (k / 4.0)
        return contour_quadrature(
            hyp_hyp_integrand(p_eta, p_eta2, r, alpha, beta), math.pi / 2, width, tol, decay_rate=k / 2
        )
    if 0.0 < r < 1.0:
        raise BranchCutError("closed forms need ₂F₁ beyond 1 for 0 < r < 1; use quadrature")
    q = abs(r / (r - 1.0))
    log_q = math.log(q)
    beta_fn = complex_beta(k / 2 - p_eta2.nu_n, k / 2 + p_eta2.nu_n)
    if method == "ffv2":
        sign = _sgn(r) ** (k // 2)
        mag = q ** (-k / 4)
        phase = e(
            m / (2 * ell) * (log_q + 1j * math.pi * (1 - alpha))
            + n / (2 * ell2) * (-log_q + 1j * math.pi * (1 + beta))
        )
        kern = hyp2f1(k / 2 - p_eta.nu_m, k / 2 + p_eta2.nu_n, k, 1.0 / r)
    elif method == "ffv3":
        sign = _sgn(r - 1.0) ** (k // 2)
        mag = q ** (k / 4)
        phase = e(
            m / (2 * ell) * (log_q + 1j * math.pi * (1 - alpha))
            + n / (2 * ell2) * (log_q + 1j * math.pi * (1 + alpha * _sgn(r - 1.0)))
        )
        kern = hyp2f1(k / 2 + p_eta.nu_m, k / 2 + p_eta2.nu_n, k, 1.0 / (1.0 - r))
    else:
        raise ValueError(f"unknown method {method!r}")
    pre = sign * mag * math.exp(2 * math.pi**2 * n / ell2) / ell2 * phase
    return _rounded(pre, 32 + abs(m) + abs(n) + k) * beta_fn * kern
