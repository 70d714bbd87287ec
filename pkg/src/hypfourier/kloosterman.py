"""Generalised Kloosterman sums for SL₂(ℤ) with the cusp ∞ and η = (−√D, √D).

Conventions: for the mixed sums the modulus is C = −N/(2√D) (hyperbolic
then parabolic) or C = N/(2√D) (parabolic then hyperbolic) with N a
non-zero integer, and the functions take N so that C stays exact.
Hyperbolic/hyperbolic sums take exact rational C from a :class:`CosetTable`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypnum import UNIT_ROUNDOFF, AdaptiveComplex
from .lattice import CosetTable, enumerate_rstar
from .pell import PellData, psi_d
from .quadnum import QuadNum


@dataclass(frozen=True)
class KloostermanValue:
    value: AdaptiveComplex
    term_count: int

    @property
    def real(self) -> float:
        return self.value.re


def _phase_sum(phases: list[tuple[Fraction, float]]) -> tuple[complex, float]:
    """Σ e(q + x) for exact rationals q and floats x, with an error bound.

    The rational part is reduced mod 1 exactly before any rounding.
    """
    re_terms, im_terms = [], []
    err = 0.0
    for q, x in phases:
        frac = q - math.floor(q)
        t = float(frac) + x
        t -= math.floor(t)
        re_terms.append(math.cos(2.0 * math.pi * t))
        im_terms.append(math.sin(2.0 * math.pi * t))
        err += 2.0 * math.pi * (abs(x) + 2.0) * UNIT_ROUNDOFF + 2.0 * UNIT_ROUNDOFF
    return complex(math.fsum(re_terms), math.fsum(im_terms)), err


# --------------------------------------------------------------------------
# parabolic/parabolic


def _units_and_inverses(c: int) -> tuple[np.ndarray, np.ndarray]:
    d = np.arange(c, dtype=np.int64)
    units = d[np.gcd(d, c) == 1]
    phi = len(units)
    # d^{φ(c)−1} ≡ d⁻¹ (mod c), by square-and-multiply on the whole vector
    inv = np.ones_like(units)
    base = units % c
    e = phi - 1
    while e:
        if e & 1:
            inv = (inv * base) % c
        base = (base * base) % c
        e >>= 1
    return units, inv % c


def s_par_par(m: int, n: int, c: int) -> KloostermanValue:
    """Classical S(m, n; c) = Σ_{d mod c, (d,c)=1} e((m d̄ + n d)/c)."""
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    if c == 1:
        return KloostermanValue(AdaptiveComplex.exact(1.0), 1)
    if c > 3_000_000_000:
        raise OverflowError("modulus too large for the 64-bit vectorised path")
    units, inv = _units_and_inverses(c)
    r = (m % c * inv + n % c * units) % c
    angles = 2.0 * np.pi * r / c
    val = math.fsum(np.cos(angles).tolist())
    err = len(units) * 8.0 * UNIT_ROUNDOFF
    return KloostermanValue(AdaptiveComplex(val, 0.0, err, 53), len(units))


def s_par_par_naive(m: int, n: int, c: int) -> complex:
    """Direct enumeration with Python integers; the reference for :func:`s_par_par`."""
    total = 0j
    for d in range(c):
        if math.gcd(d, c) == 1:
            dbar = pow(d, -1, c) if c > 1 else 0
            total += cmath.exp(2j * math.pi * ((m * dbar + n * d) % c) / c)
    return total


# --------------------------------------------------------------------------
# hyperbolic/parabolic


def s_hyp_par(pd: PellData, m: int, n: int, N: int) -> KloostermanValue:
    """S_{η∞}(m, n; −N/(2√D)) through the coprime points of e² − Dg² = N.

    −ψ_D(m, n; N) + ½ Σ e((m/ℓ) log|(e + g√D)/(e − g√D)| − n e g⁻¹/N),
    g⁻¹ being the inverse of g modulo |N| (and 0 when g = 0).
    """
    if N == 0:
        raise ValueError("N must be non-zero")
    D, ell = pd.D, pd.ell
    pts = sorted(enumerate_rstar(pd, N))
    phases = []
    for p in pts:
        plus = QuadNum(p.e, p.g, D)
        log_ratio = plus.log_abs() - plus.conjugate().log_abs()
        gi = pow(p.g, -1, abs(N)) if p.g != 0 and abs(N) > 1 else 0
        phases.append((Fraction(-n * p.e * gi, N), m * log_ratio / ell))
    s, err = _phase_sum(phases)
    psi = psi_d(pd, m, n, N)
    value = AdaptiveComplex(0.5 * s.real - psi, 0.5 * s.imag, 0.5 * err + UNIT_ROUNDOFF, 53)
    return KloostermanValue(value, len(pts) // 2)


def _star_factor_hyp_par(pd: PellData, m: int, n: int, N: int) -> complex:
    # exp(π²m(sgn C − 1)/ℓ − πin/C) with C = −N/(2√D)
    sgn_c = -1 if N > 0 else 1
    return cmath.exp(math.pi**2 * m * (sgn_c - 1) / pd.ell + 2j * math.pi * n * math.sqrt(pd.D) / N)


def s_star_hyp_par(pd: PellData, m: int, n: int, N: int) -> KloostermanValue:
    """The renormalised sum S*_{η∞}(m, n; C), C = −N/(2√D)."""
    base = s_hyp_par(pd, m, n, N)
    f = _star_factor_hyp_par(pd, m, n, N)
    fac = AdaptiveComplex(f.real, f.imag, 16.0 * UNIT_ROUNDOFF * abs(f) * (1 + abs(n) * math.sqrt(pd.D)), 53)
    return KloostermanValue(base.value * fac, base.term_count)


def s_par_hyp(pd: PellData, m: int, n: int, N: int) -> KloostermanValue:
    """S_{∞η}(m, n; C) for C = N/(2√D), as the conjugate of S_{η∞}(n, m; −C)."""
    base = s_hyp_par(pd, n, m, N)
    return KloostermanValue(base.value.conjugate(), base.term_count)


def s_star_par_hyp(pd: PellData, m: int, n: int, N: int) -> KloostermanValue:
    """S*_{∞η}(m, n; C) for C = N/(2√D), as the conjugate of S*_{η∞}(n, m; −C)."""
    base = s_star_hyp_par(pd, n, m, N)
    return KloostermanValue(base.value.conjugate(), base.term_count)


# --------------------------------------------------------------------------
# hyperbolic/hyperbolic


def s_hyp_hyp(
    pd: PellData, m: int, n: int, C: Fraction, alpha: int, beta: int, reps: CosetTable
) -> KloostermanValue:
    """Σ over the (C, α, β) cell of e((m/2ℓ) log|ab/cd| + (n/2ℓ) log|ac/bd|)."""
    if reps.pell.D != pd.D:
        raise ValueError("coset table belongs to a different D")
    cell = reps.cell(Fraction(C), alpha, beta)
    ell = pd.ell
    phases = [
        (Fraction(0), m * r.log_ab_over_cd() / (2 * ell) + n * r.log_ac_over_bd() / (2 * ell)) for r in cell
    ]
    s, err = _phase_sum(phases)
    return KloostermanValue(AdaptiveComplex(s.real, s.imag, err, 53), len(cell))


def star_factor_hyp_hyp(pd: PellData, m: int, n: int, C: Fraction, alpha: int) -> complex:
    """e((m/2ℓ)[log|C/(C−1)| + πi(1−α)] + (n/2ℓ)[log|(C−1)/C| + πi(1+β)]), β = α sgn C."""
    C = Fraction(C)
    beta = alpha * (1 if C > 0 else -1)
    lq = math.log(abs(C)) - math.log(abs(C - 1))
    ell = pd.ell
    x = m / (2 * ell) * complex(lq, math.pi * (1 - alpha)) + n / (2 * ell) * complex(-lq, math.pi * (1 + beta))
    return cmath.exp(2j * math.pi * x)


def s_star_hyp_hyp(
    pd: PellData, m: int, n: int, C: Fraction, alpha: int, reps: CosetTable
) -> KloostermanValue:
    """The renormalised sum S*_{ηη}(m, n; C, α) with β = α sgn C."""
    C = Fraction(C)
    beta = alpha * (1 if C > 0 else -1)
    base = s_hyp_hyp(pd, m, n, C, alpha, beta, reps)
    f = star_factor_hyp_hyp(pd, m, n, C, alpha)
    fac = AdaptiveComplex(f.real, f.imag, 16.0 * UNIT_ROUNDOFF * abs(f) * (1 + abs(m) + abs(n)), 53)
    return KloostermanValue(base.value * fac, base.term_count)
