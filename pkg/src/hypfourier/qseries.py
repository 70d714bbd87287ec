"""Exact truncated Laurent series in q for a few classical modular forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


def _trim(coeffs: list[Fraction]) -> tuple[int, list[Fraction]]:
    # drop leading zeros, returning how many were removed
    i = 0
    while i < len(coeffs) and coeffs[i] == 0:
        i += 1
    return i, coeffs[i:]


def _mul_lists(a: Sequence[Fraction], b: Sequence[Fraction], length: int) -> list[Fraction]:
    out = [Fraction(0)] * length
    for i, x in enumerate(a[:length]):
        if x == 0:
            continue
        for j, y in enumerate(b[: length - i]):
            out[i + j] += x * y
    return out


@dataclass(frozen=True)
class QSeries:
    """Σ coeffs[i] q^{lead_exponent + i}, known exactly modulo q^{truncation_order}."""

    lead_exponent: int
    coeffs: tuple[Fraction, ...]
    truncation_order: int

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        need = self.truncation_order - self.lead_exponent
        if need < 0:
            raise ValueError("truncation order below the leading exponent")
        coeffs = (coeffs + (Fraction(0),) * need)[:need]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(cls, lead: int, coeffs: Iterable, order: int) -> QSeries:
        return cls(lead, tuple(Fraction(c) for c in coeffs), order)

    @classmethod
    def constant(cls, c: int | Fraction, order: int) -> QSeries:
        return cls(0, (Fraction(c),), order)

    def __getitem__(self, n: int) -> Fraction:
        """Coefficient of qⁿ."""
        if n >= self.truncation_order:
            raise IndexError(f"q^{n} is beyond the truncation order {self.truncation_order}")
        i = n - self.lead_exponent
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def items(self) -> list[tuple[int, Fraction]]:
        return [(self.lead_exponent + i, c) for i, c in enumerate(self.coeffs)]

    def valuation(self) -> int | None:
        shift, rest = _trim(list(self.coeffs))
        return None if not rest else self.lead_exponent + shift

    def truncate(self, order: int) -> QSeries:
        order = min(order, self.truncation_order)
        return QSeries(self.lead_exponent, self.coeffs[: max(0, order - self.lead_exponent)], order)

    def __add__(self, other: object) -> QSeries:
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.truncation_order)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.truncation_order, other.truncation_order)
        lead = min(self.lead_exponent, other.lead_exponent)
        return QSeries(lead, tuple(self[n] + other[n] for n in range(lead, order)), order)

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries(self.lead_exponent, tuple(-c for c in self.coeffs), self.truncation_order)

    def __sub__(self, other: object) -> QSeries:
        if isinstance(other, (int, Fraction, QSeries)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> QSeries:
        return (-self) + other

    def __mul__(self, other: object) -> QSeries:
        if isinstance(other, (int, Fraction)):
            return QSeries(self.lead_exponent, tuple(c * other for c in self.coeffs), self.truncation_order)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._normalised(), other._normalised()
        lead = a.lead_exponent + b.lead_exponent
        order = min(a.lead_exponent + b.truncation_order, b.lead_exponent + a.truncation_order)
        return QSeries(lead, tuple(_mul_lists(a.coeffs, b.coeffs, order - lead)), order)

    __rmul__ = __mul__

    def _normalised(self) -> QSeries:
        shift, rest = _trim(list(self.coeffs))
        if not rest:
            return QSeries(self.truncation_order, (), self.truncation_order)
        return QSeries(self.lead_exponent + shift, tuple(rest), self.truncation_order)

    def inverse(self) -> QSeries:
        """1/f by Newton iteration g ← g(2 − fg), doubling the known length."""
        f = self._normalised()
        if not f.coeffs:
            raise ZeroDivisionError("series is zero to its truncation order")
        length = f.truncation_order - f.lead_exponent
        a = list(f.coeffs)
        g = [1 / a[0]]
        known = 1
        while known < length:
            known = min(2 * known, length)
            fg = _mul_lists(a, g, known)
            corr = [-x for x in fg]
            corr[0] += 2
            g = _mul_lists(g, corr, known)
        lead = -f.lead_exponent
        return QSeries(lead, tuple(g), lead + length)

    def __truediv__(self, other: object) -> QSeries:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, p: int) -> QSeries:
        if p < 0:
            return self.inverse() ** (-p)
        if p == 0:
            return QSeries.constant(1, self.truncation_order - self._normalised().lead_exponent)
        out: QSeries | None = None
        base = self
        while p:
            if p & 1:
                out = base if out is None else out * base
            p >>= 1
            if p:
                base = base * base
        return out

    def to_json(self) -> dict[str, object]:
        return {
            "lead_exponent": self.lead_exponent,
            "truncation_order": self.truncation_order,
            "coefficients": [[n, str(c)] for n, c in self.items()],
        }


# --------------------------------------------------------------------------
# arithmetic helpers


@lru_cache(maxsize=64)
def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = −1/2 (Akiyama–Tanigawa, then the sign convention fixed)."""
    if k < 0:
        raise ValueError("index must be non-negative")
    a = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return -a[0] if k == 1 else a[0]


def sigma(n: int, power: int) -> int:
    """Divisor power sum σ_power(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    total, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            total += d**power
            if d * d != n:
                total += (n // d) ** power
        d += 1
    return total


# --------------------------------------------------------------------------
# forms


def delta_series(order: int) -> QSeries:
    """Δ = q∏(1 − qⁿ)²⁴ with coefficients τ(1), …, τ(order)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    length = order  # coefficients of q^0 … q^{order-1} in ∏(1 − qⁿ)²⁴
    prod = [0] * length
    prod[0] = 1
    for n in range(1, length):
        for _ in range(24):
            for i in range(length - 1, n - 1, -1):
                prod[i] -= prod[i - n]
    return QSeries(1, tuple(Fraction(c) for c in prod), order + 1)


def eisenstein_series(k: int, order: int) -> QSeries:
    """E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ, normalised to constant term 1."""
    if k < 4 or k % 2:
        raise ValueError(f"weight must be even and at least 4, got {k}")
    if order < 0:
        raise ValueError("order must be non-negative")
    scale = -2 * k / bernoulli(k)
    coeffs = [Fraction(1)] + [scale * sigma(n, k - 1) for n in range(1, order + 1)]
    return QSeries(0, tuple(coeffs), order + 1)


def j_invariant(order: int) -> QSeries:
    """j = E₄³/Δ = q⁻¹ + 744 + 196884q + …, through q^order."""
    if order < -1:
        raise ValueError("order must be at least -1")
    e4 = eisenstein_series(4, order + 1)
    return ((e4**3) / delta_series(order + 2)).truncate(order + 1)


def rankin_basis(order: int) -> QSeries:
    """(j + 264)·E₆², the weight-12 form q⁻¹ + O(q) with vanishing constant term."""
    if order < 1:
        raise ValueError("order must be at least 1")
    e6 = eisenstein_series(6, order + 1)
    return ((j_invariant(order) + 264) * (e6 * e6)).truncate(order + 1)
