"""Pell equations x² − Dy² = ±1 via the continued fraction of √D."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quadnum import QuadNum, is_square


def _check_d(D: int) -> None:
    if not isinstance(D, int) or isinstance(D, bool):
        raise TypeError(f"D must be an integer, got {type(D).__name__}")
    if D < 2:
        raise ValueError(f"D must be at least 2, got {D}")
    if is_square(D):
        raise ValueError(f"D={D} is a perfect square")


def sqrt_continued_fraction(D: int) -> tuple[int, list[int]]:
    """(a_0, period) of the continued fraction of √D.

    Uses the (P, Q) recurrence P' = aQ − P, Q' = (D − P'²)/Q; the period
    ends at the first repeated state, which for √D is always (a_0, 1).
    """
    _check_d(D)
    a0 = math.isqrt(D)
    P, Q, a = 0, 1, a0
    period: list[int] = []
    seen = set()
    while True:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        if (P, Q) in seen:
            raise AssertionError("continued fraction state repeated before closing the period")
        seen.add((P, Q))
        period.append(a)
        if Q == 1:
            return a0, period


def _convergent(a0: int, terms: list[int]) -> tuple[int, int]:
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    for a in terms:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


@dataclass(frozen=True)
class PellData:
    """Fundamental Pell data for η = (−√D, √D).

    ``a0 + c0√D`` is the smallest unit above 1 of norm +1.  The reduced
    fractions u±/v± = (a0 ± 1)/c0 give D± = u±² − Dv±².  ``neg_fund`` is the
    minimal solution of x² − Dy² = −1 when one exists.
    """

    D: int
    a0: int
    c0: int
    u_plus: int
    v_plus: int
    u_minus: int
    v_minus: int
    D_plus: int
    D_minus: int
    neg_fund: tuple[int, int] | None
    period: int

    @property
    def epsilon(self) -> QuadNum:
        return QuadNum(Fraction(self.a0), Fraction(self.c0), self.D)

    @property
    def epsilon_float(self) -> float:
        return self.a0 + self.c0 * math.sqrt(self.D)

    @property
    def log_epsilon(self) -> float:
        return self.epsilon.log_abs()

    @property
    def ell(self) -> float:
        """Hyperbolic length ℓ_η = 2 log ε_D."""
        return 2.0 * self.log_epsilon

    @property
    def generator(self) -> tuple[int, int, int, int]:
        """The stabiliser generator (a0, Dc0; c0, a0) as (e, f, g, h)."""
        return (self.a0, self.D * self.c0, self.c0, self.a0)

    def to_json(self) -> dict[str, object]:
        # big integers as decimal strings
        return {
            "D": str(self.D),
            "a0": str(self.a0),
            "c0": str(self.c0),
            "epsilon": str(self.epsilon),
            "ell": self.ell,
            "u_plus": str(self.u_plus),
            "v_plus": str(self.v_plus),
            "u_minus": str(self.u_minus),
            "v_minus": str(self.v_minus),
            "D_plus": str(self.D_plus),
            "D_minus": str(self.D_minus),
            "neg_fund": None if self.neg_fund is None else [str(v) for v in self.neg_fund],
            "period": self.period,
        }


@lru_cache(maxsize=256)
def solve_pell(D: int) -> PellData:
    a_first, period = sqrt_continued_fraction(D)
    r = len(period)
    neg: tuple[int, int] | None = None
    if r % 2:
        x0, y0 = _convergent(a_first, period[:-1])
        assert x0 * x0 - D * y0 * y0 == -1
        neg = (x0, y0)
        a0, c0 = x0 * x0 + D * y0 * y0, 2 * x0 * y0
    else:
        a0, c0 = _convergent(a_first, period[:-1])
    assert a0 * a0 - D * c0 * c0 == 1
    up = Fraction(a0 + 1, c0)
    um = Fraction(a0 - 1, c0)
    u_plus, v_plus = up.numerator, up.denominator
    u_minus, v_minus = um.numerator, um.denominator
    return PellData(
        D=D,
        a0=a0,
        c0=c0,
        u_plus=u_plus,
        v_plus=v_plus,
        u_minus=u_minus,
        v_minus=v_minus,
        D_plus=u_plus * u_plus - D * v_plus * v_plus,
        D_minus=u_minus * u_minus - D * v_minus * v_minus,
        neg_fund=neg,
        period=r,
    )


def solve_negative_pell(D: int) -> tuple[int, int] | None:
    """Minimal positive solution of x² − Dy² = −1, or None when there is none."""
    return solve_pell(D).neg_fund


def psi_d(pd: PellData, m: int, n: int, N: int) -> int:
    """Boundary correction (−1)^{m + c0 n} when N is D+ or D−, else 0."""
    if N == 0:
        raise ValueError("N must be non-zero")
    if N not in (pd.D_plus, pd.D_minus):
        return 0
    return -1 if (m + pd.c0 * n) % 2 else 1
