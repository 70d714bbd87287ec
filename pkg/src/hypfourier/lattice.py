"""Exact enumeration of the lattice index sets behind the Kloosterman sums.

Two families are produced:

* coprime points (e, g) on the hyperbola e² − Dg² = N inside the ellipse
  e² + Dg² ≤ a0|N|, which index the hyperbolic/parabolic sums;
* double-coset representatives γ ∈ Γ_η\\SL₂(ℤ)/Γ_η for η = (−√D, √D),
  grouped by C = ad where (a b; c d) = σ_η⁻¹γσ_η.

Everything is decided in exact Q(√D) arithmetic.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .pell import PellData, solve_pell
from .quadnum import QuadNum

Matrix = tuple[int, int, int, int]  # (e, f, g, h) for the matrix (e f; g h)


@dataclass(frozen=True, order=True)
class LatticePoint:
    e: int
    g: int


@dataclass(frozen=True)
class CosetRep:
    """An integer matrix together with its image in the η-frame."""

    source: Matrix
    frame: tuple[QuadNum, QuadNum, QuadNum, QuadNum]
    C: QuadNum
    alpha: int
    beta: int

    @property
    def a(self) -> QuadNum:
        return self.frame[0]

    @property
    def b(self) -> QuadNum:
        return self.frame[1]

    @property
    def c(self) -> QuadNum:
        return self.frame[2]

    @property
    def d(self) -> QuadNum:
        return self.frame[3]

    @property
    def C_value(self) -> Fraction:
        """C as an exact rational (always rational for integer sources)."""
        if not self.C.is_rational():
            raise ValueError("C is irrational; the source is not an integer matrix")
        return self.C.x

    def log_ab_over_cd(self) -> float:
        a, b, c, d = self.frame
        return a.log_abs() + b.log_abs() - c.log_abs() - d.log_abs()

    def log_ac_over_bd(self) -> float:
        a, b, c, d = self.frame
        return a.log_abs() + c.log_abs() - b.log_abs() - d.log_abs()


def _as_matrix(M: Sequence) -> Matrix:
    if len(M) == 2:
        (e, f), (g, h) = M
    else:
        e, f, g, h = M
    return (int(e), int(f), int(g), int(h))


def _sign(q: QuadNum) -> int:
    return q.sign()


def conjugate_to_eta_frame(M: Sequence, D: int) -> CosetRep:
    """σ_η⁻¹ M σ_η for η = (−√D, √D), as exact elements of Q(√D).

    With M = (e f; g h) the entries are a = ½(e + h + (g + f/D)√D),
    b = ½(h − e + (f/D − g)√D), c = b̄ and d = ā.
    """
    e, f, g, h = _as_matrix(M)
    if e * h - f * g != 1:
        raise ValueError(f"matrix {(e, f, g, h)} has determinant {e * h - f * g}, expected 1")
    half = Fraction(1, 2)
    a = QuadNum(half * (e + h), half * (g + Fraction(f, D)), D)
    b = QuadNum(half * (h - e), half * (Fraction(f, D) - g), D)
    c, d = b.conjugate(), a.conjugate()
    C = a * d
    return CosetRep((e, f, g, h), (a, b, c, d), C, _sign(a) * _sign(c), _sign(c) * _sign(d))


# --------------------------------------------------------------------------
# coprime points on the hyperbola


def _pell(pd: PellData | int) -> PellData:
    return solve_pell(pd) if isinstance(pd, int) else pd


def enumerate_rstar(pd: PellData | int, N: int) -> set[LatticePoint]:
    """All coprime (e, g) with e² − Dg² = N and e² + Dg² ≤ a0|N|; ``pd`` may be D itself."""
    pd = _pell(pd)
    if N == 0:
        raise ValueError("N must be non-zero")
    D, limit = pd.D, pd.a0 * abs(N)
    out: set[LatticePoint] = set()
    # e² + Dg² = N + 2Dg² ≤ a0|N|
    g = 0
    while N + 2 * D * g * g <= limit:
        sq = N + D * g * g
        if sq >= 0:
            e = math.isqrt(sq)
            if e * e == sq and math.gcd(e, g) == 1:
                for se in (1, -1):
                    for sg in (1, -1):
                        out.add(LatticePoint(se * e, sg * g))
        g += 1
    return out


# --------------------------------------------------------------------------
# hyperbolic/hyperbolic double cosets


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _gen_power(pd: PellData, p: int) -> Matrix:
    a0, c0, D = pd.a0, pd.c0, pd.D
    base: Matrix = (a0, D * c0, c0, a0) if p >= 0 else (a0, -D * c0, -c0, a0)
    out: Matrix = (1, 0, 0, 1)
    p = abs(p)
    while p:
        if p & 1:
            out = _mat_mul(out, base)
        base = _mat_mul(base, base)
        p >>= 1
    return out


def _canonical(M: Matrix) -> Matrix:
    e, f, g, h = M
    for v in (e, g, f, h):
        if v:
            return M if v > 0 else (-e, -f, -g, -h)
    raise ValueError("zero matrix")


def _window_offsets(pd: PellData, rep: CosetRep) -> tuple[int, int]:
    """Exact position of a frame relative to the half-open fundamental diamond.

    Returns (s, t) where s compares |ab/cd| and t compares |bd/ac| with the
    interval [ε⁻², ε²): −1 below, 0 inside, +1 at or above the top.
    """
    a, b, c, d = rep.frame
    eps2 = pd.epsilon * pd.epsilon
    p, q = abs(a * b), abs(c * d)
    s = -1 if eps2 * p < q else (1 if p >= eps2 * q else 0)
    u, v = abs(b * d), abs(a * c)
    t = -1 if eps2 * u < v else (1 if u >= eps2 * v else 0)
    return s, t


def in_fundamental_diamond(pd: PellData, rep: CosetRep) -> bool:
    """abcd ≠ 0 and ε⁻¹ ≤ |ab/cd|^½ < ε, ε⁻¹ ≤ |bd/ac|^½ < ε."""
    if any(x.is_zero() for x in rep.frame):
        return False
    return _window_offsets(pd, rep) == (0, 0)


def normalize_coset(pd: PellData, M: Matrix) -> Matrix:
    """The representative of Γ_η M Γ_η inside the fundamental diamond, up to ±.

    Left multiplication by the generator scales |ab/cd| by ε⁴; right
    multiplication scales |bd/ac| by ε⁻⁴.  A floating estimate is refined
    by exact comparisons.
    """
    rep = conjugate_to_eta_frame(M, pd.D)
    if any(x.is_zero() for x in rep.frame):
        raise ValueError("coset has abcd = 0")
    four_log = 4.0 * pd.log_epsilon
    j = -math.floor((rep.log_ab_over_cd() + 2.0 * pd.log_epsilon) / four_log)
    l = math.floor((rep.log_ac_over_bd() * -1.0 + 2.0 * pd.log_epsilon) / four_log)
    for _ in range(64):
        cand = _mat_mul(_mat_mul(_gen_power(pd, j), M), _gen_power(pd, l))
        s, t = _window_offsets(pd, conjugate_to_eta_frame(cand, pd.D))
        if (s, t) == (0, 0):
            return _canonical(cand)
        j -= s
        l += t
    raise AssertionError(f"normalisation of {M} did not settle")


class CosetTable(Mapping):
    """Double-coset representatives grouped by exact C, ascending."""

    def __init__(self, pd: PellData, window: Fraction, groups: dict[Fraction, tuple[CosetRep, ...]]):
        self.pell = pd
        self.window = window
        self._groups = dict(sorted(groups.items()))

    def __getitem__(self, C: Fraction) -> tuple[CosetRep, ...]:
        return self._groups[C]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._groups)

    def __len__(self) -> int:
        return len(self._groups)

    def covers(self, C: Fraction) -> bool:
        return abs(Fraction(C) - Fraction(1, 2)) <= self.window

    def cell(self, C: Fraction, alpha: int, beta: int) -> tuple[CosetRep, ...]:
        if not self.covers(C):
            raise WindowError(f"C={C} lies outside the enumerated window |C − 1/2| ≤ {self.window}")
        return tuple(r for r in self._groups.get(Fraction(C), ()) if r.alpha == alpha and r.beta == beta)

    def cell_counts(self) -> dict[tuple[Fraction, int, int], int]:
        out: dict[tuple[Fraction, int, int], int] = {}
        for C, reps in self._groups.items():
            for r in reps:
                key = (C, r.alpha, r.beta)
                out[key] = out.get(key, 0) + 1
        return out

    def total(self) -> int:
        return sum(len(v) for v in self._groups.values())


class WindowError(KeyError):
    """A C value outside the enumerated window was requested."""


def _norm_solutions(pd: PellData, target: Fraction, bound: float) -> list[QuadNum]:
    """Elements (x + (Y/D)√D)/2 of norm ``target`` with 0 ≤ x ≤ bound."""
    D = pd.D
    M = 4 * D * target
    if M.denominator != 1:
        return []
    M = M.numerator
    out = []
    for x in range(0, int(bound) + 2):
        sq = D * x * x - M
        if sq < 0:
            continue
        Y = math.isqrt(sq)
        if Y * Y != sq:
            continue
        for y in {Y, -Y}:
            out.append(QuadNum(Fraction(x, 2), Fraction(y, 2 * D), D))
    return out


def _integral_source(a: QuadNum, b: QuadNum, D: int) -> Matrix | None:
    x1, x2 = 2 * a.x, 2 * b.x
    Y1, Y2 = 2 * D * a.y, 2 * D * b.y
    e, h = (x1 - x2) / 2, (x1 + x2) / 2
    f, g = (Y1 + Y2) / 2, (Y1 - Y2) / (2 * D)
    if any(v.denominator != 1 for v in (e, f, g, h)):
        return None
    return (int(e), int(f), int(g), int(h))


def _hd_norm_form(pd: PellData, X: Fraction) -> set[Matrix]:
    D = pd.D
    eps = pd.epsilon
    root = math.sqrt(pd.epsilon_float) + 1.0 / math.sqrt(pd.epsilon_float)
    jmax = math.floor(4 * D * X)
    found: set[Matrix] = set()
    for j in range(-jmax, jmax + 1):
        C = Fraction(2 * D + j, 4 * D)
        if C in (0, 1):
            continue
        A = _norm_solutions(pd, C, math.sqrt(abs(C)) * root)
        if not A:
            continue
        B = _norm_solutions(pd, C - 1, math.sqrt(abs(C - 1)) * root)
        for a0 in A:
            for a in (a0, -a0, eps * a0, -(eps * a0)):
                for b in B:
                    src = _integral_source(a, b, D)
                    if src is not None:
                        found.add(normalize_coset(pd, src))
    return found


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _hd_ellipsoid(pd: PellData, X: Fraction) -> set[Matrix]:
    """Scan every integer matrix with e² + Dg² + f²/D + h² inside the a priori ellipsoid."""
    D = pd.D
    eps2 = pd.epsilon * pd.epsilon
    bound = eps2 + 1 / eps2
    B = float(bound) * float(2 * X + 1) * (1 + 1e-12)
    found: set[Matrix] = set()
    gmax = math.isqrt(int(B / D)) + 1
    for g in range(-gmax, gmax + 1):
        rest = B - D * g * g
        if rest < 0:
            continue
        hmax = math.isqrt(int(rest)) + 1
        for h in range(-hmax, hmax + 1):
            if math.gcd(g, h) != 1:
                continue
            R = rest - h * h
            if R < 0:
                continue
            # e h − f g = 1 ⇒ (e, f) = (e0 + t g, f0 + t h)
            _, u, v = _ext_gcd(h, -g)
            e0, f0 = u, v
            qa = g * g + h * h / D
            qb = e0 * g + f0 * h / D
            qc = e0 * e0 + f0 * f0 / D - R
            disc = qb * qb - qa * qc
            if disc < 0:
                continue
            lo = math.floor((-qb - math.sqrt(disc)) / qa) - 1
            hi = math.ceil((-qb + math.sqrt(disc)) / qa) + 1
            for t in range(lo, hi + 1):
                e, f = e0 + t * g, f0 + t * h
                M = (e, f, g, h)
                if _canonical(M) != M:
                    continue
                rep = conjugate_to_eta_frame(M, D)
                if any(x.is_zero() for x in rep.frame):
                    continue
                if abs(rep.C_value - Fraction(1, 2)) > X:
                    continue
                if in_fundamental_diamond(pd, rep):
                    found.add(M)
    return found


def enumerate_hd(pd: PellData | int, window: float | Fraction, method: str = "norm") -> CosetTable:
    """Representatives of Γ_η\\SL₂(ℤ)/Γ_η with abcd ≠ 0 and |C − ½| ≤ window.

    ``method="norm"`` solves the norm equations N(a) = C and N(b) = C − 1
    for each admissible C and reassembles integer matrices; its cost grows
    like √ε per C.  ``method="ellipsoid"`` scans all matrices in the a
    priori bound e² + Dg² + f²/D + h² ≤ (ε² + ε⁻²)(2X + 1), which is only
    practical for small ε.
    """
    pd = _pell(pd)
    X = Fraction(window)
    if X < Fraction(1, 2):
        raise ValueError(f"window must be at least 1/2, got {window}")
    if method == "norm":
        mats = _hd_norm_form(pd, X)
    elif method == "ellipsoid":
        mats = _hd_ellipsoid(pd, X)
    else:
        raise ValueError(f"unknown method {method!r}")
    groups: dict[Fraction, list[CosetRep]] = {}
    for M in sorted(mats):
        rep = conjugate_to_eta_frame(M, pd.D)
        C = rep.C_value
        if abs(C - Fraction(1, 2)) > X:
            continue
        groups.setdefault(C, []).append(rep)
    return CosetTable(pd, X, {C: tuple(v) for C, v in groups.items()})
