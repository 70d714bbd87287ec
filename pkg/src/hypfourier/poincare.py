"""Fourier coefficients of holomorphic Poincaré series for SL₂(ℤ).

Four expansions are supported, named ``<series>_<expansion>``:

* ``par_par``: c_∞(n; P_{∞,m}), classical Kloosterman sums and ₀F₁;
* ``hyp_par``: c_∞(n; P_{η,m}), hyperbolic/parabolic sums and ₁F₁;
* ``par_hyp``: c_η(n; P_{∞,m}), parabolic/hyperbolic sums, ₁F₁ and B;
* ``hyp_hyp``: c_η(n; P_{η,m}), hyperbolic/hyperbolic sums and ₂F₁.

Here η = (−√D, √D) with the scaling matrix that sends (0, ∞) to η through
the Pell generator, and σ_∞ is the identity.  Every sum is truncated at a
window on |C| (or |C − ½| for hyp_hyp) and accumulated in ascending order
of that distance with positive C first on ties.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .hypnum import (
    UNIT_ROUNDOFF,
    AdaptiveComplex,
    HypParams,
    _parabolic_prefactor,
    _rounded,
    complex_beta,
    hyp0f1,
    hyp1f1,
    hyp2f1,
    i_hyp_hyp,
)
from .kloosterman import (
    s_hyp_hyp,
    s_hyp_par,
    s_par_par,
    s_star_hyp_hyp,
    s_star_par_hyp,
)
from .lattice import CosetTable, conjugate_to_eta_frame, enumerate_hd
from .pell import PellData, solve_pell

EXPANSIONS = ("par_par", "hyp_par", "par_hyp", "hyp_hyp")

# tail exponents p in the model tail(W) ≈ K·W^p
_TAIL_EXPONENT: dict[str, Callable[[int], float]] = {
    "par_par": lambda k: 2.0 - k,
    "hyp_par": lambda k: 2.0 - k / 2,
    "par_hyp": lambda k: 2.0 - k / 2,
    "hyp_hyp": lambda k: 2.5 - k / 2,
}

DEFAULT_WINDOW = {"hyp_par": 200, "par_hyp": 200, "hyp_hyp": 20}


def normalize_expansion(name: str) -> str:
    key = name.replace("-", "_").lower()
    if key not in EXPANSIONS:
        raise ValueError(f"unknown expansion {name!r}; expected one of {', '.join(EXPANSIONS)}")
    return key


def _check_weight(k: int) -> None:
    if not isinstance(k, int) or k < 4 or k % 2:
        raise ValueError(f"weight must be an even integer at least 4, got {k}")


def workers_from_env() -> int:
    """Worker processes for embarrassingly parallel term ranges (HYPFOURIER_WORKERS)."""
    raw = os.environ.get("HYPFOURIER_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"HYPFOURIER_WORKERS must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class CoeffRequest:
    expansion: str
    k: int
    m: int
    n: int
    D: int | None = None
    window: float | None = None
    tol: float = 1e-12

    def __post_init__(self) -> None:
        object.__setattr__(self, "expansion", normalize_expansion(self.expansion))
        _check_weight(self.k)
        hyperbolic = self.expansion != "par_par"
        if hyperbolic and self.D is None:
            raise ValueError(f"{self.expansion} needs D")
        if not hyperbolic and self.D is not None:
            raise ValueError("par_par takes no D")
        if self.window is not None and not self.window > 0:
            raise ValueError("window must be positive")


@dataclass(frozen=True)
class Term:
    """One summand: ``label`` names its C (and α for hyp_hyp cells)."""

    label: str
    distance: float
    value: complex


@dataclass(frozen=True)
class CoeffResult:
    value: AdaptiveComplex
    tail_bound: float
    terms: tuple[Term, ...]
    window: float
    diagonal: complex = 0j
    request: CoeffRequest | None = field(default=None, compare=False)

    def to_json(self, digits: int | None = None) -> dict[str, object]:
        def num(x: float) -> float:
            return x if digits is None else float(f"{x:.{digits}g}")

        return {
            "re": num(self.value.re),
            "im": num(self.value.im),
            "abs_err": num(self.value.abs_err),
            "tail_bound": num(self.tail_bound),
            "window": self.window,
            "diagonal": [num(self.diagonal.real), num(self.diagonal.imag)],
            "terms": len(self.terms),
        }


# --------------------------------------------------------------------------
# tail model


def tail_estimate(
    expansion: str, k: int, window: float, terms: Sequence[Term] | None = None
) -> float:
    """Power-law estimate of the truncated remainder beyond ``window``.

    Terms are modelled as K·x^{p−1} per unit of distance x, p being 2 − k
    (par_par), 2 − k/2 (mixed) or 5/2 − k/2 (hyp_hyp).  K is fitted to the
    terms in the last decade (window/10, window]; without terms K = 1.
    The result K·W^p/|p| is advisory, not a proof.
    """
    expansion = normalize_expansion(expansion)
    _check_weight(k)
    if window < 1:
        raise ValueError("window must be at least 1")
    p = _TAIL_EXPONENT[expansion](k)
    if p >= 0:
        return math.inf
    K = 1.0
    if terms:
        lo = window / 10.0
        mass = math.fsum(abs(t.value) for t in terms if lo < t.distance <= window)
        model = (lo**p - window**p) / -p
        if model > 0:
            K = mass / model
    return K * window**p / -p


def _sort_key(distance: float, positive: bool) -> tuple[float, int]:
    return (distance, 0 if positive else 1)


def _reduce(terms: list[Term], extra_err: float, extra: complex = 0j) -> AdaptiveComplex:
    re = math.fsum([t.value.real for t in terms] + [extra.real])
    im = math.fsum([t.value.imag for t in terms] + [extra.imag])
    err = extra_err + len(terms) * UNIT_ROUNDOFF * max((abs(t.value) for t in terms), default=0.0)
    return AdaptiveComplex(re, im, err, 53)


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) < 2 * workers:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# --------------------------------------------------------------------------
# parabolic/parabolic


def default_window_par_par(k: int, n: int, tol: float) -> int:
    """Smallest c_max whose crude tail Σ_{c>W} P·c^{1−k} is below ``tol``, within [64, 5000]."""
    if n <= 0:
        return 1
    pref = abs(_parabolic_prefactor(k, n).re)
    w = (pref / (tol * (k - 2))) ** (1.0 / (k - 2))
    return int(min(5000, max(64, math.ceil(w))))


def _par_par_term(args: tuple[int, int, int, int]) -> tuple[int, complex, float]:
    k, m, n, c = args
    S = s_par_par(m, n, c)
    if S.value.re == 0.0 and S.value.im == 0.0:
        return c, 0j, 0.0
    val = hyp0f1(k, -4.0 * math.pi**2 * m * n / (c * c)) * S.value / float(c) ** k
    return c, val.value, val.abs_err


def coeff_par_par(
    k: int, m: int, n: int, *, window: int | None = None, tol: float = 1e-12, workers: int | None = None
) -> CoeffResult:
    """c_∞(n; P_{∞,m}) = δ_{mn} + (2πi)^k n^{k−1}/Γ(k) Σ_c ₀F₁(; k; −4π²mn/c²) S(m,n;c)/c^k."""
    _check_weight(k)
    delta = 1.0 if m == n else 0.0
    if n <= 0:
        return CoeffResult(AdaptiveComplex.exact(delta), 0.0, (), float(window or 0), complex(delta))
    cmax = int(window) if window is not None else default_window_par_par(k, n, tol)
    workers = workers_from_env() if workers is None else workers
    pref = _parabolic_prefactor(k, n)
    raw = _pmap(_par_par_term, [(k, m, n, c) for c in range(1, cmax + 1)], workers)
    terms, err = [], 0.0
    for c, v, e in raw:
        terms.append(Term(str(c), float(c), pref.value * v))
        err += abs(pref.value) * e + abs(v) * pref.abs_err
    value = _reduce(terms, err, complex(delta))
    tail = tail_estimate("par_par", k, cmax, terms) if cmax >= 1 else math.inf
    return CoeffResult(value, tail, tuple(terms), float(cmax), complex(delta))


# --------------------------------------------------------------------------
# hyperbolic/parabolic


def _hyp_par_nonzero_n(pd: PellData, m: int, n: int, nmax: int) -> list[tuple[int, float]]:
    out = []
    for a in range(1, nmax + 1):
        for N in (a, -a):
            S = s_hyp_par(pd, m, n, N)
            if S.value.re != 0.0:
                out.append((N, S.value.re))
    return out


def coeff_hyp_par(
    k: int, D: int, m: int, n: int, *, window: int | None = None, tol: float = 1e-12
) -> CoeffResult:
    """c_∞(n; P_{η,m}): the parabolic coefficient of the hyperbolic Poincaré series.

    Sum over N ≠ 0 of (2πi)^k n^{k−1}/Γ(k) · (−2√D/N)^{k/2}
    · exp(−π²m(sgn N + 1)/ℓ + 2πin√D/N) · ₁F₁(k/2 + 2πim/ℓ; k; −4πin√D/N)
    · S_{η∞}(m, n; −N/(2√D)).  Zero for n ≤ 0.
    """
    _check_weight(k)
    nmax = int(window) if window is not None else DEFAULT_WINDOW["hyp_par"]
    if n <= 0:
        return CoeffResult(AdaptiveComplex.exact(0.0), 0.0, (), float(nmax))
    pd = solve_pell(D)
    ell, rd = pd.ell, math.sqrt(D)
    a = k / 2 + 2j * math.pi * m / ell
    pref = _parabolic_prefactor(k, n)
    h = k // 2
    terms: list[tuple[tuple[float, int], Term]] = []
    err = 0.0
    for N, S in _hyp_par_nonzero_n(pd, m, n, nmax):
        sgn = 1 if N > 0 else -1
        power = (-2.0 * rd / N) ** h
        phase = complex(
            math.exp(-(math.pi**2) * m * (sgn + 1) / ell)
            * complex(math.cos(2 * math.pi * n * rd / N), math.sin(2 * math.pi * n * rd / N))
        )
        kern = hyp1f1(a, k, -4j * math.pi * n * rd / N)
        t = pref * _rounded(power * phase, 16 + k) * kern * S
        C = -N / (2.0 * rd)
        terms.append((_sort_key(abs(C), C > 0), Term(f"-{N}/(2*sqrt({D}))", abs(C), t.value)))
        err += t.abs_err
    terms.sort(key=lambda x: x[0])
    ordered = [t for _, t in terms]
    value = _reduce(ordered, err)
    # the tail is modelled on the N scale, where the terms live on integers
    scaled = [Term(t.label, t.distance * 2.0 * rd, t.value) for t in ordered]
    tail = tail_estimate("hyp_par", k, nmax, scaled)
    return CoeffResult(value, tail, tuple(ordered), float(nmax))


# --------------------------------------------------------------------------
# parabolic/hyperbolic


def coeff_par_hyp(
    k: int, D: int, m: int, n: int, *, window: int | None = None, tol: float = 1e-12
) -> CoeffResult:
    """c_η(n; P_{∞,m}): the hyperbolic coefficient of the parabolic Poincaré series.

    (e^{2π²n/ℓ}/ℓ) B(k/2 + 2πin/ℓ, k/2 − 2πin/ℓ) Σ_C ₁F₁(k/2 − 2πin/ℓ; k; 2πim/C) S*_{∞η}(m,n;C)/C^{k/2}
    over C = N/(2√D), 0 < |N| ≤ window.
    """
    _check_weight(k)
    nmax = int(window) if window is not None else DEFAULT_WINDOW["par_hyp"]
    pd = solve_pell(D)
    ell, rd = pd.ell, math.sqrt(D)
    nu = 2j * math.pi * n / ell
    front = _rounded(complex(math.exp(2 * math.pi**2 * n / ell) / ell), 8) * complex_beta(k / 2 + nu, k / 2 - nu)
    h = k // 2
    terms: list[tuple[tuple[float, int], Term]] = []
    err = 0.0
    for a in range(1, nmax + 1):
        for N in (a, -a):
            S = s_star_par_hyp(pd, m, n, N)
            if S.term_count == 0 and S.value.re == 0.0 and S.value.im == 0.0:
                continue
            C = N / (2.0 * rd)
            kern = hyp1f1(k / 2 - nu, k, 2j * math.pi * m / C)
            t = front * kern * S.value * (1.0 / C**h)
            terms.append((_sort_key(abs(C), C > 0), Term(f"{N}/(2*sqrt({D}))", abs(C), t.value)))
            err += t.abs_err
    terms.sort(key=lambda x: x[0])
    ordered = [t for _, t in terms]
    value = _reduce(ordered, err)
    scaled = [Term(t.label, t.distance * 2.0 * rd, t.value) for t in ordered]
    tail = tail_estimate("par_hyp", k, nmax, scaled)
    return CoeffResult(value, tail, tuple(ordered), float(nmax))


# --------------------------------------------------------------------------
# hyperbolic/hyperbolic


def reversal_scale(pd: PellData) -> float | None:
    """t with σ_η⁻¹τσ_η = (0 t; −1/t 0) for the reverser built from x² − Dy² = −1."""
    if pd.neg_fund is None:
        return None
    x0, y0 = pd.neg_fund
    rep = conjugate_to_eta_frame((x0, -pd.D * y0, y0, -x0), pd.D)
    assert rep.a.is_zero() and rep.d.is_zero()
    return float(rep.b)


def diagonal_terms(k: int, pd: PellData, m: int, n: int) -> complex:
    """Identity and reversal cosets, which the Kloosterman sums leave out."""
    out = 0j
    if n == m:
        out += 1.0
    t = reversal_scale(pd)
    if n == -m and t is not None:
        log_t2 = 2.0 * math.log(abs(t))
        sign = -1.0 if (k // 2) % 2 else 1.0
        ang = -2.0 * math.pi * n * log_t2 / pd.ell
        out += sign * math.exp(2 * math.pi**2 * n / pd.ell) * complex(math.cos(ang), math.sin(ang))
    return out


def _hyp_hyp_cell(args: tuple) -> tuple[Fraction, list[tuple[int, complex, float]]]:
    """All terms at one C: a ₂F₁ per C off (0, 1), quadrature per α on it."""
    k, D, m, n, C, window, cells, tol = args
    pd = solve_pell(D)
    ell = pd.ell
    p = HypParams(k, ell, m, n)
    out = []
    Cf = float(C)
    if 0 < C < 1:
        for alpha, S in cells:
            beta = alpha * 1
            kern = i_hyp_hyp(p, p, Cf, alpha, beta, method="quadrature", tol=tol)
            scale = abs(Cf * (Cf - 1.0)) ** (-k / 4)
            t = kern * S * scale
            out.append((alpha, t.value, t.abs_err))
        return C, out
    nu_m, nu_n = p.nu_m, p.nu_n
    front = _rounded(complex(math.exp(2 * math.pi**2 * n / ell) / ell), 8) * complex_beta(k / 2 - nu_n, k / 2 + nu_n)
    kern = hyp2f1(k / 2 - nu_m, k / 2 + nu_n, k, 1.0 / Cf)
    for alpha, S in cells:
        t = front * kern * S * (1.0 / Cf ** (k // 2))
        out.append((alpha, t.value, t.abs_err))
    return C, out


def hyp_hyp_sums(
    k: int,
    pd: PellData,
    m: int,
    n: int,
    reps: CosetTable,
    *,
    tol: float = 1e-12,
    workers: int = 1,
) -> tuple[list[Term], float]:
    """The non-diagonal terms of c_η(n; P_{η,m}), one per (C, α) cell, in summation order."""
    jobs = []
    for C in reps:
        cells = []
        for alpha in (1, -1):
            beta = alpha * (1 if C > 0 else -1)
            if not reps.cell(C, alpha, beta):
                continue
            if 0 < C < 1:
                S = s_hyp_hyp(pd, m, n, C, alpha, beta, reps).value
            else:
                S = s_star_hyp_hyp(pd, m, n, C, alpha, reps).value
            cells.append((alpha, S))
        if cells:
            jobs.append((k, pd.D, m, n, C, reps.window, cells, tol))
    results = _pmap(_hyp_hyp_cell, jobs, workers)
    keyed, err = [], 0.0
    half = Fraction(1, 2)
    for C, parts in results:
        dist = abs(C - half)
        for alpha, v, e in parts:
            sign = "+" if alpha > 0 else "-"
            keyed.append(((float(dist), 0 if C > half else 1, -alpha), Term(f"{C},{sign}", float(dist), v)))
            err += e
    keyed.sort(key=lambda x: x[0])
    return [t for _, t in keyed], err


def coeff_hyp_hyp(
    k: int,
    D: int,
    m: int,
    n: int,
    *,
    window: float | None = None,
    tol: float = 1e-12,
    reps: CosetTable | None = None,
    workers: int | None = None,
) -> CoeffResult:
    """c_η(n; P_{η,m}) with η′ = η, summed over |C − ½| ≤ window, plus diagonal terms.

    Off (0, 1) each C contributes (e^{2π²n/ℓ}/ℓ) B(k/2 − 2πin/ℓ, k/2 + 2πin/ℓ)
    ₂F₁(k/2 − 2πim/ℓ, k/2 + 2πin/ℓ; k; 1/C) S*_{ηη}(m,n;C,α)/C^{k/2}.  On (0, 1)
    the ₂F₁ argument exceeds 1, so the integral I_{ηη}(m,n;C,α,β) is computed
    by contour quadrature and multiplied by S_{ηη}(m,n;C,α,β)/|C(C−1)|^{k/4}.
    """
    _check_weight(k)
    X = Fraction(window if window is not None else DEFAULT_WINDOW["hyp_hyp"])
    pd = solve_pell(D)
    if reps is None:
        reps = enumerate_hd(pd, X)
    elif reps.window < X:
        raise ValueError(f"coset table window {reps.window} is smaller than the requested {X}")
    workers = workers_from_env() if workers is None else workers
    terms, err = hyp_hyp_sums(k, pd, m, n, reps, tol=tol, workers=workers)
    terms = [t for t in terms if t.distance <= X]
    diag = diagonal_terms(k, pd, m, n)
    value = _reduce(terms, err + 8 * UNIT_ROUNDOFF * abs(diag), diag)
    tail = tail_estimate("hyp_hyp", k, max(1.0, float(X)), terms)
    return CoeffResult(value, tail, tuple(terms), float(X), diag)


def phi_negative_pell(D: int, window: float = 2, *, tol: float = 1e-12, workers: int | None = None) -> float:
    """(Σ₁ + Σ₂ + Σ₃)/(1260 log ε_D) at k = 10, m = n = 0."""
    res = coeff_hyp_hyp(10, D, 0, 0, window=window, tol=tol, workers=workers)
    return (res.value.value - res.diagonal).real


# --------------------------------------------------------------------------
# dispatcher


def compute_coefficient(req: CoeffRequest) -> CoeffResult:
    if req.expansion == "par_par":
        res = coeff_par_par(req.k, req.m, req.n, window=None if req.window is None else int(req.window), tol=req.tol)
    elif req.expansion == "hyp_par":
        res = coeff_hyp_par(req.k, req.D, req.m, req.n, window=None if req.window is None else int(req.window), tol=req.tol)
    elif req.expansion == "par_hyp":
        res = coeff_par_hyp(req.k, req.D, req.m, req.n, window=None if req.window is None else int(req.window), tol=req.tol)
    else:
        res = coeff_hyp_hyp(req.k, req.D, req.m, req.n, window=req.window, tol=req.tol)
    return CoeffResult(res.value, res.tail_bound, res.terms, res.window, res.diagonal, req)
