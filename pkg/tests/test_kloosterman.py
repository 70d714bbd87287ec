import math
from fractions import Fraction

import pytest

from hypfourier.kloosterman import (
    s_hyp_hyp,
    s_hyp_par,
    s_par_hyp,
    s_par_par,
    s_par_par_naive,
    s_star_hyp_hyp,
    s_star_hyp_par,
    s_star_par_hyp,
    star_factor_hyp_hyp,
)
from hypfourier.lattice import enumerate_hd
from hypfourier.pell import solve_pell

from oracles import (
    hyp_par_cosets,
    s_hyp_par_definition,
    s_star_hyp_hyp_definition,
    s_star_hyp_par_definition,
)

SMALL = range(-2, 3)
NS = [N for N in range(-20, 21) if N]


# --------------------------------------------------------------------------
# classical sums


def test_par_par_matches_naive():
    for c in range(1, 51):
        for m in range(-3, 4):
            for n in range(-3, 4):
                fast = s_par_par(m, n, c)
                slow = s_par_par_naive(m, n, c)
                assert abs(fast.value.value - slow) < 1e-10
                assert fast.term_count == sum(1 for d in range(c) if math.gcd(d, c) == 1)


def test_par_par_symmetries_and_weil_bound():
    for c in range(2, 80):
        for m, n in [(1, 1), (1, 2), (3, 5), (-1, 1), (0, 4)]:
            s = s_par_par(m, n, c).real
            assert abs(s - s_par_par(n, m, c).real) < 1e-9
            assert abs(s - s_par_par(-m, -n, c).real) < 1e-9
            if math.gcd(m, c) == 1:
                assert abs(s - s_par_par(1, m * n, c).real) < 1e-9
            if m and n:
                divisors = sum(1 for d in range(1, c + 1) if c % d == 0)
                bound = divisors * math.sqrt(c) * math.sqrt(math.gcd(math.gcd(m, n), c))
                assert abs(s) <= bound + 1e-9


def test_ramanujan_sum():
    # S(0, n; c) is Ramanujan's sum; S(0, 0; c) = φ(c)
    assert s_par_par(0, 0, 12).real == pytest.approx(4)
    assert s_par_par(0, 1, 12).real == pytest.approx(0, abs=1e-12)  # μ(12) = 0
    assert s_par_par(0, 1, 7).real == pytest.approx(-1)


def test_par_par_rejects_bad_modulus():
    with pytest.raises(ValueError):
        s_par_par(1, 1, 0)


# --------------------------------------------------------------------------
# hyperbolic/parabolic against the coset definition


@pytest.mark.parametrize("D", [2, 3, 5])
def test_hyp_par_matches_coset_definition(D):
    pd = solve_pell(D)
    for N in NS:
        for m in SMALL:
            for n in SMALL:
                got = s_hyp_par(pd, m, n, N).value.value
                assert abs(got - s_hyp_par_definition(pd, m, n, N)) < 1e-10, (N, m, n)


@pytest.mark.parametrize("D", [2, 3, 5])
def test_star_hyp_par_matches_principal_log_definition(D):
    pd = solve_pell(D)
    for N in NS:
        cosets = len(hyp_par_cosets(pd, N))
        for m in SMALL:
            for n in SMALL:
                got = s_star_hyp_par(pd, m, n, N).value.value
                ref = s_star_hyp_par_definition(pd, m, n, N)
                scale = max(1.0, cosets * math.exp(2 * math.pi**2 * abs(m) / pd.ell))
                assert abs(got - ref) < 1e-10 * scale, (N, m, n)


def test_boundary_correction_example():
    # at N = D+ the two ellipse-boundary points count once, not twice
    pd = solve_pell(2)
    assert s_hyp_par(pd, 0, 0, 2).value.value == pytest.approx(1)
    assert s_hyp_par(pd, 0, 0, -1).value.value == pytest.approx(1)


def test_par_hyp_is_transposed_conjugate():
    pd = solve_pell(3)
    for N in (1, -2, 6, 11, -13):
        for m, n in [(1, 0), (0, 2), (-1, 1), (2, -1)]:
            assert s_par_hyp(pd, m, n, N).value.value == s_hyp_par(pd, n, m, N).value.value.conjugate()
            assert s_star_par_hyp(pd, m, n, N).value.value == s_star_hyp_par(pd, n, m, N).value.value.conjugate()


def test_hyp_par_is_real_and_bounded():
    pd = solve_pell(5)
    for N in NS:
        for m in SMALL:
            for n in SMALL:
                s = s_hyp_par(pd, m, n, N)
                assert abs(s.value.im) < 1e-12
                assert abs(s.value.re) <= s.term_count + 1 + 1e-12


def test_hyp_par_rejects_zero_modulus():
    with pytest.raises(ValueError):
        s_hyp_par(solve_pell(2), 0, 0, 0)


# --------------------------------------------------------------------------
# hyperbolic/hyperbolic


def _cells(table):
    for C in table:
        for alpha in (1, -1):
            yield C, alpha, alpha * (1 if C > 0 else -1)


@pytest.fixture(scope="module", params=[2, 3, 5])
def hd(request):
    pd = solve_pell(request.param)
    return pd, enumerate_hd(pd, 6)


def test_star_hyp_hyp_matches_principal_log_definition(hd):
    pd, table = hd
    reps = [r for v in table.values() for r in v]
    for C, alpha, _ in _cells(table):
        if 0 < C < 1:
            continue
        for m in SMALL:
            for n in SMALL:
                got = s_star_hyp_hyp(pd, m, n, C, alpha, table)
                ref = s_star_hyp_hyp_definition(pd, m, n, C, alpha, reps)
                # scale by the size of the individual terms
                scale = max(1.0, got.term_count * abs(star_factor_hyp_hyp(pd, m, n, C, alpha)))
                assert abs(got.value.value - ref) < 1e-10 * scale, (C, alpha, m, n)


def test_hyp_hyp_inversion_symmetry(hd):
    # γ ↦ γ⁻¹ sends the (C, α, β) cell to (C, −β, −α) and swaps the two logarithms
    pd, table = hd
    for C, alpha, beta in _cells(table):
        for m in SMALL:
            for n in SMALL:
                lhs = s_hyp_hyp(pd, m, n, C, -beta, -alpha, table).value.value
                rhs = s_hyp_hyp(pd, n, m, C, alpha, beta, table).value.value.conjugate()
                assert abs(lhs - rhs) < 1e-10


def test_hyp_hyp_cells_partition_the_table(hd):
    pd, table = hd
    total = sum(s_hyp_hyp(pd, 0, 0, C, a, b, table).term_count for C, a, b in _cells(table))
    assert total == table.total()
    for C, a, b in _cells(table):
        s = s_hyp_hyp(pd, 0, 0, C, a, b, table)
        assert s.value.value == pytest.approx(s.term_count)


def test_hyp_hyp_bounded_by_term_count(hd):
    pd, table = hd
    for C, a, b in _cells(table):
        for m in SMALL:
            for n in SMALL:
                s = s_hyp_hyp(pd, m, n, C, a, b, table)
                assert abs(s.value.value) <= s.term_count + 1e-12


def test_hyp_hyp_rejects_foreign_table():
    pd = solve_pell(3)
    with pytest.raises(ValueError):
        s_hyp_hyp(pd, 0, 0, Fraction(3, 2), 1, 1, enumerate_hd(solve_pell(2), 2))
