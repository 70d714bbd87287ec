import math
from fractions import Fraction

import pytest

from hypfourier import reference as ref
from hypfourier.pell import psi_d, solve_negative_pell, solve_pell, sqrt_continued_fraction
from hypfourier.quadnum import QuadNum, is_square

from oracles import brute_pell

NON_SQUARE = [D for D in range(2, 201) if not is_square(D)]
SCAN = 20000


@pytest.mark.parametrize("D", NON_SQUARE)
def test_fundamental_solution_is_minimal(D):
    pd = solve_pell(D)
    assert pd.a0**2 - D * pd.c0**2 == 1
    assert pd.a0 > 0 and pd.c0 > 0
    found = brute_pell(D, 1, SCAN)
    if pd.c0 < SCAN:
        assert found == (pd.a0, pd.c0)
    else:
        assert found is None


@pytest.mark.parametrize("D", NON_SQUARE)
def test_negative_pell_solvable_iff_period_odd(D):
    pd = solve_pell(D)
    neg = solve_negative_pell(D)
    assert (neg is not None) == (pd.period % 2 == 1)
    found = brute_pell(D, -1, SCAN)
    if neg is None:
        assert found is None
    else:
        x0, y0 = neg
        assert x0 * x0 - D * y0 * y0 == -1
        if y0 < SCAN:
            assert found == neg
        # the square of the negative unit is the positive one
        assert QuadNum(x0, y0, D) ** 2 == pd.epsilon


@pytest.mark.parametrize("D", [D for D in NON_SQUARE if D % 4 in (1, 2)])
def test_negative_pell_congruence_criterion(D):
    pd = solve_pell(D)
    assert (solve_negative_pell(D) is not None) == ((pd.a0 + 1) % (2 * D) == 0)


@pytest.mark.parametrize("D", NON_SQUARE)
def test_boundary_data(D):
    pd = solve_pell(D)
    assert Fraction(pd.u_plus, pd.v_plus) == Fraction(pd.a0 + 1, pd.c0)
    assert Fraction(pd.u_minus, pd.v_minus) == Fraction(pd.a0 - 1, pd.c0)
    assert pd.D_plus == pd.u_plus**2 - D * pd.v_plus**2
    assert pd.D_minus == pd.u_minus**2 - D * pd.v_minus**2
    # (a0 + 1)(a0 − 1) = D c0²
    assert pd.u_plus * pd.u_minus == D * pd.v_plus * pd.v_minus
    assert pd.D_plus > 0 > pd.D_minus


def test_small_boundary_values():
    assert (solve_pell(2).D_plus, solve_pell(2).D_minus) == (2, -1)
    assert (solve_pell(3).D_plus, solve_pell(3).D_minus) == (6, -2)
    assert (solve_pell(5).D_plus, solve_pell(5).D_minus) == (5, -1)


def test_published_units():
    for D, unit in ref.FUNDAMENTAL_UNIT.items():
        assert (solve_pell(D).a0, solve_pell(D).c0) == unit
        assert solve_negative_pell(D) == ref.NEGATIVE_PELL[D]


def test_large_solutions():
    assert (solve_pell(46).a0, solve_pell(46).c0) == (24335, 3588)
    pd = solve_pell(61)
    assert pd.a0 == 1766319049
    assert pd.neg_fund == (29718, 3805)
    big = solve_pell(991)
    assert big.a0**2 - 991 * big.c0**2 == 1
    assert math.isclose(big.log_epsilon, math.log(big.a0) + math.log(2), rel_tol=1e-12)


def test_continued_fraction():
    assert sqrt_continued_fraction(2) == (1, [2])
    assert sqrt_continued_fraction(7) == (2, [1, 1, 1, 4])
    assert sqrt_continued_fraction(13) == (3, [1, 1, 1, 1, 6])


def test_hyperbolic_length():
    pd = solve_pell(2)
    assert math.isclose(pd.ell, 2 * math.log(3 + 2 * math.sqrt(2)), rel_tol=1e-15)
    assert pd.generator == (3, 4, 2, 3)


@pytest.mark.parametrize("D", [0, 1, 4, 49, -3])
def test_rejects_bad_d(D):
    with pytest.raises(ValueError):
        solve_pell(D)


def test_rejects_non_integer():
    with pytest.raises(TypeError):
        solve_pell(2.0)


def test_psi():
    pd = solve_pell(2)
    assert psi_d(pd, 0, 0, 2) == 1
    assert psi_d(pd, 1, 0, -1) == -1
    assert psi_d(pd, 0, 1, 2) == 1  # c0 = 2 is even
    assert psi_d(pd, 0, 0, 7) == 0
    assert psi_d(solve_pell(3), 0, 1, 6) == -1  # c0 = 1
    assert psi_d(solve_pell(5), 0, 1, 5) == 1
    with pytest.raises(ValueError):
        psi_d(pd, 0, 0, 0)


def test_to_json_uses_strings():
    js = solve_pell(61).to_json()
    assert js["a0"] == "1766319049"
    assert js["neg_fund"] == ["29718", "3805"]
