import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypfourier.quadnum import QuadNum, is_square

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=30)
D_VALUES = st.sampled_from([2, 3, 5, 7, 13, 61])


@st.composite
def quads(draw, D=None):
    D = draw(D_VALUES) if D is None else D
    return QuadNum(draw(fracs), draw(fracs), D)


@st.composite
def triples(draw):
    D = draw(D_VALUES)
    return tuple(draw(quads(D)) for _ in range(3))


@given(triples())
def test_ring_laws(t):
    a, b, c = t
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(quads())
def test_inverse_and_norm(a):
    if a.is_zero():
        return
    assert a * (1 / a) == 1
    assert a * a.conjugate() == a.norm()
    assert a**-2 * a**2 == 1


@given(quads())
def test_sign_matches_high_precision(a):
    with mpmath.workdps(60):
        val = a.x.numerator / mpmath.mpf(a.x.denominator) + a.y.numerator / mpmath.mpf(a.y.denominator) * mpmath.sqrt(a.D)
    expected = 0 if a.is_zero() else (1 if val > 0 else -1)
    assert a.sign() == expected


@given(quads(), quads(2))
def test_order_is_total(a, b):
    a = QuadNum(a.x, a.y, 2)
    assert (a < b) + (a == b) + (a > b) == 1


def test_exact_sign_under_cancellation():
    # (1 + √2)^40 and its conjugate differ by 2^-40-ish, far beyond a double
    u = QuadNum(1, 1, 2) ** 40
    x = QuadNum(u.x, 0, 2)
    assert (x - u).sign() == -1
    assert u.conjugate().sign() == 1
    assert float(u.conjugate()) > 0
    assert math.isclose(float(u.conjugate()), (math.sqrt(2) - 1) ** 40, rel_tol=1e-12)


def test_log_abs_is_accurate_for_small_conjugates():
    eps = QuadNum(649, 180, 13)
    small = eps.conjugate() ** 30
    assert math.isclose(small.log_abs(), -30 * math.log(649 + 180 * math.sqrt(13)), rel_tol=1e-13)
    assert math.isclose((eps**200).log_abs(), 200 * math.log(649 + 180 * math.sqrt(13)), rel_tol=1e-13)


def test_rational_values_hash_like_fractions():
    assert {QuadNum(3, 0, 5): 1}[Fraction(3)] == 1
    assert QuadNum.rational(Fraction(1, 2), 3) == Fraction(1, 2)
    assert QuadNum.sqrt_d(5) ** 2 == 5


def test_mixing_fields_raises():
    with pytest.raises(ValueError):
        QuadNum(1, 1, 2) + QuadNum(1, 1, 3)
    with pytest.raises(ValueError):
        QuadNum(1, 1, 4)
    with pytest.raises(TypeError):
        QuadNum(0.5, 1, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadNum(1, 1, 2) / QuadNum(0, 0, 2)


def test_str():
    assert str(QuadNum(3, 2, 2)) == "3 + 2*sqrt(2)"
    assert str(QuadNum(0, -1, 5)) == "-sqrt(5)"


def test_is_square():
    assert [n for n in range(30) if is_square(n)] == [0, 1, 4, 9, 16, 25]
    assert not is_square(-4)
