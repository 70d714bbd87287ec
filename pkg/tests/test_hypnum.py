import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hypfourier.hypnum import (
    DEFAULT_POLICY,
    AdaptiveComplex,
    BranchCutError,
    ConvergenceError,
    HypParams,
    PoleError,
    PrecisionPolicy,
    QuadratureError,
    complex_beta,
    complex_gamma,
    contour_quadrature,
    e,
    hyp0f1,
    hyp1f1,
    hyp2f1,
    i_hyp_hyp,
    i_hyp_hyp_route,
    i_hyp_par,
    i_par_hyp,
    i_par_par,
)

ELL2 = 2 * math.log(3 + 2 * math.sqrt(2))
ELL3 = 2 * math.log(2 + math.sqrt(3))


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


def mp(z) -> complex:
    return complex(z)


# --------------------------------------------------------------------------
# AdaptiveComplex


def test_adaptive_arithmetic_propagates_error():
    a = AdaptiveComplex(1.0, 2.0, 1e-10)
    b = AdaptiveComplex(3.0, -1.0, 2e-10)
    s = a + b
    assert s.value == 4 + 1j
    assert s.abs_err >= 3e-10
    p = a * b
    assert p.value == (1 + 2j) * (3 - 1j)
    assert p.abs_err >= 1e-10 * abs(b.value)
    assert (a - a).value == 0


def test_adaptive_rejects_negative_error():
    with pytest.raises(ValueError):
        AdaptiveComplex(1.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        AdaptiveComplex(1.0, 0.0, 0.0, 20)


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(base_bits=40)
    with pytest.raises(ValueError):
        PrecisionPolicy(base_bits=128, max_bits=64)


def test_e_reduces_real_part():
    assert abs(e(0.25) - 1j) < 1e-15
    assert abs(e(1e6 + 0.5) + 1) < 1e-12
    assert abs(e(1j) - math.exp(-2 * math.pi)) < 1e-16


# --------------------------------------------------------------------------
# Γ and B against mpmath


GAMMA_GRID = [0.5, 1.5, 3.7, 12.0, 6 + 5j, 6 - 5j, 0.3 + 20j, -2.5 + 1j, 6 + 33j, 50 + 0.1j]


@pytest.mark.parametrize("z", GAMMA_GRID)
def test_gamma_matches_mpmath(z):
    g = complex_gamma(z)
    ref = mp(mpmath.gamma(z))
    assert rel(g.value, ref) < 1e-13
    assert abs(g.value - ref) <= max(g.abs_err, 1e-15 * abs(ref))


def test_gamma_integers_are_exact():
    for n in range(1, 30):
        assert complex_gamma(n).value == float(math.factorial(n - 1))


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        complex_gamma(z)


@pytest.mark.parametrize("u,v", [(6, 6), (6 + 3.56j, 6 - 3.56j), (5 + 7.1j, 5 - 7.1j), (2.5, 0.5 + 1j)])
def test_beta_matches_mpmath(u, v):
    assert rel(complex_beta(u, v).value, mp(mpmath.beta(u, v))) < 1e-13


def test_beta_symmetric_line_is_real_positive():
    # B(k/2 + it, k/2 − it) = |Γ(k/2 + it)|²/Γ(k)
    b = complex_beta(6 + 2j, 6 - 2j).value
    assert abs(b.imag) < 1e-14 * abs(b)
    assert b.real > 0


# --------------------------------------------------------------------------
# hypergeometric functions


@pytest.mark.parametrize("b,z", [(12, -3.0), (12, -400.0), (10, 50.0), (4 + 1j, 2 - 3j), (12, -2.5e4)])
def test_hyp0f1_matches_mpmath(b, z):
    assert rel(hyp0f1(b, z).value, mp(mpmath.hyp0f1(b, z))) < 1e-12


@pytest.mark.parametrize("nu", [3, 5, 9, 11])
@pytest.mark.parametrize("x", [0.5, 4.0, 17.0, 60.0])
def test_hyp0f1_bessel_identity(nu, x):
    # ₀F₁(; ν+1; −x²/4) = Γ(ν+1) (x/2)^{−ν} J_ν(x)
    lhs = hyp0f1(nu + 1, -x * x / 4).value
    rhs = math.gamma(nu + 1) * (x / 2) ** (-nu) * special.jv(nu, x)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1e-300) + 1e-12 * math.gamma(nu + 1) * (x / 2) ** (-nu)


HYP1F1_GRID = [
    (6 + 3.56j, 12, 4j * math.pi),
    (6 - 3.56j, 12, -40j * math.pi),
    (6 + 1j, 12, 2j * math.pi / 0.35),
    (3.5, 7, 20.0),
    (3.5, 7, -20.0),
    (5 + 7.13j, 10, 0.01j),
]


@pytest.mark.parametrize("a,b,z", HYP1F1_GRID)
def test_hyp1f1_matches_mpmath(a, b, z):
    assert rel(hyp1f1(a, b, z).value, mp(mpmath.hyp1f1(a, b, z))) < 1e-12


@pytest.mark.parametrize("a,b,z", HYP1F1_GRID)
def test_kummer_transformation_residual(a, b, z):
    # ₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z)
    lhs = hyp1f1(a, b, z).value
    rhs = complex(np.exp(z)) * hyp1f1(b - a, b, -z).value
    assert rel(lhs, rhs) < 1e-12


def test_hyp1f1_half_weight_symmetry():
    # e^{−z/2} ₁F₁(k/2; k; z) is even in z
    for z in (3j, 11.7j, -5.0, 0.4 + 2j):
        lhs = np.exp(-z / 2) * hyp1f1(6, 12, z).value
        rhs = np.exp(z / 2) * hyp1f1(6, 12, -z).value
        assert rel(lhs, rhs) < 1e-12


HYP2F1_GRID = [
    (6 - 3.56j, 6 + 3.56j, 12, 0.3),
    (6 - 3.56j, 6 + 1.78j, 12, -2.0),
    (5, 5, 10, -0.9),
    (6 + 7j, 6, 12, 0.95),
    (6 - 1j, 6 - 2j, 12, -40.0),
    (2.5 + 1j, 1.5, 4, 0.5 - 0.5j),
]


@pytest.mark.parametrize("a,b,c,z", HYP2F1_GRID)
def test_hyp2f1_matches_mpmath(a, b, c, z):
    assert rel(hyp2f1(a, b, c, z).value, mp(mpmath.hyp2f1(a, b, c, z))) < 1e-12


@pytest.mark.parametrize("a,b,c,z", HYP2F1_GRID)
def test_euler_transformation_residual(a, b, c, z):
    # ₂F₁(a, b; c; z) = (1 − z)^{c−a−b} ₂F₁(c − a, c − b; c; z)
    lhs = hyp2f1(a, b, c, z).value
    rhs = complex(1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z).value
    assert rel(lhs, rhs) < 1e-12


@pytest.mark.parametrize("z", [1.0, 1.5, 40.0])
def test_hyp2f1_refuses_branch_cut(z):
    with pytest.raises(BranchCutError):
        hyp2f1(6, 6 + 1j, 12, z)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-0.95, 0.95),
)
def test_hyp2f1_random_against_mpmath(ta, tb, x):
    a, b = 5 + 1j * ta, 5 + 1j * tb
    assert rel(hyp2f1(a, b, 10, x).value, mp(mpmath.hyp2f1(a, b, 10, x))) < 1e-12


# --------------------------------------------------------------------------
# contour quadrature


def test_contour_quadrature_gaussian():
    res = contour_quadrature(lambda u: np.exp(-((u - 0.5j) ** 2)), 0.5, 12.0, 1e-13)
    assert abs(res.value - math.sqrt(math.pi)) < 1e-12
    assert res.abs_err < 1e-10


def test_contour_quadrature_requires_positive_height():
    with pytest.raises(ValueError):
        contour_quadrature(lambda u: u, 0.0, 1.0, 1e-10)


def test_contour_quadrature_reports_partial():
    with pytest.raises(QuadratureError) as info:
        contour_quadrature(lambda u: np.cos(400.0 * u), 0.01, 30.0, 1e-14, max_panels=16)
    assert isinstance(info.value, ConvergenceError)
    assert isinstance(info.value.partial, AdaptiveComplex)


# --------------------------------------------------------------------------
# the four kernels: closed form against contour quadrature


def _agree(closed: AdaptiveComplex, quad: AdaptiveComplex, slack: float = 1e-9) -> bool:
    scale = max(abs(closed.value), abs(quad.value), 1e-300)
    return abs(closed.value - quad.value) <= closed.abs_err + quad.abs_err + slack * scale


def test_i_par_par_closed_vs_quadrature_random():
    rng = random.Random(101)
    for _ in range(50):
        k = rng.choice([4, 6, 8, 10, 12])
        p = HypParams(k, 1.0, rng.randint(-1, 2), rng.randint(1, 3))
        r = rng.uniform(1.0, 6.0)
        assert _agree(i_par_par(p, r), i_par_par(p, r, method="quadrature", tol=1e-10)), (p, r)


def test_i_hyp_par_closed_vs_quadrature_random():
    rng = random.Random(202)
    for _ in range(50):
        k = rng.choice([6, 8, 10, 12])
        p = HypParams(k, rng.choice([ELL2, ELL3]), rng.randint(-2, 2), rng.randint(1, 3))
        r = rng.choice([-1, 1]) * rng.uniform(0.1, 2.0)
        assert _agree(i_hyp_par(p, r), i_hyp_par(p, r, method="quadrature")), (p, r)


def test_i_par_hyp_closed_vs_quadrature_random():
    rng = random.Random(303)
    for _ in range(50):
        k = rng.choice([6, 8, 10, 12])
        p = HypParams(k, rng.choice([ELL2, ELL3]), rng.randint(-2, 2), rng.randint(-3, 3))
        r = rng.choice([-1, 1]) * rng.uniform(0.2, 5.0)
        assert _agree(i_par_hyp(p, r), i_par_hyp(p, r, method="quadrature")), (p, r)


def test_i_hyp_hyp_closed_vs_quadrature_random():
    rng = random.Random(404)
    for _ in range(50):
        k = rng.choice([8, 10, 12])
        ell = rng.choice([ELL2, ELL3])
        p = HypParams(k, ell, rng.randint(-2, 2), rng.randint(-2, 2))
        if rng.random() < 0.5:
            r = rng.uniform(1.1, 20.0)
            alpha = rng.choice([1, -1])
            beta = alpha
        else:
            r = -rng.uniform(0.1, 20.0)
            alpha = rng.choice([1, -1])
            beta = -alpha
        closed = i_hyp_hyp(p, p, r, alpha, beta, method="ffv2")
        quad = i_hyp_hyp(p, p, r, alpha, beta, method="quadrature")
        assert _agree(closed, quad), (p, r, alpha)


def test_i_hyp_hyp_ffv3_agrees_off_unit_interval():
    p = HypParams(12, ELL2, 1, -1)
    for r, alpha in [(3.0, 1), (8.5, -1), (-0.7, 1), (-4.0, -1)]:
        beta = alpha * (1 if r > 0 else -1)
        a = i_hyp_hyp(p, p, r, alpha, beta, method="ffv2").value
        b = i_hyp_hyp(p, p, r, alpha, beta, method="ffv3").value
        assert rel(a, b) < 1e-9


def test_i_hyp_hyp_unit_interval_is_integrated():
    p = HypParams(12, ELL2, 0, 1)
    assert i_hyp_hyp_route(0.4, 1) == "quadrature"
    assert i_hyp_hyp_route(2.0, 1) == "ffv2"
    with pytest.raises(BranchCutError):
        i_hyp_hyp(p, p, 0.4, 1, 1, method="ffv2")
    auto = i_hyp_hyp(p, p, 0.4, 1, 1)
    quad = i_hyp_hyp(p, p, 0.4, 1, 1, method="quadrature")
    assert auto.value == quad.value


def test_unit_interval_quadrature_matches_lower_side_continuation():
    # For 0 < r < 1 the quadrature agrees with the ffv2 form evaluated with the
    # ₂F₁ continued from below the cut (1/r − i0), not from above.
    k, m, n = 12, 1, 1
    p = HypParams(k, ELL2, m, n)
    r, alpha = 0.43, 1
    quad = i_hyp_hyp(p, p, r, alpha, alpha, method="quadrature").value
    q = abs(r / (r - 1.0))
    nu_m, nu_n = p.nu_m, p.nu_n
    phase = e(m / (2 * ELL2) * (math.log(q)) + n / (2 * ELL2) * (-math.log(q) + 2j * math.pi))
    pre = q ** (-k / 4) * math.exp(2 * math.pi**2 * n / ELL2) / ELL2 * phase
    beta_fn = mp(mpmath.beta(k / 2 - nu_n, k / 2 + nu_n))
    with mpmath.workdps(40):
        below = mp(mpmath.hyp2f1(k / 2 - nu_m, k / 2 + nu_n, k, mpmath.mpc(1 / r, -1e-25)))
        above = mp(mpmath.hyp2f1(k / 2 - nu_m, k / 2 + nu_n, k, mpmath.mpc(1 / r, 1e-25)))
    lower = pre * beta_fn * below
    upper = pre * beta_fn * above
    assert rel(quad, lower) < 1e-8
    assert rel(quad, upper) > 1e-3


def test_i_hyp_hyp_sign_checks():
    p = HypParams(12, ELL2, 0, 0)
    with pytest.raises(ValueError):
        i_hyp_hyp(p, p, 2.0, 1, -1)
    with pytest.raises(ValueError):
        i_hyp_hyp(p, p, 1.0, 1, 1)
    with pytest.raises(ValueError):
        i_hyp_hyp(p, HypParams(10, ELL2, 0, 0), 2.0, 1, 1)


def test_parabolic_kernels_vanish_for_nonpositive_n():
    p = HypParams(12, ELL2, 1, 0)
    assert i_par_par(p, 2.0).value == 0
    assert i_hyp_par(p, 0.5).value == 0


def test_hyp_params_validation():
    with pytest.raises(ValueError):
        HypParams(5, 1.0, 0, 0)
    with pytest.raises(ValueError):
        HypParams(2, 1.0, 0, 0)
    with pytest.raises(ValueError):
        HypParams(12, 0.0, 0, 0)


def test_kernel_rejects_zero_radius_and_unknown_method():
    p = HypParams(12, ELL2, 0, 1)
    with pytest.raises(ValueError):
        i_hyp_par(p, 0.0)
    with pytest.raises(ValueError):
        i_par_hyp(p, 1.0, method="simpson")


def test_default_policy_target():
    assert DEFAULT_POLICY.target_rel <= 1e-12
