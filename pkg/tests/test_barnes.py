import pytest
from mpmath import mp, mpf

from penner.barnes import (
    BERNOULLI,
    PrecisionContext,
    ZETA_PRIME_MINUS_ONE,
    clausen2,
    clausen2_of_fraction,
    clausen2_quadrature,
    log_abs_barnes_g_reflected,
    log_barnes_g,
    log_barnes_g_integer,
    log_barnes_g_product,
    log_barnes_g_stirling,
    sin_pi_frac,
    stirling_first_dropped,
    stirling_optimal_order,
)
from penner.errors import AsymptoticRegime, DomainError, PoleOfLog, ZeroOfG

CTX = PrecisionContext(digits=50)


def test_precision_context_invariants():
    with pytest.raises(DomainError):
        PrecisionContext(digits=10)
    with pytest.raises(DomainError):
        PrecisionContext(digits=40, max_terms=5)


def test_bernoulli_table():
    vals = BERNOULLI
    from fractions import Fraction

    assert vals.fraction(0) == 1
    assert vals.fraction(2) == Fraction(1, 6)
    assert vals.fraction(4) == Fraction(-1, 30)
    assert vals.fraction(10) == Fraction(5, 66)
    with pytest.raises(DomainError):
        vals.fraction(3)


def test_integer_values():
    with mp.workdps(60):
        assert log_barnes_g_integer(1, CTX) == 0  # G(2) = 1, empty sum
        assert abs(log_barnes_g_integer(2, CTX)) == 0  # G(3) = 1
        assert abs(log_barnes_g_integer(3, CTX) - mp.ln(2)) < mpf("1e-48")  # G(4) = 1! 2!
        assert abs(log_barnes_g_integer(4, CTX) - mp.ln(12)) < mpf("1e-47")  # G(5) = 1! 2! 3!


def test_canonical_product_anchors():
    assert log_barnes_g_product(0, 1000, CTX) == 0
    assert abs(log_barnes_g_product(1, 5000, CTX)) < mpf("1e-40")
    # agreement with the factorial sum fixes the tail estimate
    diff = abs(log_barnes_g_product(3, 20000, CTX) - log_barnes_g_integer(3, CTX))
    assert diff < mpf("1e-6")
    assert diff < mpf("1e-30")  # the accelerated tail does far better


def test_product_zero_of_g():
    with pytest.raises(ZeroOfG):
        log_barnes_g_product(-2, 1000, CTX)
    with pytest.raises(DomainError):
        log_barnes_g_product(3, 300000, CTX)  # beyond max_terms


@pytest.mark.parametrize("n", range(5, 41))
def test_stirling_against_integer_sum(n):
    diff = abs(log_barnes_g_stirling(n, 4, CTX) - log_barnes_g_integer(n, CTX))
    bound = stirling_first_dropped(n, 4)
    assert diff <= bound * mpf("1.5")
    if n >= 20:
        assert bound <= mpf("1e-10")


def test_stirling_error_bound_k0():
    # with no tail terms the error is bounded by the first omitted term
    diff = abs(log_barnes_g_stirling(10, 0, CTX) - log_barnes_g_integer(10, CTX))
    bound = abs(BERNOULLI.fraction(4).numerator) / (
        BERNOULLI.fraction(4).denominator * 4 * 2 * 10**2
    )
    assert diff <= mpf(str(float(bound))) * mpf("1.01")


def test_stirling_domain():
    with pytest.raises(AsymptoticRegime):
        log_barnes_g_stirling(4.5, 2, CTX)
    with pytest.raises(DomainError):
        log_barnes_g_stirling(6, stirling_optimal_order(6) + 1, CTX)


def test_stirling_vs_product_at_small_x():
    diff = abs(log_barnes_g_stirling(5, 2, CTX) - log_barnes_g_product(5, 20000, CTX))
    assert diff <= stirling_first_dropped(5, 2) * mpf("1.5")


def test_zeta_prime_literal():
    mp.dps = 260
    recomputed = mp.zeta(-1, derivative=1)
    assert abs(mpf(ZETA_PRIME_MINUS_ONE) - recomputed) < mpf("1e-248")
    mp.dps = 15


def test_clausen_trivial_and_catalan():
    assert clausen2(0, CTX) == 0
    with mp.workdps(70):
        assert abs(clausen2(mp.pi, CTX)) < mpf("1e-48")
        assert abs(clausen2(mp.pi / 2, CTX) - mp.catalan) < mpf("1e-48")


def test_clausen_quadrature_duality():
    for k in range(1, 51):
        x = 2 * mp.pi * k / mpf(51)
        series = clausen2(x, CTX)
        quad = clausen2_quadrature(x, CTX)
        assert abs(series - quad) < mpf("1e-10")


def test_clausen_oddness_periodicity():
    with mp.workdps(70):
        for x in (mpf("0.37"), mpf("1.9"), mpf("3.0")):
            assert abs(clausen2(2 * mp.pi - x, CTX) + clausen2(x, CTX)) < mpf("1e-48")
            assert abs(clausen2(x + 2 * mp.pi, CTX) - clausen2(x, CTX)) < mpf("1e-48")


def test_sin_pi_frac_near_integer():
    # relative accuracy survives arguments exponentially close to an integer
    with mp.workdps(250):
        x = mpf(100) + mpf(2) ** (-200)
        frac, sin_abs = sin_pi_frac(x)
        expected = mp.sin(mp.pi * mpf(2) ** (-200))
        assert abs(sin_abs - expected) / expected < mpf("1e-240")


@pytest.mark.parametrize("x", ["0.3", "0.7", "1.4", "2.6", "5.2"])
def test_reflection_consistency(x):
    ref = log_abs_barnes_g_reflected(mpf(x), CTX)
    via_product = log_barnes_g_product(-mpf(x), 20000, CTX)
    assert abs(ref - via_product) < mpf("1e-6")


def test_reflection_poles():
    with pytest.raises(PoleOfLog):
        log_abs_barnes_g_reflected(3, CTX)
    with pytest.raises(DomainError):
        log_abs_barnes_g_reflected(-1, CTX)
    # exponentially near-integer arguments at high precision are not poles
    ctx = PrecisionContext(digits=200)
    with mp.workdps(ctx.dps):
        x = mpf(100) + mpf(2) ** (-200)
        val = log_abs_barnes_g_reflected(x, ctx)
    assert mp.isfinite(val)


def test_production_evaluator_vs_product():
    for x in ("0.25", "1.7", "9.3"):
        diff = abs(log_barnes_g(mpf(x), CTX) - log_barnes_g_product(mpf(x), 20000, CTX))
        assert diff < mpf("1e-45")


def test_regularized_reflection_near_integers():
    # ln|G(1-x)| - x ln|sin(pi x)/pi| - Cl2(2 pi x)/(2 pi) stays finite and
    # matches the Stirling series while x crosses integers along a path
    for m in (6, 9):
        for eps in (mpf("1e-3"), -mpf("1e-3"), mpf("1e-6")):
            x = m + eps
            lhs = (
                log_barnes_g_product(-x, 20000, CTX)
                - x * (mp.ln(sin_pi_frac(x)[1]) - mp.ln(mp.pi))
                - clausen2_of_fraction(sin_pi_frac(x)[0], CTX) / (2 * mp.pi)
            )
            rhs = log_barnes_g_stirling(x, 4, CTX)
            assert abs(lhs - rhs) <= stirling_first_dropped(x, 4) * mpf("1.5")
