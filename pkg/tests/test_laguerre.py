from fractions import Fraction

import pytest
from mpmath import mp, mpf

from penner.barnes import PrecisionContext
from penner.errors import CoincidentPoints, Degenerate, DomainError
from penner.laguerre import (
    LaguerreSpec,
    companion_matrix_zeros,
    laguerre_eval,
    laguerre_eval_sum,
    laguerre_zeros,
    saddle_points,
    saddle_residual,
)

CTX = PrecisionContext(digits=50)


def _conj_set_distance(zeros):
    worst = mpf(0)
    for z in zeros:
        worst = max(worst, min(abs(z - mp.conj(w)) for w in zeros))
    return worst


def test_eval_low_degree_values():
    with mp.workdps(60):
        spec = LaguerreSpec(1, Fraction(-5, 2))
        assert abs(laguerre_eval(spec, 0) - mpf("-1.5")) < mpf("1e-50")
        spec = LaguerreSpec(2, Fraction(-5, 2))
        # (alpha+1)(alpha+2)/2 at z = 0
        assert abs(laguerre_eval(spec, 0) - mpf("0.375")) < mpf("1e-50")


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7, 10])
def test_recurrence_matches_binomial_sum_exactly(n):
    alpha = Fraction(-7, 3)
    z = Fraction(5, 4)
    # both routes in exact rational arithmetic
    coeffs = laguerre_eval_sum(LaguerreSpec(n, alpha), z)
    prev, cur = Fraction(1), 1 + alpha - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - z) * cur - (k + alpha) * prev) / (k + 1)
    rec = cur if n > 1 else 1 + alpha - z
    assert coeffs == rec


def test_eval_complex_against_sum():
    with mp.workdps(45):
        spec = LaguerreSpec(5, mpf("-7.3"))
        z = mp.mpc(2, 1)
        assert abs(laguerre_eval(spec, z) - laguerre_eval_sum(spec, z)) < mpf("1e-25")


def test_zeros_linear_and_quadratic():
    zs = laguerre_zeros(LaguerreSpec(1, Fraction(-5, 2)), CTX)
    assert abs(zs.zeros[0] - mpf("-1.5")) < mpf("1e-45")
    zs = laguerre_zeros(LaguerreSpec(2, Fraction(-5, 2)), CTX)
    with mp.workdps(60):
        root = mp.sqrt(mpf("-0.5"))  # alpha + 2 = -1/2
        expect = sorted([mpf("-0.5") + root, mpf("-0.5") - root], key=lambda w: (mp.re(w), mp.im(w)))
        for a, b in zip(zs.zeros, expect):
            assert abs(a - b) < mpf("1e-45")


def test_zeros_against_companion_matrix():
    spec = LaguerreSpec(3, Fraction(-21, 5))
    zs = laguerre_zeros(spec, CTX)
    cm = companion_matrix_zeros(spec, CTX)
    assert max(abs(a - b) for a, b in zip(zs.zeros, cm)) < mpf("1e-20")


def test_degenerate_parameter():
    with pytest.raises(Degenerate):
        laguerre_zeros(LaguerreSpec(3, -2), CTX)
    with pytest.raises(DomainError):
        laguerre_zeros(LaguerreSpec(513, mpf("-1.5")), CTX)


def test_sum_rule_and_conjugate_symmetry():
    n, alpha = 16, Fraction(-37, 7)
    zs = laguerre_zeros(LaguerreSpec(n, alpha), CTX)
    with mp.workdps(70):
        total = sum(zs.zeros)
        expect = n * (n + mpf(alpha.numerator) / alpha.denominator)
        assert abs(total - expect) < mpf(10) ** (-CTX.digits // 2)
        assert _conj_set_distance(zs.zeros) < mpf(10) ** (-CTX.digits // 2)


def test_saddle_scaling_consistency():
    g, n = Fraction(2, 3), 2
    zs = saddle_points(g, n, CTX)
    raw = laguerre_zeros(LaguerreSpec(n, Fraction(-5, 2)), CTX)
    with mp.workdps(70):
        for a, b in zip(zs.scaled, raw.zeros):
            assert abs(a - mpf(2) / 3 * b) < mpf("1e-45")
        # scaled saddles -1/3 +- 0.4714...i
        expect_im = mp.sqrt(mpf(2)) / 3
        assert abs(zs.scaled[0] - mp.mpc(mpf(-1) / 3, -expect_im)) < mpf("1e-40")


def test_saddle_trivial_n1():
    zs = saddle_points(1, 1, CTX)
    assert abs(zs.scaled[0] + 1) < mpf("1e-45")  # solves 1 + 1/z = 0
    assert saddle_residual(zs, CTX) < mpf("1e-40")


def test_saddle_residual_detects_perturbation():
    # the residual is a sharp detector: a 1e-3 shift of a single point lifts
    # it by the local pair-interaction scale (>= 1e-2 once gaps are < 1)
    zs = saddle_points(Fraction(2, 3), 2, CTX)
    assert saddle_residual(zs, CTX) < mpf("1e-20")
    with mp.workdps(CTX.dps):
        zs.scaled[0] = zs.scaled[0] + mpf("1e-3")
    assert saddle_residual(zs, CTX) > mpf("1e-3")
    zs16 = saddle_points(Fraction(3, 32), 16, CTX)
    with mp.workdps(CTX.dps):
        zs16.scaled[3] = zs16.scaled[3] + mpf("1e-3")
    assert saddle_residual(zs16, CTX) > mpf("1e-2")


def test_saddle_residual_coincident_points():
    zs = saddle_points(Fraction(2, 3), 2, CTX)
    zs.scaled[1] = zs.scaled[0]
    with pytest.raises(CoincidentPoints):
        saddle_residual(zs, CTX)


def test_saddle_property_moderate_degree():
    # residual certification at a desk-scale degree
    zs = saddle_points(Fraction(3, 32), 16, CTX)  # t = 3/2 at n = 16
    assert saddle_residual(zs, CTX) < mpf("1e-15")


def test_degenerate_matches_sin_zero():
    # alpha integer in [-n, -1] <=> sin(pi/g) = 0 for g = -1/(alpha+1)
    with pytest.raises(Degenerate):
        saddle_points(Fraction(1, 3), 5, CTX)  # alpha = -4
