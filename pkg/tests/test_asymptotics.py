import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from penner.asymptotics import (
    CouplingSequence,
    PhasePoint,
    decompose_free_energy,
    euler_characteristic,
    km_limit_estimate,
    osc_contribution,
    per_contribution,
    planar_dfdt,
    planar_free_energy,
    planar_term_negative,
    positive_expansion_coefficient,
    topological_expansion_positive,
    transition_diagnostics,
)
from penner.barnes import BERNOULLI, PrecisionContext
from penner.errors import CriticalT, DomainError, SingularPhase, SinZero
from penner.partition import z_positive

CTX = PrecisionContext(digits=50)
CTX80 = PrecisionContext(digits=80)


# ---------------------------------------------------------------------------
# coupling sequences
# ---------------------------------------------------------------------------


def test_coupling_sequence_exactness():
    seq = CouplingSequence.thooft(Fraction(3, 2))
    assert seq.inv_g(9) == Fraction(6)
    km = CouplingSequence.km_family(2, Fraction(1, 2), 1)
    assert km.inv_g(4) == 2 + Fraction(1, 16)
    ex = CouplingSequence.explicit([Fraction(1, 2), Fraction(1, 3)])
    assert ex.g(2) == Fraction(1, 3)


def test_coupling_sequence_validation():
    with pytest.raises(DomainError):
        CouplingSequence.km_family(2, Fraction(1, 2), 0)
    with pytest.raises(DomainError):
        CouplingSequence.km_family(2, 2, 1)
    with pytest.raises(DomainError):
        CouplingSequence.thooft(-1)
    with pytest.raises(DomainError):
        CouplingSequence.km_family(5, Fraction(1, 2), -1).inv_g(1)  # 0 - 1/2 < 0


def test_limits_of_km_family():
    seq = CouplingSequence.km_family(2, Fraction(1, 2), 1)
    with mp.workdps(40):
        f = Fraction(seq.g(100))
        g100 = mpf(f.numerator) / f.denominator
        assert abs(100 * g100 - 2) < mpf("0.03")


# ---------------------------------------------------------------------------
# oscillatory and perturbative parts
# ---------------------------------------------------------------------------


def test_osc_examples():
    with mp.workdps(60):
        assert abs(osc_contribution(1, Fraction(2, 3), CTX) - mp.ln(2)) < mpf("1e-45")
        # strong branch: (1/32) ln 2 + Cl2(pi)/(32 pi) with Cl2(pi) = 0
        assert abs(osc_contribution(4, 8, CTX) - mp.ln(2) / 32) < mpf("1e-45")
    with pytest.raises(SinZero):
        osc_contribution(2, Fraction(2, 3), CTX)
    with pytest.raises(CriticalT):
        osc_contribution(3, 1, CTX)


def test_planar_term_values():
    with mp.workdps(60):
        v = planar_term_negative(Fraction(1, 2), CTX)
        assert abs(v - (mp.ln(2) / 2 - mpf("0.25"))) < mpf("1e-45")
        assert abs(float(v) - 0.096574) < 1e-6
        assert abs(planar_term_negative(2, CTX) - mpf("0.5")) < mpf("1e-45")


def test_per_truncation_difference_is_bernoulli_term():
    n, t = 10, Fraction(1, 2)
    with mp.workdps(60):
        d = per_contribution(n, t, 3, CTX) - per_contribution(n, t, 2, CTX)
        b6 = BERNOULLI.fraction(6)
        tm = mpf(1) / 2
        expect = -(mpf(b6.numerator) / b6.denominator) / (6 * 4) * mpf(n) ** -6 * tm**4 * ((1 - tm) ** -4 - 1)
        assert abs(d - expect) < mpf("1e-45")
    with pytest.raises(DomainError):
        per_contribution(10, Fraction(1, 2), 1, CTX)


def test_decomposition_residual_bounded_by_next_term():
    # |exact - osc - per(K=4)| <= 10 x |B_10 term|, falling ~2^10 per doubling
    b10 = BERNOULLI.fraction(10)
    for t in (Fraction(3, 2),):
        for n in (20, 40):
            bd = decompose_free_energy(n, Fraction(t, n), 4, CTX80)
            tm = mpf(t.numerator) / t.denominator
            bound = abs(
                (mpf(b10.numerator) / b10.denominator)
                / (10 * 8)
                * mpf(n) ** -10
                * tm**8
                * ((1 - tm) ** -8 - 1)
            )
            assert abs(bd.residual) <= 10 * bound


def test_decomposition_weak_branch_verbatim():
    # the weak-branch oscillatory part carries no 1/t factor; the decomposition
    # residual collapsing to the Stirling tail is the arbiter
    seq = CouplingSequence.km_family(Fraction(1, 2), Fraction(1, 2), 1)
    bd = decompose_free_energy(40, seq.g(40), 4, CTX80)
    assert abs(bd.residual) < mpf("1e-18")


# ---------------------------------------------------------------------------
# planar free energy and transitions
# ---------------------------------------------------------------------------


def test_planar_values():
    with mp.workdps(60):
        assert abs(planar_free_energy(PhasePoint(2, 1), CTX) - mpf("0.5")) < mpf("1e-45")
        v = planar_free_energy(PhasePoint(2, Fraction(1, 2)), CTX)
        assert abs(v - (mpf("0.5") + mp.ln(mpf(1) / 2) / 2)) < mpf("1e-45")
        assert abs(float(v) - 0.153427) < 1e-6


def test_planar_singular_and_critical():
    with pytest.raises(SingularPhase):
        planar_free_energy(PhasePoint(2, 0), CTX)
    with pytest.raises(CriticalT):
        planar_free_energy(PhasePoint(1, Fraction(1, 2)), CTX)
    with mp.workdps(60):
        v = planar_free_energy(PhasePoint(1, Fraction(1, 2)), CTX, at_critical="limit")
        assert abs(v - (mp.ln(mpf(1) / 2) + mpf("0.25"))) < mpf("1e-45")


def test_planar_derivative_matches_finite_difference():
    with mp.workdps(60):
        for t, l in ((mpf("0.7"), mpf("0.6")), (mpf("1.8"), mpf("0.4"))):
            d = planar_dfdt(PhasePoint(t, l), CTX)
            h = mpf("1e-12")
            fd = (
                planar_free_energy(PhasePoint(t + h, l), CTX)
                - planar_free_energy(PhasePoint(t - h, l), CTX)
            ) / (2 * h)
            assert abs(d - fd) < mpf("1e-20")


@pytest.mark.parametrize("l", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1])
def test_transition_jump(l):
    td = transition_diagnostics(l, ctx=CTX)
    lf = Fraction(l)
    with mp.workdps(60):
        ln_l = mp.ln(mpf(lf.numerator) / lf.denominator)
        assert abs(td.jump_in_dFdt - ln_l) < mpf("1e-3")
    assert td.is_continuous_at_l1 == (l == 1)


def test_transition_second_derivative_grows():
    td = transition_diagnostics(1, ctx=CTX)
    p = td.second_derivative_probe
    assert p[0] < p[1] < p[2]


# ---------------------------------------------------------------------------
# empirical limits
# ---------------------------------------------------------------------------


def test_km_limit_family_converges():
    est = km_limit_estimate(CouplingSequence.km_family(2, Fraction(1, 2), 1), 500, CTX)
    assert est.converged
    assert abs(float(est.l_hat) - 0.5) < 0.01
    assert abs(float(est.t_hat) - 2) < 0.01


def test_km_limit_thooft_irrational_does_not_converge():
    est = km_limit_estimate(CouplingSequence.thooft(math.sqrt(2)), 2000, CTX)
    assert not est.converged
    est = km_limit_estimate(CouplingSequence.thooft((1 + math.sqrt(5)) / 2), 2000, CTX)
    assert not est.converged


def test_km_limit_rational_subsequence_hits_zero():
    # multiples of p for t = p/q give the l = 0 branch exactly
    base = CouplingSequence.thooft(Fraction(3, 2))
    sub = CouplingSequence.explicit([base.g(3 * m) for m in range(1, 121)])
    est = km_limit_estimate(sub, 120, CTX)
    assert est.l_hat == 0
    assert est.converged


# ---------------------------------------------------------------------------
# positive-coupling expansion
# ---------------------------------------------------------------------------


def test_euler_characteristic_values():
    assert euler_characteristic(1, 1) == Fraction(-1, 12)
    assert euler_characteristic(0, 3) == Fraction(1, 6)
    assert euler_characteristic(0, 4) == Fraction(-1, 24)
    with pytest.raises(DomainError):
        euler_characteristic(0, 2)
    with pytest.raises(DomainError):
        euler_characteristic(1, 0)


def test_expansion_coefficients_match_euler():
    for k in range(0, 4):
        for s in range(1, 6):
            if 2 - 2 * k - s >= 0:
                continue
            assert positive_expansion_coefficient(k, s) == -euler_characteristic(k, s)


def test_positive_planar_value_at_t1():
    with mp.workdps(60):
        v = topological_expansion_positive(1, 10**9, 2, CTX)
        assert abs(v - (-2 * mp.ln(2) + mpf(5) / 4)) < mpf("1e-12")


def test_positive_expansion_vs_exact():
    # truncated expansion against the exact value, within the first dropped term
    n, t, K = 20, Fraction(3, 10), 3
    ctx = PrecisionContext(digits=60)
    with mp.workdps(70):
        exact = -z_positive(n, Fraction(t, n), ctx).log_modulus / mpf(n) ** 2
        approx = topological_expansion_positive(t, n, K, ctx)
        b8 = BERNOULLI.fraction(8)
        tm = mpf(3) / 10
        dropped = abs(
            (mpf(b8.numerator) / b8.denominator)
            / (8 * 6)
            * mpf(n) ** -8
            * tm**6
            * ((1 + tm) ** -6 - 1)
        )
        assert abs(exact - approx) < dropped
