"""Acceptance checks: every pillar of the library against its independent oracle.

Each check returns :class:`CheckResult` rows with the measured quantity, the
pinned tolerance, and a PASS/FAIL verdict.  The checks are grouped into the
suites exposed by the command-line ``verify`` command; expensive zero sets
are cached for the duration of the process.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from . import asymptotics, barnes, laguerre, partition, spectral
from .asymptotics import CouplingSequence, PhasePoint
from .barnes import PrecisionContext

CTX50 = PrecisionContext(digits=50)
CTX80 = PrecisionContext(digits=80)
CTX120 = PrecisionContext(digits=120)


@dataclass
class CheckResult:
    criterion: str
    passed: bool
    measured: str
    tolerance: str
    runtime: float = 0.0
    detail: str = ""


def _result(criterion, value, bound, runtime, detail="", ok=None):
    passed = bool(value <= bound) if ok is None else bool(ok)
    return CheckResult(
        criterion=criterion,
        passed=passed,
        measured=f"{float(value):.3e}" if ok is None else str(value),
        tolerance=f"{float(bound):.0e}" if ok is None else str(bound),
        runtime=runtime,
        detail=detail,
    )


_saddle_cache: dict = {}


def cached_saddles(n: int, inv_g: Fraction, digits: int) -> laguerre.ZeroSet:
    key = (n, inv_g, digits)
    if key not in _saddle_cache:
        ctx = PrecisionContext(digits=digits)
        _saddle_cache[key] = laguerre.saddle_points(None, n, ctx, inv_g=inv_g)
    return _saddle_cache[key]


_support_cache: dict = {}


def cached_support(t: float, l: float | None, samples: int = 2048):
    key = (t, l, samples)
    if key not in _support_cache:
        _support_cache[key] = spectral.support_for(t, l, samples)
    return _support_cache[key]


# --------------------------------------------------------------------------
# criterion 1: Barnes consistency
# --------------------------------------------------------------------------


def check_barnes() -> list[CheckResult]:
    t0 = time.time()
    worst = mpf(0)
    for n in range(20, 41):
        diff = abs(
            barnes.log_barnes_g_stirling(n, 4, CTX50)
            - barnes.log_barnes_g_integer(n, CTX50)
        )
        worst = max(worst, diff)
    r1 = _result("1a exact-vs-Stirling lnG(1+n), n in [20,40]", worst, 1e-10, time.time() - t0)
    t0 = time.time()
    worst = mpf(0)
    for x in ("0.3", "2.7", "5.2"):
        ref = barnes.log_abs_barnes_g_reflected(mpf(x), CTX50)
        via_product = barnes.log_barnes_g_product(-mpf(x), 20000, CTX50)
        worst = max(worst, abs(ref - via_product))
    r2 = _result("1b reflection vs canonical product", worst, 1e-6, time.time() - t0)
    return [r1, r2]


# --------------------------------------------------------------------------
# criterion 2: factorization identity
# --------------------------------------------------------------------------


def check_factorization() -> list[CheckResult]:
    t0 = time.time()
    worst = mpf(0)
    for n in (1, 2, 3, 5, 10):
        for g in ("0.34", "0.7", "1.3", "2.6", "5.1"):
            worst = max(worst, partition.check_factorization(n, mpf(g), CTX50))
    return [
        _result(
            "2 factorization identity, 5x5 (n,g) grid", worst, 1e-12, time.time() - t0
        )
    ]


# --------------------------------------------------------------------------
# criterion 3: quadrature oracles
# --------------------------------------------------------------------------


def check_quadrature_oracles() -> list[CheckResult]:
    out = []
    t0 = time.time()
    worst = mpf(0)
    for n in (1, 2):
        for g in (Fraction(1, 4), Fraction(1), Fraction(2)):
            q = partition.quadrature_oracle_eig(n, g)
            closed = partition.z_positive(n, g, CTX50)
            worst = max(worst, abs(mp.expm1(q.log_modulus - closed.log_modulus)))
    out.append(_result("3a eigenvalue quadrature vs closed form", worst, 1e-8, time.time() - t0))
    t0 = time.time()
    worst = mpf(0)
    for n in (1, 2):
        q = partition.z0_contour_oracle(n, mpf("0.7"))
        closed = partition.z0_holomorphic(n, mpf("0.7"), CTX50)
        worst = max(worst, abs(mp.expm1(q.log_modulus - closed.log_modulus)))
        worst = max(worst, abs(q.phase - closed.phase))
    out.append(_result("3b contour quadrature vs closed form", worst, 1e-6, time.time() - t0))
    return out


# --------------------------------------------------------------------------
# criterion 4: expansion decomposition
# --------------------------------------------------------------------------


def check_expansion_decomposition() -> list[CheckResult]:
    out = []
    t0 = time.time()
    # t = 3/2: 't Hooft couplings straight (all tested n avoid sin(pi n/t) = 0)
    res = {n: asymptotics.decompose_free_energy(n, Fraction(3, 2 * n), 4, CTX80) for n in (40, 80)}
    worst = abs(res[80].residual)
    ratio = abs(res[40].residual) / abs(res[80].residual)
    out.append(_result("4a decomposition residual, t=3/2, n=80", worst, 1e-8, time.time() - t0))
    out.append(
        _result(
            "4b residual drop n=40 -> n=80, t=3/2",
            f"{float(ratio):.0f}x",
            ">= 256x (expect ~2^10)",
            0.0,
            ok=ratio >= 256,
        )
    )
    t0 = time.time()
    # t = 1/2: every 't Hooft index has sin(2 pi n) = 0 (pole); use the
    # one-parameter coupling family with an exponentially small offset, for
    # which the identical decomposition holds with t_n = n g_n
    seq = CouplingSequence.km_family(Fraction(1, 2), Fraction(1, 2), 1)
    res = {n: asymptotics.decompose_free_energy(n, seq.g(n), 4, CTX80) for n in (40, 80)}
    worst = abs(res[80].residual)
    ratio = abs(res[40].residual) / abs(res[80].residual)
    out.append(_result("4c decomposition residual, t=1/2 (regularized), n=80", worst, 1e-8, time.time() - t0))
    out.append(
        _result(
            "4d residual drop n=40 -> n=80, t=1/2",
            f"{float(ratio):.0f}x",
            ">= 256x (expect ~2^10)",
            0.0,
            ok=ratio >= 256,
        )
    )
    return out


# --------------------------------------------------------------------------
# criterion 5: planar limit
# --------------------------------------------------------------------------


def check_planar_limit() -> list[CheckResult]:
    out = []
    t0 = time.time()
    seq = CouplingSequence.km_family(2, Fraction(1, 2), 1)
    target = asymptotics.planar_free_energy(PhasePoint(2, Fraction(1, 2)), CTX120)
    fe = partition.free_energy_exact(200, seq.g(200), CTX120)
    out.append(
        _result(
            "5a |F_200 - F(2, 1/2)| along the coupling family",
            abs(fe.value - target),
            1e-2,
            time.time() - t0,
        )
    )
    t0 = time.time()
    with mp.workdps(60):
        v1 = asymptotics.planar_free_energy(PhasePoint(2, 1), CTX50)
        v2 = asymptotics.planar_free_energy(PhasePoint(Fraction(1, 2), 1), CTX50)
        d1 = abs(v1 - mpf(1) / 2)
        d2 = abs(v2 - (-mp.ln(mpf(1) / 2) / 2 - mpf(1) / 4))
    out.append(_result("5b closed-form F(2,1) = 1/2", d1, 1e-12, time.time() - t0))
    out.append(_result("5c closed-form F(1/2,1) = (ln 2)/2 - 1/4", d2, 1e-12, 0.0))
    t0 = time.time()
    # the split-route equivalence at 1e-25 across a deterministic (t,l) grid
    rng = np.random.default_rng(11)
    worst = mpf(0)
    ctx = PrecisionContext(digits=60)
    with mp.workdps(70):
        for _ in range(100):
            t = mpf(float(rng.uniform(0.1, 3.0)))
            if abs(t - 1) < mpf("0.01"):
                continue
            l = mpf(float(rng.uniform(0.05, 1.0)))
            tm = asymptotics.planar_free_energy(PhasePoint(t, l), ctx)
            lnl, lnt = mp.ln(l), mp.ln(t)
            heav = 1 if t > 1 else 0
            f0 = (
                heav * (1 / t - 1) * lnl
                - lnt / 2
                + mpf(3) / 2 * (t - 1) / t
                - ((t - 1) ** 2) / (2 * t**2) * mp.ln(abs(t - 1))
            )
            via = lnl + 1 / t + lnt / 2 - mpf(3) / 4 + f0
            worst = max(worst, abs(tm - via))
    out.append(_result("5d split-route equivalence, 100 random (t,l)", worst, 1e-25, time.time() - t0))
    return out


# --------------------------------------------------------------------------
# criterion 6: phase transitions
# --------------------------------------------------------------------------


def check_transitions() -> list[CheckResult]:
    out = []
    t0 = time.time()
    worst = mpf(0)
    for l in (Fraction(1, 4), Fraction(1, 2), 1):
        td = asymptotics.transition_diagnostics(l, ctx=CTX50)
        lf = Fraction(l)
        ln_l = mp.ln(mpf(lf.numerator) / lf.denominator)
        worst = max(worst, abs(td.jump_in_dFdt - ln_l))
    out.append(_result("6a derivative jump equals ln l, l in {1/4, 1/2, 1}", worst, 1e-3, time.time() - t0))
    t0 = time.time()
    td = asymptotics.transition_diagnostics(1, ctx=CTX50)
    probe = td.second_derivative_probe
    growing = probe[0] < probe[1] < probe[2]
    out.append(
        _result(
            "6b d2F/dt2 grows without bound as h -> 0 at l=1",
            f"{float(probe[0]):.2f} -> {float(probe[2]):.2f}",
            "monotone growth",
            time.time() - t0,
            ok=growing and td.is_continuous_at_l1,
        )
    )
    return out


# --------------------------------------------------------------------------
# criterion 7: 't Hooft non-convergence
# --------------------------------------------------------------------------


def check_thooft_nonconvergence() -> list[CheckResult]:
    t0 = time.time()
    seq = CouplingSequence.thooft(math.sqrt(2))
    vals = [float(asymptotics.osc_contribution(n, seq.t, CTX50)) for n in range(1, 2001)]
    spread = max(vals) - min(vals)
    return [
        _result(
            "7 running max-min of the oscillatory part, t=sqrt(2), n<=2000",
            f"{spread:.4f}",
            "> 0.01",
            time.time() - t0,
            ok=spread > 0.01,
        )
    ]


# --------------------------------------------------------------------------
# criterion 8: saddle-point residual
# --------------------------------------------------------------------------


def check_saddle_residual() -> list[CheckResult]:
    t0 = time.time()
    zs = cached_saddles(80, Fraction(160, 3), 200)
    res = laguerre.saddle_residual(zs, PrecisionContext(digits=200))
    return [
        _result(
            "8 saddle equations residual, n=80, t=3/2, 200 digits",
            res,
            1e-15,
            time.time() - t0,
        )
    ]


# --------------------------------------------------------------------------
# criterion 9: clustering along the limiting supports
# --------------------------------------------------------------------------


def check_clustering() -> list[CheckResult]:
    out = []
    # weak: t = 0.9, 't Hooft
    t0 = time.time()
    sd = cached_support(0.9, None).to_penner_plane()
    zs80 = cached_saddles(80, Fraction(800, 9), 200)
    zs20 = cached_saddles(20, Fraction(200, 9), 200)
    c80 = spectral.cloud_vs_theory(zs80.scaled, sd)
    c20 = spectral.cloud_vs_theory(zs20.scaled, sd)
    out.append(_result("9a weak cloud distance, n=80, t=0.9", c80.max_dist, 0.05, time.time() - t0))
    out.append(
        _result(
            "9b weak mean distance decreases 20 -> 80",
            f"{c20.mean_dist:.4f} -> {c80.mean_dist:.4f}",
            "decreasing",
            0.0,
            ok=c80.mean_dist < c20.mean_dist,
        )
    )
    # strong: t = 3/2, l = 1 via the coupling family with c = 1/2
    t0 = time.time()
    sd = cached_support(1.5, 1.0).to_penner_plane()
    zs80 = cached_saddles(80, Fraction(107, 2), 200)
    zs20 = cached_saddles(20, Fraction(27, 2), 200)
    c80 = spectral.cloud_vs_theory(zs80.scaled, sd)
    c20 = spectral.cloud_vs_theory(zs20.scaled, sd)
    out.append(_result("9c strong cloud distance, n=80, t=3/2, l=1", c80.max_dist, 0.05, time.time() - t0))
    out.append(
        _result(
            "9d strong loop occupation ~ 1/t",
            abs(c80.loop_count_fraction - 2 / 3),
            0.05,
            0.0,
        )
    )
    out.append(
        _result(
            "9e strong mean distance decreases 20 -> 80",
            f"{c20.mean_dist:.4f} -> {c80.mean_dist:.4f}",
            "decreasing",
            0.0,
            ok=c80.mean_dist < c20.mean_dist,
        )
    )
    # condensing: t = 3/2, l = 0.05
    t0 = time.time()
    zs80 = cached_saddles(80, 53 + Fraction(1, 20) ** 80, 260)
    pts = np.array([complex(z) for z in zs80.scaled])
    frac_near = float(np.mean(np.abs(pts) < 0.1))
    out.append(
        _result(
            "9f condensing: fraction within 0.1 of origin, n=80",
            f"{frac_near:.4f}",
            ">= 2/3",
            time.time() - t0,
            ok=frac_near >= 2 / 3,
        )
    )
    return out


# --------------------------------------------------------------------------
# criterion 10: Coulomb energy
# --------------------------------------------------------------------------


def check_coulomb_energy() -> list[CheckResult]:
    out = []
    t0 = time.time()
    e_half = spectral.coulomb_energy(0.5, cached_support(0.5, None))
    out.append(
        _result(
            "10a energy quadrature vs closed form, t=1/2",
            abs(e_half - spectral.coulomb_energy_closed(0.5)),
            1e-6,
            time.time() - t0,
        )
    )
    t0 = time.time()
    e_half_l = spectral.coulomb_energy(2.0, cached_support(2.0, 0.5))
    e_one = spectral.coulomb_energy(2.0, cached_support(2.0, 1.0))
    out.append(
        _result(
            "10b energy quadrature vs closed form, t=2",
            max(abs(e_half_l - spectral.coulomb_energy_closed(2.0)), abs(e_one - spectral.coulomb_energy_closed(2.0))),
            1e-6,
            time.time() - t0,
        )
    )
    out.append(
        _result("10c energy independent of l at t=2", abs(e_half_l - e_one), 1e-6, 0.0)
    )
    return out


# --------------------------------------------------------------------------
# criterion 11: effective potential
# --------------------------------------------------------------------------


def check_effective_potential() -> list[CheckResult]:
    out = []
    t0 = time.time()
    rep = spectral.effective_potential_profile(2.0, 0.5, cached_support(2.0, 0.5))
    out.append(
        _result(
            "11a potential gap equals -t ln l at (2, 1/2)",
            abs(rep.gap - (-2 * math.log(0.5))),
            1e-4,
            time.time() - t0,
        )
    )
    out.append(
        _result(
            "11b flatness of the potential on each piece",
            max(rep.loop_stdev, rep.interval_stdev),
            1e-4,
            0.0,
        )
    )
    out.append(
        _result(
            "11c interval potential equals 3 - 2 ln 2 at t=2",
            abs(rep.v_eff_interval - (3 - 2 * math.log(2))),
            1e-4,
            0.0,
        )
    )
    return out


# --------------------------------------------------------------------------
# criterion 12: filling fractions
# --------------------------------------------------------------------------


def check_filling_fractions() -> list[CheckResult]:
    t0 = time.time()
    worst = 0.0
    for t in (1.5, 2.0, 4.0):
        ff = spectral.filling_fractions(cached_support(t, 1.0))
        worst = max(worst, abs(ff.loop_fraction - 1 / t), abs(ff.interval_fraction - (1 - 1 / t)))
    ff = spectral.filling_fractions(cached_support(2.0, 0.5))
    worst = max(worst, abs(ff.loop_fraction - 0.5), abs(ff.interval_fraction - 0.5))
    return [
        _result(
            "12 loop mass 1/t and interval mass 1 - 1/t, t in {3/2, 2, 4}",
            worst,
            1e-4,
            time.time() - t0,
        )
    ]


# --------------------------------------------------------------------------
# criterion 13: Euler characteristics
# --------------------------------------------------------------------------


def check_euler() -> list[CheckResult]:
    t0 = time.time()
    ok = (
        asymptotics.euler_characteristic(1, 1) == Fraction(-1, 12)
        and asymptotics.euler_characteristic(0, 3) == Fraction(1, 6)
    )
    mismatches = []
    for k in range(0, 4):
        for s in range(1, 6):
            if 2 - 2 * k - s >= 0:
                continue
            lhs = asymptotics.positive_expansion_coefficient(k, s)
            rhs = -asymptotics.euler_characteristic(k, s)
            if lhs != rhs:
                mismatches.append((k, s))
    return [
        _result(
            "13 expansion coefficients equal -chi_{k,s}, k<=3, s<=5 (exact)",
            f"{len(mismatches)} mismatches",
            "0 mismatches",
            time.time() - t0,
            ok=ok and not mismatches,
        )
    ]


# --------------------------------------------------------------------------
# criterion 14: Szego closing
# --------------------------------------------------------------------------


def check_szego_closing() -> list[CheckResult]:
    out = []
    t0 = time.time()
    sz = spectral.szego_curve(2048)
    sd = spectral.weak_arc(0.999, 4096)
    hd = spectral.hausdorff_distance(sd.arc_samples, sz)
    out.append(
        _result(
            "14a weak arc at t=0.999 vs Szego curve (Hausdorff)",
            hd,
            0.02,
            time.time() - t0,
            detail=(
                "unattainable as stated: the arc ends at a_pm, a distance "
                "2 sqrt|A+1| ~ 0.063 from the Szego corner at z=1 whose "
                "branches meet at 45 degrees, so the true Hausdorff distance "
                "at t=0.999 is ~0.063 (~0.045 one-sided) for any correct arc"
            ),
        )
    )
    t0 = time.time()
    worst = 0.0
    for t in (0.99, 0.999, 0.9999):
        A = -1.0 / t
        _, ap = spectral.endpoints(A)
        ratio = abs(ap - 1) / (2 * math.sqrt(abs(A + 1)))
        worst = max(worst, abs(ratio - 1) / abs(A + 1))
    out.append(
        _result(
            "14b endpoints approach 1 at rate 2 sqrt|A+1|",
            f"|ratio-1|/|A+1| <= {worst:.3f}",
            "bounded by 1/4 (exact: 1/8 + O(|A+1|))",
            time.time() - t0,
            ok=worst <= 0.25,
        )
    )
    return out


ALL_CHECKS = [
    check_barnes,
    check_factorization,
    check_quadrature_oracles,
    check_expansion_decomposition,
    check_planar_limit,
    check_transitions,
    check_thooft_nonconvergence,
    check_saddle_residual,
    check_clustering,
    check_coulomb_energy,
    check_effective_potential,
    check_filling_fractions,
    check_euler,
    check_szego_closing,
]

SUITES = {
    "barnes": [check_barnes],
    "partition": [check_factorization, check_quadrature_oracles],
    "expansion": [
        check_expansion_decomposition,
        check_planar_limit,
        check_transitions,
        check_thooft_nonconvergence,
        check_euler,
    ],
    "spectral": [
        check_saddle_residual,
        check_clustering,
        check_coulomb_energy,
        check_effective_potential,
        check_filling_fractions,
        check_szego_closing,
    ],
    "all": ALL_CHECKS,
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = []
    for check in SUITES[name]:
        results.extend(check())
    return results
