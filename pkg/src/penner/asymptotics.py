"""Large-n machinery: coupling sequences, free-energy decomposition, planar limit.

Coupling parameters are carried as exact rationals whenever the inputs allow
it, because the interesting sequences approach poles of the finite-n free
energy exponentially fast (1/g_n within 1e-60 of an integer is routine) and
floating-point couplings would silently land exactly on the pole.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from .barnes import (
    BERNOULLI,
    DEFAULT_CTX,
    PrecisionContext,
    _integer_tolerance,
    clausen2_of_fraction,
    sin_pi_frac,
)
from .errors import CriticalT, DomainError, SingularPhase, SinZero
from .partition import free_energy_exact


def _exactify(x):
    """Fraction when the input permits, else mpf (decimal strings stay exact)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return mpf(x)


def _to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


class SequenceKind(enum.Enum):
    THOOFT = "thooft"
    KM_FAMILY = "km-family"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class CouplingSequence:
    """Rule producing the couplings g_n.

    THOOFT:    g_n = t/n exactly.
    KM_FAMILY: g_n = 1/(floor(n/t) + c l^n), the one-parameter family with
               n g_n -> t and |sin(pi/g_n)|^(1/n) -> l.
    EXPLICIT:  a user-supplied list of couplings.
    """

    kind: SequenceKind
    t: object = None
    l: object = None
    c: object = None
    values: tuple = field(default=())

    @staticmethod
    def thooft(t) -> "CouplingSequence":
        t = _exactify(t)
        if t <= 0:
            raise DomainError("t must be positive")
        return CouplingSequence(kind=SequenceKind.THOOFT, t=t)

    @staticmethod
    def km_family(t, l, c) -> "CouplingSequence":
        t, l, c = _exactify(t), _exactify(l), _exactify(c)
        if t <= 0:
            raise DomainError("t must be positive")
        if not 0 <= l <= 1:
            raise DomainError("l must lie in [0, 1]")
        if c == 0:
            raise DomainError("c must be nonzero")
        return CouplingSequence(kind=SequenceKind.KM_FAMILY, t=t, l=l, c=c)

    @staticmethod
    def explicit(values) -> "CouplingSequence":
        vals = tuple(_exactify(v) for v in values)
        if not vals or any(v <= 0 for v in vals):
            raise DomainError("explicit couplings must be positive")
        return CouplingSequence(kind=SequenceKind.EXPLICIT, values=vals)

    def inv_g(self, n: int):
        """1/g_n, exact when the parameters are exact."""
        if n < 1:
            raise DomainError("n must be >= 1")
        if self.kind is SequenceKind.THOOFT:
            return n / self.t if isinstance(self.t, Fraction) else n / self.t
        if self.kind is SequenceKind.KM_FAMILY:
            if isinstance(self.t, Fraction):
                floor_part = (n * self.t.denominator) // self.t.numerator
            else:
                floor_part = int(mp.floor(n / self.t))
            inv = floor_part + self.c * self.l**n
            if inv <= 0:
                raise DomainError(f"1/g_{n} = {inv} is not positive")
            return inv
        if n > len(self.values):
            raise DomainError(f"explicit sequence has no index {n}")
        return 1 / self.values[n - 1]

    def g(self, n: int):
        inv = self.inv_g(n)
        return 1 / inv


@dataclass(frozen=True)
class PhasePoint:
    """A point (t, l) of the planar phase space, 0 < t < inf, 0 <= l <= 1."""

    t: object
    l: object

    def __post_init__(self):
        if not 0 < _to_mpf(self.t) < mp.inf:
            raise DomainError("t must lie in (0, inf)")
        if not 0 <= _to_mpf(self.l) <= 1:
            raise DomainError("l must lie in [0, 1]")


@dataclass
class FreeEnergyBreakdown:
    """Exact finite-n free energy split into oscillatory + perturbative parts."""

    n: int
    g_n: mpf
    exact: mpf
    osc: mpf
    per: mpf
    K: int
    residual: mpf


def _sin_fraction(x, ctx: PrecisionContext):
    """(frac(x), |sin(pi x)|) with a SinZero check, exact inputs respected."""
    if isinstance(x, Fraction):
        fr = x - (x.numerator // x.denominator)
        if fr == 0:
            raise SinZero(f"sin(pi {x}) = 0 exactly")
        frac = mpf(fr.numerator) / fr.denominator
        return frac, mp.sin(mp.pi * min(frac, 1 - frac))
    xx = mpf(x)
    frac, sin_abs = sin_pi_frac(xx)
    if min(frac, 1 - frac) < _integer_tolerance(ctx):
        raise SinZero(f"sin(pi {mp.nstr(xx, 12)}) = 0 within tolerance")
    return frac, sin_abs


def _critical_check(t: mpf):
    if abs(t - 1) < mpf("1e-12"):
        raise CriticalT("t = 1 is the critical point")


def osc_contribution(n: int, t, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Oscillatory free-energy piece for the 't Hooft coupling g_n = t/n.

    Weak branch (0 < t < 1):  (1/n) ln|2 sin(pi n/t)|.
    Strong branch (t > 1):    (1/(t n)) ln|2 sin(pi n/t)| + Cl2(2 pi n/t)/(2 pi n^2).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    te = _exactify(t)
    with mp.workdps(ctx.dps):
        tm = _to_mpf(te)
        _critical_check(tm)
        m = n / te if isinstance(te, Fraction) else n / tm
        frac, sin_abs = _sin_fraction(m, ctx)
        log2sin = mp.ln(2 * sin_abs)
        if tm < 1:
            return +(log2sin / n)
        return +(log2sin / (tm * n) + clausen2_of_fraction(frac, ctx) / (2 * mp.pi * n**2))


def planar_term_negative(t, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Genus-zero perturbative term -((t-1)^2/(2t^2)) ln|1-t| + 3/4 - 1/(2t)."""
    with mp.workdps(ctx.dps):
        tm = _to_mpf(_exactify(t))
        _critical_check(tm)
        return +(-((tm - 1) ** 2) / (2 * tm**2) * mp.ln(abs(1 - tm)) + mpf(3) / 4 - 1 / (2 * tm))


def per_contribution(n: int, t, K: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Perturbative free-energy piece truncated after the B_{2K} term.

    planar + ln|1-t|/(12 n^2)
           - sum_{k=2}^{K} B_{2k}/(2k(2k-2)) n^(-2k) t^(2k-2) ((1-t)^(2-2k) - 1).
    """
    if K < 2:
        raise DomainError("truncation order K must be >= 2")
    with mp.workdps(ctx.dps):
        tm = _to_mpf(_exactify(t))
        _critical_check(tm)
        total = planar_term_negative(tm, ctx) + mp.ln(abs(1 - tm)) / (12 * mpf(n) ** 2)
        for k in range(2, K + 1):
            b = BERNOULLI.fraction(2 * k)
            bk = mpf(b.numerator) / b.denominator
            total -= (
                bk
                / (2 * k * (2 * k - 2))
                * mpf(n) ** (-2 * k)
                * tm ** (2 * k - 2)
                * ((1 - tm) ** (2 - 2 * k) - 1)
            )
        return +total


def decompose_free_energy(
    n: int, g, K: int = 4, ctx: PrecisionContext = DEFAULT_CTX, inv_g=None
) -> FreeEnergyBreakdown:
    """Split the exact free energy at coupling g into oscillatory + perturbative.

    Works for any coupling with t_n = n g_n as the expansion parameter; for
    't Hooft couplings the oscillatory part coincides with osc_contribution.
    The residual is the Stirling tail beyond B_{2K}, falling like n^(-2K-2).
    """
    with mp.workdps(ctx.dps):
        if inv_g is None:
            ge = _exactify(g)
            inv = 1 / ge
        else:
            inv = inv_g if isinstance(inv_g, Fraction) else mpf(inv_g)
            ge = 1 / inv
        gm = _to_mpf(ge)
        t_n = n * gm
        exact = free_energy_exact(n, ge, ctx)
        frac, sin_abs = _sin_fraction(inv, ctx)
        log2sin = mp.ln(2 * sin_abs)
        if t_n < 1:
            osc = log2sin / n
        else:
            osc = log2sin / (t_n * n) + clausen2_of_fraction(frac, ctx) / (2 * mp.pi * n**2)
        per = per_contribution(n, t_n, K, ctx)
        return FreeEnergyBreakdown(
            n=n,
            g_n=+gm,
            exact=exact.value,
            osc=+osc,
            per=+per,
            K=K,
            residual=+(exact.value - osc - per),
        )


def planar_free_energy(
    p: PhasePoint, ctx: PrecisionContext = DEFAULT_CTX, at_critical: str = "raise"
) -> mpf:
    """Planar free energy F(t, l) of the negative-coupling model.

        0 < t < 1:  ln l     - ((t-1)^2/(2t^2)) ln|t-1| + 3/4 - 1/(2t)
        t > 1:      (ln l)/t - ((t-1)^2/(2t^2)) ln|t-1| + 3/4 - 1/(2t)

    Internally re-derives the value through the prefactor/holomorphic-integral
    split (planar -ln|C_n|/n^2 pieces plus the holomorphic planar energy with
    the Heaviside ln-l term) and asserts both routes agree to 1e-25.

    With at_critical="limit", t = 1 returns the continuity value ln l + 1/4.
    """
    with mp.workdps(ctx.dps):
        tm = _to_mpf(_exactify(p.t))
        lm = _to_mpf(_exactify(p.l))
        if lm == 0:
            raise SingularPhase("l = 0: singular phase with infinite free energy")
        if abs(tm - 1) < mpf("1e-14"):
            if at_critical == "limit":
                return +(mp.ln(lm) + mpf(1) / 4)
            raise CriticalT("t = 1 is a phase transition; pass at_critical='limit'")
        lnl, lnt = mp.ln(lm), mp.ln(tm)
        bulk = -((tm - 1) ** 2) / (2 * tm**2) * mp.ln(abs(tm - 1)) + mpf(3) / 4 - 1 / (2 * tm)
        direct = (lnl if tm < 1 else lnl / tm) + bulk
        # independent route: F = ln l + 1/t + (ln t)/2 - 3/4 + F0 with
        # F0 = H(t-1)(1/t - 1) ln l - (ln t)/2 + (3/2)(t-1)/t - ((t-1)^2/2t^2) ln|t-1|
        heaviside = 1 if tm > 1 else 0
        f0 = (
            heaviside * (1 / tm - 1) * lnl
            - lnt / 2
            + mpf(3) / 2 * (tm - 1) / tm
            - ((tm - 1) ** 2) / (2 * tm**2) * mp.ln(abs(tm - 1))
        )
        via_split = lnl + 1 / tm + lnt / 2 - mpf(3) / 4 + f0
        assert abs(direct - via_split) <= mpf("1e-25") * max(1, abs(direct)), (
            "planar-limit routes disagree"
        )
        return +direct


def planar_dfdt(p: PhasePoint, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Closed-form t-derivative of the planar free energy (t != 1, l > 0)."""
    with mp.workdps(ctx.dps):
        tm = _to_mpf(_exactify(p.t))
        lm = _to_mpf(_exactify(p.l))
        if lm == 0:
            raise SingularPhase("l = 0: singular phase")
        _critical_check(tm)
        out = (
            -(tm - 1) / tm**3 * mp.ln(abs(tm - 1))
            - (tm - 1) / (2 * tm**2)
            + 1 / (2 * tm**2)
        )
        if tm > 1:
            out -= mp.ln(lm) / tm**2
        return +out


@dataclass
class TransitionDiagnostics:
    jump_in_dFdt: mpf
    is_continuous_at_l1: bool
    second_derivative_probe: tuple


def transition_diagnostics(
    l, h=mpf("0.01"), ctx: PrecisionContext = DEFAULT_CTX
) -> TransitionDiagnostics:
    """Derivative-jump estimate across t = 1 at fixed l.

    Estimates dF/dt at t = 1 -/+ h_j by central differences for h_j = h, h/2,
    h/4, fits gap(h) = a + b h ln h + c h, and reports the extrapolated jump
    a ~ (left minus right) -> ln l.  Also probes d2F/dt2 at t = 1 + h_j,
    which grows like -ln h for every l (unbounded at the l = 1 transition).
    """
    with mp.workdps(ctx.dps):
        lm = _to_mpf(_exactify(l))
        hm = mpf(h)
        if not 0 < lm <= 1:
            raise DomainError("l must lie in (0, 1]")
        if not 0 < hm < mpf("0.1"):
            raise DomainError("h must lie in (0, 0.1)")
        delta = mpf(10) ** (-(ctx.digits // 3))

        def f(t):
            return planar_free_energy(PhasePoint(t, lm), ctx)

        def dfdt(t):
            return (f(t + delta) - f(t - delta)) / (2 * delta)

        steps = [hm, hm / 2, hm / 4]
        gaps = [dfdt(1 - s) - dfdt(1 + s) for s in steps]
        # fit gap(h) = a + b (h ln h) + c h
        rows = [[mpf(1), s * mp.ln(s), s] for s in steps]
        a, _, _ = mp.lu_solve(mp.matrix(rows), mp.matrix(gaps))
        second = tuple(
            +((f(1 + s + delta) - 2 * f(1 + s) + f(1 + s - delta)) / delta**2)
            for s in steps
        )
        return TransitionDiagnostics(
            jump_in_dFdt=+a,
            is_continuous_at_l1=bool(abs(a) < mpf("1e-3")),
            second_derivative_probe=second,
        )


@dataclass
class KmLimitEstimate:
    l_hat: mpf
    t_hat: mpf
    converged: bool


def km_limit_estimate(
    seq: CouplingSequence, n_max: int, ctx: PrecisionContext = DEFAULT_CTX, tail_tol=0.003
) -> KmLimitEstimate:
    """Empirical limits l = lim |sin(pi/g_n)|^(1/n) and t = lim n g_n.

    l_hat averages the geometric tail n in [n_max/2, n_max]; the convergence
    verdict requires the tail oscillation (max - min) to stay below tail_tol.
    The threshold is calibrated so the one-parameter family at desk scale
    converges while 't Hooft sequences with irrational t do not (their tail
    keeps dipping at every continued-fraction denominator).
    """
    if n_max < 100:
        raise DomainError("n_max must be >= 100")
    with mp.workdps(ctx.dps):
        lo = n_max // 2
        lvals, tvals = [], []
        for n in range(lo, n_max + 1):
            inv = seq.inv_g(n)
            if isinstance(inv, Fraction):
                frac = inv - (inv.numerator // inv.denominator)
                sin_abs = mp.sin(mp.pi * mpf(frac.numerator) / frac.denominator)
            else:
                x = mpf(inv)
                frac = x - mp.floor(x)
                sin_abs = mp.sin(mp.pi * frac)
            lvals.append(sin_abs ** (mpf(1) / n) if sin_abs > 0 else mp.zero)
            tvals.append(n * _to_mpf(seq.g(n)))
        spread = max(lvals) - min(lvals)
        return KmLimitEstimate(
            l_hat=+(mp.fsum(lvals) / len(lvals)),
            t_hat=+(mp.fsum(tvals) / len(tvals)),
            converged=bool(spread < mpf(tail_tol)),
        )


# ---------------------------------------------------------------------------
# positive-coupling topological expansion and virtual Euler characteristics
# ---------------------------------------------------------------------------


def euler_characteristic(k: int, s: int) -> Fraction:
    """Virtual Euler characteristic of the genus-k, s-punctured surface moduli.

    chi_{k,s} = (-1)^s (2k+s-3)! (2k-1) B_{2k} / ((2k)! s!), exact rational.
    """
    if s <= 0 or 2 - 2 * k - s >= 0 or k < 0:
        raise DomainError("need s > 0 and 2 - 2k - s < 0")
    import math

    b = BERNOULLI.fraction(2 * k)
    return (
        Fraction((-1) ** s)
        * math.factorial(2 * k + s - 3)
        * (2 * k - 1)
        * b
        / (math.factorial(2 * k) * math.factorial(s))
    )


def positive_expansion_coefficient(k: int, s: int) -> Fraction:
    """Coefficient of n^(-2k) t^(2k+s-2) in the positive-coupling free energy.

    Extracted in exact rational arithmetic from the closed-form expansion:
    genus 0 and 1 from the ln(1+t) power series, genus >= 2 from the binomial
    series of (1+t)^(2-2k).  Contract: equals -chi_{k,s}.
    """
    if s <= 0 or 2 - 2 * k - s >= 0 or k < 0:
        raise DomainError("need s > 0 and 2 - 2k - s < 0")

    def log_coeff(m: int) -> Fraction:
        # ln(1+t) = sum_{m>=1} (-1)^(m+1) t^m / m
        return Fraction(0) if m < 1 else Fraction((-1) ** (m + 1), m)

    if k == 0:
        # -(1/(2t^2) + 1/t + 1/2) ln(1+t) + 3/4 + 1/(2t), coefficient of t^(s-2)
        out = -(log_coeff(s) / 2 + log_coeff(s - 1) + log_coeff(s - 2) / 2)
        if s == 1:
            out += Fraction(1, 2)
        if s == 2:
            out += Fraction(3, 4)
        return out
    if k == 1:
        return Fraction(1, 12) * log_coeff(s)
    binom = Fraction(1)
    for i in range(s):
        binom *= Fraction(2 - 2 * k - i, i + 1)
    b = BERNOULLI.fraction(2 * k)
    return -b / (2 * k * (2 * k - 2)) * binom


def topological_expansion_positive(
    t, n: int, K: int, ctx: PrecisionContext = DEFAULT_CTX
) -> mpf:
    """Truncated large-n free energy of the positive-coupling model.

    -((t+1)^2/(2t^2)) ln(1+t) + 3/4 + 1/(2t) + ln(1+t)/(12 n^2)
    - sum_{k=2}^{K} B_{2k}/(2k(2k-2)) n^(-2k) t^(2k-2) ((1+t)^(2-2k) - 1).
    """
    if t <= 0:
        raise DomainError("t must be positive")
    with mp.workdps(ctx.dps):
        tm = _to_mpf(_exactify(t))
        total = (
            -((tm + 1) ** 2) / (2 * tm**2) * mp.ln(1 + tm)
            + mpf(3) / 4
            + 1 / (2 * tm)
            + mp.ln(1 + tm) / (12 * mpf(n) ** 2)
        )
        for k in range(2, K + 1):
            b = BERNOULLI.fraction(2 * k)
            bk = mpf(b.numerator) / b.denominator
            total -= (
                bk
                / (2 * k * (2 * k - 2))
                * mpf(n) ** (-2 * k)
                * tm ** (2 * k - 2)
                * ((1 + tm) ** (2 - 2 * k) - 1)
            )
        return +total
