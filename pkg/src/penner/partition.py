"""Exact finite-n partition functions and free energies for both coupling signs.

Values are carried as (log-modulus, phase) pairs since the raw magnitudes
overflow fixed-precision floats already around n ~ 20.  The negative-coupling
model is defined for g > 0; its Barnes-G denominator vanishes whenever 1/g
sits on a positive integer, and those poles are reported, never masked.

Small-n quadrature oracles (real-line and loop-contour) provide evaluation
routes that are fully independent of the Barnes closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .barnes import (
    DEFAULT_CTX,
    PrecisionContext,
    _integer_tolerance,
    _log_barnes_g_positive,
    log_abs_barnes_g_reflected,
    sin_pi_frac,
)
from .errors import DomainError, GBarnesZero, QuadratureFailure, SinZero


@dataclass
class PartitionValue:
    """A partition-function value in log form: value = exp(log_modulus + i phase)."""

    n: int
    g: mpf
    log_modulus: mpf
    phase: mpf | None = None


@dataclass
class FreeEnergyValue:
    """Free energy -ln|Z|/n^2 with its exact term decomposition."""

    n: int
    g: mpf
    value: mpf
    terms: tuple = ()


def _to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _reduce_phase(phi: mpf) -> mpf:
    out = phi - 2 * mp.pi * mp.floor(phi / (2 * mp.pi) + mpf(1) / 2)
    if out <= -mp.pi:
        out += 2 * mp.pi
    elif out > mp.pi:
        out -= 2 * mp.pi
    return out


def _sign_exponent_g_neg(x: mpf) -> int:
    """0 or 1 according to the sign of G(1-x), x > 0 non-integer.

    Crossing x = j flips the sign j times (order-j zero), so on (m, m+1) the
    sign is (-1)^(m(m+1)/2).
    """
    m = int(mp.floor(x))
    return (m * (m + 1) // 2) % 2


def _log_abs_g(arg: mpf, ctx: PrecisionContext) -> tuple[mpf, int]:
    """(ln|G(1+arg)|, sign exponent) for any real arg, poles excluded."""
    if arg >= 0:
        return _log_barnes_g_positive(arg, ctx), 0
    x = -arg
    return log_abs_barnes_g_reflected(x, ctx), _sign_exponent_g_neg(x)


def _check_inv_g_pole(inv_g: mpf, ctx: PrecisionContext, err=GBarnesZero):
    frac = inv_g - mp.floor(inv_g)
    if inv_g >= mpf(1) / 2 and min(frac, 1 - frac) < _integer_tolerance(ctx):
        raise err(
            f"1/g = {mp.nstr(inv_g, 12)} sits on a positive integer "
            "(zero of the Barnes G denominator / sin(pi/g) = 0)"
        )


def z_positive(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> PartitionValue:
    """Partition function of the positive-coupling model, in log form.

    ln Z = (n/g)(1 + ln g) + (n^2/2) ln g - (n/2) ln 2 pi
           + ln G(1+n+1/g) - ln G(1+1/g).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    with mp.workdps(ctx.dps):
        gg = _to_mpf(g)
        if gg <= 0:
            raise DomainError("g must be positive")
        inv = 1 / gg
        logz = (
            n * inv * (1 + mp.ln(gg))
            + mpf(n) ** 2 / 2 * mp.ln(gg)
            - mpf(n) / 2 * mp.ln(2 * mp.pi)
            + _log_barnes_g_positive(n + inv, ctx)
            - _log_barnes_g_positive(inv, ctx)
        )
        return PartitionValue(n=n, g=+gg, log_modulus=+logz, phase=mp.zero)


def z_negative(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> PartitionValue:
    """Negative-coupling partition function (analytic continuation), g > 0.

    ln|Z| = -(n/g)(1 + ln g) + (n^2/2) ln g - (n/2) ln 2 pi
            + ln|G(1+n-1/g)| - ln|G(1-1/g)|.

    The phase uses principal branches for (-e g)^(-n/g) and (-g)^(n^2/2) plus
    the real signs of the two G factors; only the modulus is contractual.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    with mp.workdps(ctx.dps):
        gg = _to_mpf(g)
        if gg <= 0:
            raise DomainError("g must be positive")
        inv = 1 / gg
        _check_inv_g_pole(inv, ctx)
        log_num, s1 = _log_abs_g(n - inv, ctx)
        log_den, s2 = _log_abs_g(-inv, ctx)
        logz = (
            -n * inv * (1 + mp.ln(gg))
            + mpf(n) ** 2 / 2 * mp.ln(gg)
            - mpf(n) / 2 * mp.ln(2 * mp.pi)
            + log_num
            - log_den
        )
        phase = mp.pi * (mpf(n) ** 2 / 2 - n * inv + s1 + s2)
        return PartitionValue(n=n, g=+gg, log_modulus=+logz, phase=+_reduce_phase(phase))


def z0_holomorphic(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> PartitionValue:
    """Holomorphic eigenvalue integral in closed form, g > 0 and sin(pi/g) != 0.

    ln|Z0| = n(n - 1/g) ln g + n ln(2 |sin(pi/g)|)
             + ln G(1+n) + ln|G(1+n-1/g)| - ln|G(1-1/g)|.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    with mp.workdps(ctx.dps):
        gg = _to_mpf(g)
        if gg <= 0:
            raise DomainError("g must be positive")
        inv = 1 / gg
        _check_inv_g_pole(inv, ctx, err=SinZero)
        frac, sin_abs = sin_pi_frac(inv)
        log_num, s1 = _log_abs_g(n - inv, ctx)
        log_den, s2 = _log_abs_g(-inv, ctx)
        logz = (
            n * (n - inv) * mp.ln(gg)
            + n * mp.ln(2 * sin_abs)
            + _log_barnes_g_positive(mpf(n), ctx)
            + log_num
            - log_den
        )
        # arg(1 - e^{-2 pi i/g}) via 1 - e^{-i theta} = 2 sin(theta/2) e^{i(pi-theta)/2}
        theta = 2 * mp.pi * frac
        phase = n * _reduce_phase((mp.pi - theta) / 2) + mp.pi * (s1 + s2)
        return PartitionValue(n=n, g=+gg, log_modulus=+logz, phase=+_reduce_phase(phase))


def log_abs_c_negative(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln|C_n(-g)| = -n/g - (n^2/2) ln g - (n/2) ln 2 pi - ln G(1+n)."""
    with mp.workdps(ctx.dps):
        gg = _to_mpf(g)
        return +(
            -n / gg
            - mpf(n) ** 2 / 2 * mp.ln(gg)
            - mpf(n) / 2 * mp.ln(2 * mp.pi)
            - _log_barnes_g_positive(mpf(n), ctx)
        )


def check_factorization(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Relative discrepancy of the prefactor-times-holomorphic-integral identity.

    Compares ln|Z_n(g)| against ln|C_n(-g)| - n ln(2|sin(pi/g)|) + ln|Z0_n(g)|
    in log-modulus arithmetic and returns |exp(difference) - 1|.
    """
    with mp.workdps(ctx.dps):
        lhs = z_negative(n, g, ctx).log_modulus
        z0 = z0_holomorphic(n, g, ctx)
        gg = _to_mpf(g)
        inv = 1 / gg
        _, sin_abs = sin_pi_frac(inv)
        rhs = log_abs_c_negative(n, g, ctx) - n * mp.ln(2 * sin_abs) + z0.log_modulus
        return +abs(mp.expm1(rhs - lhs))


def free_energy_exact(n: int, g, ctx: PrecisionContext = DEFAULT_CTX) -> FreeEnergyValue:
    """Exact free energy -ln|Z_n(g)|/n^2 of the negative-coupling model.

    Also evaluates the reflection-formula term decomposition

        -(1/2n) ln(pi/2) + (1/(n g) - 1/2) ln g + (1/n) ln|sin(pi/g)|
        + 1/(n g) - (1/n^2) ln|G(1-n+1/g)| + (1/n^2) ln|G(1+1/g)|

    and asserts that it reproduces the direct value at working precision.
    """
    with mp.workdps(ctx.dps):
        zval = z_negative(n, g, ctx)
        nn = mpf(n)
        value = -zval.log_modulus / nn**2
        gg = _to_mpf(g)
        inv = 1 / gg
        _, sin_abs = sin_pi_frac(inv)
        terms = (
            -mp.ln(mp.pi / 2) / (2 * nn),
            (inv / nn - mpf(1) / 2) * mp.ln(gg),
            mp.ln(sin_abs) / nn,
            inv / nn,
            -_log_abs_g(inv - nn, ctx)[0] / nn**2,
            _log_barnes_g_positive(inv, ctx) / nn**2,
        )
        total = mp.fsum(terms)
        tol = mpf(10) ** (-(ctx.digits - 10)) * max(1, abs(value))
        assert abs(total - value) <= tol, (
            f"term decomposition off by {mp.nstr(abs(total - value), 5)}"
        )
        return FreeEnergyValue(n=n, g=+gg, value=+value, terms=tuple(+t for t in terms))


# ---------------------------------------------------------------------------
# quadrature oracles (independent of the Barnes closed forms)
# ---------------------------------------------------------------------------

_ORACLE_DPS = 30


def quadrature_oracle_eig(n: int, g, rel_tol=1e-8) -> PartitionValue:
    """Positive-coupling partition function by direct eigenvalue quadrature.

    Integrates the n-dimensional eigenvalue integral (n = 1 or 2) over
    [0, inf)^n with the squared Vandermonde, using adaptive double-exponential
    quadrature.  Accuracy target 1e-8 relative.
    """
    if n not in (1, 2):
        raise DomainError("quadrature oracle implemented for n in {1, 2}")
    with mp.workdps(_ORACLE_DPS):
        gg = _to_mpf(g)
        if gg <= 0:
            raise DomainError("g must be positive")
        inv = 1 / gg

        def weight(x):
            return x**inv * mp.exp(-x / gg)

        if n == 1:
            integral, err = mp.quad(weight, [0, mp.inf], error=True)
        else:
            integral, err = mp.quad(
                lambda x, y: weight(x) * weight(y) * (x - y) ** 2,
                [0, mp.inf],
                [0, mp.inf],
                error=True,
            )
        if not integral or abs(err / integral) > rel_tol:
            raise QuadratureFailure(
                f"eigenvalue quadrature error {mp.nstr(mpf(err), 3)} too large",
                error_estimate=err,
            )
        # C_n(g) = e^(n/g) g^(-n^2/2) / ((2 pi)^(n/2) G(1+n)), and 1/n!
        log_c = (
            n / gg
            - mpf(n) ** 2 / 2 * mp.ln(gg)
            - mpf(n) / 2 * mp.ln(2 * mp.pi)
            - _log_barnes_g_positive(mpf(n), PrecisionContext(digits=_ORACLE_DPS))
        )
        logz = log_c - mp.ln(mp.factorial(n)) + mp.ln(integral)
        return PartitionValue(n=n, g=+gg, log_modulus=+logz, phase=mp.zero)


def _tanh_sinh_unit_nodes(h: mpf):
    """Node/weight pairs of the double-exponential rule on (-1, 1) at step h."""
    nodes = []
    k = 0
    while True:
        t = k * h
        u = mp.pi / 2 * mp.sinh(t)
        x = mp.tanh(u)
        wgt = h * mp.pi / 2 * mp.cosh(t) / mp.cosh(u) ** 2
        if 1 - abs(x) < mpf(10) ** (-mp.dps - 5) or wgt < mpf(10) ** (-mp.dps - 5):
            break
        nodes.append((x, wgt))
        if k > 0:
            nodes.append((-x, wgt))
        k += 1
    return nodes


def _contour_nodes(g: mpf, d: mpf, R: mpf, h: mpf):
    """Weighted nodes (z_j, W_j) with W_j = weight * dz * e^{-(z+log z)/g}.

    The path runs in below the branch cut [0, inf), half-circles the origin
    at radius d, and runs back out above the cut; the orientation is fixed so
    the n = 1 integral matches the closed form.
    """

    def w(z):
        a = mp.arg(z)
        if a < 0:
            a += 2 * mp.pi
        return mp.exp(-(z + mp.ln(abs(z)) + 1j * a) / g)

    unit = _tanh_sinh_unit_nodes(h)
    mid = 10 * g + 2
    out = []
    segments = [
        (mp.mpc(R, -d), mp.mpc(mid, -d)),
        (mp.mpc(mid, -d), mp.mpc(0, -d)),
        (mp.mpc(0, d), mp.mpc(mid, d)),
        (mp.mpc(mid, d), mp.mpc(R, d)),
    ]
    for za, zb in segments:
        c, s = (za + zb) / 2, (zb - za) / 2
        for x, wgt in unit:
            z = c + s * x
            out.append((z, wgt * s * w(z)))
    # half circle from angle 3 pi/2 down through pi to pi/2
    th0, th1 = 3 * mp.pi / 2, mp.pi / 2
    c, s = (th0 + th1) / 2, (th1 - th0) / 2
    for x, wgt in unit:
        th = c + s * x
        z = d * mp.expj(th)
        out.append((z, wgt * s * 1j * z * w(z)))
    return out


def z0_contour_oracle(n: int, g, rel_tol=1e-6) -> PartitionValue:
    """Holomorphic partition function by quadrature over the loop contour.

    Fully independent of the Barnes closed form: integrates
    (1/n!) prod_i int_Gamma e^{-(z_i + log z_i)/g} dz_i times the squared
    Vandermonde for n = 1, 2, on a fixed double-exponential product grid;
    the error estimate compares two grid refinements.
    """
    if n not in (1, 2):
        raise DomainError("contour oracle implemented for n in {1, 2}")
    with mp.workdps(_ORACLE_DPS):
        gg = _to_mpf(g)
        if gg <= 0:
            raise DomainError("g must be positive")
        d = mpf(1) / 2
        # tail |e^{-(z+log z)/g}| ~ e^{-x/g} x^{-1/g}; e^{-R/g} < 1e-26 margin
        R = gg * 62 + 5

        def evaluate(h):
            nodes = _contour_nodes(gg, d, R, h)
            if n == 1:
                return mp.fsum(W for _, W in nodes)
            # literal product-rule double sum including the Vandermonde square
            total = mp.mpc(0)
            for z1, W1 in nodes:
                acc = mp.mpc(0)
                for z2, W2 in nodes:
                    dz = z1 - z2
                    acc += W2 * dz * dz
                total += W1 * acc
            return total / 2

        coarse = evaluate(mpf(1) / 8)
        fine = evaluate(mpf(1) / 16)
        err = abs(fine - coarse)
        if not fine or err / abs(fine) > rel_tol:
            raise QuadratureFailure(
                f"contour quadrature error {mp.nstr(err, 3)} too large",
                error_estimate=err,
            )
        return PartitionValue(
            n=n,
            g=+gg,
            log_modulus=+mp.ln(abs(fine)),
            phase=+_reduce_phase(mp.arg(fine)),
        )
