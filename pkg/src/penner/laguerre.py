"""Generalized Laguerre polynomials with negative parameter and their complex zeros.

The zero finder is a simultaneous Aberth-Ehrlich iteration run through a
precision ladder (coarse sweep on circle seeds, then refinement at doubling
precision), with every zero certified by its Newton residual.  For the
nearly-degenerate parameters produced by condensing coupling sequences
(alpha exponentially close to a negative integer) the base precision is
raised until the offset from the integer is resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .barnes import DEFAULT_CTX, PrecisionContext, distance_to_integer
from .errors import CoincidentPoints, Degenerate, DomainError, NoConvergence

LAGUERRE_CTX = PrecisionContext(digits=200)

MAX_DEGREE = 512


def _to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@dataclass(frozen=True)
class LaguerreSpec:
    """Degree n and parameter alpha of L_n^(alpha)."""

    n: int
    alpha: object  # mpf, Fraction, float or int; kept exact until evaluation

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("degree n must be >= 1")

    def alpha_mpf(self) -> mpf:
        return _to_mpf(self.alpha)


@dataclass
class ZeroSet:
    """All n zeros of L_n^(alpha), optionally scaled by a coupling g."""

    spec: LaguerreSpec
    zeros: list = field(default_factory=list)
    scaled: list = field(default_factory=list)
    g: object = None

    def __len__(self):
        return len(self.zeros)


def _laguerre_recurrence(n: int, a, z):
    """L_n^(alpha)(z) for n >= 0 by the three-term degree recurrence."""
    prev = mp.one  # L_0
    if n == 0:
        return prev
    cur = 1 + a - z  # L_1
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return cur


def laguerre_eval(spec: LaguerreSpec, z) -> mpc:
    """L_n^(alpha)(z) by the three-term degree recurrence at current precision."""
    a = spec.alpha_mpf()
    zz = mpc(z) if isinstance(z, (complex, mpc)) else mpf(z)
    return _laguerre_recurrence(spec.n, a, zz)


def laguerre_eval_sum(spec: LaguerreSpec, z):
    """L_n^(alpha)(z) by the explicit binomial sum.

    Works elementwise over whatever exact or floating scalar type alpha and z
    share; with Fraction inputs the result is exact rational arithmetic.
    Serves as the independent oracle for the recurrence.
    """
    n, a = spec.n, spec.alpha
    exact = isinstance(a, (Fraction, int)) and isinstance(z, (Fraction, int))
    if not exact:
        a = spec.alpha_mpf()
        z = mpc(z) if isinstance(z, (complex, mpc)) else mpf(z)
    # binom(n + a, n - k), built by downward recurrence from k = 0
    coef = 1 if exact else mpf(1)
    for j in range(1, n + 1):
        coef = coef * (a + j) / j
    total = coef  # k = 0 term
    term_pow = 1 if exact else mpf(1)
    factk = 1
    for k in range(1, n + 1):
        coef = coef * (n - k + 1) / (a + k)
        term_pow = term_pow * (-z)
        factk *= k
        total = total + coef * term_pow / factk
    return total


def _eval_with_newton(n: int, a: mpf, z):
    """(p, p') for p = L_n^(alpha) using d/dz L_n^(a) = -L_{n-1}^(a+1)."""
    p = _laguerre_recurrence(n, a, z)
    dp = -_laguerre_recurrence(n - 1, a + 1, z)
    return p, dp


def _aberth_sweeps(n, a, zs, tol, soft_tol, max_iter):
    """In-place Aberth-Ehrlich iterations.

    Stops when the largest relative step drops below ``tol``, or when steps
    stagnate below ``soft_tol`` (evaluation-noise floor of the recurrence at
    the current precision); the final residual certification is the arbiter
    of correctness either way.  Returns (zs, converged, iterations).
    """
    history = []
    for it in range(1, max_iter + 1):
        max_step = mpf(0)
        for i in range(n):
            zi = zs[i]
            p, dp = _eval_with_newton(n, a, zi)
            if p == 0:
                continue
            if dp == 0:
                zs[i] = zi + tol  # nudge off a stationary point
                continue
            newton = p / dp
            s = mp.zero
            for j in range(n):
                if j != i:
                    s += 1 / (zi - zs[j])
            denom = 1 - newton * s
            step = newton if denom == 0 else newton / denom
            zs[i] = zi - step
            rel = abs(step) / (1 + abs(zs[i]))
            if rel > max_step:
                max_step = rel
        history.append(max_step)
        if max_step < tol:
            return zs, True, it
        if len(history) >= 6 and max_step < soft_tol:
            if max_step > history[-6] / 4:  # stuck at the noise floor
                return zs, True, it
    return zs, False, max_iter


def _sorted_zeros(zs):
    return sorted(zs, key=lambda w: (mp.re(w), mp.im(w)))


def _cluster_seeds(n: int, m: int, eps):
    """Seeds for alpha = -m + eps with tiny eps (near-degenerate polynomial).

    The m-fold zero at the origin splits, to first order in eps, into the
    ring z^m = eps (m-1)! m! (n-m)!/n!; the remaining n-m zeros start from
    the classical Gauss-Laguerre nodes of L_{n-m}^(m) in double precision.
    """
    from scipy.special import roots_genlaguerre

    log_ring = (
        mp.ln(abs(eps))
        + mp.loggamma(m)
        + mp.loggamma(m + 1)
        + mp.loggamma(n - m + 1)
        - mp.loggamma(n + 1)
    )
    r0 = mp.exp(log_ring / m)
    phase0 = mpf(1) / m if eps < 0 else mpf(0)  # in units of pi
    seeds = [r0 * mp.expjpi(phase0 + 2 * mpf(k) / m) for k in range(m)]
    if n > m:
        nodes, _ = roots_genlaguerre(n - m, float(m))
        seeds.extend(mpc(x) for x in nodes)
    return seeds


def laguerre_zeros(spec: LaguerreSpec, ctx: PrecisionContext = LAGUERRE_CTX) -> ZeroSet:
    """All n complex zeros of L_n^(alpha), residual-certified below 10^(-digits/2).

    Zeros are found by Aberth-Ehrlich iteration seeded on a circle of radius
    n*max(1, |1+alpha/n|) centered at n, refined through a doubling precision
    ladder, and returned sorted by (real, imaginary) part.
    """
    n = spec.n
    if n > MAX_DEGREE:
        raise DomainError(f"degree {n} exceeds supported maximum {MAX_DEGREE}")
    target_dps = ctx.digits + 15
    cluster = None  # (m, eps) when alpha is close to a negative integer -m
    with mp.workdps(target_dps):
        a_full = spec.alpha_mpf()
        dist, nearest = distance_to_integer(a_full)
        if -n <= nearest <= -1:
            if dist == 0 or dist < mpf(10) ** (-ctx.digits):
                raise Degenerate(
                    f"alpha = {nearest} is a negative integer in [-n, -1]; "
                    "L_n^(alpha) degenerates (sin(pi/g) = 0, l = 0 case)"
                )
            # resolve the offset from the integer before iterating
            offset_digits = int(-mp.log10(dist)) + 1
            if dist < mpf("1e-3"):
                cluster = (-nearest, a_full - nearest)
        else:
            offset_digits = 0

    # the recurrence loses roughly n/2 digits to cancellation near the zeros;
    # near-degenerate parameters additionally cancel down to the integer
    # offset times the split-ring magnitude, so they need both margins
    base_dps = max(30, n // 2 + 35, offset_digits + n // 2 + 40)
    ladder = [min(base_dps, target_dps)]
    while ladder[-1] < target_dps:
        ladder.append(min(2 * ladder[-1], target_dps))

    zs = None
    iterations = 0
    for level, dps in enumerate(ladder):
        with mp.workdps(dps):
            a = spec.alpha_mpf()
            if zs is None:
                if cluster is not None:
                    zs = _cluster_seeds(n, *cluster)
                else:
                    radius = n * max(mpf(1), abs(1 + a / n))
                    twist = mpf(1) / (7 * n)
                    zs = [
                        n + radius * mp.expjpi(2 * (mpf(i) + mpf(1) / 2) / n + twist)
                        for i in range(n)
                    ]
            else:
                zs = [mpc(z) for z in zs]
            tol = mpf(10) ** (-(dps - 8))
            soft_tol = mpf(10) ** (-8)
            max_iter = 1500 if level == 0 else 80
            zs, ok, its = _aberth_sweeps(n, a, zs, tol, soft_tol, max_iter)
            iterations += its
            if not ok and level == 0:
                raise NoConvergence(
                    "Aberth iteration stalled at base precision",
                    {"n": n, "alpha": str(a), "dps": dps, "iterations": its},
                )

    with mp.workdps(target_dps):
        a = spec.alpha_mpf()
        cert = mpf(10) ** (-mpf(ctx.digits) / 2)
        worst = mpf(0)
        for z in zs:
            p, dp = _eval_with_newton(n, a, z)
            res = abs(p / dp) / (1 + abs(z)) if dp != 0 else mp.inf
            worst = max(worst, res)
        if worst > cert:
            raise NoConvergence(
                f"zero residual {mp.nstr(worst, 5)} above certification {mp.nstr(cert, 5)}",
                {"n": n, "alpha": str(a), "residual": str(worst)},
            )
        zs = _sorted_zeros(+z for z in zs)
    return ZeroSet(spec=spec, zeros=zs, scaled=[], g=None)


def companion_matrix_zeros(spec: LaguerreSpec, ctx: PrecisionContext = DEFAULT_CTX) -> list:
    """Zeros via eigenvalues of the monic companion matrix (oracle, n <= 8)."""
    n = spec.n
    if n > 8:
        raise DomainError("companion-matrix oracle supports n <= 8 only")
    with mp.workdps(ctx.dps):
        a = spec.alpha_mpf()
        # monic coefficients b_k of z^k from the binomial sum, b_n = 1
        coefs = []
        c = mpf(1)
        for j in range(1, n + 1):
            c = c * (a + j) / j
        factk = mpf(1)
        sign = 1
        for k in range(0, n + 1):
            if k > 0:
                c = c * (n - k + 1) / (a + k)
                factk *= k
                sign = -sign
            coefs.append(c * sign / factk)
        lead = coefs[-1]
        b = [ck / lead for ck in coefs[:-1]]
        m = mp.zeros(n, n)
        for i in range(1, n):
            m[i, i - 1] = 1
        for i in range(n):
            m[i, n - 1] = -b[i]
        eigvals, _ = mp.eig(m)
        return _sorted_zeros(eigvals)


def saddle_points(g, n: int, ctx: PrecisionContext = LAGUERRE_CTX, inv_g=None) -> ZeroSet:
    """Stationary points of the holomorphic eigenvalue integral at coupling g.

    These are the zeros of L_n^(alpha) with alpha = -1 - 1/g, scaled by g.
    Pass ``inv_g`` (exact Fraction or high-precision value) when 1/g is known
    more precisely than g itself, e.g. along condensing coupling sequences.
    """
    with mp.workdps(ctx.digits + 15):
        if inv_g is not None:
            inv = inv_g if isinstance(inv_g, Fraction) else mpf(inv_g)
            g_val = 1 / _to_mpf(inv)
        else:
            g_val = _to_mpf(g)
            inv = 1 / g_val
        if g_val <= 0:
            raise DomainError("coupling g must be positive")
        alpha = -1 - inv if isinstance(inv, Fraction) else -1 - inv
        spec = LaguerreSpec(n, alpha)
        zs = laguerre_zeros(spec, ctx)
        zs.g = g_val
        zs.scaled = [+(g_val * z) for z in zs.zeros]
        return zs


def saddle_residual(zs: ZeroSet, ctx: PrecisionContext = LAGUERRE_CTX) -> mpf:
    """Worst violation of the saddle-point equations over the scaled points.

    residual_i = |(1/g)(1 + 1/z_i) + sum_{j != i} 2/(z_j - z_i)|, maximized
    over i.  A perturbation of any single point by eps raises this by ~2/eps
    times the local pair density, so the residual is a sharp detector.
    """
    if not zs.scaled:
        raise DomainError("ZeroSet carries no scaled points; use saddle_points")
    with mp.workdps(ctx.digits + 15):
        pts = [mpc(z) for z in zs.scaled]
        g = _to_mpf(zs.g)
        npts = len(pts)
        scale = max(abs(z) for z in pts)
        min_gap = mp.inf
        for i in range(npts):
            for j in range(i + 1, npts):
                d = abs(pts[i] - pts[j])
                if d < min_gap:
                    min_gap = d
        if min_gap < mpf(10) ** (-ctx.digits // 2) * scale:
            raise CoincidentPoints(f"two saddle points within {mp.nstr(min_gap, 5)}")
        worst = mpf(0)
        for i in range(npts):
            zi = pts[i]
            total = (1 + 1 / zi) / g
            for j in range(npts):
                if j != i:
                    total += 2 / (pts[j] - zi)
            worst = max(worst, abs(total))
        return +worst
