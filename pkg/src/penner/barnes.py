"""Barnes G function and companions (Clausen Cl2, Bernoulli numbers, Stirling tail).

Every quantity in this module exists in at least two independent forms so the
rest of the library can be cross-checked:

* exact factorial sums at integer arguments,
* the canonical infinite product (slow, works for any real argument),
* the Stirling-type asymptotic expansion with explicit truncation error,
* the reflection formula for negative arguments, built on Cl2.

All routines return ``mpmath.mpf`` values computed at the precision requested
through a :class:`PrecisionContext`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import AsymptoticRegime, DomainError, PoleOfLog, ZeroOfG

# zeta'(-1) = 1/12 - ln(Glaisher); fixed literal, 250 digits.
ZETA_PRIME_MINUS_ONE = (
    "-0.1654211437004509292139196602427806427640363803352017836665223063573596"
    "9966657717275952510033250875553837712018788489311221621191251179724836498"
    "7182258879359946190409353647531780827341622694584598894742863191811536766"
    "73944873081002959361712905843907198843"
)

_GUARD_DPS = 15


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) and a series-truncation cap."""

    digits: int = 50
    max_terms: int = 200_000

    def __post_init__(self):
        if self.digits < 30:
            raise DomainError("PrecisionContext.digits must be >= 30")
        if self.max_terms < 10:
            raise DomainError("PrecisionContext.max_terms must be >= 10")

    @property
    def dps(self) -> int:
        return self.digits + _GUARD_DPS


DEFAULT_CTX = PrecisionContext()


class BernoulliTable:
    """Exact rational Bernoulli numbers B_0, B_2, ..., B_{2K}.

    Odd-index entries beyond B_1 vanish and are not stored.
    """

    def __init__(self, max_index: int = 64):
        if max_index < 0 or max_index % 2:
            raise DomainError("max_index must be a nonnegative even integer")
        self.max_index = max_index
        self._values = {}
        for idx in range(0, max_index + 1, 2):
            p, q = mp.bernfrac(idx)
            self._values[idx] = Fraction(int(p), int(q))

    def fraction(self, index: int) -> Fraction:
        if index % 2 or index < 0:
            raise DomainError("Bernoulli index must be a nonnegative even integer")
        if index > self.max_index:
            p, q = mp.bernfrac(index)
            self._values[index] = Fraction(int(p), int(q))
            self.max_index = max(self.max_index, index)
        return self._values[index]

    @property
    def values(self) -> list[Fraction]:
        return [self._values[i] for i in sorted(self._values)]


BERNOULLI = BernoulliTable(64)


def _integer_tolerance(ctx: PrecisionContext) -> mpf:
    # "1e-12 scaled by the context": absolute distance below 10**(12-digits)
    # counts as sitting on the integer lattice.  Wide enough to catch values
    # constructed from double-precision literals at default precision, narrow
    # enough to let Kuijlaars-McLaughlin sequences approach poles to ~1e-60.
    return mpf(10) ** (12 - ctx.digits)


def distance_to_integer(x) -> tuple[mpf, int]:
    """Distance from x to the nearest integer, and that integer."""
    xf = mpf(x)
    nearest = int(mp.nint(xf))
    return abs(xf - nearest), nearest


def sin_pi_frac(x) -> tuple[mpf, mpf]:
    """(frac(x), |sin(pi x)|) without precision loss near integers.

    |sin(pi x)| is evaluated at min(frac, 1-frac); both reductions are exact
    floating subtractions, so arguments exponentially close to an integer
    keep their full relative accuracy.
    """
    xf = mpf(x)
    frac = xf - mp.floor(xf)
    fr = min(frac, 1 - frac)
    return frac, mp.sin(mp.pi * fr)


def log_barnes_g_integer(n: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln G(1+n) for integer n >= 1, as the exact sum of ln k!, k = 1..n-1.

    Ground truth for every other evaluator: no series truncation enters.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    with mp.workdps(ctx.dps):
        # sum_{k=1}^{n-1} ln k! = sum_{j=2}^{n-1} (n-j) ln j
        total = mp.zero
        for j in range(2, n):
            total += (n - j) * mp.ln(j)
        return +total


def log_barnes_g_product(z, terms: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln |G(1+z)| from the canonical product, truncated after ``terms`` factors.

    The truncation is followed by an algebraic tail estimate: the dropped
    factors expand into sum_{j>=3} (-1)^(j+1) z^j zeta(j-1, K+1)/j, summed
    until the increment is below working precision.  The result is accurate
    far beyond the bare product whenever terms >> |z|.
    """
    if terms > ctx.max_terms:
        raise DomainError(f"terms={terms} exceeds ctx.max_terms={ctx.max_terms}")
    with mp.workdps(ctx.dps):
        zz = mpf(z)
        dist, nearest = distance_to_integer(zz)
        if nearest <= -1 and dist < _integer_tolerance(ctx):
            raise ZeroOfG(f"G(1+z) vanishes at z = {nearest}")
        if terms < 2 * abs(zz) + 10:
            raise DomainError("terms must exceed 2|z| + 10 for a valid tail estimate")
        total = zz / 2 * mp.ln(2 * mp.pi) - (zz + zz * zz * (1 + mp.euler)) / 2
        for k in range(1, terms + 1):
            factor = 1 + zz / k
            if abs(factor) < _integer_tolerance(ctx):
                raise ZeroOfG(f"canonical-product factor vanishes at k = {k}")
            total += k * mp.ln(abs(factor)) - zz + zz * zz / (2 * k)
        # tail of the product over k > terms
        eps = mpf(10) ** (-ctx.dps - 3)
        zpow = zz * zz  # will hold z^j starting at j = 3
        for j in range(3, 2 * ctx.dps + 40):
            zpow *= zz
            incr = (-1) ** (j + 1) * zpow * mp.zeta(j - 1, terms + 1) / j
            total += incr
            if abs(incr) < eps * max(1, abs(total)):
                break
        return +total


def stirling_first_dropped(x, K: int) -> mpf:
    """Magnitude of the first term omitted by ``log_barnes_g_stirling(x, K)``."""
    m = max(K + 1, 2)
    b = BERNOULLI.fraction(2 * m)
    xx = mpf(x)
    return abs(mpf(b.numerator) / b.denominator / (2 * m * (2 * m - 2)) * xx ** (2 - 2 * m))


def stirling_optimal_order(x) -> int:
    """Largest K before the asymptotic tail terms start growing."""
    xx = mpf(x)
    prev = mp.inf
    m = 2
    while True:
        term = stirling_first_dropped(xx, m - 1)
        if term >= prev:
            return m - 2
        prev = term
        m += 1
        if m > 10_000:  # pragma: no cover - unreachable for x >= 5
            return m


def log_barnes_g_stirling(x, K: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Stirling-type expansion of ln G(1+x), truncated after the B_{2K} term.

    The expansion is asymptotic only (Poincare sense): use
    :func:`stirling_first_dropped` for the size of the first omitted term,
    which bounds the achievable accuracy at the given x.
    """
    with mp.workdps(ctx.dps):
        xx = mpf(x)
        if xx < 5:
            raise AsymptoticRegime(f"x = {xx} < 5 is below the asymptotic regime")
        if K > stirling_optimal_order(xx):
            raise DomainError(
                f"K={K} beyond optimal truncation order {stirling_optimal_order(xx)}"
            )
        total = (
            xx * xx / 2 * mp.ln(xx)
            - 3 * xx * xx / 4
            + xx / 2 * mp.ln(2 * mp.pi)
            - mp.ln(xx) / 12
            + mpf(ZETA_PRIME_MINUS_ONE)
        )
        for m in range(2, K + 1):
            b = BERNOULLI.fraction(2 * m)
            total += mpf(b.numerator) / b.denominator / (2 * m * (2 * m - 2)) * xx ** (2 - 2 * m)
        return +total


def _log_barnes_g_positive(x, ctx: PrecisionContext) -> mpf:
    """ln G(1+x) for x >= 0 at full context precision (internal workhorse).

    Uses the Stirling expansion at optimal truncation once the argument is
    large enough for the optimal error e^(-2 pi x) to beat the target, and
    lifts smaller arguments with ln G(1+x+1) = ln Gamma(1+x) + ln G(1+x),
    i.e. m log-gamma subtractions.
    """
    xx = mpf(x)
    if xx < 0:
        raise DomainError("internal evaluator requires x >= 0; use the reflection")
    if xx == 0:
        return mp.zero
    x_star = mpf("0.3665") * (ctx.dps + 5) + 1
    shift = int(max(0, mp.ceil(x_star - xx)))
    lifted = xx + shift
    kmax = stirling_optimal_order(lifted)
    total = log_barnes_g_stirling(lifted, kmax, ctx)
    for j in range(1, shift + 1):
        total -= mp.loggamma(xx + j)
    return total


def log_barnes_g(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln G(1+x) for real x >= 0, accurate to ctx.digits."""
    with mp.workdps(ctx.dps):
        return +_log_barnes_g_positive(mpf(x), ctx)


def _clausen2_reduced(theta, max_terms: int) -> mpf:
    """Cl2 on [0, pi] by the accelerated series around theta = 0.

    Cl2(t) = t - t ln t + sum_{k>=1} (-1)^(k+1) B_{2k} t^(2k+1) / (2k (2k)! (2k+1)),
    obtained by integrating the log-sine Taylor series; converges for t < 2 pi
    and geometrically (ratio (t/2pi)^2 <= 1/4) on [0, pi].
    """
    if theta == 0:
        return mp.zero
    total = theta - theta * mp.ln(theta)
    eps = mpf(10) ** (-mp.dps - 3)
    t2 = theta * theta
    tpow = theta  # theta^(2k+1) built incrementally
    fact = mpf(1)  # (2k)!
    for k in range(1, max_terms + 1):
        tpow *= t2
        fact *= (2 * k - 1) * (2 * k)
        term = (-1) ** (k + 1) * mp.bernoulli(2 * k) * tpow / (2 * k * fact * (2 * k + 1))
        total += term
        if abs(term) < eps * max(1, abs(total)):
            return total
    raise DomainError("Clausen series did not converge within ctx.max_terms terms")


def clausen2_of_fraction(frac, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Cl2(2 pi f) for f in [0, 1), avoiding any large-argument reduction."""
    with mp.workdps(ctx.dps):
        f = mpf(frac)
        if f < 0 or f >= 1:
            raise DomainError("fraction must lie in [0, 1)")
        if f == 0:
            return mp.zero
        if f > mpf(1) / 2:
            return -_clausen2_reduced(2 * mp.pi * (1 - f), ctx.max_terms)
        return +_clausen2_reduced(2 * mp.pi * f, ctx.max_terms)


def clausen2(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Clausen function Cl2(x) = sum_m sin(m x)/m^2 for any real x."""
    xf = mpf(x)
    # reduce mod 2 pi at extra precision so huge arguments stay exact
    extra = int(mp.mag(xf)) if xf else 0
    with mp.workdps(DEFAULT_CTX.dps + max(0, extra)):
        with mp.workdps(ctx.dps + max(0, extra)):
            f = mpf(x) / (2 * mp.pi)
            f = f - mp.floor(f)
        return +clausen2_of_fraction(f, ctx)


def clausen2_quadrature(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Cl2 by direct numerical quadrature of -ln|2 sin(t/2)|; slow oracle."""
    with mp.workdps(ctx.dps):
        xf = mpf(x)
        if xf < 0 or xf > 2 * mp.pi:
            raise DomainError("quadrature oracle expects x in [0, 2 pi]")
        f = lambda t: -mp.ln(abs(2 * mp.sin(t / 2)))
        pieces = [p for p in (0, mp.pi, xf) if p <= xf]
        if pieces[-1] != xf:
            pieces.append(xf)
        return +mp.quad(f, sorted(set(pieces)))


def log_abs_barnes_g_reflected(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """ln |G(1-x)| for x > 0 via the reflection formula.

    ln|G(1-x)| = ln G(1+x) + x ln|sin(pi x)/pi| + Cl2(2 pi x) / (2 pi).

    Raises :class:`PoleOfLog` when x sits on a positive integer, where
    G(1-x) = 0; the caller decides whether that is the l = 0 degenerate phase.
    """
    with mp.workdps(ctx.dps):
        xx = mpf(x)
        if xx <= 0:
            raise DomainError("reflection formula requires x > 0")
        frac, sin_abs = sin_pi_frac(xx)
        if min(frac, 1 - frac) < _integer_tolerance(ctx) and xx > mpf(1) / 2:
            raise PoleOfLog(f"G(1-x) vanishes: x = {xx} sits on a positive integer")
        return +(
            _log_barnes_g_positive(xx, ctx)
            + xx * (mp.ln(sin_abs) - mp.ln(mp.pi))
            + clausen2_of_fraction(frac, ctx) / (2 * mp.pi)
        )
