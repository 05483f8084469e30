"""Limiting eigenvalue supports, densities, and Coulomb-gas electrostatics.

Geometry lives in the plane of the rescaled-degree polynomial zeros (the
"zero plane"); eigenvalue-plane quantities are obtained by z -> t z and
rho -> rho/t via ``to_penner_plane``.  With A = -1/t and endpoints
a_pm = A + 2 +- 2 sqrt(A+1), everything derives from

    Phi(z) = int_{a_-}^{z} sqrt((u - a_-)(u - a_+))/u du,

whose real part has the closed form (single-valued off the cut [a_-, a_+])

    Re Phi = Re R - (A+2) ln|z - (A+2) + R| - |A| ln|4(A+1) z / (A^2 - (A+2) z - |A| R)|
             + ln(4|A+1|),

with R the principal-product square root, negative on (0, a_-).  Level
curves Re Phi = -ln l are traced by a predictor-corrector walker and all
densities and electrostatic integrals are evaluated on arclength splines
with double-exponential quadrature (endpoint square roots and the log
kernel are handled by node clustering and singularity splitting).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (
    DomainError,
    LevelNotClosed,
    OriginSingular,
    SingularPhase,
    TraceFailure,
)

TWO_PI = 2 * math.pi


class Regime(enum.Enum):
    WEAK_ARC = "WeakArc"
    SZEGO_CURVE = "SzegoCurve"
    STRONG_LOOP_INTERVAL = "StrongLoopInterval"
    STRONG_DELTA_INTERVAL = "StrongDeltaInterval"


def endpoints(A: float) -> tuple[complex, complex]:
    """Support endpoints a_pm = A + 2 +- 2 sqrt(A+1), principal root.

    For A < -1 the pair is complex conjugate with a_- in the lower half
    plane; at A = -1 both collapse to 1 (the curve closes).
    """
    if not math.isfinite(A):
        raise DomainError("A must be finite")
    root = cmath.sqrt(complex(A + 1))
    am = complex(A + 2) - 2 * root
    ap = complex(A + 2) + 2 * root
    if am.imag > 0:  # keep a_- in the lower half plane
        am, ap = ap, am
    return am, ap


def _sqrt_pair(A: float, z):
    """R(z) = sqrt(z - a_-) sqrt(z - a_+): cut on [a_-, a_+], ~ +z at +inf."""
    am, ap = endpoints(A)
    return np.sqrt(np.asarray(z, dtype=complex) - am) * np.sqrt(
        np.asarray(z, dtype=complex) - ap
    )


def density(A: float, z) -> float:
    """Zero density with respect to arclength: |sqrt((z-a_-)(z-a_+))/z|/(2 pi)."""
    zz = complex(z)
    if zz == 0:
        raise OriginSingular("density formula is singular at z = 0")
    return abs(complex(_sqrt_pair(A, zz))) / (TWO_PI * abs(zz))


def re_phi(A: float, z):
    """Re Phi(z) by the closed form; vectorized over z (off the cut).

    The two log arguments w1 = z - b + R and w2 = (A^2 - b z + |A| R)/z each
    have a rationalized partner via w (z - b - R) = 4(A+1) respectively
    w_+ w_- = 4(A+1) z^2; whichever form avoids catastrophic cancellation is
    chosen per point (the cancelling side swaps between the two phases).
    """
    zz = np.asarray(z, dtype=complex)
    b = A + 2.0
    absA = abs(A)
    four_a1 = 4 * (A + 1)
    R = _sqrt_pair(A, zz)
    log_abs_z = np.log(np.abs(zz))

    w1 = zz - b + R
    w1_alt = zz - b - R
    w1_scale = np.abs(zz - b) + np.abs(R)
    use_alt1 = np.abs(w1) < 0.05 * w1_scale
    log_w1 = np.where(
        use_alt1,
        math.log(abs(four_a1)) - np.log(np.abs(np.where(w1_alt == 0, 1.0, w1_alt))),
        np.log(np.abs(np.where(w1 == 0, 1.0, w1))),
    )

    core = A * A - b * zz
    d_plus = core + absA * R
    d_minus = core - absA * R
    d_scale = np.abs(core) + absA * np.abs(R)
    use_alt2 = np.abs(d_plus) < 0.05 * d_scale
    log_d_plus = np.where(
        use_alt2,
        math.log(abs(four_a1))
        + 2 * log_abs_z
        - np.log(np.abs(np.where(d_minus == 0, 1.0, d_minus))),
        np.log(np.abs(np.where(d_plus == 0, 1.0, d_plus))),
    )

    out = (
        np.real(R)
        - b * log_w1
        - absA * (log_d_plus - log_abs_z)
        + math.log(abs(four_a1))
    )
    return out if out.shape else float(out)


def _phi_prime(A: float, z: complex) -> complex:
    return complex(_sqrt_pair(A, z)) / z


def re_phi_quadrature(A: float, z: complex) -> float:
    """Re Phi by direct path quadrature from a_- (validation oracle).

    Integrates sqrt((u-a_-)(u-a_+))/u from a_- to z along a two-segment
    polyline routed through a far-left waypoint, keeping clear of the cut
    and of the origin pole; double-exponential nodes absorb the endpoint
    square root.  Re of the integral is path-independent off the cut.
    """
    am, ap = endpoints(A)
    zz = complex(z)
    big = 3 * abs(ap) + 3 * abs(zz) + 3
    if A > -1:
        # real endpoints, cut on [a_-, a_+]: leave a_- vertically into the
        # target's half plane, then straight to the target
        side = 1.0 if zz.imag >= 0 else -1.0
        ways = [complex(am.real, side * big)]
    else:
        # conjugate endpoints: the product root is continuous in the strip
        # |Im z| < |Im a_-| (cuts run left from a_- and a_+); route far left
        # on the real axis.  Valid for targets inside the strip (the arc).
        ways = [complex(-big, 0.0)]
    x, w = _ts_nodes(1.0 / 64)
    total = 0.0
    path = [am, *ways, zz]
    for za, zb in zip(path[:-1], path[1:]):
        u = za + (zb - za) * (x + 1) / 2
        vals = _sqrt_pair(A, u) / u * (zb - za) / 2
        total += float(np.sum(w * np.real(vals)))
    return total


# ---------------------------------------------------------------------------
# double-exponential nodes (doubles)
# ---------------------------------------------------------------------------

_TS_CACHE: dict = {}


def _ts_nodes(h: float):
    """tanh-sinh nodes/weights on (-1, 1) at step h, cached."""
    if h not in _TS_CACHE:
        kmax = int(math.asinh(2 * 40 / math.pi) / h) + 1
        k = np.arange(-kmax, kmax + 1)
        u = math.pi / 2 * np.sinh(k * h)
        x = np.tanh(u)
        w = h * math.pi / 2 * np.cosh(k * h) / np.cosh(u) ** 2
        keep = (1 - np.abs(x)) > 1e-17
        _TS_CACHE[h] = (x[keep], w[keep])
    return _TS_CACHE[h]


def _ts_integrate(f, a: float, b: float, h: float = 1.0 / 32) -> float:
    """integral_a^b f(s) ds with f vectorized; endpoint singularities allowed."""
    if b <= a:
        return 0.0
    x, w = _ts_nodes(h)
    s = a + (b - a) * (x + 1) / 2
    return float(np.sum(w * f(s)) * (b - a) / 2)


# ---------------------------------------------------------------------------
# support description and curve pieces
# ---------------------------------------------------------------------------


@dataclass
class SupportDescription:
    """Limiting support of the eigenvalue (zero) density.

    The polyline samples are ordered; loops wrap implicitly (first point is
    not repeated).  ``plane`` records whether geometry is in the zero plane
    ('laguerre') or scaled by t to the eigenvalue plane ('penner').
    """

    regime: Regime
    A: float
    t: float
    l: float | None
    a_minus: complex
    a_plus: complex
    arc_samples: np.ndarray | None = None  # weak arc / Szego curve
    loop_samples: np.ndarray | None = None  # strong-phase loop around 0
    interval: tuple[float, float] | None = None
    point_mass: float | None = None
    plane: str = "laguerre"

    def to_penner_plane(self) -> "SupportDescription":
        """Scale geometry by t (densities scale by 1/t implicitly)."""
        if self.plane == "penner":
            return self
        t = self.t
        return replace(
            self,
            a_minus=self.a_minus * t,
            a_plus=self.a_plus * t,
            arc_samples=None if self.arc_samples is None else self.arc_samples * t,
            loop_samples=None if self.loop_samples is None else self.loop_samples * t,
            interval=None if self.interval is None else (self.interval[0] * t, self.interval[1] * t),
            plane="penner",
        )

    def density_at(self, z) -> float:
        """Unit-normalized density on the support, in this plane's coordinates."""
        scale = self.t if self.plane == "penner" else 1.0
        return density(self.A, complex(z) / scale) / scale

    def pieces(self) -> list["_Piece"]:
        out = []
        if self.arc_samples is not None:
            out.append(_Piece(self.arc_samples, closed=False, support=self))
        if self.loop_samples is not None:
            pts = self.loop_samples
            if self.l == 1.0:
                # the loop touches the interval at a_-: rotate so the corner
                # is the curve boundary and integrate it as an open piece
                # (a periodic spline would smear the 120-degree corner)
                k = int(np.argmin(np.abs(pts - self.a_minus)))
                pts = np.append(np.roll(pts, -k), pts[k])
                out.append(_Piece(pts, closed=False, support=self))
            else:
                out.append(_Piece(pts, closed=True, support=self))
        if self.interval is not None:
            aa, bb = self.interval
            pts = aa + (bb - aa) * np.linspace(0.0, 1.0, 1025) + 0j
            out.append(_Piece(pts, closed=False, support=self))
        return out


class _Piece:
    """A support component as an arclength-parametrized spline."""

    def __init__(self, points: np.ndarray, closed: bool, support: SupportDescription):
        pts = np.asarray(points, dtype=complex)
        if closed:
            pts = np.append(pts, pts[0])
        seg = np.abs(np.diff(pts))
        s = np.concatenate([[0.0], np.cumsum(seg)])
        keep = np.concatenate([[True], seg > 1e-15])
        pts, s = pts[keep], s[keep]
        self.closed = closed
        self.support = support
        self.length = float(s[-1])
        bc = "periodic" if closed else "not-a-knot"
        self._sx = CubicSpline(s, pts.real, bc_type=bc)
        self._sy = CubicSpline(s, pts.imag, bc_type=bc)

    def at(self, s):
        ss = np.mod(s, self.length) if self.closed else np.clip(s, 0.0, self.length)
        return self._sx(ss) + 1j * self._sy(ss)

    def rho(self, s):
        z = np.atleast_1d(self.at(s))
        scale = self.support.t if self.support.plane == "penner" else 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.abs(_sqrt_pair(self.support.A, z / scale)) / (
                TWO_PI * np.abs(z)
            )
        return np.where(np.abs(z) > 0, out, 0.0)

    def mass(self, h: float = 1.0 / 32) -> float:
        if self.closed:
            s = np.linspace(0.0, self.length, 4097)[:-1]
            return float(np.mean(self.rho(s)) * self.length)
        return _ts_integrate(self.rho, 0.0, self.length, h)


# ---------------------------------------------------------------------------
# level-curve tracing
# ---------------------------------------------------------------------------


def _corrector(A: float, level: float, z: complex, tol: float = 1e-12) -> complex:
    for _ in range(12):
        r = level - float(re_phi(A, z))
        if abs(r) < tol:
            return z
        dp = _phi_prime(A, z)
        mag = abs(dp)
        if mag < 1e-13:
            raise TraceFailure(f"level corrector stalled near branch point at {z}")
        z = z + (dp.conjugate() / mag) * (r / mag)
    raise TraceFailure(f"level corrector did not converge at {z}")


def _trace_level(A, level, z0, stop, h0, h_min=1e-9, max_steps=200_000):
    """Predictor-corrector walk along Re Phi = level starting upward from z0."""
    pts = [complex(z0)]
    z = complex(z0)
    tan_prev = 1j
    h = h0
    for _ in range(max_steps):
        dp = _phi_prime(A, z)
        tan = 1j * dp.conjugate() / abs(dp)
        if tan.real * tan_prev.real + tan.imag * tan_prev.imag < 0:
            tan = -tan
        zm = z + 0.5 * h * tan
        dpm = _phi_prime(A, zm)
        tanm = 1j * dpm.conjugate() / abs(dpm)
        if tanm.real * tan.real + tanm.imag * tan.imag < 0:
            tanm = -tanm
        try:
            z_new = _corrector(A, level, z + h * tanm)
        except TraceFailure:
            if h / 2 < h_min:
                raise
            h /= 2
            continue
        corr = abs(z_new - (z + h * tanm))
        turn = abs(tanm - tan)
        if (corr > 0.2 * h or turn > 0.5) and h / 2 >= h_min:
            h /= 2
            continue
        pts.append(z_new)
        tan_prev = tanm
        z = z_new
        verdict = stop(z, pts, h)
        if verdict:
            return pts
        if corr < 0.01 * h and turn < 0.1:
            h = min(h * 1.3, h0)
    raise TraceFailure("level tracing exceeded the step budget")


def _resample(points, n, A, level, correct=True, skip_ends=True):
    """Uniform-arclength resampling with on-level re-correction."""
    pts = np.asarray(points, dtype=complex)
    seg = np.abs(np.diff(pts))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, s[-1], n)
    out = np.interp(targets, s, pts.real) + 1j * np.interp(targets, s, pts.imag)
    if correct:
        lo = 1 if skip_ends else 0
        hi = len(out) - 1 if skip_ends else len(out)
        for i in range(lo, hi):
            try:
                out[i] = _corrector(A, level, complex(out[i]))
            except TraceFailure:
                pass  # keep the interpolated point near branch points
    return out


def _axis_crossing(A: float, level: float, lo: float, hi: float) -> float:
    """Root of re_phi(A, x) = level for x in (lo, hi) on the real axis."""
    f = lambda x: float(re_phi(A, complex(x))) - level
    return brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16)


def _negative_axis_seed(A: float, level: float) -> float:
    """The crossing of Re Phi = level on the negative real axis.

    Re Phi is monotone along the negative axis in both phases (it falls into
    the log sink at the origin for A < -1 and climbs out of it for A > -1),
    so a geometric scan brackets the unique crossing.
    """
    scale = abs(endpoints(A)[1])
    grid = [scale * 10.0**e for e in np.linspace(-14, 10, 241)]
    f_prev = float(re_phi(A, complex(-grid[0]))) - level
    for x_prev, x in zip(grid[:-1], grid[1:]):
        f_cur = float(re_phi(A, complex(-x))) - level
        if f_prev == 0.0:
            return x_prev
        if f_prev * f_cur < 0:
            return -_axis_crossing(A, level, -x, -x_prev)
        f_prev = f_cur
    raise TraceFailure("no level crossing found on the negative axis")


def weak_arc(t: float, samples: int = 2048) -> SupportDescription:
    """Open-arc support for 0 < t < 1: the level Re Phi = 0 from a_- to a_+.

    Traced through the left of the origin and closed under conjugation; the
    arc degenerates to the Szego curve as t -> 1.
    """
    if not 0 < t < 1:
        raise DomainError("weak phase requires 0 < t < 1")
    A = -1.0 / t
    am, ap = endpoints(A)
    x_seed = _negative_axis_seed(A, 0.0)
    gap = abs(ap - am)
    h0 = max(abs(x_seed), gap, 0.05) / max(64, samples // 8)

    def stop(z, pts, h):
        return abs(z - ap) < max(2.5 * h, 4e-9)

    upper = _trace_level(A, 0.0, complex(-x_seed, 0.0), stop, h0)
    upper.append(ap)
    upper_arr = _resample(upper, samples // 2 + 1, A, 0.0)
    upper_arr[-1] = ap
    lower = np.conj(upper_arr[1:])[::-1]
    arc = np.concatenate([lower, upper_arr])  # a_- ... -x_seed ... a_+
    return SupportDescription(
        regime=Regime.WEAK_ARC,
        A=A,
        t=t,
        l=None,
        a_minus=am,
        a_plus=ap,
        arc_samples=arc,
    )


def szego_curve(samples: int = 2048) -> np.ndarray:
    """Points of |z e^(1-z)| = 1 with |z| <= 1, by radial root-solving."""
    if samples < 8:
        raise DomainError("need at least 8 samples")
    out = np.empty(samples, dtype=complex)
    for j, phi in enumerate(np.linspace(0.0, TWO_PI, samples, endpoint=False)):
        c = math.cos(phi)
        f = lambda r: math.log(r) + 1 - r * c
        if abs(f(1.0)) < 1e-15:
            r = 1.0
        else:
            r = brentq(f, 1e-12, 1.0, xtol=1e-15)
        out[j] = r * cmath.exp(1j * phi)
    return out


def strong_loop(t: float, l: float, samples: int = 2048) -> SupportDescription:
    """Loop-plus-interval support for t > 1, 0 < l <= 1.

    The loop is the closed level curve Re Phi = -ln l around the origin; for
    l = 1 it touches the interval at a_-.  Points are ordered with winding
    number +1 about the origin.
    """
    if t <= 1:
        raise DomainError("strong phase requires t > 1")
    if not 0 < l <= 1:
        raise DomainError("l must lie in (0, 1] (l = 0 is the delta phase)")
    A = -1.0 / t
    am, ap = endpoints(A)
    am_r, ap_r = am.real, ap.real
    level = -math.log(l)
    x_seed = _negative_axis_seed(A, level)
    if l == 1.0:
        x_right = am_r
    else:
        x_right = _axis_crossing(A, level, 1e-12 * am_r if am_r > 1e-10 else 1e-300, am_r)
    h0 = (x_seed + abs(x_right)) / max(64, samples // 8)

    def stop(z, pts, h):
        if len(pts) < 4:
            return False
        return z.imag <= 0 or abs(z - am) < max(2.0 * h, 4e-9)

    upper = _trace_level(A, level, complex(-x_seed, 0.0), stop, h0)
    if upper[-1].imag < 0:
        # refine the axis crossing between the last two points
        upper = upper[:-1]
    upper.append(complex(x_right, 0.0))
    upper_arr = _resample(upper, samples // 2 + 1, A, level)
    upper_arr[0] = complex(-x_seed, 0.0)
    upper_arr[-1] = complex(x_right, 0.0)
    lower = np.conj(upper_arr[1:-1])[::-1]
    loop = np.concatenate([upper_arr, lower])[::-1]  # winding +1 about 0
    residual = np.max(np.abs(re_phi(A, loop) - level))
    if residual > 1e-7:
        raise LevelNotClosed(f"loop level residual {residual:.2e} too large")
    return SupportDescription(
        regime=Regime.STRONG_LOOP_INTERVAL,
        A=A,
        t=t,
        l=l,
        a_minus=am,
        a_plus=ap,
        loop_samples=loop,
        interval=(am_r, ap_r),
    )


def support_for(t: float, l: float | None = None, samples: int = 2048) -> SupportDescription:
    """Dispatch on (t, l): weak arc, Szego curve, loop+interval, or delta+interval."""
    if t <= 0:
        raise DomainError("t must be positive")
    if t < 1:
        return weak_arc(t, samples)
    if t == 1:
        am, ap = endpoints(-1.0 + 0.0)  # degenerate double point at 1
        return SupportDescription(
            regime=Regime.SZEGO_CURVE,
            A=-1.0,
            t=1.0,
            l=l,
            a_minus=am,
            a_plus=ap,
            arc_samples=szego_curve(samples),
        )
    if l is None:
        raise DomainError("the strong phase requires l")
    if l == 0:
        A = -1.0 / t
        am, ap = endpoints(A)
        return SupportDescription(
            regime=Regime.STRONG_DELTA_INTERVAL,
            A=A,
            t=t,
            l=0.0,
            a_minus=am,
            a_plus=ap,
            interval=(am.real, ap.real),
            point_mass=abs(A),
        )
    return strong_loop(t, l, samples)


def winding_number(points: np.ndarray, z0: complex = 0j) -> int:
    """Discrete winding number of an ordered closed polyline about z0."""
    pts = np.asarray(points, dtype=complex) - z0
    ang = np.angle(np.roll(pts, -1) / pts)
    return int(round(float(np.sum(ang)) / TWO_PI))


# ---------------------------------------------------------------------------
# masses, energies, effective potential
# ---------------------------------------------------------------------------


@dataclass
class FillingFractions:
    loop_fraction: float
    interval_fraction: float


def support_mass(sd: SupportDescription) -> dict:
    """Density mass per component; total must be 1 for a valid support."""
    out = {}
    if sd.point_mass is not None:
        out["point"] = sd.point_mass
    for piece, name in zip(sd.pieces(), _piece_names(sd)):
        out[name] = piece.mass()
    out["total"] = float(sum(out.values()))
    return out


def _piece_names(sd: SupportDescription) -> list[str]:
    names = []
    if sd.arc_samples is not None:
        names.append("arc")
    if sd.loop_samples is not None:
        names.append("loop")
    if sd.interval is not None:
        names.append("interval")
    return names


def filling_fractions(sd: SupportDescription) -> FillingFractions:
    """Loop and interval masses in the strong phase (contract: |A| and 1-|A|)."""
    if sd.regime is Regime.STRONG_DELTA_INTERVAL:
        interval = sd.pieces()[0].mass()
        return FillingFractions(loop_fraction=float(sd.point_mass), interval_fraction=interval)
    if sd.regime is not Regime.STRONG_LOOP_INTERVAL:
        raise DomainError("filling fractions are defined in the strong phase")
    masses = support_mass(sd)
    return FillingFractions(
        loop_fraction=masses["loop"], interval_fraction=masses["interval"]
    )


def coulomb_energy_closed(t: float) -> float:
    """Closed-form electrostatic energy; t = 1 continues to the limit 0."""
    if t <= 0:
        raise DomainError("t must be positive")
    if t == 1:
        return 0.0
    return (
        -0.5 * math.log(t)
        - (t - 1) ** 2 / (2 * t * t) * math.log(abs(t - 1))
        + 1.5 * (1 - 1 / t)
    )


def _external_potential(z):
    return np.real(z) + np.log(np.abs(z))


def _log_layer(piece: _Piece, z0: complex, s0: float | None, h: float = 1.0 / 32) -> float:
    """int ln|z0 - z(s')| rho(s') ds' over one piece, split at an on-piece target."""

    def f(s):
        d = np.abs(complex(z0) - piece.at(s))
        # nodes that round onto the singular endpoint carry weight ~1e-17
        # against a log divergence; their true contribution is negligible
        with np.errstate(divide="ignore"):
            logd = np.where(d > 0, np.log(np.where(d > 0, d, 1.0)), 0.0)
        return logd * piece.rho(s)

    L = piece.length
    if s0 is None:
        if piece.closed:
            # off-piece target: smooth periodic integrand
            s = np.linspace(0.0, L, 4097)[:-1]
            return float(np.mean(f(s)) * L)
        return _ts_integrate(f, 0.0, L, h)
    if piece.closed:
        return _ts_integrate(f, s0, s0 + L, h)
    return _ts_integrate(f, 0.0, s0, h) + _ts_integrate(f, s0, L, h)


def coulomb_energy(t: float, sd: SupportDescription, h: float = 1.0 / 32) -> float:
    """Electrostatic energy (1/t) int V rho |dz| - double-int ln|z-z'| rho rho.

    Evaluated in the eigenvalue plane with V(z) = Re z + ln|z|; the same-piece
    log singularity is handled by splitting the inner integral at the outer
    node.  Contract: -(1/2) ln t - ((t-1)^2/2t^2) ln|t-1| + (3/2)(1 - 1/t),
    independent of l.
    """
    if sd.regime is Regime.STRONG_DELTA_INTERVAL:
        raise SingularPhase("the delta-phase energy is defined only as a limit")
    pd = sd.to_penner_plane()
    pieces = pd.pieces()

    external = sum(
        _ts_integrate(lambda s: _external_potential(p.at(s)) * p.rho(s), 0.0, p.length, h)
        if not p.closed
        else float(
            np.mean(
                _external_potential(p.at(np.linspace(0, p.length, 4097)[:-1]))
                * p.rho(np.linspace(0, p.length, 4097)[:-1])
            )
            * p.length
        )
        for p in pieces
    )

    double = 0.0
    for pa in pieces:
        for pb in pieces:
            same = pa is pb

            def outer(s_arr):
                vals = np.empty_like(np.asarray(s_arr, dtype=float))
                for i, s in enumerate(np.atleast_1d(s_arr)):
                    z0 = complex(pa.at(s))
                    vals[i] = _log_layer(pb, z0, s if same else None, h)
                return vals * pa.rho(s_arr)

            if pa.closed:
                s = np.linspace(0.0, pa.length, 513)[:-1]
                double += float(np.mean(outer(s)) * pa.length)
            else:
                double += _ts_integrate(outer, 0.0, pa.length, 1.0 / 16)
    return float(external / t - double)


@dataclass
class EffectivePotentialReport:
    gap: float
    v_eff_loop: float
    v_eff_interval: float
    loop_stdev: float
    interval_stdev: float


def effective_potential_profile(
    t: float, l: float, sd: SupportDescription, targets: int = 12
) -> EffectivePotentialReport:
    """V_eff = V - 2t * (log-layer) on both strong-phase pieces.

    At equilibrium V_eff is constant on each piece with
    V_eff|interval = (2t-1) - t ln t - (t-1) ln(t-1) and the loop sitting
    -t ln l higher.
    """
    if sd.regime is not Regime.STRONG_LOOP_INTERVAL:
        raise DomainError("effective potential profile needs the loop+interval phase")
    pd = sd.to_penner_plane()
    loop, interval = pd.pieces()

    def v_eff_at(piece, s):
        z0 = complex(piece.at(s))
        u = sum(
            _log_layer(pb, z0, s if pb is piece else None) for pb in (loop, interval)
        )
        return float(_external_potential(np.asarray(z0))) - 2 * t * u

    loop_s = np.linspace(0.0, loop.length, targets + 1)[:-1]
    vals_loop = np.array([v_eff_at(loop, s) for s in loop_s])
    # interior interval targets, clustered away from the endpoints
    theta = np.linspace(0.35, math.pi - 0.35, targets)
    mid = (interval.at(0) + interval.at(interval.length)) / 2
    rad = (interval.at(interval.length) - interval.at(0)) / 2
    xs = np.real(mid + rad * np.cos(theta))
    s_int = np.array([float(x - interval.at(0).real) for x in xs])
    vals_int = np.array([v_eff_at(interval, s) for s in np.sort(s_int)])
    return EffectivePotentialReport(
        gap=float(np.mean(vals_loop) - np.mean(vals_int)),
        v_eff_loop=float(np.mean(vals_loop)),
        v_eff_interval=float(np.mean(vals_int)),
        loop_stdev=float(np.std(vals_loop)),
        interval_stdev=float(np.std(vals_int)),
    )


def effective_potential_gap(t: float, l: float, sd: SupportDescription) -> float:
    """V_eff|loop - V_eff|interval; contract: -t ln l."""
    return effective_potential_profile(t, l, sd).gap


# ---------------------------------------------------------------------------
# finite-n cloud versus the limiting support
# ---------------------------------------------------------------------------


@dataclass
class CloudComparison:
    max_dist: float
    mean_dist: float
    loop_count_fraction: float


def _point_polyline_distance(points: np.ndarray, poly: np.ndarray, closed: bool):
    """Distance from each point to an ordered polyline (vectorized)."""
    a = poly if not closed else np.append(poly, poly[0])
    seg_a = a[:-1]
    seg_d = a[1:] - a[:-1]
    seg_len2 = np.abs(seg_d) ** 2
    seg_len2[seg_len2 == 0] = 1.0
    p = points[:, None]
    u = np.clip(((p - seg_a) * np.conj(seg_d)).real / seg_len2, 0.0, 1.0)
    dist = np.abs(p - (seg_a + u * seg_d))
    return dist.min(axis=1)


def cloud_vs_theory(scaled_points, sd: SupportDescription, dense: int = 4096) -> CloudComparison:
    """One-sided distances from finite-n saddle points to the support.

    Points must be in the same plane as sd (use to_penner_plane for scaled
    saddles).  The loop fraction counts points whose nearest piece is the
    loop (or the origin point mass in the delta phase).
    """
    pts = np.asarray([complex(z) for z in scaled_points])
    dists = []
    labels = []
    if sd.arc_samples is not None:
        p = _Piece(sd.arc_samples, closed=False, support=sd)
        s = np.linspace(0, p.length, dense)
        dists.append(_point_polyline_distance(pts, np.asarray(p.at(s)), False))
        labels.append("arc")
    if sd.loop_samples is not None:
        p = _Piece(sd.loop_samples, closed=True, support=sd)
        s = np.linspace(0, p.length, dense + 1)[:-1]
        dists.append(_point_polyline_distance(pts, np.asarray(p.at(s)), True))
        labels.append("loop")
    if sd.point_mass is not None:
        dists.append(np.abs(pts))
        labels.append("loop")  # the shrunken loop: the origin condensate
    if sd.interval is not None:
        aa, bb = sd.interval
        poly = np.array([complex(aa), complex(bb)])
        dists.append(_point_polyline_distance(pts, poly, False))
        labels.append("interval")
    dmat = np.vstack(dists)
    nearest = dmat.min(axis=0)
    which = dmat.argmin(axis=0)
    loop_idx = [i for i, lab in enumerate(labels) if lab == "loop"]
    loop_frac = float(np.isin(which, loop_idx).mean()) if loop_idx else 0.0
    return CloudComparison(
        max_dist=float(nearest.max()),
        mean_dist=float(nearest.mean()),
        loop_count_fraction=loop_frac,
    )


def hausdorff_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two complex sample sets."""
    pa = np.asarray(a, dtype=complex)
    pb = np.asarray(b, dtype=complex)
    d = np.abs(pa[:, None] - pb[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
