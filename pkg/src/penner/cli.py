"""Command-line front end: sweeps, figure data, and the verification suites.

Output is deterministic: fixed column order, fixed 17-significant-digit
formatting, no timestamps.  Rows that hit poles of the free energy are
flagged in a status column and never abort a sweep.

Exit codes: 0 success, 1 verification failure, 2 bad arguments,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import asymptotics, laguerre, partition, spectral, verify
from .asymptotics import CouplingSequence, PhasePoint
from .barnes import PrecisionContext
from .errors import CriticalT, Degenerate, PennerError, SingularPhase, SinZero

DEFAULT_DIGITS = 50


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _parse_exact(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:steps, got {text!r}")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi, steps


def _write_rows(path, header, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        payload = buf.getvalue()
    elif fmt == "json":
        payload = json.dumps(
            [dict(zip(header, row)) for row in rows], indent=2, sort_keys=False
        ) + "\n"
    else:
        raise ValueError(f"unsupported tabular format {fmt!r}")
    _emit(path, payload)
    return 0


def _emit(path, payload: str):
    if path in (None, "-"):
        sys.stdout.write(payload)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(payload)


def _svg_document(groups, width=640, height=640) -> str:
    """Static scatter/polyline SVG; groups = [(kind, points, color)]."""
    pts = np.concatenate([np.asarray(p, dtype=complex) for _, p, _ in groups])
    x0, x1 = float(pts.real.min()), float(pts.real.max())
    y0, y1 = float(pts.imag.min()), float(pts.imag.max())
    pad = 0.08 * max(x1 - x0, y1 - y0, 1e-9)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    sx = width / (x1 - x0)
    sy = height / (y1 - y0)

    def to_px(z):
        return (float((z.real - x0) * sx), float(height - (z.imag - y0) * sy))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for kind, points, color in groups:
        arr = np.asarray(points, dtype=complex)
        if kind == "polyline":
            coords = " ".join(f"{px:.3f},{py:.3f}" for px, py in map(to_px, arr))
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>'
            )
        else:
            for z in arr:
                px, py = to_px(z)
                parts.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2.5" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _digits(args) -> int:
    if args.digits is not None:
        return args.digits
    return int(os.environ.get("PENNER_DIGITS", DEFAULT_DIGITS))


def _coupling_from_args(args) -> CouplingSequence:
    if getattr(args, "thooft", False) or args.l is None:
        return CouplingSequence.thooft(args.t)
    return CouplingSequence.km_family(args.t, args.l, args.c)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_free_energy(args) -> int:
    ctx = PrecisionContext(digits=max(30, _digits(args)))
    header = ["n", "g_n", "exact", "osc", "per", "residual", "planar_limit", "status"]
    rows = []
    summary = []
    if args.g is not None:
        if args.n is None:
            raise argparse.ArgumentTypeError("--g requires --n")
        fe = partition.free_energy_exact(args.n, args.g, ctx)
        rows.append([args.n, _fmt(fe.g), _fmt(fe.value), "", "", "", "", "ok"])
    else:
        if args.t is None:
            raise argparse.ArgumentTypeError("need --t (with optional --l/--c) or --g")
        seq = _coupling_from_args(args)
        planar = ""
        if seq.kind.value == "km-family" and seq.l > 0:
            try:
                planar = asymptotics.planar_free_energy(
                    PhasePoint(seq.t, seq.l), ctx
                )
            except (CriticalT, SingularPhase):
                planar = ""
        for n in range(1, args.n_max + 1, args.stride):
            g_n = seq.g(n)
            try:
                bd = asymptotics.decompose_free_energy(n, g_n, args.K, ctx)
                rows.append(
                    [
                        n,
                        _fmt(bd.g_n),
                        _fmt(bd.exact),
                        _fmt(bd.osc),
                        _fmt(bd.per),
                        _fmt(bd.residual),
                        _fmt(planar) if planar != "" else "",
                        "ok",
                    ]
                )
            except (SinZero, CriticalT, PennerError) as exc:
                rows.append([n, _fmt(g_n), "", "", "", "", "", type(exc).__name__])
        if args.n_max >= 100:
            est = asymptotics.km_limit_estimate(seq, args.n_max, ctx)
            verdict = "converged" if est.converged else "not converged"
            summary.append(f"# l-limit: {verdict} (l_hat={_fmt(est.l_hat)}, t_hat={_fmt(est.t_hat)})")
    code = _write_rows(args.output, header, rows, args.format)
    for line in summary:
        sys.stdout.write(line + "\n")
    return code


def _resolve_cloud_coupling(args):
    if args.g is not None:
        return Fraction(args.g), 1 / Fraction(args.g)
    if args.t is None:
        raise argparse.ArgumentTypeError("need --t or --g")
    if getattr(args, "thooft", False) or args.l is None:
        g = Fraction(args.t) / args.n
        return g, 1 / g
    seq = CouplingSequence.km_family(args.t, args.l, args.c)
    inv = seq.inv_g(args.n)
    return 1 / inv, inv


def cmd_cloud(args) -> int:
    digits = _digits(args)
    if args.digits is None:
        digits = max(200, digits)
    g, inv_g = _resolve_cloud_coupling(args)
    ctx = PrecisionContext(digits=digits)
    if isinstance(inv_g, Fraction):
        offset = abs(inv_g - round(inv_g))
        if 0 < offset < Fraction(1, 10**digits):
            ctx = PrecisionContext(digits=digits + 60)
    zs = laguerre.saddle_points(None, args.n, ctx, inv_g=inv_g)
    t_eff = float(args.t) if args.t is not None else float(args.n * Fraction(g))
    l_eff = float(args.l) if args.l is not None else None
    sd = spectral.support_for(t_eff, l_eff, args.samples).to_penner_plane()
    comparison = spectral.cloud_vs_theory(zs.scaled, sd)

    saddles = [complex(z) for z in zs.scaled]
    support_groups = []
    if sd.arc_samples is not None:
        support_groups.append(("arc", sd.arc_samples))
    if sd.loop_samples is not None:
        loop_closed = np.append(sd.loop_samples, sd.loop_samples[0])
        support_groups.append(("loop", loop_closed))
    if sd.interval is not None:
        support_groups.append(("interval", np.linspace(sd.interval[0], sd.interval[1], 257) + 0j))

    if args.format == "svg":
        groups = [("polyline", pts, "#1f77b4") for _, pts in support_groups]
        groups.append(("scatter", np.asarray(saddles), "#d62728"))
        _emit(args.output, _svg_document(groups))
        return 0
    if args.format == "json":
        payload = {
            "n": args.n,
            "g": _fmt(Fraction(g)),
            "summary": {
                "max_dist": _fmt(comparison.max_dist),
                "mean_dist": _fmt(comparison.mean_dist),
                "loop_count_fraction": _fmt(comparison.loop_count_fraction),
            },
            "saddles": [[_fmt(z.real), _fmt(z.imag)] for z in saddles],
            "support": {
                name: [[_fmt(z.real), _fmt(z.imag)] for z in pts]
                for name, pts in support_groups
            },
        }
        _emit(args.output, json.dumps(payload, indent=2) + "\n")
        return 0
    header = ["kind", "re", "im"]
    rows = [["saddle", _fmt(z.real), _fmt(z.imag)] for z in saddles]
    for name, pts in support_groups:
        rows.extend([f"support_{name}", _fmt(z.real), _fmt(z.imag)] for z in np.asarray(pts))
    rows.append(["summary_max_dist", _fmt(comparison.max_dist), ""])
    rows.append(["summary_mean_dist", _fmt(comparison.mean_dist), ""])
    rows.append(["summary_loop_count_fraction", _fmt(comparison.loop_count_fraction), ""])
    return _write_rows(args.output, header, rows, "csv")


def _support_from_args(args) -> spectral.SupportDescription:
    t = float(args.t)
    l = float(args.l) if args.l is not None else None
    sd = spectral.support_for(t, l, args.samples)
    if args.penner_plane:
        sd = sd.to_penner_plane()
    return sd


def cmd_support(args) -> int:
    sd = _support_from_args(args)
    header = ["piece", "re", "im"]
    rows = []
    if sd.point_mass is not None:
        rows.append(["point", _fmt(0.0), _fmt(0.0)])
    if sd.arc_samples is not None:
        rows.extend(["arc", _fmt(z.real), _fmt(z.imag)] for z in sd.arc_samples)
    if sd.loop_samples is not None:
        rows.extend(["loop", _fmt(z.real), _fmt(z.imag)] for z in sd.loop_samples)
    if sd.interval is not None:
        for x in np.linspace(sd.interval[0], sd.interval[1], args.samples // 2):
            rows.append(["interval", _fmt(x), _fmt(0.0)])
    if args.format == "svg":
        groups = []
        if sd.arc_samples is not None:
            groups.append(("polyline", sd.arc_samples, "#1f77b4"))
        if sd.loop_samples is not None:
            groups.append(("polyline", np.append(sd.loop_samples, sd.loop_samples[0]), "#1f77b4"))
        if sd.interval is not None:
            groups.append(("polyline", np.linspace(sd.interval[0], sd.interval[1], 257) + 0j, "#2ca02c"))
        _emit(args.output, _svg_document(groups))
        return 0
    return _write_rows(args.output, header, rows, args.format)


def cmd_density(args) -> int:
    sd = _support_from_args(args)
    header = ["piece", "re", "im", "rho"]
    rows = []
    for piece, name in zip(sd.pieces(), spectral._piece_names(sd)):
        s = np.linspace(0.0, piece.length, args.samples, endpoint=not piece.closed)
        z = np.atleast_1d(piece.at(s))
        rho = np.atleast_1d(piece.rho(s))
        rows.extend(
            [name, _fmt(zz.real), _fmt(zz.imag), _fmt(rr)] for zz, rr in zip(z, rho)
        )
    return _write_rows(args.output, header, rows, args.format)


def cmd_phase_diagram(args) -> int:
    ctx = PrecisionContext(digits=max(30, _digits(args)))
    t_lo, t_hi, t_steps = args.t_range
    l_lo, l_hi, l_steps = args.l_range
    header = ["t", "l", "free_energy", "dF_dt", "regime", "status"]
    rows = []
    for t in np.linspace(t_lo, t_hi, t_steps):
        for l in np.linspace(l_lo, l_hi, l_steps):
            t_val, l_val = float(t), float(l)
            if abs(t_val - 1) < 1e-12:
                rows.append([_fmt(t_val), _fmt(l_val), "", "", "critical", "CriticalT"])
                continue
            if l_val == 0:
                regime = "weak" if t_val < 1 else "singular"
            else:
                regime = "weak" if t_val < 1 else "strong"
            if l_val == 0 and t_val >= 1:
                rows.append([_fmt(t_val), _fmt(l_val), "", "", "singular", "SingularPhase"])
                continue
            try:
                f = asymptotics.planar_free_energy(PhasePoint(t_val, max(l_val, 0) or l_val), ctx)
                df = asymptotics.planar_dfdt(PhasePoint(t_val, l_val), ctx)
                rows.append([_fmt(t_val), _fmt(l_val), _fmt(f), _fmt(df), regime, "ok"])
            except SingularPhase:
                rows.append([_fmt(t_val), _fmt(l_val), "", "", "singular", "SingularPhase"])
            except CriticalT:
                rows.append([_fmt(t_val), _fmt(l_val), "", "", "critical", "CriticalT"])
    return _write_rows(args.output, header, rows, args.format)


def cmd_euler(args) -> int:
    header = ["k", "s", "chi", "expansion_coefficient", "matches"]
    rows = []
    for k in range(0, args.k_max + 1):
        for s in range(1, args.s_max + 1):
            if 2 - 2 * k - s >= 0:
                continue
            chi = asymptotics.euler_characteristic(k, s)
            coeff = asymptotics.positive_expansion_coefficient(k, s)
            rows.append([k, s, str(chi), str(coeff), str(coeff == -chi)])
    return _write_rows(args.output, header, rows, args.format)


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite)
    width = max(len(r.criterion) for r in results) + 2
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += 0 if r.passed else 1
        line = f"{status}  {r.criterion:<{width}} measured {r.measured:<12} tol {r.tolerance:<12} {r.runtime:6.1f}s"
        sys.stdout.write(line.rstrip() + "\n")
        if r.detail and not r.passed:
            sys.stdout.write(f"      note: {r.detail}\n")
    sys.stdout.write(f"{len(results) - failures}/{len(results)} checks passed\n")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="penner",
        description="Penner matrix model with negative coupling: exact values, "
        "planar limits, saddle clouds, and Coulomb-gas supports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--digits", type=int, default=None, help="working precision (or PENNER_DIGITS)")
        p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    p = sub.add_parser("free-energy", help="exact and asymptotic free energy along a coupling sequence")
    p.add_argument("--t", type=_parse_exact, default=None)
    p.add_argument("--l", type=_parse_exact, default=None)
    p.add_argument("--c", type=_parse_exact, default=Fraction(1))
    p.add_argument("--g", type=_parse_exact, default=None, help="single evaluation at coupling g")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--K", type=int, default=4, help="perturbative truncation order")
    p.add_argument("--thooft", action="store_true", help="use g_n = t/n exactly")
    common(p)
    p.set_defaults(func=cmd_free_energy)

    p = sub.add_parser("cloud", help="finite-n saddle points against the limiting support")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=_parse_exact, default=None)
    p.add_argument("--l", type=_parse_exact, default=None)
    p.add_argument("--c", type=_parse_exact, default=Fraction(1, 2))
    p.add_argument("--g", type=_parse_exact, default=None)
    p.add_argument("--thooft", action="store_true")
    p.add_argument("--samples", type=int, default=2048)
    common(p)
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("support", help="limiting support polylines for (t, l)")
    p.add_argument("--t", type=_parse_exact, required=True)
    p.add_argument("--l", type=_parse_exact, default=None)
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("--penner-plane", action="store_true", help="scale to the eigenvalue plane")
    common(p)
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("density", help="density samples along the support")
    p.add_argument("--t", type=_parse_exact, required=True)
    p.add_argument("--l", type=_parse_exact, default=None)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--penner-plane", action="store_true")
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("phase-diagram", help="planar free energy over a (t, l) grid")
    p.add_argument("--t-range", type=_parse_range, default=(0.2, 3.0, 20))
    p.add_argument("--l-range", type=_parse_range, default=(0.1, 1.0, 10))
    common(p)
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("euler", help="virtual Euler characteristics vs expansion coefficients")
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--s-max", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.exit(2, f"error: {exc}\n")
    except (Degenerate, PennerError) as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
