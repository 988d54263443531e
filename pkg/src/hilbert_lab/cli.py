"""Command-line driver: load a body, run one experiment, emit a report.

Every command builds a report dict {config, results, witnesses, bounds, pass}
with floats quantised to 12 significant digits, so identical configurations
produce byte-identical JSON/CSV artifacts.  Exit code 0 means the run passed
its embedded bounds, 1 means a bound was violated (the witness is in the
report), 2 means the input was rejected.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .bodies import BodyValidationError, NotInteriorError, load_body
from .convergence import (
    NESTING_TOL,
    concentric_disks,
    density_convergence,
    norm_ratio_field,
    smoothed_cylinders,
)
from .hyperbolicity import delta_probe
from .john import john_ellipsoid, sandwich_check
from .localgeom import metric_ball, theorem12_points, theorem12_report
from .measure import hilbert_density
from .metric import dual_norm, finsler_norm, hilbert_distance
from .spectrum import (
    SANDWICH_LOWER,
    SANDWICH_UPPER,
    SPECTRAL_LOWER_BOUND,
    cheeger_quotient,
    cylinder_sandwich,
    fact1_check,
    fact2_check,
    minimize_rayleigh,
)

FACT1_TOL = 1e-9
FACT2_TOL = 1e-6
SANDWICH_SLACK = 0.05


def _sig(x):
    """Quantise to 12 significant digits for stable serialisation."""
    if isinstance(x, float):
        if not math.isfinite(x):
            return repr(x)
        return float(f"{x:.12g}")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, (np.floating,)):
        return _sig(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, float):
        return _sig(obj)
    return obj


def _parse_vector(text, name):
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise ValueError(f"{name}: expected comma-separated reals, got {text!r}")


def _parse_grid(text, name):
    """a:b:k linspace syntax."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{name}: expected start:stop:count, got {text!r}")
    try:
        a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"{name}: expected start:stop:count, got {text!r}")
    if k < 1:
        raise ValueError(f"{name}: count must be positive")
    return np.linspace(a, b, k)


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _csv_lines(rows):
    return "".join(",".join(_fmt(c) for c in row) + "\n" for row in rows)


def _flatten(prefix, val, out):
    if isinstance(val, dict):
        for k, v in val.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(val, (list, tuple)):
        for i, v in enumerate(val):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, val))


def _report_csv(report, rows=None):
    if rows is not None:
        return _csv_lines(rows)
    flat = []
    _flatten("", {"results": report["results"], "bounds": report["bounds"]}, flat)
    return _csv_lines([("key", "value")] + flat)


def _emit(report, args, rows=None):
    if getattr(args, "format", "json") == "csv":
        text = _report_csv(report, rows)
    else:
        text = json.dumps(_jsonable(report), indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _svg_path(points, close=True):
    coords = " L ".join(f"{x:.6g},{y:.6g}" for x, y in points)
    return f"M {coords}" + (" Z" if close else "")


def _write_svg(path, body, extra_curves):
    """Static section of a 2-D body plus overlay curves, for visual sanity."""
    p0 = body.interior_point()
    th = np.linspace(0.0, 2.0 * np.pi, 257)[:-1]
    V = np.column_stack([np.cos(th), np.sin(th)])
    P = np.tile(p0, (len(V), 1))
    _, tp = body.chord_batch(P, V)
    outline = P + tp[:, None] * V
    curves = [("#333333", outline)] + extra_curves
    allpts = np.vstack([c[1] for c in curves])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    pad = 0.05 * float((hi - lo).max())
    lo, hi = lo - pad, hi + pad
    w, h = hi - lo
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="480" height="480" '
        f'viewBox="{lo[0]:.6g} {lo[1]:.6g} {w:.6g} {h:.6g}">',
        f'<g fill="none" stroke-width="{0.004 * max(w, h):.6g}" '
        'transform="scale(1,-1) translate(0,{:.6g})">'.format(-(lo[1] + hi[1])),
    ]
    for color, pts in curves:
        parts.append(f'<path stroke="{color}" d="{_svg_path(pts)}"/>')
    parts.append("</g></svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def _config(args, **extra):
    cfg = {
        "command": args.command,
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "threads": os.environ.get("HILBERT_LAB_THREADS"),
    }
    if getattr(args, "body", None):
        cfg["body"] = args.body
    cfg.update(extra)
    return cfg


def _report(config, results, witnesses, bounds, passed):
    return {
        "config": config,
        "results": results,
        "witnesses": witnesses,
        "bounds": bounds,
        "pass": bool(passed),
    }


# ---------------------------------------------------------------------------
# commands


def _cmd_distance(args):
    body = load_body(args.body)
    p = _parse_vector(args.p, "p")
    q = _parse_vector(args.q, "q")
    d = hilbert_distance(body, p, q)
    if not args.out and args.format == "json":
        print(f"{d:.12g}")
        return True, None, None
    rep = _report(
        _config(args, p=args.p, q=args.q),
        {"distance": d},
        {},
        {},
        True,
    )
    return True, rep, [("distance",), (d,)]


def _cmd_norm(args):
    body = load_body(args.body)
    p = _parse_vector(args.p, "p")
    v = _parse_vector(args.v, "v")
    F = finsler_norm(body, p, v)
    D = dual_norm(body, p, v, directions=args.directions)
    rep = _report(
        _config(args, p=args.p, v=args.v, directions=args.directions),
        {"finsler": F, "dual": D},
        {},
        {},
        True,
    )
    return True, rep, [("finsler", "dual"), (F, D)]


def _cmd_density(args):
    body = load_body(args.body)
    p = _parse_vector(args.p, "p")
    est = hilbert_density(body, p, resolution=args.resolution, samples=args.samples, seed=args.seed)
    rep = _report(
        _config(args, p=args.p, samples=args.samples, resolution=args.resolution),
        {"density": est.value, "stderr": est.stderr},
        {},
        {},
        True,
    )
    return True, rep, [("density", "stderr"), (est.value, est.stderr)]


def _cmd_ball(args):
    body = load_body(args.body)
    p = _parse_vector(args.p, "p")
    ball = metric_ball(body, p, args.radius, resolution=args.resolution)
    rows = [tuple(f"v{i}" for i in range(body.dim)) + ("t",)]
    for v, t in zip(ball.directions, ball.t_ball):
        rows.append(tuple(v) + (t,))
    rep = _report(
        _config(args, p=args.p, radius=args.radius, resolution=args.resolution),
        {
            "radius": args.radius,
            "resolution": int(ball.directions.shape[0]),
            "t_min": float(ball.t_ball.min()),
            "t_max": float(ball.t_ball.max()),
            "directions": ball.directions,
            "t": ball.t_ball,
        },
        {},
        {},
        True,
    )
    if args.svg:
        if body.dim != 2:
            raise ValueError("svg: sections are drawn for 2-D bodies only")
        _write_svg(args.svg, body, [("#1f77b4", ball.boundary_points)])
    return True, rep, rows


def _cmd_john(args):
    body = load_body(args.body)
    ell = john_ellipsoid(body)
    rep_s = sandwich_check(body, ell, probes=args.probes)
    axes = ell.semi_axes()
    passed = rep_s.contained and rep_s.bound_satisfied
    rep = _report(
        _config(args, probes=args.probes),
        {
            "center": ell.center,
            "shape": ell.shape,
            "semi_axes": axes,
            "volume": ell.volume(),
            "contained": rep_s.contained,
            "cover_factor": rep_s.cover_factor,
            "symmetric": rep_s.symmetric,
        },
        {"worst_direction": rep_s.witness_direction},
        {"cover_bound": rep_s.bound},
        passed,
    )
    if args.svg:
        if body.dim != 2:
            raise ValueError("svg: sections are drawn for 2-D bodies only")
        _write_svg(args.svg, body, [("#d62728", ell.boundary_points(256))])
    rows = [("cover_factor", "bound", "contained"), (rep_s.cover_factor, rep_s.bound, rep_s.contained)]
    return passed, rep, rows


def _cmd_theorem12(args):
    body = load_body(args.body)
    pts = theorem12_points(body, args.points)
    per_point = []
    witnesses = []
    passed = True
    for p in pts:
        r = theorem12_report(body, p, resolution=args.resolution)
        passed &= r.passed
        per_point.append(
            {
                "point": r.point,
                "d0": r.d0,
                "center_chord_max": r.center_chord_max,
                "chord_max": r.chord_max,
                "lip_upper": r.lip_upper,
                "lip_lower": r.lip_lower,
                "equivalence_constant": r.equivalence_constant,
                "passed": r.passed,
            }
        )
        witnesses.append({"d0": r.d0_witness, "chord": r.chord_witness})
    # the bound constants are dimension-only, identical across points
    bounds = r.bounds()
    rep = _report(
        _config(args, points=args.points, resolution=args.resolution),
        {"dim": body.dim, "per_point": per_point},
        {"per_point": witnesses},
        bounds,
        passed,
    )
    rows = [("point_index", "d0", "chord_max", "lip_upper", "lip_lower", "passed")]
    for i, d in enumerate(per_point):
        rows.append((i, d["d0"], d["chord_max"], d["lip_upper"], d["lip_lower"], d["passed"]))
    return passed, rep, rows


def _cmd_cylinder(args):
    heights = _parse_grid(args.tgrid, "tgrid") if args.tgrid else None
    sw = cylinder_sandwich(heights=heights, samples=args.samples, seed=args.seed)
    f1 = fact1_check()
    f2a = fact2_check(1.0, 1.0)
    f2b = fact2_check(1.0, 3.0, width=12.0)
    facts_ok = f1.max_defect < FACT1_TOL and f2a.max_defect < FACT2_TOL and f2b.max_defect < FACT2_TOL
    passed = sw.within_bounds and facts_ok
    rep = _report(
        _config(args, tgrid=args.tgrid, samples=args.samples),
        {
            "heights": sw.heights,
            "base_points": sw.base_points,
            "ratios": sw.ratios,
            "ratio_stderrs": sw.ratio_stderrs,
            "within_bounds": sw.within_bounds,
            "alpha_necessary": sw.alpha_necessary,
            "fact1_defect": f1.max_defect,
            "fact2_caps": {"l1_1_l2_1": f2a.cap_height, "l1_1_l2_3": f2b.cap_height},
            "fact2_defects": {"l1_1_l2_1": f2a.max_defect, "l1_1_l2_3": f2b.max_defect},
        },
        {"worst_low": sw.worst_low, "worst_high": sw.worst_high},
        {
            "ratio_lower": SANDWICH_LOWER,
            "ratio_upper": SANDWICH_UPPER,
            "fact1_tol": FACT1_TOL,
            "fact2_tol": FACT2_TOL,
            "spectral_constant": SPECTRAL_LOWER_BOUND,
        },
        passed,
    )
    rows = [("t", "qx", "qy", "alpha", "ratio", "stderr", "plain_ratio")]
    for i, t in enumerate(sw.heights):
        for j, q in enumerate(sw.base_points):
            rows.append(
                (t, q[0], q[1], sw.alpha[i], sw.ratios[i, j], sw.ratio_stderrs[i, j], sw.plain_ratios[i, j])
            )
    return passed, rep, rows


def _cmd_rayleigh(args):
    body = load_body(args.body)
    center = _parse_vector(args.center, "center")
    rates = tuple(float(r) for r in args.rates.split(",")) if args.rates else None
    res = minimize_rayleigh(
        body,
        center,
        args.radius,
        family=args.family,
        rates=rates,
        budget=args.budget,
        samples=args.samples,
        seed=args.seed,
    )
    history = [
        {"label": t.label, "quotient": e.quotient, "stderr": e.stderr} for t, e in res.history
    ]
    rep = _report(
        _config(
            args,
            center=args.center,
            radius=args.radius,
            family=args.family,
            budget=args.budget,
            samples=args.samples,
        ),
        {
            "best_label": res.trial.label,
            "quotient": res.estimate.quotient,
            "stderr": res.estimate.stderr,
            "numerator": res.estimate.numerator,
            "denominator": res.estimate.denominator,
            "evaluations": res.evaluations,
            "history": history,
        },
        {},
        {},
        True,
    )
    rows = [("label", "quotient", "stderr")] + [
        (h["label"], h["quotient"], h["stderr"]) for h in history
    ]
    return True, rep, rows


def _cmd_cheeger(args):
    body = load_body(args.body)
    center = _parse_vector(args.center, "center")
    est = cheeger_quotient(
        body, center, args.radius, eps=args.eps, samples=args.samples, seed=args.seed
    )
    rep = _report(
        _config(args, center=args.center, radius=args.radius, eps=args.eps, samples=args.samples),
        {
            "quotient": est.quotient,
            "stderr": est.stderr,
            "boundary": est.boundary,
            "boundary_stderr": est.boundary_stderr,
            "volume": est.volume,
            "volume_stderr": est.volume_stderr,
        },
        {},
        {},
        True,
    )
    rows = [("quotient", "stderr", "boundary", "volume"), (est.quotient, est.stderr, est.boundary, est.volume)]
    return True, rep, rows


def _cmd_converge(args):
    ks = tuple(int(k) for k in args.ks.split(","))
    if args.family == "disks":
        members, limit = concentric_disks(ks)
        pts = np.array([[0.0, 0.0], [0.4, 0.0], [0.0, -0.6], [0.3, 0.3]])
    elif args.family == "cylinders":
        members, limit = smoothed_cylinders(ks)
        pts = np.array([[0.0, 0.0, 0.0], [0.3, 0.0, 0.4], [0.0, 0.4, -0.3]])
    else:
        raise ValueError(f"family: unknown convergence family {args.family!r}")
    rep_c = density_convergence(members, limit, pts, samples=args.samples, seed=args.seed)
    min_ratios = [m.min_norm_ratio for m in rep_c.members]
    passed = (
        rep_c.monotone
        and all(m.upper_ok and m.lower_ok for m in rep_c.members)
        and all(b >= a - NESTING_TOL for a, b in zip(min_ratios, min_ratios[1:]))
    )
    rep = _report(
        _config(args, family=args.family, ks=args.ks, samples=args.samples),
        {
            "ks": list(ks),
            "min_ratios": min_ratios,
            "deviations": rep_c.deviations,
            "monotone": rep_c.monotone,
            "converged": rep_c.converged,
        },
        {"worst_points": [m.worst_point for m in rep_c.members]},
        {"nesting_tol": NESTING_TOL},
        passed,
    )
    rows = [("k", "min_ratio", "sup_deviation", "upper_ok", "lower_ok")]
    for k, m in zip(ks, rep_c.members):
        rows.append((k, m.min_norm_ratio, m.sup_deviation, m.upper_ok, m.lower_ok))
    return passed, rep, rows


def _cmd_delta(args):
    body = load_body(args.body)
    scales = tuple(float(s) for s in args.scales.split(","))
    center = _parse_vector(args.center, "center") if args.center else None
    est = delta_probe(body, center=center, scales=scales, quadruples=args.quadruples, seed=args.seed)
    rep = _report(
        _config(args, scales=args.scales, quadruples=args.quadruples),
        {"scales": est.scales, "deltas": est.deltas, "growth": est.growth},
        {"per_scale": est.witnesses},
        {},
        True,
    )
    rows = [("scale", "delta")] + list(zip(est.scales, est.deltas))
    return True, rep, rows


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(sp, body=True, samples=None, resolution=False):
    sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sp.add_argument("--out", help="write the report to this path instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    if body:
        sp.add_argument("--body", required=True, help="path to a body JSON file")
    if samples is not None:
        sp.add_argument("--samples", type=int, default=samples, help=f"MC samples (default {samples})")
    if resolution:
        sp.add_argument("--resolution", type=int, default=None, help="direction resolution")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="hilbert-lab",
        description="Hilbert-geometry experiments on bounded convex bodies",
    )
    ap.add_argument("--version", action="version", version=f"hilbert-lab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("distance", help="Hilbert distance between two interior points")
    _add_common(sp)
    sp.add_argument("--p", required=True, help="first point, comma separated")
    sp.add_argument("--q", required=True, help="second point, comma separated")
    sp.set_defaults(fn=_cmd_distance)

    sp = sub.add_parser("norm", help="Finsler norm and dual norm at a point")
    _add_common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--v", required=True, help="direction / covector, comma separated")
    sp.add_argument("--directions", type=int, default=64)
    sp.set_defaults(fn=_cmd_norm)

    sp = sub.add_parser("density", help="Busemann density at a point")
    _add_common(sp, samples=16384, resolution=True)
    sp.add_argument("--p", required=True)
    sp.set_defaults(fn=_cmd_density)

    sp = sub.add_parser("ball", help="metric ball radial table")
    _add_common(sp, resolution=True)
    sp.add_argument("--p", required=True)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--svg", help="write a 2-D section to this SVG path")
    sp.set_defaults(fn=_cmd_ball)

    sp = sub.add_parser("john", help="John ellipsoid and sandwich check")
    _add_common(sp)
    sp.add_argument("--probes", type=int, default=10**4)
    sp.add_argument("--svg", help="write a 2-D section to this SVG path")
    sp.set_defaults(fn=_cmd_john)

    sp = sub.add_parser("theorem12", help="local-geometry constants at sampled base points")
    _add_common(sp, resolution=True)
    sp.add_argument("--points", type=int, default=5, help="number of base points")
    sp.set_defaults(fn=_cmd_theorem12)

    sp = sub.add_parser("cylinder", help="tangent-ball volume sandwich on the solid cylinder")
    _add_common(sp, body=False, samples=2**13)
    sp.add_argument("--tgrid", help="height grid start:stop:count (default -0.9:0.9:13)")
    sp.set_defaults(fn=_cmd_cylinder)

    sp = sub.add_parser("rayleigh", help="minimize the Rayleigh quotient over a trial family")
    _add_common(sp, samples=2**14)
    sp.add_argument("--center", default="0,0")
    sp.add_argument("--radius", type=float, default=12.0)
    sp.add_argument("--family", choices=("exponential", "tent"), default="exponential")
    sp.add_argument("--rates", help="comma-separated decay-rate grid")
    sp.add_argument("--budget", type=int, default=8)
    sp.set_defaults(fn=_cmd_rayleigh)

    sp = sub.add_parser("cheeger", help="boundary/volume quotient of a metric ball")
    _add_common(sp, samples=2**15)
    sp.add_argument("--center", default="0,0")
    sp.add_argument("--radius", type=float, default=2.0)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.set_defaults(fn=_cmd_cheeger)

    sp = sub.add_parser("converge", help="density convergence along a decreasing family")
    _add_common(sp, body=False, samples=2048)
    sp.add_argument("--family", choices=("disks", "cylinders"), default="disks")
    sp.add_argument("--ks", default="1,2,4,8,16", help="comma-separated member indices")
    sp.set_defaults(fn=_cmd_converge)

    sp = sub.add_parser("delta", help="four-point hyperbolicity defect per scale")
    _add_common(sp)
    sp.add_argument("--scales", default="1,2,4,8")
    sp.add_argument("--quadruples", type=int, default=10**4)
    sp.add_argument("--center", help="ball center (default: an interior point)")
    sp.set_defaults(fn=_cmd_delta)

    return ap


# flags whose values may begin with a minus sign (negative coordinates,
# descending grids); merged to --flag=value so argparse keeps them as values
_VALUE_FLAGS = ("--p", "--q", "--v", "--center", "--tgrid", "--scales", "--ks", "--rates")


def _merge_value_flags(argv):
    merged = []
    i = 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            merged.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            merged.append(argv[i])
            i += 1
    return merged


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_merge_value_flags(list(argv)))
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        passed, report, rows = args.fn(args)
    except (BodyValidationError, NotInteriorError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if report is not None:
        _emit(report, args, rows if args.format == "csv" else None)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
