"""Command-line interface: ``geoflow <command> [options]``."""

import argparse
import csv
import os
import shutil
import sys
import tempfile

import numpy as np

from .boundary import DEFAULT_EPS, trace_boundary
from .classify import ClassModel, error_rate, label_grid
from .curve import Curve
from .errors import GeoflowError
from .flow import margin_curves, principal_flow
from .io import FORMATS, load_dataset, save_dataset
from .manifold import exp_map
from .plot import emit_polyline
from .simulate import CurveDistribution, convergence_experiment, write_convergence_csv
from .sweep import best_cell, grid, sweep, write_sweep_csv
from .synthetic import SHAPES, c_s_data, generate_band


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _bbox(text):
    values = _floats(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError("bbox needs lon_min,lon_max,lat_min,lat_max")
    return values


def _range(text):
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            return grid(start, stop, step)
        return _floats(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a range or list: {text!r}") from None


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _common(p, out_formats=("csv", "svg")):
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=out_formats, default=out_formats[0],
                   help="output file format")
    p.add_argument("--seed", type=int, default=0, help="random seed")


def _input(p, required=True):
    p.add_argument("--input", required=required, help="CSV with a header row and a label column")
    p.add_argument("--input-format", choices=FORMATS, default="xyz",
                   help="coordinate columns of the input (x,y,z or lon,lat in degrees)")


def _flow_opts(p):
    p.add_argument("--step", type=_positive, default=None,
                   help="flow integration step; unset means h/5")
    p.add_argument("--max-length", type=_positive, default=float(np.pi),
                   help="cap on the length of each half of a traced curve")


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="geoflow", formatter_class=fmt,
                                     description="Principal flows and boundaries on the sphere.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("flow", formatter_class=fmt, help="principal flow of a point set")
    _input(p)
    p.add_argument("--h", type=_positive, default=0.1, help="locality radius (radians)")
    p.add_argument("--label", type=int, choices=(1, -1), default=None,
                   help="use only points with this label (default: all)")
    p.add_argument("--margins", action="store_true", help="also emit the two margin curves")
    p.add_argument("--bbox", type=_bbox, default=None, help="crop lon_min,lon_max,lat_min,lat_max")
    _flow_opts(p)
    _common(p)

    p = sub.add_parser("boundary", formatter_class=fmt,
                       help="principal boundary between the +1 and -1 classes")
    _input(p)
    p.add_argument("--h1", type=_positive, default=0.1, help="locality radius of class +1")
    p.add_argument("--h2", type=_positive, default=0.1, help="locality radius of class -1")
    p.add_argument("--delta", type=_positive, default=None,
                   help="boundary step; unset means min(h1, h2)/5")
    p.add_argument("--eps", type=_positive, default=DEFAULT_EPS, help="initial mixing-weight nudge")
    p.add_argument("--bbox", type=_bbox, default=None, help="crop lon_min,lon_max,lat_min,lat_max")
    _flow_opts(p)
    _common(p)

    p = sub.add_parser("classify", formatter_class=fmt,
                       help="label points by margins to the two class flows")
    _input(p)
    p.add_argument("--points", default=None,
                   help="CSV of points to label (default: the training points)")
    p.add_argument("--h1", type=_positive, default=0.1, help="locality radius of class +1")
    p.add_argument("--h2", type=_positive, default=0.1, help="locality radius of class -1")
    p.add_argument("--alpha", type=_positive, default=1.0, help="distance exponent of the relative gap")
    p.add_argument("--beta", type=_positive, default=1.0, help="spread exponent of the relative gap")
    _flow_opts(p)
    _common(p, ("csv",))

    p = sub.add_parser("sweep", formatter_class=fmt,
                       help="misclassification table over a grid of radii")
    _input(p)
    p.add_argument("--h1", type=_range, default=grid(0.10, 0.25, 0.01),
                   help="class +1 radii, start:stop:step or a list")
    p.add_argument("--h2", type=_range, default=grid(0.05, 0.15, 0.01),
                   help="class -1 radii, start:stop:step or a list")
    p.add_argument("--delta", type=_positive, default=None,
                   help="boundary step; unset means min(h1, h2)/5")
    p.add_argument("--eps", type=_positive, default=DEFAULT_EPS, help="initial mixing-weight nudge")
    p.add_argument("--alpha", type=_positive, default=1.0, help="distance exponent of the relative gap")
    p.add_argument("--beta", type=_positive, default=1.0, help="spread exponent of the relative gap")
    p.add_argument("--no-boundary", action="store_true", help="skip boundary tracing")
    _flow_opts(p)
    _common(p, ("csv",))

    p = sub.add_parser("simulate", formatter_class=fmt,
                       help="convergence of estimated flows and boundaries as noise shrinks")
    p.add_argument("--h", type=_positive, default=0.2, help="locality radius (radians)")
    p.add_argument("--sd", type=_floats, default=[0.08, 0.04, 0.02, 0.01],
                   help="decreasing noise SDs, comma separated")
    p.add_argument("--n-mc", type=int, default=20000, help="samples per class and replicate")
    p.add_argument("--replicates", type=int, default=8, help="Monte-Carlo replicates")
    p.add_argument("--separation", type=_positive, default=0.2,
                   help="latitude of the two population arcs (+-, radians)")
    p.add_argument("--delta", type=_positive, default=None,
                   help="boundary step; unset means h/5")
    _common(p, ("csv",))

    p = sub.add_parser("generate", formatter_class=fmt, help="synthetic labeled point sets")
    p.add_argument("--shape", choices=SHAPES + ("CS",), default="CS",
                   help="template curve; CS writes both the C (+1) and S (-1) classes")
    p.add_argument("--n", type=int, default=500, help="points per class")
    p.add_argument("--noise", type=float, default=0.03, help="normal offset SD (radians)")
    p.add_argument("--label", type=int, choices=(1, -1), default=1,
                   help="label of a single generated class")
    p.add_argument("--coords", choices=FORMATS, default="xyz", help="coordinate columns to write")
    _common(p, ("csv",))
    return parser


def _flow_kwargs(args):
    kw = {"max_length": args.max_length}
    if args.step is not None:
        kw["step"] = args.step
    return kw


def _models(args):
    data = load_dataset(args.input, args.input_format)
    c1, c2 = data.split()
    kw = _flow_kwargs(args)
    f1 = principal_flow(c1, args.h1, skip_degenerate=True, **kw)
    f2 = principal_flow(c2, args.h2, skip_degenerate=True, **kw)
    return data, ClassModel(1, c1, f1), ClassModel(-1, c2, f2)


def cmd_flow(args, out):
    data = load_dataset(args.input, args.input_format, default_label=1)
    pts = data.points if args.label is None else data.points[data.labels == args.label]
    flow = principal_flow(pts, args.h, **_flow_kwargs(args))
    curves = {"flow": flow.curve}
    if args.margins:
        curves["margin_left"], curves["margin_right"] = margin_curves(flow)
    emit_polyline(curves, out, args.format, points=pts, bbox=args.bbox)


def cmd_boundary(args, out):
    data, m1, m2 = _models(args)
    result = trace_boundary(m1.flow, m2.flow, delta=args.delta, eps=args.eps,
                            max_length=args.max_length)
    curves = {"flow1": m1.flow.curve, "flow2": m2.flow.curve, "boundary": result.curve}
    emit_polyline(curves, out, args.format, points=data.points, labels=data.labels,
                  bbox=args.bbox)
    print(f"boundary: {len(result.curve)} nodes, termination {result.termination[0]}/"
          f"{result.termination[1]}", file=sys.stderr)


def cmd_classify(args, out):
    data, m1, m2 = _models(args)
    target = data if args.points is None else load_dataset(args.points, args.input_format,
                                                            default_label=1)
    decisions = label_grid(target.points, m1, m2, alpha=args.alpha, beta=args.beta)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "z", "label", "d1", "d2", "overlap"])
        for p, d in zip(target.points, decisions):
            w.writerow([f"{v:.17g}" for v in p] + [d.label, f"{d.d1:.17g}", f"{d.d2:.17g}",
                                                   int(d.overlap)])
    if args.points is None:
        rate, (a, b) = error_rate(decisions, data.labels)
        print(f"error rate {rate:.4f} (misses: {a} of class +1, {b} of class -1)",
              file=sys.stderr)


def cmd_sweep(args, out):
    data = load_dataset(args.input, args.input_format)
    options = {"delta": args.delta, "eps": args.eps, "max_length": args.max_length}
    cells = sweep(data, args.h1, args.h2, boundary=not args.no_boundary,
                  boundary_options=options, flow_options=_flow_kwargs(args),
                  alpha=args.alpha, beta=args.beta)
    write_sweep_csv(cells, out)
    best = best_cell(cells)
    if best is not None:
        print(f"best rate {best.rate:.4f} at h1={best.h1:g}, h2={best.h2:g}", file=sys.stderr)


def cmd_simulate(args, out):
    def arc(lat, count=201):
        c = np.array([np.cos(lat), 0.0, np.sin(lat)])
        t = np.linspace(-1.0, 1.0, count)
        return Curve.from_nodes(exp_map(c, t[:, None] * np.array([0.0, 1.0, 0.0])))

    d1 = CurveDistribution(arc(args.separation), args.sd[0], args.seed)
    d2 = CurveDistribution(arc(-args.separation), args.sd[0], args.seed + 10_000)
    rows = convergence_experiment(d1, d2, args.h, args.sd, args.n_mc,
                                  replicates=args.replicates, delta=args.delta)
    write_convergence_csv(rows, out)


def cmd_generate(args, out):
    if args.shape == "CS":
        data = c_s_data(args.n, args.noise, seed=args.seed)
    else:
        data = generate_band(args.shape, args.n, args.noise, seed=args.seed, label=args.label)
    save_dataset(data, out, args.coords)


COMMANDS = {
    "flow": cmd_flow,
    "boundary": cmd_boundary,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "generate": cmd_generate,
}


def main(argv=None):
    """Run the CLI; returns 0 on success, 1 on a domain error, 2 on a usage error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    to_stdout = args.out in ("-", "")
    if to_stdout:
        fd, out = tempfile.mkstemp(suffix="." + args.format)
        os.close(fd)
    else:
        out = args.out
    try:
        COMMANDS[args.command](args, out)
        if to_stdout:
            with open(out) as fh:
                shutil.copyfileobj(fh, sys.stdout)
    except GeoflowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        if to_stdout:
            os.unlink(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
