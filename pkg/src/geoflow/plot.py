"""Writing curves and points as CSV tables or orthographic SVG pictures."""

import csv
from xml.sax.saxutils import escape

import numpy as np

from .curve import Curve
from .io import xyz_to_lonlat
from .manifold import tangent_basis

SVG_SIZE = 480
PALETTE = ("#000000", "#1f5fbf", "#1f5fbf", "#b22222", "#2e8b57", "#8a2be2")
POINT_COLORS = {1: "#2e8b57", -1: "#c0392b", 0: "#7f7f7f"}


def _as_curves(curves):
    if isinstance(curves, Curve):
        return [curves]
    if isinstance(curves, dict):
        return list(curves.items())
    return list(curves)


def _named(curves):
    out = []
    for i, c in enumerate(_as_curves(curves)):
        if isinstance(c, tuple):
            out.append((str(c[0]), c[1]))
        else:
            out.append((str(i), c))
    return out


def crop(nodes, bbox):
    """Boolean mask of nodes inside ``(lon_min, lon_max, lat_min, lat_max)`` degrees."""
    lon, lat = xyz_to_lonlat(nodes)
    lon_min, lon_max, lat_min, lat_max = bbox
    return (lon >= lon_min) & (lon <= lon_max) & (lat >= lat_min) & (lat <= lat_max)


def emit_polyline(curves, path, format="csv", points=None, labels=None, viewpoint=None,
                  bbox=None):
    """Write one or more curves (and optionally labeled points) to ``path``.

    ``curves`` is a Curve, a list of Curves or a ``{name: Curve}`` mapping.
    CSV has one row per node: ``curve,x,y,z,cumlen``.  SVG is an
    orthographic view from ``viewpoint`` (default: the direction of the
    centroid of everything drawn); only the near hemisphere is shown.
    ``bbox`` (degrees) drops nodes and points outside it.
    """
    named = _named(curves)
    if not named or any(len(c) == 0 for _, c in named):
        raise ValueError("nothing to draw")
    if format == "csv":
        _write_csv(named, path, bbox)
    elif format == "svg":
        _write_svg(named, path, points, labels, viewpoint, bbox)
    else:
        raise ValueError(f"unknown format {format!r}; expected csv or svg")


def _write_csv(named, path, bbox):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["curve", "x", "y", "z", "cumlen"])
        for name, curve in named:
            keep = np.ones(len(curve), dtype=bool) if bbox is None else crop(curve.nodes, bbox)
            for node, s, k in zip(curve.nodes, curve.cumulative_length, keep):
                if k:
                    w.writerow([name] + [f"{v:.17g}" for v in node] + [f"{s:.17g}"])


def read_polyline(path):
    """Curves written by :func:`emit_polyline` in CSV form, by name."""
    rows = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.setdefault(row["curve"], []).append([float(row[k]) for k in ("x", "y", "z")])
    return {name: Curve.from_nodes(np.array(nodes)) for name, nodes in rows.items()}


def _fmt(v):
    return f"{v:.3f}"


def _write_svg(named, path, points, labels, viewpoint, bbox):
    everything = [c.nodes for _, c in named]
    if points is not None:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        everything.append(points)
    if viewpoint is None:
        viewpoint = np.concatenate(everything).sum(axis=0)
        if np.linalg.norm(viewpoint) < 1e-12:
            viewpoint = np.array([1.0, 0.0, 0.0])
    view = np.asarray(viewpoint, dtype=float)
    view = view / np.linalg.norm(view)
    e1, e2 = tangent_basis(view)
    half = SVG_SIZE / 2
    scale = 0.95 * half

    def screen(x):
        return half + scale * (x @ e1), half - scale * (x @ e2)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<circle cx="{_fmt(half)}" cy="{_fmt(half)}" r="{_fmt(scale)}" fill="none" '
        'stroke="#cccccc" stroke-width="1"/>',
    ]
    if points is not None:
        if labels is None:
            labels = np.zeros(len(points), dtype=int)
        keep = points @ view > 0
        if bbox is not None:
            keep &= crop(points, bbox)
        for p, lab in zip(points[keep], np.asarray(labels)[keep]):
            x, y = screen(p)
            color = POINT_COLORS.get(int(lab), POINT_COLORS[0])
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.5" fill="{color}"/>')
    for i, (name, curve) in enumerate(named):
        keep = curve.nodes @ view > 0
        if bbox is not None:
            keep &= crop(curve.nodes, bbox)
        color = PALETTE[i % len(PALETTE)]
        # one path per run of visible nodes
        runs, current = [], []
        for node, k in zip(curve.nodes, keep):
            if k:
                current.append(node)
            elif current:
                runs.append(current)
                current = []
        if current:
            runs.append(current)
        for run in runs:
            xy = [screen(n) for n in run]
            d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in xy)
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5">'
                       f"<title>{escape(name)}</title></path>")
    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
