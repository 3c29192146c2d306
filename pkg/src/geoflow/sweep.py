"""Grid sweeps over the two locality radii."""

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .boundary import trace_boundary
from .classify import ClassModel, error_rate, label_grid
from .errors import GeoflowError
from .flow import principal_flow

THREADS_ENV = "GEOFLOW_THREADS"


@dataclass(frozen=True)
class SweepCell:
    """Outcome for one ``(h1, h2)`` pair.

    ``status`` is ``"ok"`` or the name of the error that stopped the
    cell.  ``boundary_status`` reports the boundary trace separately,
    since classification does not depend on it.
    """

    h1: float
    h2: float
    misses1: int
    misses2: int
    rate: float
    status: str = "ok"
    boundary_status: str = "ok"
    boundary_nodes: int = 0


def thread_count():
    """Worker count from ``GEOFLOW_THREADS`` (default 1)."""
    value = os.environ.get(THREADS_ENV, "").strip()
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _flows(cloud, grid, options):
    out = {}
    for h in grid:
        try:
            out[h] = principal_flow(cloud, h, skip_degenerate=True, **options)
        except GeoflowError as exc:
            out[h] = exc
    return out


def run_cell(m1, m2, truth, points, boundary=True, boundary_options=None,
             alpha=1.0, beta=1.0):
    """Classify ``points`` with two class models and score against ``truth``."""
    h1, h2 = m1.flow.locality_h, m2.flow.locality_h
    b_status, b_nodes = "skipped", 0
    if boundary:
        try:
            result = trace_boundary(m1.flow, m2.flow, **(boundary_options or {}))
            b_nodes = len(result.curve)
            b_status = "ok"
        except GeoflowError as exc:
            b_status = type(exc).__name__
    decisions = label_grid(points, m1, m2, alpha=alpha, beta=beta)
    rate, (miss1, miss2) = error_rate(decisions, truth)
    return SweepCell(h1, h2, miss1, miss2, rate, "ok", b_status, b_nodes)


def sweep(dataset, h1_grid, h2_grid, boundary=True, boundary_options=None,
          flow_options=None, alpha=1.0, beta=1.0, threads=None):
    """Misclassification table over ``h1_grid`` x ``h2_grid``.

    Class +1 flows use ``h1`` and class -1 flows use ``h2``; each flow is
    built once per radius.  Every cell classifies the whole training set.
    A failure fills the cell with a status instead of stopping the sweep
    (its rate is NaN).

    Returns
    -------
    list of SweepCell
        Row-major in ``(h1, h2)``.
    """
    h1_grid = [float(h) for h in h1_grid]
    h2_grid = [float(h) for h in h2_grid]
    if not h1_grid or not h2_grid:
        raise ValueError("both grids need at least one value")
    cloud1, cloud2 = dataset.split()
    flow_options = flow_options or {}
    flows1 = _flows(cloud1, h1_grid, flow_options)
    flows2 = _flows(cloud2, h2_grid, flow_options)

    def cell(pair):
        h1, h2 = pair
        f1, f2 = flows1[h1], flows2[h2]
        bad = f1 if isinstance(f1, Exception) else f2 if isinstance(f2, Exception) else None
        if bad is not None:
            return SweepCell(h1, h2, 0, 0, float("nan"), type(bad).__name__, "skipped")
        try:
            return run_cell(ClassModel(1, cloud1, f1), ClassModel(-1, cloud2, f2),
                            dataset.labels, dataset.points, boundary, boundary_options,
                            alpha, beta)
        except GeoflowError as exc:
            return SweepCell(h1, h2, 0, 0, float("nan"), type(exc).__name__, "skipped")

    pairs = [(a, b) for a in h1_grid for b in h2_grid]
    workers = thread_count() if threads is None else max(1, int(threads))
    if workers == 1:
        return [cell(p) for p in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(cell, pairs))


def best_cell(cells):
    """Lowest-rate successful cell; the first one in grid order on ties."""
    ok = [c for c in cells if c.status == "ok" and np.isfinite(c.rate)]
    if not ok:
        return None
    return min(ok, key=lambda c: c.rate)


def grid(start, stop, step):
    """Inclusive arithmetic grid, rounded to avoid drift (0.1, 0.11, ...)."""
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def write_sweep_csv(cells, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["h1", "h2", "misses1", "misses2", "rate", "status",
                    "boundary_status", "boundary_nodes"])
        for c in cells:
            w.writerow([f"{c.h1:.17g}", f"{c.h2:.17g}", c.misses1, c.misses2,
                        f"{c.rate:.17g}", c.status, c.boundary_status, c.boundary_nodes])
