"""Point clouds scattered around a population curve, and convergence runs."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .boundary import trace_boundary
from .curve import Curve, project_points
from .errors import EmptyNeighborhoodError, GeoflowError
from .flow import FlowResult, node_spread
from .frechet import frechet_mean
from .local import find_neighborhood
from .manifold import exp_map, geodesic_point, log_map


@dataclass(frozen=True, eq=False)
class CurveDistribution:
    """Uniform position along ``population`` plus a Gaussian normal offset.

    ``normal_sd`` is a scalar or one value per population node (linearly
    interpolated in arc length).
    """

    population: Curve
    normal_sd: object
    seed: int = 0

    def __post_init__(self):
        sd = np.asarray(self.normal_sd, dtype=float)
        if sd.ndim not in (0, 1) or (sd.ndim == 1 and len(sd) != len(self.population)):
            raise ValueError("normal_sd must be a scalar or one value per node")
        if np.any(sd < 0):
            raise ValueError("normal_sd must be nonnegative")

    def sd_at(self, s):
        sd = np.asarray(self.normal_sd, dtype=float)
        if sd.ndim == 0:
            return np.full(np.shape(s), float(sd))
        return np.interp(s, self.population.cumulative_length, sd)


def coverage_sd(h, eps):
    """Normal SD putting mass ``1 - eps`` within ``h`` of the curve."""
    return h / norm.ppf(1.0 - eps / 2.0)


def points_and_normals(curve, s):
    """Curve points at arc lengths ``s`` with their unit normals (point x tangent)."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, curve.length)
    cum = curve.cumulative_length
    k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2)
    frac = (s - cum[k]) / (cum[k + 1] - cum[k])
    a, b = curve.nodes[k], curve.nodes[k + 1]
    pts = geodesic_point(a, b, frac)
    tangent = log_map(pts, b)
    at_end = frac >= 1.0
    if np.any(at_end):
        tangent[at_end] = -log_map(pts[at_end], a[at_end])
    tangent /= np.linalg.norm(tangent, axis=-1, keepdims=True)
    normal = np.cross(pts, tangent)
    return pts, normal


def draw(dist, n, rng):
    """Arc-length positions and standard normal deviates for ``n`` samples."""
    return rng.uniform(0.0, dist.population.length, n), rng.standard_normal(n)


def place(dist, s, z):
    """Points at positions ``s`` offset by ``z * sd`` along the normal."""
    pts, normal = points_and_normals(dist.population, s)
    offset = (z * dist.sd_at(s))[:, None] * normal
    return exp_map(pts, offset)


def sample_along_curve(dist, n):
    """``n`` samples from ``dist``; identical seeds give identical draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    s, z = draw(dist, n, np.random.default_rng(dist.seed))
    return place(dist, s, z)


def continuous_flow_estimate(dist, h, t_grid, n_mc, samples=None):
    """Monte-Carlo estimate of the mean of the data near each curve point.

    For every arc length ``t`` the Fréchet mean of the samples lying
    within ``h`` of the population point at ``t`` (any sample that lands
    there counts, wherever along the curve it was drawn).

    Raises
    ------
    EmptyNeighborhoodError
        If no sample falls near some grid point.
    """
    if samples is None:
        samples = sample_along_curve(dist, n_mc)
    centers, _ = points_and_normals(dist.population, t_grid)
    out = np.empty_like(centers)
    for i, c in enumerate(centers):
        hood = find_neighborhood(samples, c, h)
        out[i] = frechet_mean(samples[hood.member_indices])
    return Curve.from_nodes(out)


def as_flow(curve, cloud, h):
    """Wrap a curve as a flow, with spreads measured on ``cloud``."""
    nodes = curve.nodes
    dirs = np.empty_like(nodes)
    for k in range(len(nodes)):
        dirs[k] = curve.tangent_at(curve.cumulative_length[k])
    if cloud is None:
        spread = np.zeros(len(nodes))
    else:
        spread = np.array([node_spread(cloud, p, h) for p in nodes])
    return FlowResult(curve, spread, dirs, float(h))


@dataclass(frozen=True)
class ConvergenceRow:
    sd: float
    flow_error: float
    flow_se: float
    boundary_error: float
    boundary_se: float


def _mean_se(values):
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if len(values) == 0:
        return float("nan"), float("nan")
    se = values.std(ddof=1) / np.sqrt(len(values)) if len(values) > 1 else float("nan")
    return float(values.mean()), float(se)


def convergence_experiment(dist1, dist2, h, sd_schedule, n_mc, replicates=8,
                           grid_points=25, delta=None, trim=None):
    """Errors of estimated flows and boundaries as the noise shrinks.

    For each SD in ``sd_schedule`` (and each replicate ``r``, seeded with
    ``dist.seed + r``) both classes are sampled with that SD, the
    continuous flows are estimated on an interior arc-length grid, and

    * ``flow_error`` is the largest Euclidean distance from an estimated
      node to its population curve (worst class);
    * ``boundary_error`` is the largest distance from the boundary traced
      between the estimated flows to the boundary traced between the
      population curves (zero spreads).

    The same uniform and normal draws are reused across SDs within a
    replicate, so rows differ only by the noise scale.

    Returns
    -------
    list of ConvergenceRow
        Replicate means with their standard errors.
    """
    sd_schedule = [float(s) for s in sd_schedule]
    if any(b >= a for a, b in zip(sd_schedule, sd_schedule[1:])):
        raise ValueError("sd_schedule must be strictly decreasing")
    if trim is None:
        trim = h
    pop1, pop2 = dist1.population, dist2.population
    pop_boundary = trace_boundary(as_flow(pop1, None, h), as_flow(pop2, None, h),
                                  delta=delta).curve
    grids = [np.linspace(trim, p.length - trim, grid_points) for p in (pop1, pop2)]

    flow_err = np.full((len(sd_schedule), replicates), np.nan)
    bnd_err = np.full((len(sd_schedule), replicates), np.nan)
    for r in range(replicates):
        draws = [draw(d, n_mc, np.random.default_rng(d.seed + r)) for d in (dist1, dist2)]
        for i, sd in enumerate(sd_schedule):
            flows, worst = [], 0.0
            try:
                for d, (s, z), grid in zip((dist1, dist2), draws, grids):
                    scaled = CurveDistribution(d.population, sd, d.seed)
                    cloud = place(scaled, s, z)
                    est = continuous_flow_estimate(scaled, h, grid, n_mc, samples=cloud)
                    proj = project_points(est.nodes, d.population, ambiguity_length=np.inf)
                    gap = np.linalg.norm(est.nodes - proj.point, axis=1).max()
                    worst = max(worst, float(gap))
                    flows.append(as_flow(est, cloud, h))
                flow_err[i, r] = worst
                bnd = trace_boundary(*flows, delta=delta).curve
                proj = project_points(bnd.nodes, pop_boundary, ambiguity_length=np.inf)
                bnd_err[i, r] = float(np.linalg.norm(bnd.nodes - proj.point, axis=1).max())
            except (GeoflowError, EmptyNeighborhoodError):
                continue
    rows = []
    for i, sd in enumerate(sd_schedule):
        fe, fse = _mean_se(flow_err[i])
        be, bse = _mean_se(bnd_err[i])
        rows.append(ConvergenceRow(sd, fe, fse, be, bse))
    return rows


def write_convergence_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sd", "flow_error", "flow_se", "boundary_error", "boundary_se"])
        for row in rows:
            w.writerow([f"{row.sd:.17g}", f"{row.flow_error:.17g}", f"{row.flow_se:.17g}",
                        f"{row.boundary_error:.17g}", f"{row.boundary_se:.17g}"])


def log_log_slope(x, y):
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
