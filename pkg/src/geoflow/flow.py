"""Principal flows: greedy integration of the modified vector field."""

from dataclasses import dataclass

import numpy as np

from .curve import Curve
from .errors import DegenerateSpectrumError, EmptyNeighborhoodError
from .field import build_modified_field, field_at
from .frechet import frechet_mean
from .local import find_neighborhood, tangent_eigen, weighted_covariance
from .manifold import exp_map, geodesic_distance, log_map, project_to_tangent

__all__ = [
    "FlowResult",
    "frechet_mean",
    "trace_flow",
    "principal_flow",
    "margin_curves",
    "node_spread",
    "choose_start",
]


@dataclass(frozen=True, eq=False)
class FlowResult:
    """A traced flow with its per-node spread and unit direction.

    ``node_direction[k]`` is tangent at ``curve.nodes[k]`` and points in
    the direction of increasing arc length.
    """

    curve: Curve
    node_spread: np.ndarray
    node_direction: np.ndarray
    locality_h: float

    def spread_at(self, s):
        """Spread interpolated linearly in arc length."""
        return float(np.interp(s, self.curve.cumulative_length, self.node_spread))

    @property
    def nodes(self):
        return self.curve.nodes


def node_spread(cloud, point, h):
    """``(lambda2 / lambda1) * h`` of the kernel-weighted covariance at ``point``."""
    hood = find_neighborhood(cloud, point, h)
    logs = log_map(point, np.atleast_2d(cloud)[hood.member_indices])
    lam, _ = tangent_eigen(weighted_covariance(logs, hood.weights), point)
    if lam[0] <= 0:
        raise DegenerateSpectrumError("zero local covariance")
    return lam[1] / lam[0] * h


def _trace(field, x0, v0, step, max_length):
    nodes = [np.asarray(x0, dtype=float)]
    dirs = [field_at(x0, field, reference=v0)]
    length = 0.0
    max_steps = int(np.ceil(max_length / step)) + 1 if max_length > 0 else 0
    for _ in range(max_steps):
        remaining = max_length - length
        if remaining <= 1e-12:
            break
        s = min(step, remaining)
        q = exp_map(nodes[-1], s * dirs[-1])
        try:
            d = field_at(q, field, reference=dirs[-1])
        except (EmptyNeighborhoodError, DegenerateSpectrumError):
            break
        if len(nodes) > 3:
            # Curves in the admissible class do not cross themselves.
            if geodesic_distance(np.array(nodes[:-3]), q).min() < 0.5 * s:
                break
        nodes.append(q)
        dirs.append(d)
        length += s
    return np.array(nodes), np.array(dirs)


def _spreads(cloud, nodes, h):
    out = np.empty(len(nodes))
    for k, p in enumerate(nodes):
        try:
            out[k] = node_spread(cloud, p, h)
        except (DegenerateSpectrumError, EmptyNeighborhoodError) as exc:
            raise DegenerateSpectrumError(f"node {k}: {exc}", node=k) from exc
    return out


def trace_flow(field, x0, v0, step=None, max_length=np.pi):
    """Integrate the field forward from ``x0`` with initial direction ``v0``.

    Explicit geodesic steps ``q <- exp_q(step * W(q))`` where ``W`` is the
    field direction aligned with the previous step.  Stops at
    ``max_length``, when the query point leaves the data (empty
    neighborhood), or when the curve would cross itself.
    """
    h = field.locality_h
    if step is None:
        step = h / 5
    nodes, dirs = _trace(field, x0, v0, step, max_length)
    curve = Curve.from_nodes(nodes)
    return FlowResult(curve, _spreads(field.cloud, curve.nodes, h), dirs, h)


def choose_start(cloud, h):
    """Default starting point: the intrinsic mean of the cloud.

    If the mean has no sample within ``h`` (a hollow shape such as a C),
    the intrinsic mean of the neighborhood of the sample nearest to it is
    used instead.
    """
    cloud = np.atleast_2d(cloud)
    mean = frechet_mean(cloud)
    d = geodesic_distance(cloud, mean)
    if d.min() <= h:
        return mean
    nearest = cloud[np.argmin(d)]
    return frechet_mean(cloud[geodesic_distance(cloud, nearest) <= h])


def principal_flow(cloud, h, x0=None, step=None, max_length=np.pi, field=None,
                   skip_degenerate=False):
    """Two-sided modified principal flow of ``cloud``.

    Parameters
    ----------
    cloud : array, shape (n, 3)
    h : float
        Locality radius (radians).
    x0 : array, optional
        Starting point; see :func:`choose_start` for the default.
    step : float, optional
        Integration step, default ``h / 5``.
    max_length : float
        Cap on the length of each half.
    field : SampleField, optional
        Pre-built modified field for ``cloud`` and ``h``.

    Returns
    -------
    FlowResult
        The backward half reversed, joined to the forward half at ``x0``.
    """
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    if field is None:
        field = build_modified_field(cloud, h, skip_degenerate=skip_degenerate)
    if step is None:
        step = h / 5
    if x0 is None:
        x0 = choose_start(cloud, h)
    x0 = np.asarray(x0, dtype=float)
    v0 = field_at(x0, field)
    fwd_nodes, fwd_dirs = _trace(field, x0, v0, step, max_length)
    back_nodes, back_dirs = _trace(field, x0, -v0, step, max_length)
    nodes = np.concatenate([back_nodes[::-1], fwd_nodes[1:]])
    dirs = np.concatenate([-back_dirs[::-1], fwd_dirs[1:]])
    curve = Curve.from_nodes(nodes)
    return FlowResult(curve, _spreads(cloud, curve.nodes, h), dirs, float(h))


def margin_curves(flow):
    """The two curves offset from the flow by its spread on either side.

    Node ``k`` moves by ``+-sigma_k`` along ``node_k x direction_k``, so the
    first curve is always on the left of the direction of travel.
    """
    if len(flow.curve) < 2:
        raise ValueError("margin curves need a flow with at least two nodes")
    nodes = flow.curve.nodes
    normals = np.cross(nodes, flow.node_direction)
    normals = project_to_tangent(nodes, normals)
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    offset = flow.node_spread[:, None] * normals
    left = Curve.from_nodes(exp_map(nodes, offset), drop_duplicates=True)
    right = Curve.from_nodes(exp_map(nodes, -offset), drop_duplicates=True)
    return left, right
