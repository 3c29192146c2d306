"""Polyline curves on the sphere parameterized by arc length."""

from dataclasses import dataclass

import numpy as np

from .manifold import SPHERE, geodesic_distance, geodesic_point, log_map


@dataclass(frozen=True, eq=False)
class Curve:
    """Ordered nodes joined by minor geodesic arcs.

    ``cumulative_length[k]`` is the geodesic length from the first node to
    node ``k``; it starts at 0 and is strictly increasing.
    """

    nodes: np.ndarray
    cumulative_length: np.ndarray

    @classmethod
    def from_nodes(cls, nodes, drop_duplicates=False):
        nodes = SPHERE.normalize(np.atleast_2d(np.asarray(nodes, dtype=float)))
        if len(nodes) == 0:
            raise ValueError("a curve needs at least one node")
        steps = geodesic_distance(nodes[:-1], nodes[1:])
        if drop_duplicates and len(nodes) > 1:
            keep = np.concatenate([[True], steps > 0])
            nodes = nodes[keep]
            steps = geodesic_distance(nodes[:-1], nodes[1:])
        if np.any(steps <= 0):
            raise ValueError("consecutive curve nodes must be distinct")
        if np.any(steps >= np.pi - 1e-9):
            raise ValueError("consecutive curve nodes must not be antipodal")
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        nodes.setflags(write=False)
        cum.setflags(write=False)
        return cls(nodes, cum)

    def __len__(self):
        return len(self.nodes)

    @property
    def length(self):
        return float(self.cumulative_length[-1])

    def locate(self, s):
        """Segment index and fraction for arc-length position ``s``."""
        cum = self.cumulative_length
        if len(cum) == 1:
            return 0, 0.0
        s = min(max(float(s), 0.0), cum[-1])
        k = int(np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2))
        frac = (s - cum[k]) / (cum[k + 1] - cum[k])
        return k, float(frac)

    def point_at(self, s):
        if len(self) == 1:
            return self.nodes[0].copy()
        k, frac = self.locate(s)
        return geodesic_point(self.nodes[k], self.nodes[k + 1], frac)

    def tangent_at(self, s):
        """Unit tangent at arc length ``s``, oriented along increasing ``s``."""
        if len(self) == 1:
            raise ValueError("a single-node curve has no tangent")
        k, frac = self.locate(s)
        return segment_tangent(self.nodes[k], self.nodes[k + 1], frac)

    def reversed(self):
        return Curve.from_nodes(self.nodes[::-1])


def segment_tangent(a, b, frac):
    """Unit velocity of the geodesic a -> b at fraction ``frac``."""
    p = geodesic_point(a, b, frac)
    if frac < 1.0:
        v = log_map(p, b)
    else:
        v = -log_map(p, a)
    return v / np.linalg.norm(v)


def resample(curve, count):
    """``count`` points equally spaced in arc length along ``curve``."""
    return np.array([curve.point_at(s) for s in np.linspace(0.0, curve.length, count)])


def hausdorff_distance(a, b):
    """Symmetric Hausdorff distance between two point sets (geodesic metric)."""
    a = np.atleast_2d(getattr(a, "nodes", a))
    b = np.atleast_2d(getattr(b, "nodes", b))
    d = geodesic_distance(a[:, None, :], b[None, :, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


AMBIGUITY_LENGTH = 0.01


@dataclass(frozen=True, eq=False)
class CurveProjection:
    """Nearest points on a curve for a batch of query points.

    ``position`` is the arc-length coordinate of the nearest point and
    ``ambiguous`` flags queries whose near-minimal points (within the
    projection tolerance of the minimum distance) spread over more than
    the ambiguity length along the curve.
    """

    distance: np.ndarray
    point: np.ndarray
    position: np.ndarray
    segment: np.ndarray
    param: np.ndarray
    ambiguous: np.ndarray


def project_points(q, curve, tol_proj=1e-6, ambiguity_length=AMBIGUITY_LENGTH):
    """Project query points ``q`` (shape (..., 3)) onto ``curve``.

    Each segment is handled in closed form (foot of the perpendicular on
    its great circle, clamped to the arc).
    """
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    nodes, cum = curve.nodes, curve.cumulative_length
    n = len(q)
    if len(nodes) == 1:
        d = geodesic_distance(q, nodes[0])
        zeros = np.zeros(n)
        out = CurveProjection(d, np.repeat(nodes, n, axis=0), zeros,
                              zeros.astype(int), zeros, np.zeros(n, dtype=bool))
    else:
        d, pts, param, flat = SPHERE.segment_projection(q[:, None, :], nodes[:-1], nodes[1:])
        seglen = np.diff(cum)
        pos = cum[:-1] + param * seglen
        k = np.argmin(d, axis=1)
        rows = np.arange(n)
        dmin = d[rows, k]
        near = d <= dmin[:, None] + tol_proj
        lo = np.where(flat, cum[:-1], pos)
        hi = np.where(flat, cum[1:], pos)
        extent = (np.where(near, hi, -np.inf).max(axis=1)
                  - np.where(near, lo, np.inf).min(axis=1))
        out = CurveProjection(dmin, pts[rows, k], pos[rows, k], k, param[rows, k],
                              extent > ambiguity_length)
    if single:
        return CurveProjection(*(getattr(out, f)[0] for f in
                                 ("distance", "point", "position", "segment", "param", "ambiguous")))
    return out


def trimmed_hausdorff(curve, template, samples=2000):
    """Hausdorff distance between ``template`` and the part of ``curve`` beside it.

    Nodes of ``curve`` whose nearest template point is a template endpoint
    (the curve runs on past the template) are dropped.  Distances are taken
    to the polylines, not just their nodes.
    """
    dense = Curve.from_nodes(resample(template, samples))
    to_template = project_points(curve.nodes, dense, ambiguity_length=np.inf)
    end = dense.length
    keep = (to_template.position > 1e-9) & (to_template.position < end - 1e-9)
    if not keep.any():
        return float("inf")
    to_curve = project_points(dense.nodes, curve, ambiguity_length=np.inf)
    return float(max(to_template.distance[keep].max(), to_curve.distance.max()))
