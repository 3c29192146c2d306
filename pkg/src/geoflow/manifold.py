"""Geometry primitives on an embedded surface.

Points and tangent vectors are plain float arrays whose last axis holds the
ambient coordinates, so every primitive broadcasts over leading axes.  The
unit sphere is the only shipped manifold; downstream modules use the
module-level functions, which delegate to :data:`SPHERE`.
"""

import math

import numpy as np

from .errors import CutLocusError

ANTIPODAL_TOL = 1e-9
DEFAULT_RUNG = 0.01
# ladder rungs carry a vector of length LADDER_SCALE * rung**2; the curvature
# error of one rung is O(rung * |vector|), so this makes the total error
# second order in the rung spacing
LADDER_SCALE = 0.1


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def _norm(a):
    return np.linalg.norm(a, axis=-1)


class Manifold:
    """Interface implemented by concrete manifolds.

    Subclasses provide ``exp``, ``log``, ``dist``, ``proj`` and
    ``transport``; Schild's ladder and geodesic interpolation are written
    against those alone.
    """

    dim = 2

    def normalize(self, x):
        raise NotImplementedError

    def exp(self, x, v):
        raise NotImplementedError

    def log(self, x, y):
        raise NotImplementedError

    def dist(self, x, y):
        raise NotImplementedError

    def proj(self, x, w):
        raise NotImplementedError

    def transport(self, v, x, y):
        raise NotImplementedError

    def geodesic_point(self, x, y, s):
        s = np.asarray(s, dtype=float)[..., None]
        return self.exp(x, s * self.log(x, y))

    def schild_rung(self, v, x0, x1):
        """One Schild's-ladder rung carrying ``v`` from ``x0`` to ``x1``.

        Builds the geodesic parallelogram ``x0, x1, far, tip`` whose
        diagonals share their midpoint.  ``v`` must be much shorter than
        ``d(x0, x1)`` for the result to be accurate.
        """
        tip = self.exp(x0, v)
        mid = self.geodesic_point(x1, tip, 0.5)
        far = self.exp(x0, 2.0 * self.log(x0, mid))
        return self.log(x1, far)

    def schild_transport(self, v, nodes, max_rung=DEFAULT_RUNG):
        v = np.array(v, dtype=float)
        nodes = np.asarray(nodes, dtype=float)
        size = float(_norm(v))
        if len(nodes) < 2 or size == 0.0:
            return v
        w = v / size
        for a, b in zip(nodes[:-1], nodes[1:]):
            seg = float(self.dist(a, b))
            if seg == 0.0:
                continue
            count = max(1, math.ceil(seg / max_rung))
            scale = LADDER_SCALE * (seg / count) ** 2
            stops = self.geodesic_point(a, b, np.linspace(0.0, 1.0, count + 1))
            for x0, x1 in zip(stops[:-1], stops[1:]):
                w = self.schild_rung(scale * w, x0, x1)
                w = w / _norm(w)
        return size * w


class Sphere(Manifold):
    """The unit sphere S^2 embedded in R^3, with closed-form geometry."""

    def normalize(self, x):
        x = np.asarray(x, dtype=float)
        return x / _norm(x)[..., None]

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        t = _norm(v)[..., None]
        if np.any(t >= np.pi):
            raise CutLocusError("tangent vector norm must stay below pi")
        # sinc keeps the zero-velocity case exact without a branch
        y = np.cos(t) * x + np.sinc(t / np.pi) * v
        return y / _norm(y)[..., None]

    def log(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        c = _dot(x, y)
        if np.any(c <= -1.0 + ANTIPODAL_TOL):
            raise CutLocusError("log map is undefined at the antipode")
        u = y - c[..., None] * x
        s = _norm(u)
        theta = np.arctan2(s, c)
        tiny = s < 1e-300
        scale = np.where(tiny, 1.0, theta / np.where(tiny, 1.0, s))
        return scale[..., None] * u

    def dist(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        # same value as arccos(clip(<x,y>)), without its loss near 0 and pi
        return np.arctan2(_norm(np.cross(x, y)), _dot(x, y))

    def proj(self, x, w):
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        return w - _dot(w, x)[..., None] * x

    def transport(self, v, x, y):
        v = np.asarray(v, dtype=float)
        x = np.asarray(x, dtype=float)
        u = self.log(x, y)
        theta = _norm(u)[..., None]
        e = np.divide(u, theta, out=np.zeros_like(u), where=theta > 0)
        a = _dot(v, e)[..., None]
        return v + a * ((np.cos(theta) - 1.0) * e - np.sin(theta) * x)

    def segment_projection(self, q, a, b):
        """Nearest points from ``q`` to the minor great-circle arcs ``a``-``b``.

        Broadcasts over leading axes.  Returns ``(dist, point, param, flat)``
        where ``param`` in [0, 1] locates the point on its arc and ``flat``
        marks arcs whose every point is equidistant from ``q`` (``q`` is a
        pole of the arc's great circle).
        """
        q = np.asarray(q, dtype=float)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        pole = np.cross(a, b)
        pole = pole / _norm(pole)[..., None]
        length = self.dist(a, b)
        inplane = q - _dot(q, pole)[..., None] * pole
        size = _norm(inplane)
        flat = size < 1e-12
        foot = inplane / np.where(flat, 1.0, size)[..., None]
        angle = np.arctan2(_dot(np.cross(a, foot), pole), _dot(a, foot))
        param = np.clip(angle / length, 0.0, 1.0)
        # a foot behind the start is closer to whichever endpoint it wraps to
        da = self.dist(q, a)
        db = self.dist(q, b)
        outside = (angle < 0) | (angle > length)
        param = np.where(outside & (db < da), 1.0, np.where(outside, 0.0, param))
        param = np.where(flat, 0.0, param)
        point = self.geodesic_point(a, b, param)
        return self.dist(q, point), point, param, flat


SPHERE = Sphere()


def as_point(x):
    """Return ``x`` renormalized to unit norm."""
    return SPHERE.normalize(x)


def exp_map(x, v):
    """Exponential map ``cos|v| x + sin|v| v/|v|``.

    Raises
    ------
    CutLocusError
        If ``|v| >= pi``.
    """
    return SPHERE.exp(x, v)


def log_map(x, y):
    """Inverse of :func:`exp_map`; its norm is the geodesic distance."""
    return SPHERE.log(x, y)


def geodesic_distance(x, y):
    return SPHERE.dist(x, y)


def geodesic_point(x, y, s):
    """Point a fraction ``s`` of the way along the geodesic from x to y."""
    return SPHERE.geodesic_point(x, y, s)


def project_to_tangent(x, w):
    return SPHERE.proj(x, w)


def parallel_transport_exact(v, x, y):
    """Closed-form Levi-Civita transport of ``v`` along the geodesic x -> y."""
    return SPHERE.transport(v, x, y)


def parallel_transport_schild(v, path, max_rung=DEFAULT_RUNG):
    """Transport ``v`` along a polyline by Schild's ladder.

    Parameters
    ----------
    v : array, shape (3,)
        Tangent vector at the first node of ``path``.
    path : Curve or array, shape (k, 3)
        Nodes of the path; each segment is followed along its geodesic.
    max_rung : float
        Upper bound on the geodesic length of a single rung.

    Returns
    -------
    array, shape (3,)
        Tangent vector at the last node, rescaled to ``|v|``.
    """
    nodes = getattr(path, "nodes", path)
    return SPHERE.schild_transport(v, nodes, max_rung=max_rung)


def tangent_basis(x):
    """Orthonormal basis ``(u1, u2)`` of the tangent plane at ``x``.

    Deterministic: built from the coordinate axis least aligned with ``x``.
    """
    x = np.asarray(x, dtype=float)
    axis = np.zeros(3)
    axis[np.argmin(np.abs(x))] = 1.0
    u1 = axis - np.dot(axis, x) * x
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(x, u1)
    return u1, u2
