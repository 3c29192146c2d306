"""Hard-margin linear SVMs in tangent planes and the piecewise SVM boundary."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import EmptyNeighborhoodError, GeoflowError, InseparableError
from .local import find_neighborhood
from .manifold import (
    exp_map,
    geodesic_distance,
    geodesic_point,
    log_map,
    parallel_transport_exact,
    tangent_basis,
)


def _hull_segments(pts):
    """Edges (as endpoint pairs) of the convex hull of 2-D points."""
    if len(pts) == 1:
        return pts[[0]], pts[[0]]
    if len(pts) >= 3:
        try:
            hull = ConvexHull(pts)
            return pts[hull.simplices[:, 0]], pts[hull.simplices[:, 1]]
        except QhullError:
            pass
    # collinear (or two points): the hull is the segment between the extremes
    centered = pts - pts.mean(axis=0)
    axis = np.linalg.svd(centered)[2][0]
    t = centered @ axis
    return pts[[np.argmin(t)]], pts[[np.argmax(t)]]


def _closest_to_segments(p, a, b):
    """Closest points on segments ``a``-``b`` to each point of ``p``: (dist, point) of the best."""
    ab = b - a
    den = np.einsum("ij,ij->i", ab, ab)
    rel = p[:, None, :] - a[None, :, :]
    t = np.divide(np.einsum("pij,ij->pi", rel, ab), den, out=np.zeros((len(p), len(a))),
                  where=den > 0)
    t = np.clip(t, 0.0, 1.0)
    foot = a[None] + t[..., None] * ab[None]
    d = np.linalg.norm(p[:, None, :] - foot, axis=-1)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return d[i, j], p[i], foot[i, j]


def hard_margin_svm(pts_a, pts_b):
    """Maximum-margin line separating two planar point sets.

    The optimal line is the perpendicular bisector of the closest pair of
    points between the convex hulls of the two sets.

    Returns
    -------
    normal : array, shape (2,)
        Unit normal pointing towards ``pts_a``.
    offset : float
        The line is ``{x : normal . x = offset}``.
    margin : float
        Distance from the line to the nearest point of either set.

    Raises
    ------
    InseparableError
        If no line separates the sets; ``pair`` holds the indices of the
        worst-placed point of each set for the best candidate line.
    """
    a = np.atleast_2d(np.asarray(pts_a, dtype=float))
    b = np.atleast_2d(np.asarray(pts_b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both classes need at least one point")
    d1, pa, pb = _closest_to_segments(a, *_hull_segments(b))
    d2, qb, qa = _closest_to_segments(b, *_hull_segments(a))
    if d2 < d1:
        pa, pb = qa, qb
    gap = pa - pb
    size = np.linalg.norm(gap)
    if size > 0:
        normal = gap / size
        offset = float(normal @ (pa + pb) / 2)
        sa = a @ normal - offset
        sb = b @ normal - offset
        margin = float(min(sa.min(), -sb.max()))
        if margin > 0 and abs(margin - size / 2) <= 1e-9 * max(1.0, size):
            return normal, offset, margin
    else:
        normal = np.array([1.0, 0.0])
        sa = a @ normal
        sb = b @ normal
    raise InseparableError("the two local classes are not linearly separable",
                           pair=(int(np.argmin(sa)), int(np.argmax(sb))))


@dataclass(frozen=True, eq=False)
class LocalSeparator:
    """A separating line in the tangent plane at ``base``.

    ``normal`` is a unit tangent vector at ``base`` pointing towards the
    first class; the line is ``{w : <w, normal> = offset}``.
    ``points1``/``points2`` are the lifted local samples (tangent vectors
    at ``base``).  ``node`` is the boundary node it belongs to, if any.
    """

    base: np.ndarray
    normal: np.ndarray
    offset: float
    margin: float
    points1: np.ndarray
    points2: np.ndarray
    node: int = -1

    @property
    def foot(self):
        """Point of the separating geodesic nearest to ``base``."""
        return exp_map(self.base, self.offset * self.normal)

    @property
    def direction(self):
        """Unit direction of the separator in the tangent plane at ``base``."""
        return np.cross(self.base, self.normal)

    def geodesic(self, half_length, count=21):
        """Nodes of the separating geodesic through :attr:`foot`."""
        foot = self.foot
        along = parallel_transport_exact(self.direction, self.base, foot)
        t = np.linspace(-half_length, half_length, count)
        return exp_map(foot, t[:, None] * along)


def local_separator(m1, m2, p1, p2, h1=None, h2=None, node=-1):
    """Hard-margin SVM between the neighborhoods of ``p1`` and ``p2``.

    Both neighborhoods (radius ``h1``/``h2``, by default the flows'
    locality radii) are lifted by the log map at the geodesic midpoint of
    ``p1`` and ``p2``.

    Raises
    ------
    EmptyNeighborhoodError, InseparableError
    """
    h1 = m1.flow.locality_h if h1 is None else h1
    h2 = m2.flow.locality_h if h2 is None else h2
    n1 = find_neighborhood(m1.cloud, p1, h1)
    n2 = find_neighborhood(m2.cloud, p2, h2)
    base = geodesic_point(p1, p2, 0.5)
    w1 = log_map(base, m1.cloud[n1.member_indices])
    w2 = log_map(base, m2.cloud[n2.member_indices])
    u1, u2 = tangent_basis(base)
    frame = np.stack([u1, u2])
    normal, offset, margin = hard_margin_svm(w1 @ frame.T, w2 @ frame.T)
    return LocalSeparator(base, normal @ frame, offset, margin, w1, w2, node)


def piecewise_svm_boundary(m1, m2, boundary):
    """One local separator per boundary node, from its matched projections.

    Returns
    -------
    separators : list of LocalSeparator
        For the nodes where a separator exists, in node order.
    statuses : list of str
        Per node: ``"ok"`` or the name of the error that skipped it.
    """
    separators, statuses = [], []
    for k in range(len(boundary.curve)):
        try:
            sep = local_separator(m1, m2, boundary.p1[k], boundary.p2[k], node=k)
        except (GeoflowError, EmptyNeighborhoodError) as exc:
            statuses.append(type(exc).__name__)
            continue
        separators.append(sep)
        statuses.append("ok")
    return separators, statuses


def segment_near(curve, point, half_width=1):
    """Sub-curve of ``curve`` around the node nearest ``point``."""
    k = int(np.argmin(geodesic_distance(curve.nodes, point)))
    lo = max(0, k - half_width)
    hi = min(len(curve), k + half_width + 1)
    return curve.nodes[lo:hi]


def equivalence_metrics(boundary_segment, separator):
    """Angle and margin difference between a boundary piece and a separator.

    The segment's chord is transported to the separator base and compared
    with the separating line (unsigned angle in [0, pi/2]).  The margin of
    the boundary is the smallest distance, in the tangent plane, from the
    local samples to the line through the lifted segment; ``margin_gap``
    is its difference from the SVM margin.
    """
    nodes = np.atleast_2d(getattr(boundary_segment, "nodes", boundary_segment))
    if len(nodes) < 2:
        raise ValueError("a boundary segment needs at least two nodes")
    base = separator.base
    chord = log_map(nodes[0], nodes[-1])
    chord = parallel_transport_exact(chord, nodes[0], base)
    chord /= np.linalg.norm(chord)
    cos = abs(float(chord @ separator.direction))
    angle = float(np.arccos(min(1.0, cos)))

    lifted = log_map(base, nodes)
    anchor = lifted[np.argmin(np.linalg.norm(lifted, axis=1))]
    normal = np.cross(base, chord)
    pts = np.concatenate([separator.points1, separator.points2])
    boundary_margin = float(np.abs((pts - anchor) @ normal).min())
    return angle, abs(boundary_margin - separator.margin)
