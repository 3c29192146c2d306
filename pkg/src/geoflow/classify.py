"""Two-class labeling of points by soft margins to the class flows."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curve import project_points
from .errors import (
    AmbiguousProjectionError,
    GeoflowError,
    LengthMismatchError,
    ZeroSpreadError,
)

BOUNDARY = 0
TIE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ClassModel:
    label: int
    cloud: np.ndarray
    flow: object

    def __post_init__(self):
        if self.label not in (1, -1):
            raise ValueError("class labels must be +1 or -1")


@dataclass(frozen=True)
class Decision:
    """Outcome for one point.

    ``label`` is a class label or ``BOUNDARY`` (0).  ``r1``/``r2`` are the
    relative gaps, present only when both class distances vanish; then
    ``overlap`` is True.  ``error`` names the exception when the point
    could not be classified (``label`` is ``BOUNDARY`` in that case).
    """

    label: int
    d1: float
    d2: float
    r1: Optional[float] = None
    r2: Optional[float] = None
    overlap: bool = False
    error: Optional[str] = None


def _projection(p, flow):
    proj = project_points(p, flow.curve)
    if np.any(proj.ambiguous):
        raise AmbiguousProjectionError("nearest point on the flow is not unique")
    spread = np.interp(proj.position, flow.curve.cumulative_length, flow.node_spread)
    return proj.distance, spread


def class_distance(p, model):
    """``max(0, soft margin)``: zero between the two margin curves."""
    d, spread = _projection(p, model.flow)
    return float(max(0.0, d - spread))


def relative_gap(p, model, alpha=1.0, beta=1.0):
    """``d(p, flow)**alpha / spread**beta`` at the projection of ``p``."""
    d, spread = _projection(p, model.flow)
    if spread <= 0:
        raise ZeroSpreadError("zero spread at the projection")
    return float(d ** alpha / spread ** beta)


def _decide(d1, d2, s1, s2, l1, l2, alpha, beta, tie_tol):
    c1, c2 = max(0.0, d1 - s1), max(0.0, d2 - s2)
    if c1 == 0.0 and c2 == 0.0:
        if s1 <= 0 or s2 <= 0:
            raise ZeroSpreadError("zero spread at the projection")
        r1 = d1 ** alpha / s1 ** beta
        r2 = d2 ** alpha / s2 ** beta
        if abs(r1 - r2) <= tie_tol:
            label = BOUNDARY
        else:
            label = l1 if r1 < r2 else l2
        return Decision(label, c1, c2, float(r1), float(r2), True)
    if abs(c1 - c2) <= tie_tol:
        return Decision(BOUNDARY, c1, c2)
    return Decision(l1 if c1 < c2 else l2, c1, c2)


def classify_point(p, m1, m2, alpha=1.0, beta=1.0, tie_tol=TIE_TOL):
    """Label ``p`` by the nearer class, in margin terms.

    Nearer by more than ``tie_tol`` wins; equal distances give
    ``BOUNDARY``; when ``p`` lies inside both margin tubes the smaller
    relative gap wins.
    """
    d1, s1 = _projection(p, m1.flow)
    d2, s2 = _projection(p, m2.flow)
    return _decide(float(d1), float(d2), float(s1), float(s2),
                   m1.label, m2.label, alpha, beta, tie_tol)


def label_grid(mesh, m1, m2, alpha=1.0, beta=1.0, tie_tol=TIE_TOL):
    """:func:`classify_point` over ``mesh``, keeping order.

    Projections are batched; a point whose projection fails gets a
    ``BOUNDARY`` decision carrying the error name.
    """
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3)
    if len(mesh) == 0:
        return []
    out = []
    p1 = project_points(mesh, m1.flow.curve)
    p2 = project_points(mesh, m2.flow.curve)
    s1 = np.interp(p1.position, m1.flow.curve.cumulative_length, m1.flow.node_spread)
    s2 = np.interp(p2.position, m2.flow.curve.cumulative_length, m2.flow.node_spread)
    for i in range(len(mesh)):
        d1, d2 = float(p1.distance[i]), float(p2.distance[i])
        if p1.ambiguous[i] or p2.ambiguous[i]:
            out.append(Decision(BOUNDARY, d1, d2, error=AmbiguousProjectionError.__name__))
            continue
        try:
            out.append(_decide(d1, d2, float(s1[i]), float(s2[i]),
                               m1.label, m2.label, alpha, beta, tie_tol))
        except GeoflowError as exc:
            out.append(Decision(BOUNDARY, d1, d2, error=type(exc).__name__))
    return out


def error_rate(decisions, truth):
    """Overall miss rate and the misses per true class.

    A decision counts as a miss unless it carries the true label, so
    boundary decisions are misses whichever class the point came from.
    The pair lists misses for true label +1 first, then -1.
    """
    labels = [d.label if isinstance(d, Decision) else int(d) for d in decisions]
    truth = [int(t) for t in truth]
    if len(labels) != len(truth):
        raise LengthMismatchError(f"{len(labels)} decisions for {len(truth)} labels")
    if any(t not in (1, -1) for t in truth):
        raise ValueError("true labels must be +1 or -1")
    if not truth:
        return 0.0, (0, 0)
    miss_pos = sum(1 for l, t in zip(labels, truth) if t == 1 and l != t)
    miss_neg = sum(1 for l, t in zip(labels, truth) if t == -1 and l != t)
    return (miss_pos + miss_neg) / len(truth), (miss_pos, miss_neg)
