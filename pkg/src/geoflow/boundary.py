"""Soft margins and the principal-boundary tracer between two flows."""

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import brentq

from .curve import AMBIGUITY_LENGTH, Curve, project_points
from .errors import (
    AmbiguousProjectionError,
    CutLocusError,
    EndOfFlowError,
    GeoflowError,
    NonConvergenceError,
    SeparationError,
)
from .manifold import (
    SPHERE,
    exp_map,
    geodesic_distance,
    geodesic_point,
    log_map,
    parallel_transport_schild,
)

TOL_PROJ = 1e-6
DEFAULT_EPS = 0.05
MAX_INNER_ITERS = 100


@dataclass(frozen=True)
class ProjectionResult:
    point: np.ndarray
    node_index: int
    arc_parameter: float
    distance: float
    position: float


@dataclass(frozen=True)
class BoundaryState:
    q: np.ndarray
    lam: float
    p1: ProjectionResult
    p2: ProjectionResult
    prev_direction: np.ndarray
    t: float = 0.0
    corrected: bool = False


@dataclass(frozen=True, eq=False)
class BoundaryResult:
    """A traced boundary.

    ``per_node_margin`` holds ``min(m1, m2)`` and ``per_node_residual``
    holds ``m1 - m2`` at each node; ``p1``/``p2`` are the node's nearest
    points on the two flows.  ``termination`` gives the stop reason of the
    backward and forward halves.  ``per_node_offset`` is the distance of
    each node from the geodesic joining ``p1`` and ``p2`` (a diagnostic:
    forward stepping does not force it to zero).
    """

    curve: Curve
    per_node_margin: np.ndarray
    per_node_lambda: np.ndarray
    per_node_residual: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    corrected: np.ndarray
    termination: tuple = dc_field(default=("", ""))
    per_node_offset: np.ndarray = None


def default_tol_margin(flow1, flow2):
    return max(1e-6 * 0.5 * (flow1.locality_h + flow2.locality_h), 1e-8)


def project_to_curve(q, curve, tol_proj=TOL_PROJ, ambiguity_length=AMBIGUITY_LENGTH):
    """Nearest point of ``curve`` to ``q``.

    Raises
    ------
    AmbiguousProjectionError
        If points at (near-)minimal distance are spread along the curve,
        i.e. the nearest point is not unique.
    """
    proj = project_points(q, curve, tol_proj=tol_proj, ambiguity_length=ambiguity_length)
    if proj.ambiguous:
        raise AmbiguousProjectionError("nearest point on the curve is not unique")
    return ProjectionResult(
        np.asarray(proj.point), int(proj.segment), float(proj.param),
        float(proj.distance), float(proj.position),
    )


def margin(q, flow, tol_proj=TOL_PROJ):
    """Soft margin ``d(q, flow) - sigma`` at the projection of ``q``.

    Negative when ``q`` sits inside the spread tube of the flow.
    """
    pr = project_to_curve(q, flow.curve, tol_proj)
    return pr.distance - flow.spread_at(pr.position)


def _margins(q, flow1, flow2):
    pr1 = project_to_curve(q, flow1.curve)
    pr2 = project_to_curve(q, flow2.curve)
    m1 = pr1.distance - flow1.spread_at(pr1.position)
    m2 = pr2.distance - flow2.spread_at(pr2.position)
    return m1, m2, pr1, pr2


def _residual(q, flow1, flow2):
    m1, m2, _, _ = _margins(q, flow1, flow2)
    return m1 - m2


def equal_margin_point(a, b, flow1, flow2, tol_margin):
    """Point on the geodesic a -> b where both soft margins agree.

    Raises
    ------
    SeparationError
        When the margin difference does not change sign along the geodesic.
    """
    if geodesic_distance(a, b) < 1e-14:
        raise SeparationError("flows touch: the connecting geodesic is degenerate")
    try:
        log_map(a, b)
    except CutLocusError as exc:
        raise SeparationError("connecting geodesic is undefined") from exc

    def f(s):
        return _residual(geodesic_point(a, b, s), flow1, flow2)

    fa, fb = f(0.0), f(1.0)
    if fa == 0.0:
        return np.asarray(a, dtype=float)
    if fb == 0.0:
        return np.asarray(b, dtype=float)
    if np.sign(fa) == np.sign(fb):
        raise SeparationError("no equal-margin point between the flows here")
    s = brentq(f, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    q = geodesic_point(a, b, s)
    r = f(s)
    if abs(r) > tol_margin:
        raise SeparationError(f"margin difference jumps across the flows (|r|={abs(r):.3g})")
    return q


def _at_end(pr, curve):
    return pr.position <= 1e-9 or pr.position >= curve.length - 1e-9


def _near_end(pr, curve, delta):
    return pr.position <= delta or pr.position >= curve.length - delta


def _transported_tangents(q, pr1, pr2, flow1, flow2, max_rung):
    v1 = flow1.curve.tangent_at(pr1.position)
    v2 = flow2.curve.tangent_at(pr2.position)
    t1 = parallel_transport_schild(v1, np.array([pr1.point, q]), max_rung=max_rung)
    t2 = parallel_transport_schild(v2, np.array([pr2.point, q]), max_rung=max_rung)
    return t1, t2


def _unit(v):
    return v / np.linalg.norm(v)


def init_boundary(flow1, flow2, seed=None, tol_margin=None, max_rung=0.01):
    """Initial boundary state from a warm start.

    Picks ``c`` on the second flow (the projection of ``seed``, or the
    mid-arc point), projects it onto the first flow, finds the warm start
    with equal margins on that connecting geodesic, takes the matching
    pair it defines and re-solves for the equal-margin point between them.
    The state holds that matching pair; the mixing weight starts at 1/2.
    """
    if tol_margin is None:
        tol_margin = default_tol_margin(flow1, flow2)
    c2 = flow2.curve
    if seed is None:
        c = c2.point_at(0.5 * c2.length)
    else:
        c = project_to_curve(seed, c2).point
    pr1 = project_to_curve(c, flow1.curve)
    warm = equal_margin_point(c, pr1.point, flow1, flow2, tol_margin)
    pr2 = project_to_curve(warm, c2)
    q = equal_margin_point(pr1.point, pr2.point, flow1, flow2, tol_margin)
    t1, t2 = _transported_tangents(q, pr1, pr2, flow1, flow2, max_rung)
    if np.dot(t1, t2) < 0:
        t2 = -t2
    direction = _unit(0.5 * t1 + 0.5 * t2)
    return BoundaryState(q, 0.5, pr1, pr2, direction, 0.0)


def _correct(q, heading, candidate, delta, flow1, flow2, tol_margin):
    """Equal-margin point near ``candidate`` that still moves forward from ``q``.

    Tries the geodesic joining the candidate's two projections, then the
    geodesic through the candidate across the direction of travel.
    """
    _, _, b1, b2 = _margins(candidate, flow1, flow2)
    across = np.cross(candidate, _unit(log_map(candidate, q)))
    reach = min(1.5 * max(b1.distance, b2.distance, delta), 1.0)
    ends = [(b1.point, b2.point),
            (exp_map(candidate, reach * across), exp_map(candidate, -reach * across))]
    for a, b in ends:
        try:
            qn = equal_margin_point(a, b, flow1, flow2, tol_margin)
        except GeoflowError:
            continue
        if np.dot(log_map(q, qn), heading) >= 0.25 * delta:
            return qn
    return None


def _lambda_fit(prev, t1, t2):
    """Closed-form least squares for ``prev ~ lam t1 + (1 - lam) t2``."""
    diff = t1 - t2
    denom = np.dot(diff, diff)
    if denom < 1e-24:
        return 0.5
    return float(np.clip(np.dot(prev - t2, diff) / denom, 0.0, 1.0))


def step_boundary(state, flow1, flow2, delta, eps=DEFAULT_EPS, tol_margin=None,
                  max_inner_iters=MAX_INNER_ITERS, correct=True, max_rung=0.01):
    """Advance the boundary by one step of length ``delta``.

    The flow tangents at the matched projections are carried to ``q`` by
    Schild's ladder, the mixing weight is fitted to the previous direction
    and then nudged by ``+-eps`` (halving ``eps`` whenever the sign of
    ``m1 - m2`` flips) until the candidate point has equal margins.  The
    nudge direction is the one that moves ``m1 - m2`` towards zero for the
    current geometry.

    If the weight saturates or ``max_inner_iters`` runs out and ``correct``
    is set, the best candidate is moved along the geodesic joining its
    projections onto the equal-margin set; otherwise
    :class:`NonConvergenceError` is raised.

    Raises
    ------
    EndOfFlowError
        When the accepted point projects onto an endpoint of a flow.
    """
    if tol_margin is None:
        tol_margin = default_tol_margin(flow1, flow2)
    q, prev = state.q, state.prev_direction
    t1, t2 = _transported_tangents(q, state.p1, state.p2, flow1, flow2, max_rung)
    if np.dot(t1, prev) < 0:
        t1 = -t1
    if np.dot(t2, prev) < 0:
        t2 = -t2
    lam = _lambda_fit(prev, t1, t2)

    # d(m1 - m2)/d(lam) has the sign of <t1 - t2, grad m1 - grad m2>
    away1 = -_unit(log_map(q, state.p1.point)) if state.p1.distance > 0 else np.zeros(3)
    away2 = -_unit(log_map(q, state.p2.point)) if state.p2.distance > 0 else np.zeros(3)
    slope = np.dot(t1 - t2, away1 - away2)
    orient = 1.0 if slope >= 0 else -1.0

    best_q, best_r, best_lam = None, np.inf, lam
    last_sign = 0.0
    accepted = None
    for _ in range(max_inner_iters):
        v = lam * t1 + (1.0 - lam) * t2
        v = prev if np.linalg.norm(v) < 1e-12 else _unit(v)
        qd = exp_map(q, delta * v)
        m1, m2, pr1, pr2 = _margins(qd, flow1, flow2)
        r = m1 - m2
        if abs(r) < abs(best_r):
            best_q, best_r, best_lam = qd, r, lam
        if abs(r) <= tol_margin:
            accepted = (qd, lam, pr1, pr2)
            break
        sign = np.sign(r)
        if last_sign and sign != last_sign:
            eps *= 0.5
        last_sign = sign
        # m1 < m2 calls for a larger m1 - m2
        new = lam + orient * eps if r < 0 else lam - orient * eps
        new = float(np.clip(new, 0.0, 1.0))
        if new == lam:
            break
        lam = new

    corrected = False
    if accepted is None:
        if not correct:
            raise NonConvergenceError("boundary step did not balance the margins", residual=best_r)
        qn = _correct(q, prev, best_q, delta, flow1, flow2, tol_margin)
        if qn is None:
            raise NonConvergenceError("boundary step failed to balance the margins",
                                      residual=best_r)
        _, _, pr1, pr2 = _margins(qn, flow1, flow2)
        accepted = (qn, best_lam, pr1, pr2)
        corrected = True

    qn, lam, pr1, pr2 = accepted
    if _at_end(pr1, flow1.curve) or _at_end(pr2, flow2.curve):
        raise EndOfFlowError("boundary reached the end of a flow")
    step = geodesic_distance(q, qn)
    if step < 1e-14 or np.dot(log_map(q, qn), prev) <= 0:
        if _near_end(pr1, flow1.curve, delta) or _near_end(pr2, flow2.curve, delta):
            raise EndOfFlowError("boundary stalled at the end of a flow")
        raise NonConvergenceError("boundary step stalled", residual=best_r)
    heading = -_unit(log_map(qn, q))
    return BoundaryState(qn, lam, pr1, pr2, heading, state.t + float(step), corrected)


def _half(state, flow1, flow2, delta, eps, max_length, tol_margin, strict, **kw):
    states = []
    max_steps = int(np.ceil(max_length / delta)) * 4 + 10
    reason = "max_length"
    for _ in range(max_steps):
        if state.t >= max_length - 1e-12:
            break
        try:
            state = step_boundary(state, flow1, flow2, min(delta, max_length - state.t),
                                  eps=eps, tol_margin=tol_margin, **kw)
        except EndOfFlowError:
            reason = "end_of_flow"
            break
        except GeoflowError as exc:
            reason = type(exc).__name__
            if strict:
                exc.partial = states
                raise
            break
        states.append(state)
    return states, reason


def trace_boundary(flow1, flow2, delta=None, eps=DEFAULT_EPS, max_length=np.pi,
                   seed=None, tol_margin=None, strict=False, **kw):
    """Trace the principal boundary in both directions from its initial point.

    Each half stops at ``max_length``, at the end of a flow, or on a
    solver failure (recorded in ``termination``; raised, with the states
    gathered so far in ``exc.partial``, when ``strict`` is set).
    """
    if delta is None:
        delta = min(flow1.locality_h, flow2.locality_h) / 5
    if tol_margin is None:
        tol_margin = default_tol_margin(flow1, flow2)
    start = init_boundary(flow1, flow2, seed=seed, tol_margin=tol_margin,
                          max_rung=kw.get("max_rung", 0.01))
    fwd, why_f = _half(start, flow1, flow2, delta, eps, max_length, tol_margin, strict, **kw)
    back_start = BoundaryState(start.q, start.lam, start.p1, start.p2, -start.prev_direction, 0.0)
    back, why_b = _half(back_start, flow1, flow2, delta, eps, max_length, tol_margin, strict, **kw)
    states = back[::-1] + [start] + fwd
    nodes = np.array([s.q for s in states])
    m1, m2, pr1, pr2 = zip(*(_margins(q, flow1, flow2) for q in nodes))
    m1, m2 = np.array(m1), np.array(m2)
    p1 = np.array([p.point for p in pr1])
    p2 = np.array([p.point for p in pr2])
    return BoundaryResult(
        curve=Curve.from_nodes(nodes),
        per_node_margin=np.minimum(m1, m2),
        per_node_lambda=np.array([s.lam for s in states]),
        per_node_residual=m1 - m2,
        p1=p1,
        p2=p2,
        corrected=np.array([s.corrected for s in states]),
        termination=(why_b, why_f),
        per_node_offset=_offsets(nodes, p1, p2),
    )


def _offsets(nodes, p1, p2):
    """Distance of each node from the geodesic segment joining its projections."""
    out = np.zeros(len(nodes))
    for k, (q, a, b) in enumerate(zip(nodes, p1, p2)):
        if geodesic_distance(a, b) > 1e-12:
            out[k] = float(SPHERE.segment_projection(q, a, b)[0])
        else:
            out[k] = float(geodesic_distance(q, a))
    return out


def boundary_length(result):
    """Sum of geodesic lengths between consecutive boundary nodes."""
    nodes = result.curve.nodes
    if len(nodes) < 2:
        return 0.0
    return float(np.sum(geodesic_distance(nodes[:-1], nodes[1:])))
