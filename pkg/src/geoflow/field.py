"""Per-sample vector fields built from local tangent PCA."""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, EmptyNeighborhoodError
from .frechet import frechet_mean
from .local import TOL_EIG, kernel_weight, tangent_pca, weighted_covariance
from .manifold import (
    ANTIPODAL_TOL,
    geodesic_distance,
    log_map,
    parallel_transport_exact,
    project_to_tangent,
)


@dataclass(frozen=True, eq=False)
class SampleField:
    """A tangent vector attached to every sample of a cloud.

    ``vectors[j]`` is the modified field vector at ``cloud[j]``;
    ``local_principals[i]`` and ``local_means[i]`` are the leading direction
    and the intrinsic mean of the neighborhood of ``cloud[i]``.  Rows of
    ``vectors`` may be zero when ``skip_degenerate`` dropped every
    neighborhood containing the sample.
    """

    cloud: np.ndarray
    vectors: np.ndarray
    locality_h: float
    local_means: np.ndarray
    local_principals: np.ndarray


def pairwise_distances(cloud):
    cloud = np.atleast_2d(cloud)
    return geodesic_distance(cloud[:, None, :], cloud[None, :, :])


def _adjacency(dist, h):
    close = (dist <= h) & (dist < np.pi - ANTIPODAL_TOL)
    return [np.flatnonzero(row) for row in close]


def orient_consistently(vectors, adjacency):
    """Flip signs so that neighboring vectors point the same way.

    Breadth-first over the neighborhood graph; each newly reached vector is
    aligned with the one that reached it.  Zero rows are left alone.
    """
    vectors = np.array(vectors, dtype=float)
    n = len(vectors)
    seen = np.zeros(n, dtype=bool)
    live = np.linalg.norm(vectors, axis=1) > 0
    for root in range(n):
        if seen[root] or not live[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in adjacency[i]:
                if seen[j] or not live[j]:
                    continue
                if np.dot(vectors[i], vectors[j]) < 0:
                    vectors[j] = -vectors[j]
                seen[j] = True
                queue.append(j)
    return vectors


def _local_pca(cloud, dist, h, tol_eig, skip_degenerate):
    n = len(cloud)
    principals = np.zeros((n, 3))
    valid = np.ones(n, dtype=bool)
    for i in range(n):
        members = np.flatnonzero((dist[i] <= h) & (dist[i] < np.pi - ANTIPODAL_TOL))
        logs = log_map(cloud[i], cloud[members])
        w = kernel_weight(dist[i, members], h)
        sigma = weighted_covariance(logs, w / w.sum())
        try:
            principals[i] = tangent_pca(sigma, cloud[i], tol_eig=tol_eig).e1
        except DegenerateSpectrumError as exc:
            if not skip_degenerate:
                raise DegenerateSpectrumError(f"sample {i}: {exc}", node=i) from exc
            valid[i] = False
    return principals, valid


def build_eigen_field(cloud, h, tol_eig=TOL_EIG):
    """Leading local eigenvector at every sample, signs made coherent.

    Raises
    ------
    DegenerateSpectrumError
        If some neighborhood has no distinct leading direction (for
        instance a sample with no other sample within ``h``).
    """
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    dist = pairwise_distances(cloud)
    principals, _ = _local_pca(cloud, dist, h, tol_eig, skip_degenerate=False)
    return orient_consistently(principals, _adjacency(dist, h))


def build_modified_field(cloud, h, tol_eig=TOL_EIG, skip_degenerate=False):
    """Softmax-weighted blend of local principal directions at each sample.

    For sample ``j`` the vector is the tangent projection of
    ``sum_{i in I_j} w_ij v_i`` where ``I_j`` lists the neighborhoods that
    contain ``x_j``, ``v_i`` is the leading direction of neighborhood ``i``
    and ``w_ij`` is proportional to ``exp(-d(x_j, c_i))`` with ``c_i`` the
    neighborhood's intrinsic mean.  Each ``v_i`` is sign-aligned with
    ``v_j`` before summing.

    With ``skip_degenerate`` set, neighborhoods without a distinct leading
    direction are left out instead of raising.
    """
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    n = len(cloud)
    dist = pairwise_distances(cloud)
    adjacency = _adjacency(dist, h)
    principals, valid = _local_pca(cloud, dist, h, tol_eig, skip_degenerate)
    principals = orient_consistently(principals, adjacency)

    means = np.zeros((n, 3))
    for i in range(n):
        means[i] = frechet_mean(cloud[adjacency[i]]) if valid[i] else cloud[i]

    vectors = np.zeros((n, 3))
    for j in range(n):
        holders = adjacency[j][valid[adjacency[j]]]
        if holders.size == 0:
            continue
        logits = -geodesic_distance(cloud[j], means[holders])
        w = np.exp(logits - logits.max())
        w /= w.sum()
        vs = principals[holders]
        anchor = principals[j] if valid[j] else vs[np.argmax(w)]
        signs = np.where(vs @ anchor < 0, -1.0, 1.0)
        vectors[j] = project_to_tangent(cloud[j], (w * signs) @ vs)
    return SampleField(cloud, vectors, float(h), means, principals)


def field_at(q, field, reference=None):
    """Unit field direction at an arbitrary point ``q``.

    Sums the vectors of all samples within ``field.locality_h`` of ``q``
    after transporting each to ``q`` and flipping it to agree with
    ``reference`` (by default, with the nearest sample's vector).

    Raises
    ------
    EmptyNeighborhoodError
        No sample lies within the locality radius.
    DegenerateSpectrumError
        The aligned vectors cancel.
    """
    q = np.asarray(q, dtype=float)
    d = geodesic_distance(field.cloud, q)
    members = np.flatnonzero((d <= field.locality_h) & (d < np.pi - ANTIPODAL_TOL))
    members = members[np.linalg.norm(field.vectors[members], axis=1) > 0]
    if members.size == 0:
        raise EmptyNeighborhoodError("no field sample near the query point")
    moved = parallel_transport_exact(field.vectors[members], field.cloud[members], q)
    if reference is None:
        reference = moved[np.argmin(d[members])]
    signs = np.where(moved @ np.asarray(reference, dtype=float) < 0, -1.0, 1.0)
    total = project_to_tangent(q, signs @ moved)
    size = np.linalg.norm(total)
    if size < 1e-14:
        raise DegenerateSpectrumError("field vectors cancel at the query point")
    return total / size
