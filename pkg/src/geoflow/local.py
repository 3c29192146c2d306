"""Neighborhoods, kernel-weighted local covariance and tangent-plane PCA."""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, EmptyNeighborhoodError
from .manifold import ANTIPODAL_TOL, geodesic_distance, log_map, tangent_basis

TOL_EIG = 1e-6


@dataclass(frozen=True, eq=False)
class Neighborhood:
    center: np.ndarray
    radius_h: float
    member_indices: np.ndarray
    weights: np.ndarray
    distances: np.ndarray


@dataclass(frozen=True, eq=False)
class LocalSpectrum:
    """Top two eigenpairs of a local covariance, restricted to T_x."""

    lambda1: float
    lambda2: float
    e1: np.ndarray
    e2: np.ndarray
    mean_log: np.ndarray


def kernel_weight(d, h):
    """Truncated Gaussian ``exp(-u**2/2)`` for ``u = d/h <= 1``, else 0."""
    u = np.asarray(d, dtype=float) / h
    w = np.where(u <= 1.0, np.exp(-0.5 * u * u), 0.0)
    return w if w.ndim else float(w)


def find_neighborhood(cloud, center, h):
    """Samples of ``cloud`` within geodesic distance ``h`` of ``center``.

    Antipodal samples are never members, since their log is undefined.

    Raises
    ------
    EmptyNeighborhoodError
        If no sample qualifies.
    """
    if h <= 0:
        raise ValueError("locality radius must be positive")
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    center = np.asarray(center, dtype=float)
    d = geodesic_distance(cloud, center)
    inside = (d <= h) & (cloud @ center > -1.0 + ANTIPODAL_TOL)
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        raise EmptyNeighborhoodError(f"no sample within h={h:g} of the query point")
    w = kernel_weight(d[idx], h)
    return Neighborhood(center, float(h), idx, w / w.sum(), d[idx])


def weighted_covariance(logs, weights):
    """``sum_i w_i l_i l_i^T`` for tangent vectors ``logs`` (rows)."""
    return (logs * weights[:, None]).T @ logs


def local_covariance(cloud, center, h):
    """Kernel-weighted covariance of the logs of the neighbors of ``center``.

    The result is 3x3, symmetric PSD, with ``center`` in its null space.
    """
    hood = find_neighborhood(cloud, center, h)
    logs = log_map(center, np.atleast_2d(cloud)[hood.member_indices])
    sigma = weighted_covariance(logs, hood.weights)
    return 0.5 * (sigma + sigma.T)


def tangent_eigen(sigma, base):
    """Eigen decomposition of ``sigma`` in the tangent plane at ``base``.

    Returns ``(lam, vecs)`` with ``lam`` descending and ``vecs`` of shape
    (2, 3) holding ambient unit eigenvectors.  No degeneracy check.
    """
    u1, u2 = tangent_basis(base)
    frame = np.stack([u1, u2])
    reduced = frame @ sigma @ frame.T
    lam, vec = np.linalg.eigh(0.5 * (reduced + reduced.T))
    lam = np.clip(lam[::-1], 0.0, None)
    return lam, vec[:, ::-1].T @ frame


def _fix_sign(e, reference):
    if reference is not None:
        return -e if np.dot(e, reference) < 0 else e
    return -e if e[np.argmax(np.abs(e))] < 0 else e


def tangent_pca(sigma, base, reference=None, tol_eig=TOL_EIG, mean_log=None):
    """Leading tangent eigenpairs of a local covariance.

    ``e1`` is oriented to have a nonnegative inner product with
    ``reference`` when one is given, otherwise so that its largest-magnitude
    coordinate is positive.

    Raises
    ------
    DegenerateSpectrumError
        When ``lambda1 - lambda2 <= tol_eig * lambda1`` (this includes the
        all-zero matrix).
    """
    lam, vecs = tangent_eigen(np.asarray(sigma, dtype=float), base)
    if lam[0] <= 0.0 or lam[0] - lam[1] <= tol_eig * lam[0]:
        raise DegenerateSpectrumError(
            f"leading eigenvalues are not distinct (lambda1={lam[0]:.3g}, lambda2={lam[1]:.3g})"
        )
    e1 = _fix_sign(vecs[0], reference)
    e2 = np.cross(base, e1)
    if mean_log is None:
        mean_log = np.zeros(3)
    return LocalSpectrum(float(lam[0]), float(lam[1]), e1, e2, np.asarray(mean_log, dtype=float))


def local_spectrum(cloud, center, h, reference=None, tol_eig=TOL_EIG):
    """Convenience: neighborhood, covariance and PCA at ``center``."""
    hood = find_neighborhood(cloud, center, h)
    logs = log_map(center, np.atleast_2d(cloud)[hood.member_indices])
    sigma = weighted_covariance(logs, hood.weights)
    mean_log = hood.weights @ logs
    return tangent_pca(sigma, center, reference, tol_eig, mean_log=mean_log)


def local_spread(spectrum, h):
    """Transverse spread ``(lambda2 / lambda1) * h``."""
    if spectrum.lambda1 <= 0:
        raise DegenerateSpectrumError("spread needs a positive leading eigenvalue")
    return spectrum.lambda2 / spectrum.lambda1 * h
