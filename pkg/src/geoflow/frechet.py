"""Intrinsic (Fréchet) mean on the sphere."""

import numpy as np

from .errors import CutLocusError, HemisphereError, NonConvergenceError
from .manifold import SPHERE, exp_map, log_map


def frechet_mean(cloud, tol=1e-10, max_iter=200, weights=None, start=None):
    """Minimizer of the (weighted) sum of squared geodesic distances.

    Runs the fixed-point iteration ``x <- exp_x(mean_i log_x(x_i))`` from
    the normalized extrinsic mean until the mean log has norm <= ``tol``.

    Raises
    ------
    HemisphereError
        The points are not confined to a region where the mean is unique.
    NonConvergenceError
        ``max_iter`` iterations did not reach ``tol``.
    """
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    if len(cloud) == 0:
        raise ValueError("cannot average an empty cloud")
    if weights is None:
        weights = np.full(len(cloud), 1.0 / len(cloud))
    else:
        weights = np.asarray(weights, dtype=float)
        weights = weights / weights.sum()
    if len(cloud) == 1:
        return SPHERE.normalize(cloud[0])
    if start is None:
        start = weights @ cloud
        if np.linalg.norm(start) < 1e-12:
            raise HemisphereError("extrinsic mean vanishes; no preferred hemisphere")
    x = SPHERE.normalize(start)
    step = np.inf
    for _ in range(max_iter):
        try:
            grad = weights @ log_map(x, cloud)
        except CutLocusError as exc:
            raise HemisphereError("a sample is antipodal to the running mean") from exc
        step = float(np.linalg.norm(grad))
        if step > np.pi / 2:
            raise HemisphereError("mean step exceeds pi/2; mean may not be unique")
        x = exp_map(x, grad)
        if step <= tol:
            return x
    raise NonConvergenceError(f"Fréchet mean did not converge (last step {step:.3g})", residual=step)
