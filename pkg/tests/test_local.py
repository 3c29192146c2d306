import numpy as np
import pytest

from geoflow.errors import DegenerateSpectrumError, EmptyNeighborhoodError
from geoflow.local import (
    find_neighborhood,
    kernel_weight,
    local_covariance,
    local_spectrum,
    local_spread,
    tangent_pca,
)
from geoflow.manifold import exp_map, geodesic_distance, log_map

from conftest import random_points

NORTH = np.array([0.0, 0.0, 1.0])


def test_kernel_weight_values():
    assert kernel_weight(0.0, 0.1) == 1.0
    assert kernel_weight(0.1, 0.1) == pytest.approx(np.exp(-0.5))
    assert kernel_weight(0.1000001, 0.1) == 0.0


def test_neighborhood_matches_brute_force(rng):
    cloud = random_points(rng, 2000)
    center = random_points(rng, 1)[0]
    hood = find_neighborhood(cloud, center, 0.4)
    brute = [i for i, x in enumerate(cloud)
             if np.arccos(np.clip(x @ center, -1, 1)) <= 0.4]
    assert list(hood.member_indices) == brute
    assert hood.weights.sum() == pytest.approx(1.0)


def test_empty_neighborhood():
    with pytest.raises(EmptyNeighborhoodError):
        find_neighborhood(np.array([[1.0, 0, 0]]), NORTH, 0.1)


def test_antipode_never_a_member():
    hood = find_neighborhood(np.array([[0, 0, -1.0], [0, 0, 1.0]]), NORTH, 4.0)
    assert list(hood.member_indices) == [1]


def test_covariance_matches_explicit_sum(rng):
    cloud = exp_map(NORTH, np.c_[rng.normal(0, 0.05, 200), rng.normal(0, 0.02, 200), np.zeros(200)])
    sigma = local_covariance(cloud, NORTH, 0.15)
    d = geodesic_distance(cloud, NORTH)
    keep = d <= 0.15
    w = np.exp(-0.5 * (d[keep] / 0.15) ** 2)
    w /= w.sum()
    oracle = np.zeros((3, 3))
    for wi, li in zip(w, log_map(NORTH, cloud[keep])):
        oracle += wi * np.outer(li, li)
    assert np.allclose(sigma, oracle, atol=1e-15)
    assert np.allclose(sigma @ NORTH, 0, atol=1e-15)
    assert np.all(np.linalg.eigvalsh(sigma) >= -1e-15)


def test_pca_recovers_axis(rng):
    cloud = exp_map(NORTH, np.c_[rng.normal(0, 0.05, 500), rng.normal(0, 0.01, 500), np.zeros(500)])
    spectrum = local_spectrum(cloud, NORTH, 0.2)
    assert abs(spectrum.e1[0]) > 0.99
    assert spectrum.lambda1 > spectrum.lambda2 > 0
    assert np.allclose(np.cross(spectrum.e1, spectrum.e2), NORTH)
    assert 0 < local_spread(spectrum, 0.2) < 0.2


def test_pca_eigen_residual(rng):
    a = rng.normal(size=(3, 3))
    p = np.eye(3) - np.outer(NORTH, NORTH)
    sigma = p @ a @ a.T @ p
    spectrum = tangent_pca(sigma, NORTH)
    residual = sigma @ spectrum.e1 - spectrum.lambda1 * spectrum.e1
    assert np.linalg.norm(residual - (residual @ NORTH) * NORTH) < 1e-10


def test_pca_sign_follows_reference():
    sigma = np.diag([2.0, 1.0, 0.0])
    assert tangent_pca(sigma, NORTH, reference=np.array([-1.0, 0, 0])).e1[0] == pytest.approx(-1)
    assert tangent_pca(sigma, NORTH).e1[0] == pytest.approx(1)


def test_isotropic_is_degenerate():
    with pytest.raises(DegenerateSpectrumError):
        tangent_pca(np.diag([1.0, 1.0, 0.0]), NORTH)
    with pytest.raises(DegenerateSpectrumError):
        tangent_pca(np.zeros((3, 3)), NORTH)
