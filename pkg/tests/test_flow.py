import numpy as np
import pytest

from geoflow.curve import trimmed_hausdorff
from geoflow.errors import DegenerateSpectrumError, EmptyNeighborhoodError
from geoflow.field import build_eigen_field, build_modified_field, field_at, orient_consistently
from geoflow.flow import choose_start, margin_curves, node_spread, principal_flow
from geoflow.frechet import frechet_mean
from geoflow.manifold import exp_map, geodesic_distance
from geoflow.synthetic import generate_band, template


def _equator(n=300, spread=1.0):
    t = np.linspace(-spread, spread, n)
    return np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)


def _band(rng, n=400, sd=0.03, lat=0.0):
    lon = rng.uniform(-1, 1, n)
    la = lat + rng.normal(0, sd, n)
    return np.stack([np.cos(la) * np.cos(lon), np.cos(la) * np.sin(lon), np.sin(la)], axis=1)


def test_orientation_aligns_neighbors():
    v = np.array([[1.0, 0, 0], [-1.0, 0, 0], [1.0, 0, 0], [0, 0, 0]])
    adjacency = [np.array([0, 1]), np.array([0, 1, 2]), np.array([1, 2]), np.array([3])]
    out = orient_consistently(v, adjacency)
    assert np.all(out[:3, 0] == 1.0)
    assert np.all(out[3] == 0)


def test_eigen_field_follows_equator(rng):
    cloud = _band(rng, sd=0.01)
    field = build_eigen_field(cloud, 0.15)
    east = np.cross([0.0, 0.0, 1.0], cloud)
    east /= np.linalg.norm(east, axis=1, keepdims=True)
    assert np.abs(np.sum(field * east, axis=1)).min() > 0.95


def test_modified_field_softmax_oracle(rng):
    cloud = _band(rng, n=60, sd=0.02)
    h = 0.3
    field = build_modified_field(cloud, h)
    j = 7
    d = geodesic_distance(cloud, cloud[j])
    holders = np.flatnonzero(d <= h)
    w = np.array([np.exp(-geodesic_distance(cloud[j], field.local_means[i])) for i in holders])
    w /= w.sum()
    vs = field.local_principals[holders]
    vs = vs * np.where(vs @ field.local_principals[j] < 0, -1, 1)[:, None]
    oracle = w @ vs
    oracle -= (oracle @ cloud[j]) * cloud[j]
    assert np.allclose(field.vectors[j], oracle, atol=1e-12)
    assert np.allclose(field.local_means[j], frechet_mean(cloud[holders]), atol=1e-9)


def test_modified_field_rotation_equivariant(rng):
    cloud = _band(rng, n=120)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    a = build_modified_field(cloud, 0.2).vectors
    b = build_modified_field(cloud @ q.T, 0.2).vectors
    # equal up to one global sign per connected piece
    assert np.allclose(np.abs(np.sum((a @ q.T) * b, axis=1)), np.sum(a * a, axis=1), atol=1e-8)


def test_isolated_sample_is_degenerate():
    cloud = np.vstack([_equator(50, 0.3), [[0.0, 0.0, 1.0]]])
    with pytest.raises(DegenerateSpectrumError) as info:
        build_modified_field(cloud, 0.1)
    assert info.value.node == 50
    field = build_modified_field(cloud, 0.1, skip_degenerate=True)
    assert np.all(field.vectors[50] == 0)


def test_field_at_far_point():
    field = build_modified_field(_equator(100, 0.5), 0.1)
    with pytest.raises(EmptyNeighborhoodError):
        field_at(np.array([0.0, 0.0, 1.0]), field)


def test_noiseless_flow_stays_on_circle():
    flow = principal_flow(_equator(400, 1.0), 0.1)
    assert np.abs(flow.nodes[:, 2]).max() <= 1e-6
    assert np.allclose(flow.node_spread, 0.0, atol=1e-12)
    assert flow.curve.length > 1.9


def test_flow_direction_is_tangent(rng):
    flow = principal_flow(_band(rng), 0.15)
    assert np.abs(np.sum(flow.node_direction * flow.nodes, axis=1)).max() < 1e-12
    assert np.allclose(np.linalg.norm(flow.node_direction, axis=1), 1.0)


def test_noisy_band_flow_near_generator():
    data = generate_band("greatcircle", 500, 0.03, seed=1)
    flow = principal_flow(data.points, 0.15)
    assert trimmed_hausdorff(flow.curve, template("greatcircle")) <= 0.06


def test_spread_tracks_noise_level(rng):
    cloud = _band(rng, n=2000, sd=0.02)
    wide = _band(rng, n=2000, sd=0.04)
    p = np.array([1.0, 0.0, 0.0])
    assert node_spread(cloud, p, 0.2) < node_spread(wide, p, 0.2)


def test_margin_curves_are_offset_by_spread(rng):
    flow = principal_flow(_band(rng, sd=0.03), 0.15)
    left, right = margin_curves(flow)
    k = len(flow.curve) // 2
    assert geodesic_distance(left.nodes[k], flow.nodes[k]) == pytest.approx(flow.node_spread[k])
    assert left.nodes[k][2] * right.nodes[k][2] < 0


def test_start_on_hollow_shape_is_near_data():
    data = generate_band("C", 500, 0.02, seed=2)
    x0 = choose_start(data.points, 0.1)
    assert geodesic_distance(data.points, x0).min() < 0.1
    assert geodesic_distance(data.points, frechet_mean(data.points)).min() > 0.1


def test_flow_is_deterministic(rng):
    cloud = _band(rng)
    a = principal_flow(cloud, 0.15)
    b = principal_flow(cloud, 0.15)
    assert np.array_equal(a.nodes, b.nodes)


def test_step_controls_node_spacing():
    flow = principal_flow(_equator(300, 0.8), 0.1, step=0.01, max_length=0.3)
    steps = geodesic_distance(flow.nodes[:-1], flow.nodes[1:])
    assert np.allclose(steps, 0.01, atol=1e-12)
    assert flow.curve.length == pytest.approx(0.6, abs=1e-9)
