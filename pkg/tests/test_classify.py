import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoflow.boundary import trace_boundary
from geoflow.classify import (
    BOUNDARY,
    ClassModel,
    Decision,
    class_distance,
    classify_point,
    error_rate,
    label_grid,
    relative_gap,
)
from geoflow.errors import LengthMismatchError, ZeroSpreadError

from conftest import equator_arc, flow_from_curve, tilted_arc


def _at_lat(lat, lon=0.0):
    return np.array([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)])


@pytest.fixture
def equator_model():
    return ClassModel(1, np.empty((0, 3)), flow_from_curve(equator_arc(-1, 1, 41), 0.1))


def _pair(s1=0.05, s2=0.05):
    top = tilted_arc(0.3)
    m1 = ClassModel(1, top.nodes, flow_from_curve(top, s1))
    bottom = tilted_arc(-0.3)
    m2 = ClassModel(-1, bottom.nodes, flow_from_curve(bottom, s2))
    return m1, m2


def test_distance_on_flow_is_zero(equator_model):
    assert class_distance(_at_lat(0.0), equator_model) == 0.0


def test_distance_beyond_spread(equator_model):
    assert class_distance(_at_lat(0.2), equator_model) == pytest.approx(0.1, abs=1e-12)


def test_distance_clamps_inside_tube(equator_model):
    assert class_distance(_at_lat(0.05), equator_model) == 0.0


def test_relative_gap_values(equator_model):
    assert relative_gap(_at_lat(0.05), equator_model) == pytest.approx(0.5)
    assert relative_gap(_at_lat(0.0), equator_model) == 0.0
    assert relative_gap(_at_lat(0.1), equator_model, alpha=2, beta=1) == pytest.approx(0.1)


def test_relative_gap_needs_spread():
    model = ClassModel(1, np.empty((0, 3)), flow_from_curve(equator_arc(-1, 1, 41), 0.0))
    with pytest.raises(ZeroSpreadError):
        relative_gap(_at_lat(0.05), model)


def test_rule_nearer_class_wins():
    m1, m2 = _pair()
    d = classify_point(_at_lat(0.1), m1, m2)
    assert d.label == 1
    assert d.r1 is None and not d.overlap


def test_rule_equal_distances_is_boundary():
    m1, m2 = _pair()
    assert classify_point(_at_lat(0.0), m1, m2).label == BOUNDARY


def test_rule_overlap_uses_relative_gap():
    # wide tubes that both contain the query
    m1, m2 = _pair(0.35, 0.5)
    d = classify_point(_at_lat(0.0), m1, m2)
    assert d.d1 == 0 and d.d2 == 0 and d.overlap
    assert d.r1 == pytest.approx(0.3 / 0.35, abs=1e-9)
    assert d.label == -1


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.6, 0.6), st.floats(-0.5, 0.5))
def test_antisymmetry(lat, lon):
    m1, m2 = _pair(0.05, 0.08)
    p = _at_lat(lat, lon)
    a = classify_point(p, m1, m2)
    b = classify_point(p, m2, m1)
    assert a.label == b.label
    assert (a.d1, a.d2) == (b.d2, b.d1)


def test_label_grid_matches_pointwise(rng):
    m1, m2 = _pair(0.05, 0.08)
    mesh = np.array([_at_lat(a, b) for a, b in rng.uniform(-0.5, 0.5, (50, 2))])
    grid = label_grid(mesh, m1, m2)
    assert [g.label for g in grid] == [classify_point(p, m1, m2).label for p in mesh]
    assert label_grid(np.empty((0, 3)), m1, m2) == []


def test_label_grid_swap_flips_labels(rng):
    m1, m2 = _pair(0.05, 0.08)
    mesh = np.array([_at_lat(a, b) for a, b in rng.uniform(-0.5, 0.5, (50, 2))])
    a = [d.label for d in label_grid(mesh, m1, m2)]
    b = [d.label for d in label_grid(mesh, m2, m1)]
    assert a == b
    flipped = [d.label for d in label_grid(mesh, ClassModel(-1, m1.cloud, m1.flow),
                                           ClassModel(1, m2.cloud, m2.flow))]
    assert flipped == [-x for x in a]


def test_label_grid_records_errors():
    m1 = ClassModel(1, np.empty((0, 3)), flow_from_curve(equator_arc(0, np.pi / 2, 10), 0.05))
    m2 = ClassModel(-1, np.empty((0, 3)), flow_from_curve(tilted_arc(-0.8), 0.05))
    out = label_grid(np.array([[0.0, 0.0, 1.0]]), m1, m2)
    assert out[0].label == BOUNDARY and out[0].error == "AmbiguousProjectionError"


def test_boundary_nodes_label_as_boundary():
    top = tilted_arc(0.3, count=81)
    m1 = ClassModel(1, top.nodes, flow_from_curve(top, 0.05))
    bottom = tilted_arc(-0.3, count=81)
    m2 = ClassModel(-1, bottom.nodes, flow_from_curve(bottom, 0.05))
    res = trace_boundary(m1.flow, m2.flow, delta=0.02)
    tie = 10 * max(1e-6 * 0.1, 1e-8)
    labels = [d.label for d in label_grid(res.curve.nodes, m1, m2, tie_tol=tie)]
    assert labels == [BOUNDARY] * len(labels)


def test_error_rate_all_correct():
    assert error_rate([Decision(1, 0, 1), Decision(-1, 1, 0)], [1, -1]) == (0.0, (0, 0))


def test_error_rate_two_of_167():
    truth = [1] * 100 + [-1] * 67
    labels = list(truth)
    labels[120] = 1
    labels[150] = BOUNDARY
    rate, misses = error_rate(labels, truth)
    assert round(rate, 4) == 0.0120
    assert misses == (0, 2)


def test_error_rate_matches_confusion_tally(rng):
    truth = rng.choice([1, -1], 300)
    labels = rng.choice([1, -1, BOUNDARY], 300)
    confusion = {(t, l): 0 for t in (1, -1) for l in (1, -1, BOUNDARY)}
    for t, l in zip(truth, labels):
        confusion[(t, l)] += 1
    wrong = sum(v for (t, l), v in confusion.items() if t != l)
    rate, (a, b) = error_rate(labels, truth)
    assert rate == pytest.approx(wrong / 300)
    assert a + b == wrong


def test_error_rate_length_mismatch():
    with pytest.raises(LengthMismatchError):
        error_rate([1, 1], [1])

