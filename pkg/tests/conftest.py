import numpy as np
import pytest

from geoflow.curve import Curve
from geoflow.flow import FlowResult
from geoflow.manifold import exp_map
from geoflow.simulate import as_flow


def random_points(rng, n):
    x = rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_tangents(rng, x, max_norm):
    """Tangent vectors at ``x`` with norms uniform in [0, max_norm]."""
    w = rng.normal(size=x.shape)
    w -= np.sum(w * x, axis=-1, keepdims=True) * x
    w /= np.linalg.norm(w, axis=-1, keepdims=True)
    return w * rng.uniform(0, max_norm, size=x.shape[:-1] + (1,))


def equator_arc(start, stop, count):
    t = np.linspace(start, stop, count)
    return Curve.from_nodes(np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1))


def tilted_arc(lat, tilt=0.0, length=2.0, count=81):
    """Great-circle arc through (cos lat, 0, sin lat), heading east tilted by ``tilt``."""
    c = np.array([np.cos(lat), 0.0, np.sin(lat)])
    d = np.array([0.0, np.cos(tilt), np.sin(tilt)])
    d -= np.dot(d, c) * c
    d /= np.linalg.norm(d)
    t = np.linspace(-length / 2, length / 2, count)
    return Curve.from_nodes(exp_map(c, t[:, None] * d))


def flow_from_curve(curve, spread=0.0, h=0.1):
    """A flow along ``curve`` with prescribed spreads (scalar or per node)."""
    base = as_flow(curve, None, h)
    spreads = np.broadcast_to(np.asarray(spread, dtype=float), (len(curve),)).copy()
    return FlowResult(curve, spreads, base.node_direction, h)


def mirror(points):
    return np.asarray(points) * np.array([1.0, 1.0, -1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
