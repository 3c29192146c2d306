"""Synthetic labeled clouds: noisy bands around template curves."""

import numpy as np

from .curve import Curve
from .io import Dataset, merge
from .manifold import exp_map
from .simulate import CurveDistribution, sample_along_curve

SHAPES = ("C", "S", "greatcircle")
CHART_BASE = np.array([1.0, 0.0, 0.0])
TEMPLATE_NODES = 401


def _chart(u, v):
    """Map chart coordinates around ``CHART_BASE`` onto the sphere (u east, v north)."""
    tangent = np.stack([np.zeros_like(u), u, v], axis=-1)
    return exp_map(CHART_BASE, tangent)


def template(shape, count=TEMPLATE_NODES):
    """The template curve for ``shape``, before any pose is applied.

    ``greatcircle`` is an equator arc of length 2 centred on (1, 0, 0);
    ``C`` is a circle of radius 0.35 open towards the east; ``S`` is a
    wave that passes through the opening of the C and runs into its
    lower tip.
    """
    s = np.linspace(-1.0, 1.0, count)
    if shape == "greatcircle":
        u, v = s, np.zeros_like(s)
    elif shape == "C":
        angle = np.radians(50.0 + 260.0 * (s + 1.0) / 2.0)
        u, v = 0.35 * np.cos(angle), 0.35 * np.sin(angle)
    elif shape == "S":
        u, v = 0.32 + 0.15 * np.sin(np.pi * s), 0.55 * s
    else:
        raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")
    return Curve.from_nodes(_chart(u, v))


def generate_band(shape, n, noise_sd, pose=None, seed=0, label=1):
    """``n`` points scattered normally (SD ``noise_sd``) around a template.

    ``pose`` is an optional 3x3 rotation applied to the points.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    curve = template(shape)
    pts = sample_along_curve(CurveDistribution(curve, noise_sd, seed), n)
    if pose is not None:
        pts = pts @ np.asarray(pose, dtype=float).T
    return Dataset(pts, np.full(n, int(label)), f"{shape}(n={n}, sd={noise_sd:g}, seed={seed})")


def c_s_data(n=500, noise_sd=0.03, seed=0):
    """The C class (+1) and the S class (-1), ``n`` points each."""
    c = generate_band("C", n, noise_sd, seed=seed, label=1)
    s = generate_band("S", n, noise_sd, seed=seed + 1, label=-1)
    return merge(c, s)


def latitude_bands(n, latitude, noise_sd, seed=0, lon_range=(-1.0, 1.0), uniform=False):
    """Two bands mirrored about the equator, at +-``latitude`` radians.

    Offsets are normal with SD ``noise_sd``, or uniform on
    ``[-noise_sd, noise_sd]`` when ``uniform`` is set.
    """
    rng = np.random.default_rng(seed)
    parts = []
    for label, lat in ((1, latitude), (-1, -latitude)):
        lon = rng.uniform(*lon_range, n)
        if uniform:
            off = rng.uniform(-noise_sd, noise_sd, n)
        else:
            off = rng.normal(0.0, noise_sd, n)
        la = lat + off
        pts = np.stack([np.cos(la) * np.cos(lon), np.cos(la) * np.sin(lon), np.sin(la)], axis=-1)
        parts.append(Dataset(pts, np.full(n, label), f"band(lat={lat:+g})"))
    return merge(*parts)
