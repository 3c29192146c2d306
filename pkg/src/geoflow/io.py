"""Reading labeled point sets from CSV."""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, ParseError

NORM_TOL = 1e-3
FORMATS = ("xyz", "lonlat")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Unit vectors with +-1 labels; ``source`` records where they came from."""

    points: np.ndarray
    labels: np.ndarray
    source: str = ""

    def __post_init__(self):
        if len(self.points) != len(self.labels):
            raise ValueError("points and labels differ in length")
        if np.any((self.labels != 1) & (self.labels != -1)):
            raise ValueError("labels must be +1 or -1")

    def __len__(self):
        return len(self.points)

    def split(self):
        """Points of class +1 and of class -1."""
        return self.points[self.labels == 1], self.points[self.labels == -1]


def lonlat_to_xyz(lon, lat):
    """Degrees to unit vectors ``(cos lat cos lon, cos lat sin lon, sin lat)``."""
    lon = np.radians(np.asarray(lon, dtype=float))
    lat = np.radians(np.asarray(lat, dtype=float))
    return np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1)


def xyz_to_lonlat(x):
    x = np.asarray(x, dtype=float)
    lon = np.degrees(np.arctan2(x[..., 1], x[..., 0]))
    lat = np.degrees(np.arctan2(x[..., 2], np.hypot(x[..., 0], x[..., 1])))
    return lon, lat


def _columns(fmt):
    if fmt == "xyz":
        return ("x", "y", "z")
    if fmt == "lonlat":
        return ("lon", "lat")
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def load_dataset(path, format="xyz", default_label=None):
    """Read a CSV with a header naming the coordinate columns and ``label``.

    ``xyz`` rows are rescaled to unit length; ``lonlat`` rows are in
    degrees.  Files without a ``label`` column need ``default_label``.

    Raises
    ------
    ParseError
        Missing columns or unreadable values (with the line number).
    NormalizationError
        An ``xyz`` row whose norm is more than 1e-3 away from 1.
    """
    cols = _columns(format)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise ParseError("empty file", line=1) from None
        missing = [c for c in cols if c not in header]
        if missing:
            raise ParseError(f"missing column(s) {', '.join(missing)}", line=1)
        if "label" not in header and default_label is None:
            raise ParseError("missing column label", line=1)
        idx = [header.index(c) for c in cols]
        lab = header.index("label") if "label" in header else None
        coords, labels = [], []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                coords.append([float(row[i]) for i in idx])
                label = int(float(row[lab])) if lab is not None else int(default_label)
            except (IndexError, ValueError) as exc:
                raise ParseError(f"bad row: {exc}", line=line) from None
            if label not in (1, -1):
                raise ParseError(f"label must be +1 or -1, got {label}", line=line)
            labels.append(label)
            if format == "xyz":
                size = np.linalg.norm(coords[-1])
                if abs(size - 1.0) > NORM_TOL:
                    raise NormalizationError(f"line {line}: point norm {size:.6g} is not 1")
    coords = np.array(coords, dtype=float).reshape(-1, len(cols))
    if format == "xyz":
        points = coords / np.linalg.norm(coords, axis=1, keepdims=True)
    else:
        points = lonlat_to_xyz(coords[:, 0], coords[:, 1]).reshape(-1, 3)
    return Dataset(points, np.array(labels, dtype=int), str(path))


def save_dataset(dataset, path, format="xyz"):
    cols = _columns(format)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(cols) + ["label"])
        if format == "xyz":
            values = dataset.points
        else:
            values = np.stack(xyz_to_lonlat(dataset.points), axis=-1)
        for row, label in zip(values, dataset.labels):
            w.writerow([f"{v:.17g}" for v in row] + [int(label)])


def merge(a, b):
    """Concatenate two datasets."""
    return Dataset(np.concatenate([a.points, b.points]),
                   np.concatenate([a.labels, b.labels]),
                   "+".join(s for s in (a.source, b.source) if s))
