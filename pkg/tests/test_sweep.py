import math

import pytest

from geoflow.classify import ClassModel, error_rate, label_grid
from geoflow.flow import principal_flow
from geoflow.sweep import SweepCell, best_cell, grid, sweep, thread_count
from geoflow.synthetic import latitude_bands


@pytest.fixture(scope="module")
def bands():
    return latitude_bands(60, 0.15, 0.04, seed=3, lon_range=(-0.6, 0.6))


def test_grid_inclusive_and_rounded():
    assert grid(0.10, 0.25, 0.01) == [round(0.10 + 0.01 * i, 10) for i in range(16)]
    assert grid(0.05, 0.05, 0.01) == [0.05]


def test_single_cell_matches_direct_run(bands):
    (cell,) = sweep(bands, [0.2], [0.15], boundary=False)
    c1, c2 = bands.split()
    m1 = ClassModel(1, c1, principal_flow(c1, 0.2, skip_degenerate=True))
    m2 = ClassModel(-1, c2, principal_flow(c2, 0.15, skip_degenerate=True))
    rate, (a, b) = error_rate(label_grid(bands.points, m1, m2), bands.labels)
    assert (cell.misses1, cell.misses2) == (a, b)
    assert cell.rate == rate
    assert cell.boundary_status == "skipped"


def test_rate_is_misses_over_total(bands):
    cells = sweep(bands, [0.15, 0.2], [0.1, 0.2], boundary=True)
    assert len(cells) == 4
    assert [(c.h1, c.h2) for c in cells] == [(0.15, 0.1), (0.15, 0.2), (0.2, 0.1), (0.2, 0.2)]
    for c in cells:
        assert abs(c.rate - (c.misses1 + c.misses2) / len(bands)) < 1e-12


def test_best_cell_is_min_scan():
    cells = [SweepCell(0.1, 0.1, 3, 0, 0.3), SweepCell(0.1, 0.2, 1, 0, 0.1),
             SweepCell(0.2, 0.1, 0, 0, float("nan"), "DegenerateSpectrumError"),
             SweepCell(0.2, 0.2, 0, 1, 0.1)]
    best = best_cell(cells)
    assert best is cells[1]
    assert best_cell(cells[2:3]) is None


def test_failing_flow_gets_status(bands):
    # a radius smaller than any spacing leaves every neighbourhood too small
    cells = sweep(bands, [1e-6], [0.15], boundary=False)
    assert cells[0].status != "ok"
    assert math.isnan(cells[0].rate)


def test_threads_do_not_change_results(bands):
    a = sweep(bands, [0.15, 0.2], [0.15], boundary=False, threads=1)
    b = sweep(bands, [0.15, 0.2], [0.15], boundary=False, threads=2)
    assert a == b


def test_thread_count_env(monkeypatch):
    monkeypatch.delenv("GEOFLOW_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("GEOFLOW_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("GEOFLOW_THREADS", "junk")
    assert thread_count() == 1


def test_empty_grid(bands):
    with pytest.raises(ValueError):
        sweep(bands, [], [0.1])
