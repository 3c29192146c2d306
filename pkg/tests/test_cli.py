import subprocess
import sys

import numpy as np
import pytest

from geoflow.cli import main
from geoflow.io import Dataset, save_dataset
from geoflow.plot import read_polyline


@pytest.fixture
def cs_file(tmp_path):
    path = tmp_path / "cs.csv"
    assert main(["generate", "--n", "150", "--seed", "1", "--out", str(path)]) == 0
    return path


@pytest.fixture
def circle_file(tmp_path):
    lon = np.linspace(-1.0, 1.0, 200)
    pts = np.stack([np.cos(lon), np.sin(lon), np.zeros_like(lon)], axis=1)
    path = tmp_path / "circle.csv"
    save_dataset(Dataset(pts, np.ones(len(pts), dtype=int)), path)
    return path


def test_flow_on_noiseless_great_circle(tmp_path, circle_file):
    out = tmp_path / "flow.csv"
    assert main(["flow", "--input", str(circle_file), "--h", "0.1", "--out", str(out)]) == 0
    nodes = read_polyline(out)["flow"].nodes
    assert len(nodes) > 10
    assert np.abs(nodes[:, 2]).max() < 1e-9


def test_boundary_and_classify(tmp_path, cs_file, capsys):
    out = tmp_path / "b.csv"
    code = main(["boundary", "--input", str(cs_file), "--h1", "0.15", "--h2", "0.1",
                 "--out", str(out)])
    assert code in (0, 1)
    if code == 0:
        assert {"flow1", "flow2", "boundary"} <= set(read_polyline(out))
    out = tmp_path / "labels.csv"
    assert main(["classify", "--input", str(cs_file), "--h1", "0.15", "--h2", "0.1",
                 "--out", str(out)]) == 0
    assert "error rate" in capsys.readouterr().err
    assert len(out.read_text().splitlines()) == 301


def test_usage_error_is_2(capsys):
    assert main(["flow", "--bogus"]) == 2
    assert main([]) == 2


def test_domain_error_is_1(tmp_path, capsys):
    assert main(["flow", "--input", str(tmp_path / "missing.csv")]) == 1
    assert capsys.readouterr().err.startswith("error: ")
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y,z,label\n2,0,0,1\n")
    assert main(["flow", "--input", str(bad)]) == 1
    assert "NormalizationError" in capsys.readouterr().err


def test_help_shows_defaults(capsys):
    assert main(["boundary", "--help"]) == 0
    text = capsys.readouterr().out
    assert "default: 0.05" in text
    assert "unset means" in text


def test_stdout_output(cs_file, capsys):
    assert main(["flow", "--input", str(cs_file), "--label", "1", "--h", "0.15"]) == 0
    assert capsys.readouterr().out.startswith("curve,x,y,z,cumlen\n")


def test_repeated_runs_are_byte_identical(tmp_path, cs_file):
    outs = []
    for i in range(2):
        out = tmp_path / f"flow{i}.svg"
        assert main(["flow", "--input", str(cs_file), "--label", "-1", "--h", "0.1",
                     "--margins", "--format", "svg", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.csv"
    proc = subprocess.run([sys.executable, "-m", "geoflow", "generate", "--shape", "S",
                           "--n", "10", "--label", "-1", "--coords", "lonlat", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == "lon,lat,label" and len(lines) == 11
