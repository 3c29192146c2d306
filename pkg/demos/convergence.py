"""Estimated flows and boundaries approach the population curves as noise shrinks.

A quicker version of the convergence experiment (fewer draws); run the
``simulate`` command for the full table.

    python demos/convergence.py [outdir]
"""

import pathlib
import sys

import numpy as np

from geoflow import Curve, exp_map
from geoflow.simulate import (CurveDistribution, convergence_experiment, log_log_slope,
                              write_convergence_csv)

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)


def arc(lat, tilt):
    centre = np.array([np.cos(lat), 0.0, np.sin(lat)])
    heading = np.array([0.0, np.cos(tilt), np.sin(tilt)])
    heading -= heading @ centre * centre
    heading /= np.linalg.norm(heading)
    t = np.linspace(-1.0, 1.0, 81)
    return Curve.from_nodes(exp_map(centre, t[:, None] * heading))


sds = [0.08, 0.04, 0.02, 0.01]
d1 = CurveDistribution(arc(0.2, 0.05), sds[0], seed=1)
d2 = CurveDistribution(arc(-0.2, -0.1), sds[0], seed=101)
rows = convergence_experiment(d1, d2, 0.2, sds, 5000, replicates=3)
for r in rows:
    print(f"sd {r.sd:<5g} flow error {r.flow_error:.2e} +- {r.flow_se:.0e}   "
          f"boundary error {r.boundary_error:.2e} +- {r.boundary_se:.0e}")
print(f"log-log slopes: flow {log_log_slope(sds, [r.flow_error for r in rows]):.2f}, "
      f"boundary {log_log_slope(sds, [r.boundary_error for r in rows]):.2f}")
write_convergence_csv(rows, out / "convergence.csv")
print(f"wrote {out / 'convergence.csv'}")
