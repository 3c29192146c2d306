"""Classify the C and S point sets over a small grid of radii.

    python demos/cs_classify.py [outdir]
"""

import pathlib
import sys

from geoflow import (ClassModel, best_cell, c_s_data, emit_polyline, principal_flow, sweep,
                     trace_boundary)
from geoflow.errors import GeoflowError

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

data = c_s_data(500, 0.03, seed=0)
cells = sweep(data, [0.1, 0.15, 0.2], [0.07, 0.1], boundary=False)
for c in cells:
    print(f"h1={c.h1:<5g} h2={c.h2:<5g} error {c.rate:.4f}  "
          f"(misses {c.misses1} C, {c.misses2} S)")
best = best_cell(cells)
print(f"best: h1={best.h1:g}, h2={best.h2:g}, error {best.rate:.4f}")

c, s = data.split()
m1 = ClassModel(1, c, principal_flow(c, best.h1, skip_degenerate=True))
m2 = ClassModel(-1, s, principal_flow(s, best.h2, skip_degenerate=True))
curves = {"C flow": m1.flow.curve, "S flow": m2.flow.curve}
try:
    curves["boundary"] = trace_boundary(m1.flow, m2.flow).curve
except GeoflowError as exc:
    print(f"no boundary at these radii: {exc}")
emit_polyline(curves, out / "cs.svg", "svg", points=data.points, labels=data.labels)
print(f"wrote {out / 'cs.svg'}")
