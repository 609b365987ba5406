"""Writing the reconstructed surfaces and traced net curves to disk.

Run: python3 demos/export_geometry.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from chebnet.export import export_csv, export_json, export_obj, load_json
from chebnet.grid import trace_curves
from chebnet.pipeline import construct

out = Path(sys.argv[1] if len(sys.argv) > 1 else "chebnet-demo-out")

# 33 x 33 nodes; the usable band of the middle surface is narrow, so the
# step is small.
c = construct("9.1", net="A", n=33, step=0.0125, asymptotic=False)
for tag, r in (("middle", c.grid.r), ("plus", c.pair.r_plus), ("minus", c.pair.r_minus)):
    nv, nf = export_obj(r, out / f"{tag}.obj", name=tag)
    print(f"{tag}.obj: {nv} vertices, {nf} faces")

seeds = [c.pp.center]
curves = trace_curves(c.net, seeds, 1e-3, 200)
print(f"curves.csv: {export_csv(curves, out / 'curves.csv')} rows")

doc = {"chart": c.grid.chart, "middle": c.grid.r, "step": c.grid.step}
export_json(doc, out / "grid.json")
back = load_json(out / "grid.json")
print("grid.json reads back bit-for-bit:", bool(np.array_equal(back["middle"], c.grid.r, equal_nan=True)))
