"""Two pseudospheres with perpendicular axes, matched through their Gauss maps.

The pair is parallel (same normal at corresponding points).  Their middle
surface carries two concordant Chebyshev nets; rebuilding the pair from
either net closes the loop.

Run: python3 demos/perpendicular_pseudospheres.py
"""

import numpy as np

from chebnet.parallel import check_net, concordant_nets, mapping_tensor, middle_curvature
from chebnet.pipeline import example_pair, round_trip

pp = example_pair("9.1")
p, q = pp.center
mt = mapping_tensor(pp, np.array([p]), np.array([q]), residuals=False)
print(f"chart centre ({p:.4f}, {q:.4f})")
print(f"  |det s - 1| = {float(np.max(np.abs(mt.det_residual))):.1e}   "
      f"|xi eta - 1| = {float(np.max(np.abs(mt.xi_eta_residual))):.1e}")
Kj, Kf, _ = middle_curvature(pp, p, q)
print(f"  middle surface curvature {float(Kj):.6f} (formula {float(Kf):.6f})")

for net in concordant_nets(pp):
    rep = check_net(net, pp.center)
    print(f"net {net.label}: concordance sign {rep['sign']:+d}, residual {rep['max']['concordance']:.1e}")

# Forward direction at two resolutions.  The "worst" column is the maximum
# over each whole grid; the finer grid reaches closer to the edge, where the
# finite-difference residuals are largest, so compare rates on shared nodes.
rt = round_trip("9.1", step=0.05, n=9, refine=1, net="A")
print(f"{'step':>8s} {'n':>3s} {'dist+':>9s} {'dist-':>9s} {'loop':>9s} {'worst':>9s}")
for row in rt.table():
    print(f"{row['step']:8.4f} {row['n']:3d} {row['distance_plus']:9.1e} {row['distance_minus']:9.1e} "
          f"{row['loop']:9.1e} {row['worst_residual']:9.1e}")

print("coarse/fine ratio on shared nodes:")
for key in ("gauss_plus", "sine_gordon_plus", "lelieuvre_xi_plus", "distance_plus"):
    print(f"  {key:20s} {rt.rates[key][0]:6.1f}")
