"""Second-order invariants of a curve net, and how they tell Chebyshev nets apart.

Run: python3 demos/net_invariants.py
"""

import numpy as np

from chebnet.catalog import make_surface
from chebnet.invariants import (DirectionPair, classify_net, identity_suite, invariant_record,
                                random_pair, sample_points)

rng = np.random.default_rng(7)

# A net is a pair of direction fields on a patch.  Start with the coordinate
# net of the pseudosphere in asymptotic parameters.
S = make_surface("pseudosphere-asym")
p, q = S.center
rec = invariant_record(S, p, q, DirectionPair.coordinate())
print(f"pseudosphere, asymptotic coordinates at ({p:.3f}, {q:.3f})")
for name in ("omega", "K", "H", "sigma", "kn1", "kn2", "tg1", "tg2", "pi1", "pi2", "iota1", "iota2"):
    print(f"  {name:6s} {float(getattr(rec, name)): .6f}")

# Both normal curvatures vanish (asymptotic lines) and pi, iota vanish:
# the net is Chebyshev.  The sphere's latitude/longitude net is not.
keys = ("iota", "pi", "commutator")
for surf in ("pseudosphere-asym", "sphere"):
    T = make_surface(surf)
    worst = classify_net(T, DirectionPair.coordinate(), sample_points(T, 20, rng))["max"]
    print(f"{surf:18s} Chebyshev residuals:", ", ".join(f"{k} {worst[k]:.1e}" for k in keys))

# The identities tying the invariants together hold for any generic net;
# here a random polynomial pair on a graph surface.
G = make_surface("graph")
worst = max(identity_suite(G, a, b, random_pair(rng)).max for a, b in sample_points(G, 20, rng))
print(f"identity suite on a random net over a graph: max relative residual {worst:.1e}")
