"""The two worked examples as end-to-end pipelines.

reverse: pseudospherical pair -> parallelism -> middle surface -> concordant nets
forward: net -> Chebyshev grid -> vector potential -> associated pair
The round trip compares the associated pair with the surfaces it started from.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import make_surface
from .errors import BadParams
from .forward import (associated_surfaces, asymptotic_analysis, convergence,
                      shared_nodes, vector_potential)
from .grid import chebyshev_grid
from .parallel import (check_net, concordant_nets, gauss_curvature, make_parallel,
                       middle_surface)
from .surfaces import surface_jet

EXAMPLES = ("9.1", "9.2")


def example_pair(example, k=1.0):
    """The parallel pseudospherical pair of an example, on its working chart.

    9.1: two pseudospheres with perpendicular axes, Gauss-sphere chart (phi, theta).
    9.2: lower pseudosphere sheet and the elliptic-type surface of revolution
         with parameter k, chart (u, v+) of the pseudosphere.
    """
    example = str(example)
    if example == "9.1":
        A = make_surface("pseudosphere-x", {})
        B = make_surface("pseudosphere-y", {})
        return make_parallel(A, B, "gauss", ((0.3, 1.27), (-0.6, 0.6)))
    if example == "9.2":
        k = float(k)
        if not 0.0 < k < np.pi / 2:
            raise BadParams("k must satisfy 0 < k < pi/2")
        A = make_surface("pseudosphere-z", {"sheet": -1, "vmax": 2.0, "vmin": 1e-5})
        B = make_surface("elliptic", {"k": k})
        rim = -np.arctanh(np.sin(k))
        return make_parallel(A, B, "closed-form", ((-1.0, 1.0), (rim + 0.1, -0.05)))
    raise BadParams(f"unknown example {example!r}; choose from {EXAMPLES}")


def rim_curvature_pair(k=1.0):
    """The "9.2" pair with the unscaled surface of revolution (curvature
    -sin^2 k), on a chart reaching the rim v+ = 0."""
    A = make_surface("pseudosphere-z", {"sheet": -1, "vmax": 2.0, "vmin": 1e-5})
    B = make_surface("elliptic-literal", {"k": float(k)})
    rim = -np.arctanh(np.sin(k))
    return make_parallel(A, B, "closed-form", ((-np.pi, np.pi), (rim + 0.05, -1e-5)))


def rim_curvature(k=1.0, p=0.3, deltas=(1e-2, 5e-3, 2.5e-3, 1.25e-3)):
    """Middle-surface curvature at the rim v+ = 0, by Richardson extrapolation
    of jet values at v+ = -delta (the chart is singular on the rim itself)."""
    mid = middle_surface(rim_curvature_pair(k))
    vals = np.array([float(gauss_curvature(mid, p, -d)) for d in deltas])
    # error is a power series in delta; eliminate successive orders
    table = vals
    for order in range(1, len(vals)):
        f = 2.0**order
        table = (f * table[1:] - table[:-1]) / (f - 1)
    return float(table[0]), vals


@dataclass
class Construction:
    example: str
    pp: object
    net: object
    net_check: dict
    grid: object
    potential: object
    pair: object
    asymptotic: object = None
    meta: dict = field(default_factory=dict)


def construct(example="9.1", net="A", n=9, step=0.05, k=1.0, kappa=1.0, asymptotic=True,
              pp=None, nets=None):
    """Run both directions on one net of an example at one resolution."""
    pp = pp or example_pair(example, k)
    nets = nets or concordant_nets(pp, kappa)
    chosen = {nt.label: nt for nt in nets}[net]
    pc = np.array(pp.center)
    chk = check_net(chosen, pc.reshape(1, 2))
    g = chebyshev_grid(chosen, pp.center, n, n, step, kappa=chk["kappa_eff"])
    vp = vector_potential(g, check=False)
    ap = associated_surfaces(g, vp)
    an = asymptotic_analysis(g, ap, check=False) if asymptotic else None
    return Construction(str(example), pp, chosen, chk, g, vp, ap, an,
                        {"n": n, "step": step, "k": k})


def round_trip_distance(c: Construction):
    """Pointwise distances of r+ to A and r- to B at the grid's chart points,
    after translating each pair to agree at the base node."""
    g = c.grid
    i0, j0 = g.origin
    out = {}
    for tag, r, S in (("plus", c.pair.r_plus, c.pp.A), ("minus", c.pair.r_minus, c.pp.B)):
        ref = surface_jet(S, g.chart[0], g.chart[1], check_domain=False).value
        d = (r - r[:, i0, j0, None, None]) - (ref - ref[:, i0, j0, None, None])
        out[tag] = np.linalg.norm(d, axis=0)
    return out


@dataclass
class RoundTrip:
    example: str
    levels: list            # one Construction per resolution
    distances: list         # dicts of max distances per level
    rates: dict             # coarse/fine ratios of every residual
    residuals: list         # per level: summary of every residual

    def table(self):
        rows = []
        for c, d, res in zip(self.levels, self.distances, self.residuals):
            rows.append({"step": c.grid.step, "n": c.grid.shape[0], **d,
                         "loop": c.potential.loop_max,
                         "worst_residual": max(res.values())})
        return rows


def round_trip(example="9.1", step=0.05, n=9, refine=1, net="A", k=1.0, kappa=1.0):
    """Run the pipeline at step, step/2, ... (``refine`` halvings) and compare
    the associated pair with the original surfaces."""
    pp = example_pair(example, k)
    nets = concordant_nets(pp, kappa)
    levels, dists, res = [], [], []
    for lv in range(refine + 1):
        nn = (n - 1) * 2**lv + 1
        c = construct(example, net, nn, step / 2**lv, k, kappa, pp=pp, nets=nets)
        levels.append(c)
        dd = round_trip_distance(c)
        dists.append({f"distance_{t}": float(np.max(v)) for t, v in dd.items()})
        summary = c.pair.summary()
        if c.asymptotic is not None:
            summary.update(c.asymptotic.summary())
        res.append(summary)
    rates = {}
    for a, b in zip(levels[:-1], levels[1:]):
        reports = dict(a.pair.report)
        fine = dict(b.pair.report)
        if a.asymptotic is not None:
            reports.update(a.asymptotic.report)
            fine.update(b.asymptotic.report)
        da, db = round_trip_distance(a), round_trip_distance(b)
        for t in da:
            reports[f"distance_{t}"] = da[t]
            fine[f"distance_{t}"] = db[t]
        for key, (ca, fb, ratio) in convergence(reports, fine).items():
            rates.setdefault(key, []).append(ratio)
    return RoundTrip(str(example), levels, dists, rates, res)


__all__ = ["EXAMPLES", "example_pair", "rim_curvature_pair", "rim_curvature", "construct", "round_trip",
           "round_trip_distance", "Construction", "RoundTrip", "shared_nodes"]
