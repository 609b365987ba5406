"""The twelve acceptance criteria at their stated tolerances.

Each test records one PASS/FAIL line (shown in the terminal summary) and then
asserts.  Run alone with ``pytest tests/test_acceptance.py``.
"""

import numpy as np
import pytest

from chebnet import special
from chebnet.catalog import PSEUDOSPHERICAL, make_surface, psi_k, psi_k_inv, psi_k_prime, psi_k_range
from chebnet.errors import ChebnetError
from chebnet.forward import convergence, vector_potential
from chebnet.grid import grid_from_patch, parallelogram_test
from chebnet.invariants import (DirectionPair, classify_net, conditioned_samples, identity_suite, random_pair,
                                sample_points, symmetry_residuals)
from chebnet.parallel import check_net, gauss_curvature, mapping_tensor, middle_curvature
from chebnet.pipeline import rim_curvature, round_trip_distance

from conftest import ACCEPTANCE

SEED = 20261015


def record(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} -- {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def test_01_identity_suite():
    # nearly parallel pairs are redrawn (see conditioned_samples)
    rng = np.random.default_rng(SEED)
    names = ["sphere", "graph", "translation", "pseudosphere-x", "pseudosphere-asym", "elliptic"]
    worst, redrawn = 0.0, 0
    for name in names:
        S = make_surface(name)
        samples, r = conditioned_samples(S, 100, rng)
        redrawn += r
        worst = max([worst] + [identity_suite(S, p, q, pair).max for p, q, pair in samples])
    record(1, "identity suite", worst < 1e-8,
           f"max relative residual {worst:.2e} < 1e-8 on {100 * len(names)} samples, "
           f"{len(names)} surfaces ({redrawn} near-degenerate draws redrawn)")


def test_02_chebyshev_criteria():
    rng = np.random.default_rng(SEED)
    keys = ("commutator", "iota", "pi", "kg1_plus_omega1", "kg2_minus_omega2")
    S = make_surface("pseudosphere-asym")
    good = classify_net(S, DirectionPair.coordinate(), sample_points(S, 50, rng))["max"]
    S = make_surface("sphere")
    bad = classify_net(S, DirectionPair.coordinate(), sample_points(S, 50, rng))["max"]
    g, b = max(good[k] for k in keys), max(bad[k] for k in keys)
    record(2, "Chebyshev criteria", g < 1e-9 and b > 1e-3,
           f"pseudosphere net {g:.2e} < 1e-9; sphere coordinate control {b:.2e} > 1e-3")


def test_03_discrete_symmetries():
    rng = np.random.default_rng(SEED)
    names = ["graph", "translation", "sphere", "pseudosphere-x", "elliptic"]
    worst, done = 0.0, 0
    while done < 50:
        S = make_surface(names[done % len(names)])
        (p, q), = sample_points(S, 1, rng)
        pair = random_pair(rng)
        try:
            res = [symmetry_residuals(T, S, p, q, pair) for T in ("T0", "T1", "T2", "T3")]
        except ChebnetError:
            continue
        worst = max(worst, max(float(np.max(v)) for r in res for v in r.values()))
        done += 1
    record(3, "discrete symmetries T0-T3", worst < 1e-10, f"max entrywise {worst:.2e} < 1e-10 on 50 samples")


def test_04_catalog_curvature():
    worst = 0.0
    for name in PSEUDOSPHERICAL:
        S = make_surface(name)
        (p0, p1), (q0, q1) = S.domain
        g = np.linspace(0.02, 0.98, 15)
        P, Q = np.meshgrid(p0 + (p1 - p0) * g, q0 + (q1 - q0) * g, indexing="ij")
        worst = max(worst, float(np.max(np.abs(gauss_curvature(S, P, Q) + 1))))
    rim, _ = rim_curvature(1.0)
    target = -2 * np.sin(1.0) ** 2 / (1 + np.sin(1.0) ** 2)
    record(4, "catalog curvature", worst < 1e-8 and abs(rim - target) < 1e-6,
           f"|K+1| {worst:.2e} < 1e-8; rim K {rim:.8f} vs {target:.8f}")


def test_05_mapping_tensor(pair91):
    (p0, p1), (q0, q1) = pair91.domain
    g = np.linspace(0.03, 0.97, 12)
    P, Q = np.meshgrid(p0 + (p1 - p0) * g, q0 + (q1 - q0) * g, indexing="ij")
    mt = mapping_tensor(pair91, P, Q, residuals=False)
    d, x = float(np.max(np.abs(mt.det_residual))), float(np.max(np.abs(mt.xi_eta_residual)))
    Kj, Kf, _ = middle_curvature(pair91, P, Q)
    k = float(np.nanmax(np.abs(Kj - Kf)))
    record(5, "mapping tensor (perpendicular pseudospheres)", d < 1e-9 and x < 1e-9 and k < 1e-7,
           f"|det s-1| {d:.2e}, |xi eta-1| {x:.2e} < 1e-9; K-bar {k:.2e} < 1e-7")


def test_06_constructed_nets(pair91, pair92, nets91, nets92):
    rng = np.random.default_rng(SEED)
    worst_c, worst_k, signs = 0.0, 0.0, []
    for pp, nets in ((pair91, nets91), (pair92, nets92)):
        pts = sample_points(pp.domain, 50, rng)
        for net in nets:
            rep = check_net(net, pts)
            worst_k = max(worst_k, rep["max"]["concordance"])
            worst_c = max(worst_c, rep["max"]["iota"], rep["max"]["pi"])
            signs.append(rep["sign"])
    record(6, "constructed nets", worst_k < 1e-6 and worst_c < 1e-6,
           f"|K +- sigma| {worst_k:.2e}, Chebyshev {worst_c:.2e} < 1e-6; per-net signs {signs}")


def test_07_parallelogram(pair91, nets91):
    # quadrilaterals up to 0.15 x 0.15 (arc length) from the chart centre
    a = parallelogram_test(nets91[0], pair91.center, 0.15, 5, 1e-3)["max_discrepancy"]
    b = parallelogram_test(nets91[0], pair91.center, 0.15, 5, 5e-4)["max_discrepancy"]
    record(7, "parallelogram condition", a < 1e-4 and a / b >= 3.5,
           f"discrepancy {a:.2e} at h=1e-3, {b:.2e} at h=5e-4 (ratio {a / b:.2f} >= 3.5)")


def test_08_conservation(built):
    worst = max(built(ex, net).potential.loop_max for ex in ("9.1", "9.2") for net in ("A", "B"))
    ctrl = grid_from_patch(make_surface("sphere-chebyshev"), 0.6, -0.5, 9, 9, 0.05)
    c = float(np.min(vector_potential(ctrl, check=False).loop))
    record(8, "conservation law", worst < 1e-6 and c >= 1e-2,
           f"loop/area {worst:.2e} < 1e-6; sphere control min {c:.2e} >= 1e-2")


_T81 = ("gauss", "asymptotic", "tangency", "detI", "mean")


def test_09_theorem_8_1(built):
    worst, rate = 0.0, np.inf
    for ex in ("9.1", "9.2"):
        for net in ("A", "B"):
            c0, c1 = built(ex, net, 0), built(ex, net, 1)
            for key, (a, b, r) in convergence(c0.pair.report, c1.pair.report).items():
                if key.startswith(_T81):
                    worst = max(worst, a)
                    rate = min(rate, r)
    record(9, "associated-surface residuals", worst < 1e-3 and rate >= 3.5,
           f"max {worst:.2e} < 1e-3 at step 0.05; min ratio {rate:.1f} >= 3.5")


def test_10_sine_gordon_and_sphere_nets(built):
    sg = sph = lel = 0.0
    rate = np.inf
    for ex in ("9.1", "9.2"):
        for net in ("A", "B"):
            c0, c1 = built(ex, net, 0), built(ex, net, 1)
            s = c0.asymptotic.summary()
            sg = max(sg, s["sine_gordon_plus"], s["sine_gordon_minus"])
            sph = max(sph, s["psi"], *(v for k, v in s.items() if k.startswith("sphere_speed")))
            lel = max(lel, *(v for k, v in s.items() if k.startswith("lelieuvre")))
            for key, (a, b, r) in convergence(c0.asymptotic.report, c1.asymptotic.report).items():
                if key.startswith(("sine_gordon", "lelieuvre")):
                    rate = min(rate, r)
    ok = sg < 5e-3 and sph < 1e-4 and lel < 1e-3 and rate >= 3.5
    record(10, "sine-Gordon and sphere nets", ok,
           f"sine-Gordon {sg:.2e} < 5e-3, speed/psi {sph:.2e} < 1e-4, Lelieuvre {lel:.2e} < 1e-3, "
           f"min ratio {rate:.1f}")


def test_11_round_trip(built):
    worst, rate = 0.0, np.inf
    for ex in ("9.1", "9.2"):
        for net in ("A", "B"):
            d0 = round_trip_distance(built(ex, net, 0))
            d1 = round_trip_distance(built(ex, net, 1))
            for t in d0:
                a, b = float(np.max(d0[t])), float(np.max(d1[t][::2, ::2]))
                worst = max(worst, a)
                rate = min(rate, a / b)
    record(11, "round trip", worst < 5e-3 and rate >= 3.5,
           f"distance {worst:.2e} < 5e-3 at step 0.05; min shrink {rate:.1f} >= 3.5")


def test_12_special_functions():
    rng = np.random.default_rng(SEED)
    x = rng.uniform(-6, 6, 100)
    m = rng.uniform(-3, 0.9, 100)
    pyth = dn_id = am_rt = cn_rt = 0.0
    for xi, mi in zip(x, m):
        _, sn, cn, dn = special.jacobi(xi, mi)
        pyth = max(pyth, abs(sn * sn + cn * cn - 1))
        dn_id = max(dn_id, abs(dn * dn + mi * sn * sn - 1))
        phi = 0.5 * xi
        am_rt = max(am_rt, abs(special.amplitude(special.ellip_F(phi, mi), mi) - phi))
        t = abs(xi) / 6 * special.ellip_K(mi)
        cn_rt = max(cn_rt, abs(special.arccn(special.jacobi(t, mi)[2], mi) - t))
    psi_rt = psi_d = 0.0
    for k in (0.3, 0.8, 1.0, 1.3):
        lo, hi = psi_k_range(k)
        for w in np.linspace(lo, hi, 27)[1:-1]:
            psi_rt = max(psi_rt, abs(psi_k(psi_k_inv(w, k), k) - w))
        vmin = -np.arctanh(np.sin(k))
        for v in np.linspace(vmin, 0, 22)[1:-1]:
            h = 1e-4 * min(v - vmin, -v)
            fd = (8 * (psi_k(v + h, k) - psi_k(v - h, k)) - (psi_k(v + 2 * h, k) - psi_k(v - 2 * h, k))) / (12 * h)
            psi_d = max(psi_d, abs(fd - psi_k_prime(v, k)) / max(1.0, abs(fd)))
    ok = pyth < 1e-12 and dn_id < 1e-12 and am_rt < 1e-11 and cn_rt < 1e-11 and psi_rt < 1e-10 and psi_d < 1e-8
    record(12, "special functions", ok,
           f"sn/cn {pyth:.1e}, dn {dn_id:.1e}, am(F) {am_rt:.1e}, arccn(cn) {cn_rt:.1e}, "
           f"Psi inverse {psi_rt:.1e}, Psi' {psi_d:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
