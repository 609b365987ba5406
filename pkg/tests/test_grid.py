import numpy as np
import pytest

from chebnet.catalog import make_surface
from chebnet.errors import CommutationDefect, LeftDomain
from chebnet.grid import (chebyshev_grid, commutation_defect, grid_from_patch, parallelogram_test,
                          trace_curves)
from chebnet.invariants import DirectionPair
from chebnet.parallel import NetOnSurface


def _coordinate_net(S):
    def fields(p, q):
        X = np.zeros((2, 2) + np.shape(p))
        X[0, 0] = 1.0
        X[1, 1] = 1.0
        return X
    return NetOnSurface(S, DirectionPair.coordinate(), (1, -1), 1.0, "coord", fields=fields)


def test_patch_grid_shape_and_metric():
    g = grid_from_patch(make_surface("pseudosphere-asym"), 0.6, -0.5, 9, 7, 0.05)
    assert g.shape == (9, 7) and g.r.shape == (3, 9, 7)
    np.testing.assert_allclose(np.linalg.norm(g.r_x, axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(g.K, -1.0, atol=1e-10)
    assert np.max(np.abs(g.constraint_residual())) < 1e-12


def test_patch_grid_must_fit():
    with pytest.raises(LeftDomain):
        grid_from_patch(make_surface("pseudosphere-asym"), 0.6, -0.5, 40, 40, 0.05)


def test_net_grid_commutes(nets91, pair91):
    g = chebyshev_grid(nets91[0], pair91.center, 5, 5, 0.05)
    assert np.max(g.commutation_defect) < 1e-6 * 0.05**2
    assert g.origin == (2, 2)
    np.testing.assert_allclose(g.chart[:, 2, 2], pair91.center)
    # unit spacing in arc length along the first family
    d = np.linalg.norm(np.diff(g.r[:, :, 2], axis=1), axis=0)
    np.testing.assert_allclose(d, 0.05, rtol=1e-3)


def test_non_chebyshev_net_is_rejected():
    S = make_surface("sphere")
    with pytest.raises(CommutationDefect):
        chebyshev_grid(_coordinate_net(S), (0.2, 0.5), 5, 5, 0.1)


def test_commutation_defect_of_coordinate_chebyshev_net():
    S = make_surface("pseudosphere-asym")
    net = _coordinate_net(S)
    g = chebyshev_grid(net, (1.0, -0.2), 4, 4, 0.05, check_defect=False)
    assert np.max(commutation_defect(net, g)) < 1e-10


def test_trace_curves_counts(nets92, pair92):
    seeds = np.array([pair92.center, (pair92.center[0] + 0.1, pair92.center[1])])
    curves = trace_curves(nets92[0], seeds, 1e-2, 20)
    assert len(curves) == 4
    for c in curves:
        assert c.xyz.shape == (21, 3) and not c.truncated
        chords = np.linalg.norm(np.diff(c.xyz, axis=0), axis=1)
        np.testing.assert_allclose(chords, 1e-2, rtol=1e-4)


def test_trace_truncates_at_chart_edge(nets92, pair92):
    curves = trace_curves(nets92[0], [pair92.center], 0.05, 400, families=(0,))
    assert curves[0].truncated and len(curves[0].s) < 401


def test_parallelogram_small(nets91, pair91):
    r1 = parallelogram_test(nets91[1], pair91.center, 0.06, 3, 2e-3)
    r2 = parallelogram_test(nets91[1], pair91.center, 0.06, 3, 1e-3)
    assert r1["max_discrepancy"] < 1e-4
    assert r1["discrepancy"].shape == (3, 3)
    assert r1["max_discrepancy"] / r2["max_discrepancy"] > 3.5
