import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebnet.catalog import make_surface
from chebnet.errors import ClosednessViolation, MaskedRegion
from chebnet.forward import (associated_surfaces, chebyshev_angles, convergence,
                             integrate_gradient, mean_curvatures, shared_nodes, vector_potential)
from chebnet.grid import grid_from_patch


@pytest.fixture(scope="module")
def asym_grid():
    return grid_from_patch(make_surface("pseudosphere-asym"), 0.6, -0.5, 9, 9, 0.05)


@pytest.fixture(scope="module")
def sphere_grid():
    return grid_from_patch(make_surface("sphere-chebyshev"), 0.6, -0.5, 9, 9, 0.05)


@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6))
@settings(max_examples=30, deadline=None)
def test_integrate_gradient_exact_for_cubics(c):
    h = 0.1
    x, y = np.meshgrid(np.arange(7) * h, np.arange(6) * h, indexing="ij")
    f = c[0] * x**3 + c[1] * x * y**2 + c[2] * y**3 + c[3] * x * y + c[4] * x + c[5] * y
    fx = 3 * c[0] * x**2 + c[1] * y**2 + c[3] * y + c[4]
    fy = 2 * c[1] * x * y + 3 * c[2] * y**2 + c[3] * x + c[5]
    pot, loop = integrate_gradient(fx, fy, h, (3, 2))
    np.testing.assert_allclose(pot, f - f[3, 2], atol=1e-12)
    assert np.max(np.abs(loop)) < 1e-12


def test_conservation_on_concordant_patch(asym_grid):
    vp = vector_potential(asym_grid)
    assert vp.loop_max < 1e-10


def test_sphere_control_is_not_closed(sphere_grid):
    vp = vector_potential(sphere_grid, check=False)
    assert np.min(vp.loop) > 1e-2
    with pytest.raises(ClosednessViolation):
        vector_potential(sphere_grid)


def test_corrupted_grid_fails_closedness(built):
    g = built("9.1").grid.corrupted(1e-2)
    with pytest.raises(ClosednessViolation):
        vector_potential(g)


def test_gauss_legendre_beats_node_samples(built):
    g = built("9.1").grid
    gl = vector_potential(g, check=False, quadrature="gauss").loop_max
    nodes = vector_potential(g, check=False, quadrature="samples").loop_max
    assert gl < 1e-6 < nodes


def test_masked_everywhere(asym_grid):
    g = asym_grid.corrupted(-asym_grid.h12)    # h12 = 0: sigma vanishes
    with pytest.raises(MaskedRegion):
        associated_surfaces(g, np.zeros_like(g.r))


@pytest.mark.parametrize("example", ["9.1", "9.2"])
def test_theorem_residuals_converge(built, example):
    c0, c1 = built(example, "A", 0), built(example, "A", 1)
    s0 = c0.pair.summary()
    assert max(s0.values()) < 1e-3, s0
    for key, (a, b, ratio) in convergence(c0.pair.report, c1.pair.report).items():
        assert b < 1e-3 and (ratio >= 3.5 or a < 1e-10), (key, a, b)


def test_mean_curvature_forms_match_angles(built):
    g = built("9.1").grid
    k = g.kappa
    Hp, Hm = mean_curvatures(g, k)
    pp, pm = chebyshev_angles(g, k)
    # cot(phi) = -H/|kappa| with the shared normal
    np.testing.assert_allclose(1 / np.tan(pp), -Hp / abs(k), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(1 / np.tan(pm), -Hm / abs(k), rtol=1e-10, atol=1e-12)
    assert np.all((pp > 0) & (pp < np.pi) & (pm > 0) & (pm < np.pi))


def test_concordance_sign_fixes_h12(built):
    for ex in ("9.1", "9.2"):
        for net in ("A", "B"):
            g = built(ex, net).grid
            assert np.all(np.sign(g.h12) == np.sign(g.kappa))
            assert np.max(np.abs(g.constraint_residual())) < 1e-8


@pytest.mark.parametrize("example", ["9.1", "9.2"])
def test_asymptotic_analysis(built, example):
    c0, c1 = built(example, "A", 0), built(example, "A", 1)
    s = c0.asymptotic.summary()
    assert s["sine_gordon_plus"] < 5e-3 and s["sine_gordon_minus"] < 5e-3
    assert s["psi"] < 1e-4
    assert max(v for k, v in s.items() if k.startswith("sphere_speed")) < 1e-4
    assert max(v for k, v in s.items() if k.startswith("lelieuvre")) < 1e-3
    rates = convergence(c0.asymptotic.report, c1.asymptotic.report)
    for key in ("sine_gordon_plus", "sine_gordon_minus", "lelieuvre_xi_plus", "lelieuvre_eta_minus"):
        assert rates[key][2] > 3.5


def test_shared_nodes():
    f = np.arange(25.0).reshape(5, 5)
    assert shared_nodes(None, f).shape == (3, 3)
