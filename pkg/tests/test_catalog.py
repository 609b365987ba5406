import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebnet.catalog import (PSEUDOSPHERICAL, catalog_listing, inverse_gauss, make_surface,
                             newton_inverse_gauss)
from chebnet.errors import BadParams, DomainViolation, OutsideGaussImage
from chebnet.parallel import gauss_curvature
from chebnet.surfaces import gauss_map, surface_jet, unit_normal_jet

unit = st.floats(0.1, 0.9)


def _at(S, a, b):
    (p0, p1), (q0, q1) = S.domain
    return p0 + a * (p1 - p0), q0 + b * (q1 - q0)


def test_listing_has_schemas():
    names = {e["name"] for e in catalog_listing()}
    assert set(PSEUDOSPHERICAL) <= names
    assert {"plane", "sphere", "sphere-chebyshev", "elliptic-literal"} <= names
    for e in catalog_listing():
        assert isinstance(e["params"], dict) and e["description"]


def test_unknown_surface():
    with pytest.raises(BadParams):
        make_surface("torus")


@pytest.mark.parametrize("name", PSEUDOSPHERICAL)
def test_pseudospherical_entries_have_K_minus_one(name):
    S = make_surface(name)
    g = np.linspace(0.05, 0.95, 9)
    (p0, p1), (q0, q1) = S.domain
    P, Q = np.meshgrid(p0 + (p1 - p0) * g, q0 + (q1 - q0) * g, indexing="ij")
    assert np.max(np.abs(gauss_curvature(S, P, Q) + 1)) < 1e-8


def test_sphere_and_plane_curvature():
    S = make_surface("sphere")
    assert abs(gauss_curvature(S, 0.3, 0.4) - 1) < 1e-12
    assert abs(gauss_curvature(make_surface("plane"), 1.0, 2.0)) < 1e-15


def test_literal_elliptic_curvature_is_minus_sin_squared():
    for k in (0.5, 1.0):
        S = make_surface("elliptic-literal", {"k": k})
        p, q = S.center
        assert abs(gauss_curvature(S, p, q) + np.sin(k) ** 2) < 1e-10


@pytest.mark.parametrize("name", ["pseudosphere-asym", "elliptic-asym"])
def test_asymptotic_chebyshev_variants(name):
    S = make_surface(name)
    p, q = S.center
    r = surface_jet(S, p, q)
    n = unit_normal_jet(S, p, q).value
    assert abs(np.dot(r.d_p, r.d_p) - 1) < 1e-10 and abs(np.dot(r.d_q, r.d_q) - 1) < 1e-10
    assert abs(np.dot(r.d_pp, n)) < 1e-9 and abs(np.dot(r.d_qq, n)) < 1e-9


@pytest.mark.parametrize("name", ["sphere", "pseudosphere-x", "pseudosphere-asym", "elliptic",
                                  "elliptic-asym", "sphere-chebyshev"])
@given(a=unit, b=unit)
@settings(max_examples=15, deadline=None)
def test_inverse_gauss_round_trip(name, a, b):
    S = make_surface(name)
    p, q = _at(S, a, b)
    N = gauss_map(S, p, q)
    p2, q2 = inverse_gauss(S, None, N)
    assert np.linalg.norm(gauss_map(S, p2, q2) - N) < 1e-10


def test_newton_inverse_on_graph():
    S = make_surface("graph", {"f": "paraboloid"})
    N = gauss_map(S, 0.7, -0.4)
    p, q = newton_inverse_gauss(S, N)
    assert np.hypot(p - 0.7, q + 0.4) < 1e-9


def test_inverse_gauss_rejects():
    with pytest.raises(OutsideGaussImage):
        inverse_gauss("plane", None, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(DomainViolation):
        inverse_gauss("sphere", None, np.array([1.0, 1.0, 0.0]))
