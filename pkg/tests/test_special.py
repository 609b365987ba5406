import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from chebnet import special
from chebnet.catalog import psi_k, psi_k_inv, psi_k_prime, psi_k_range
from chebnet.errors import BranchViolation, DerivativeSingular, ParamOutOfRange
from chebnet.jets import Jet2

params = st.floats(-3.0, 0.9)
args = st.floats(-6.0, 6.0)


@given(args, params)
@settings(max_examples=100, deadline=None)
def test_pythagorean_identities(x, m):
    _, sn, cn, dn = special.jacobi(x, m)
    assert abs(sn**2 + cn**2 - 1) < 1e-12
    assert abs(dn**2 + m * sn**2 - 1) < 1e-12


@given(st.floats(-4.0, 4.0), params)
@settings(max_examples=100, deadline=None)
def test_amplitude_inverts_F(phi, m):
    assert abs(special.amplitude(special.ellip_F(phi, m), m) - phi) < 1e-11


@given(st.floats(0.0, 1.0), params)
@settings(max_examples=100, deadline=None)
def test_arccn_inverts_cn(t, m):
    x = t * special.ellip_K(m)
    _, sn, cn, dn = special.jacobi(x, m)
    # cn is flat at 0 and K, so the forward error there is ~eps/|cn'|
    slack = 4e-16 / max(abs(sn * dn), 1e-300)
    assert abs(special.arccn(cn, m) - x) < 1e-11 + slack


def test_against_scipy_for_nonnegative_m():
    x = np.linspace(-5, 5, 41)
    for m in (0.0, 0.3, 0.7, 0.95):
        am, sn, cn, dn = special.jacobi(x, m)
        ref = sp.ellipj(x, m)
        np.testing.assert_allclose(sn, ref[0], atol=1e-13)
        np.testing.assert_allclose(cn, ref[1], atol=1e-13)
        np.testing.assert_allclose(dn, ref[2], atol=1e-13)
        np.testing.assert_allclose(am, ref[3], atol=1e-12)
        phi = np.linspace(-1.5, 1.5, 13)
        np.testing.assert_allclose(special.ellip_F(phi, m), sp.ellipkinc(phi, m), rtol=1e-13)
        np.testing.assert_allclose(special.ellip_E(phi, m), sp.ellipeinc(phi, m), rtol=1e-13)
        np.testing.assert_allclose(special.ellip_K(m), sp.ellipk(m), rtol=1e-13)


def test_negative_parameter_against_imaginary_modulus_transform():
    # F(phi | m) for m < 0 from the quadrature definition
    from scipy.integrate import quad
    for m in (-0.5, -2.0, -3.0):
        val = quad(lambda t: 1 / np.sqrt(1 - m * np.sin(t) ** 2), 0, 1.1)[0]
        assert abs(special.ellip_F(1.1, m) - val) < 1e-12


def test_carlson_special_values():
    assert abs(special.carlson_rf(1.0, 1.0, 1.0) - 1.0) < 1e-15
    assert abs(special.carlson_rf(0.0, 1.0, 2.0) - 1.3110287771461) < 1e-12
    assert abs(special.carlson_rd(0.0, 2.0, 1.0) - 1.7972103521034) < 1e-12


def test_parameter_range_enforced():
    with pytest.raises(ParamOutOfRange):
        special.jacobi(0.3, 1.0)
    with pytest.raises(BranchViolation):
        special.arccn(1.5, 0.3)


def test_jets_of_jacobi_functions():
    u = Jet2.variable(0.4, 0)
    for m in (-1.0, 0.5):
        am, sn, cn, dn = special.jacobi_jet(u, m)
        h = 1e-5
        d = (np.array(special.jacobi(0.4 + h, m)) - np.array(special.jacobi(0.4 - h, m))) / (2 * h)
        np.testing.assert_allclose([am.d_p, sn.d_p, cn.d_p, dn.d_p], d, atol=1e-9)
    y = Jet2.variable(0.3, 0)
    j = special.arccn_jet(y, -0.5)
    h = 1e-6
    fd = (special.arccn(0.3 + h, -0.5) - special.arccn(0.3 - h, -0.5)) / (2 * h)
    assert abs(j.d_p - fd) < 1e-8


@given(st.floats(0.1, 1.4), st.floats(0.02, 0.98))
@settings(max_examples=60, deadline=None)
def test_psi_inverse_round_trip(k, t):
    lo, hi = psi_k_range(k)
    w = lo + t * (hi - lo)
    v = psi_k_inv(w, k)
    assert abs(psi_k(v, k) - w) < 1e-10


@given(st.floats(0.1, 1.4), st.floats(0.05, 0.95))
@settings(max_examples=60, deadline=None)
def test_psi_derivative_closed_form(k, t):
    vmin = -np.arctanh(np.sin(k))
    v = vmin + t * (0 - vmin)
    h = 1e-4 * min(v - vmin, -v)
    fd = (8 * (psi_k(v + h, k) - psi_k(v - h, k)) - (psi_k(v + 2 * h, k) - psi_k(v - 2 * h, k))) / (12 * h)
    assert abs(fd - psi_k_prime(v, k)) < 1e-8 * max(1.0, abs(fd))


def test_psi_derivative_singular_at_endpoint():
    with pytest.raises(DerivativeSingular):
        psi_k_prime(-np.arctanh(np.sin(1.0)), 1.0)
