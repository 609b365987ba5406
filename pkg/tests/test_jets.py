import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebnet import jets
from chebnet.errors import StencilOutOfDomain
from chebnet.jets import Jet2, fd_gradient, fd_promote

coord = st.floats(-1.0, 1.0)


def _fd_check(f, p, q, h=1e-3):
    """Compare a jet-evaluated f with fourth-order differences of its value."""
    P, Q = Jet2.seeds(p, q)
    J = f(P, Q)
    g, H = fd_promote(lambda a, b: f(Jet2.constant(a), Jet2.constant(b)).value, p, q, h)
    np.testing.assert_allclose([J.d_p, J.d_q], g, atol=1e-8)
    np.testing.assert_allclose([[J.d_pp, J.d_pq], [J.d_pq, J.d_qq]], H, atol=1e-6)


@given(coord, coord)
@settings(max_examples=40, deadline=None)
def test_product_and_quotient_rules(p, q):
    _fd_check(lambda P, Q: (P * Q + 2.0) / (1.5 + P * P) - 3.0 * Q ** 3, p, q)


@given(coord, coord)
@settings(max_examples=40, deadline=None)
def test_elementary_chain(p, q):
    _fd_check(lambda P, Q: jets.sin(P * Q) * jets.exp(Q) + jets.tanh(P - Q)
              + jets.sqrt(2.0 + jets.cos(P)) + jets.arctan(P + Q), p, q)


@given(coord, coord)
@settings(max_examples=30, deadline=None)
def test_inverse_functions(p, q):
    _fd_check(lambda P, Q: jets.arcsin(0.4 * jets.sin(0.7 * P)) + jets.artanh(0.3 * jets.cos(Q))
              + jets.arcosh(2.0 + P * P) + jets.log(3.0 + Q), p, q)


def test_seeds_are_coordinates():
    P, Q = Jet2.seeds(0.3, -0.2)
    assert P.d_p == 1 and P.d_q == 0 and Q.d_q == 1
    assert P.d_pp == P.d_pq == Q.d_qq == 0


def test_arctan2_matches_numpy_and_derivatives():
    p, q = 0.4, -1.2
    _fd_check(lambda P, Q: jets.arctan2(Q + 0.1 * P, P - 0.5), p, q)
    P, Q = Jet2.seeds(p, q)
    assert np.isclose(jets.arctan2(Q, P).value, np.arctan2(q, p))


def test_vector_jets_cross_and_norm():
    P, Q = Jet2.seeds(0.2, 0.7)
    a = jets.Jet2Vec3(P, Q, P * Q)
    b = jets.Jet2Vec3(Q, 1.0 + P, jets.sin(Q))
    c = a.cross(b)
    np.testing.assert_allclose(c.dot(a).value, 0.0, atol=1e-15)
    np.testing.assert_allclose(a.norm().value ** 2, a.dot(a).value)


def test_vectorised_evaluation():
    p = np.linspace(0, 1, 7)
    P, Q = Jet2.seeds(p, 0.5 * p)
    J = jets.sin(P) * Q
    np.testing.assert_allclose(J.d_p, np.cos(p) * 0.5 * p)
    np.testing.assert_allclose(J.d_q, np.sin(p))


def test_fd_gradient_fourth_order():
    f = lambda p, q: np.exp(p) * np.sin(q)
    errs = [np.max(np.abs(fd_gradient(f, 0.3, 0.4, h) - [np.exp(.3) * np.sin(.4), np.exp(.3) * np.cos(.4)]))
            for h in (1e-2, 5e-3)]
    assert errs[0] / errs[1] > 12


def test_fd_promote_respects_domain():
    with pytest.raises(StencilOutOfDomain):
        fd_promote(lambda p, q: p * q, 0.0, 0.5, 0.1, domain=((0.0, 1.0), (0.0, 1.0)))
