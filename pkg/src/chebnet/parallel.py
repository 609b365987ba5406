"""Pairs of surfaces related by parallel normals, their middle surface and the
two concordant Chebyshev nets carried by it.

Both surfaces of a :class:`ParallelPair` are stored as views in one shared
chart (p, q), so that n_A(p, q) = n_B(p, q) pointwise.  The chart is either
spherical coordinates on the Gauss sphere, the parameters of the first
surface (with the second one pulled back through its inverse Gauss map), or
the first surface's parameters with a Newton inversion on the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets as J
from .errors import (CuspidalPoint, DegenerateEigen, DegenerateSigns, GenericityViolation,
                     NoOverlap, OutsideGaussImage)
from .catalog import newton_inverse_gauss
from .invariants import ConcordanceSpec, DirectionPair, classify_net, invariant_record
from .jets import Jet2, Jet2Vec3, fd_gradient, fd_promote
from .surfaces import SurfacePatch, compose, gauss_map, normal_from_jet, surface_jet

EPS_CUSP = 1e-4


def _dot(a, b):
    return np.einsum("i...,i...->...", a, b)


# -- charts -------------------------------------------------------------------

def gauss_sphere_point(Phi, Theta):
    """N = (cos phi cos theta, sin phi cos theta, sin theta); works on jets."""
    ct = J.cos(Theta)
    return Jet2Vec3(J.cos(Phi) * ct, J.sin(Phi) * ct, J.sin(Theta)) if isinstance(Phi, Jet2) \
        else np.array([np.cos(Phi) * ct, np.sin(Phi) * ct, np.sin(Theta)])


def _gauss_view(patch, domain, label):
    if patch.inverse_gauss is None:
        raise OutsideGaussImage(f"{patch.id} has no closed-form inverse Gauss map")

    def chart(P, Q):
        return patch.inverse_gauss(gauss_sphere_point(P, Q))

    return compose(patch, chart, domain, id=f"{patch.id}@{label}")


def _pullback_view(A, B, domain):
    """B in the parameters of A, through A's closed-form normal."""
    if A.gauss is None or B.inverse_gauss is None:
        raise OutsideGaussImage("closed-form chart needs A.gauss and B.inverse_gauss")
    # catalog patches are oriented so that the closed form is the patch normal

    def chart(P, Q):
        return B.inverse_gauss(A.gauss(P, Q))

    return compose(B, chart, domain, id=f"{B.id}@{A.id}")


def _jet_of_values(val, grad, hess, P, Q):
    """Compose a scalar with known derivatives in (p, q) with jets P, Q."""
    gp, gq = grad
    hpp, hpq, hqq = hess[0, 0], hess[0, 1], hess[1, 1]
    d_p = gp * P.d_p + gq * Q.d_p
    d_q = gp * P.d_q + gq * Q.d_q
    d_pp = (hpp * P.d_p**2 + 2 * hpq * P.d_p * Q.d_p + hqq * Q.d_p**2
            + gp * P.d_pp + gq * Q.d_pp)
    d_pq = (hpp * P.d_p * P.d_q + hpq * (P.d_p * Q.d_q + P.d_q * Q.d_p)
            + hqq * Q.d_p * Q.d_q + gp * P.d_pq + gq * Q.d_pq)
    d_qq = (hpp * P.d_q**2 + 2 * hpq * P.d_q * Q.d_q + hqq * Q.d_q**2
            + gp * P.d_qq + gq * Q.d_qq)
    return Jet2(val, d_p, d_q, d_pp, d_pq, d_qq)


def _newton_view(A, B, domain, fd_step=1e-3):
    """B in the parameters of A by pointwise Newton inversion of B's Gauss map;
    second-order jets of the parameter map by finite-difference promotion."""

    def solve(p, q):
        p, q = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float))
        N = gauss_map(A, p, q)
        out = np.empty((2,) + p.shape)
        for idx in np.ndindex(p.shape):
            out[(slice(None),) + idx] = newton_inverse_gauss(B, N[(slice(None),) + idx])
        return out

    def chart(P, Q):
        v = solve(P.value, Q.value)
        grad, hess = fd_promote(solve, P.value, Q.value, fd_step)
        return (_jet_of_values(v[0], grad[:, 0], hess[:, :, 0], P, Q),
                _jet_of_values(v[1], grad[:, 1], hess[:, :, 1], P, Q))

    return compose(B, chart, domain, id=f"{B.id}@{A.id}~newton")


@dataclass(frozen=True)
class ParallelPair:
    A: SurfacePatch
    B: SurfacePatch
    domain: tuple
    method: str
    sources: tuple = ()
    notes: str = ""

    def normal_mismatch(self, p, q):
        return np.linalg.norm(gauss_map(self.A, p, q) - gauss_map(self.B, p, q), axis=0)

    @property
    def center(self):
        (p0, p1), (q0, q1) = self.domain
        return 0.5 * (p0 + p1), 0.5 * (q0 + q1)


def _sample_grid(domain, n=9, inset=0.02):
    (p0, p1), (q0, q1) = domain
    dp, dq = (p1 - p0) * inset, (q1 - q0) * inset
    ps = np.linspace(p0 + dp, p1 - dp, n)
    qs = np.linspace(q0 + dq, q1 - dq, n)
    return np.meshgrid(ps, qs, indexing="ij")


def make_parallel(A: SurfacePatch, B: SurfacePatch, method="auto", domain=None,
                  chart_map: Optional[Callable] = None, tol=1e-9) -> ParallelPair:
    """Relate A and B by equal normals on a shared chart.

    ``method``: ``"gauss"`` (spherical coordinates on the Gauss sphere, both
    inverse Gauss maps closed form), ``"closed-form"`` (A's parameters, B
    pulled back through its inverse Gauss map), ``"map"`` (A's parameters and
    an explicit jet map ``chart_map(P, Q) -> (p_B, q_B)``), ``"newton"`` or
    ``"identity"`` (B is A).  ``"auto"`` picks identity, closed-form or newton.
    """
    if method == "auto":
        if B is A:
            method = "identity"
        elif A.gauss is not None and B.inverse_gauss is not None:
            method = "closed-form"
        else:
            method = "newton"
    if method == "gauss":
        if domain is None:
            raise NoOverlap("the Gauss-sphere chart needs an explicit (phi, theta) domain")
        try:
            Av = _gauss_view(A, domain, "gauss")
            Bv = _gauss_view(B, domain, "gauss")
        except OutsideGaussImage as exc:
            raise NoOverlap(str(exc)) from exc
    else:
        domain = domain or A.domain
        Av = A if domain == A.domain else SurfacePatch(
            A.id, domain, A.immersion, A.inverse_gauss, A.orientation, A.eps_reg, A.gauss,
            dict(A.params), A.notes)
        if method == "identity":
            Bv = Av
        elif method == "closed-form":
            Bv = _pullback_view(Av, B, domain)
        elif method == "map":
            if chart_map is None:
                raise ValueError("method 'map' needs chart_map")
            Bv = compose(B, chart_map, domain, id=f"{B.id}@{A.id}")
        elif method == "newton":
            Bv = _newton_view(Av, B, domain)
        else:
            raise ValueError(f"unknown method {method!r}")
    pp = ParallelPair(Av, Bv, tuple(domain), method, (A.id, B.id))
    PP, QQ = _sample_grid(domain, 5 if method == "newton" else 9)
    try:
        mis = pp.normal_mismatch(PP, QQ)
    except Exception as exc:
        raise NoOverlap(f"shared chart is not covered by both Gauss images: {exc}") from exc
    if not np.all(mis < tol):
        raise NoOverlap(f"normals disagree by up to {np.nanmax(mis):.3e} on the chart")
    return pp


# -- mapping tensor -----------------------------------------------------------

@dataclass
class TensorData:
    """Pointwise first- and second-order data of a parallel pair."""
    s: np.ndarray          # s[i, j] with r_B,j = s^i_j r_A,i
    GA: np.ndarray
    IIA: np.ndarray
    IIB: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    disc: np.ndarray
    ls_residual: np.ndarray
    n: np.ndarray
    rA: object
    rB: object


def _mat(a, b):
    return np.array([[_dot(a[i], b[j]) for j in range(2)] for i in range(2)])


def tensor_data(pp: ParallelPair, p, q) -> TensorData:
    rA = surface_jet(pp.A, p, q)
    rB = surface_jet(pp.B, p, q)
    n = normal_from_jet(rA, pp.A.orientation, pp.A.eps_reg).value
    eA = np.stack([rA.d_p, rA.d_q])
    eB = np.stack([rB.d_p, rB.d_q])
    GA = _mat(eA, eA)
    M = _mat(eA, eB)
    Gi = np.linalg.inv(np.moveaxis(GA, (0, 1), (-2, -1)))
    s = np.moveaxis(Gi @ np.moveaxis(M, (0, 1), (-2, -1)), (-2, -1), (0, 1))
    fit = np.stack([sum(s[i, j] * eA[i] for i in range(2)) for j in range(2)])
    ls = np.max(np.linalg.norm(fit - eB, axis=1), axis=0)
    tr = s[0, 0] + s[1, 1]
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    disc = tr * tr - 4.0 * det
    # real pair: xi is the root of larger modulus; otherwise a conjugate pair
    # (unimodular when det s = 1) with xi in the upper half plane
    root = np.sqrt(disc.astype(complex))
    sg = np.where(disc >= 0, np.where(tr >= 0, 1.0, -1.0), 1.0)
    xi = 0.5 * (tr + sg * root)
    eta = tr - xi
    if np.all(disc >= 0):
        xi, eta = xi.real, eta.real

    def second(r):
        return np.array([[_dot(r.d_pp, n), _dot(r.d_pq, n)], [_dot(r.d_pq, n), _dot(r.d_qq, n)]])

    return TensorData(s, GA, second(rA), second(rB), xi, eta, disc, ls, n, rA, rB)


def _eigvec(s, lam):
    """Unit eigenvector of 2x2 s for eigenvalue lam, per point (shape (2, ...))."""
    v1 = np.stack([s[0, 1], lam - s[0, 0]])
    v2 = np.stack([lam - s[1, 1], s[1, 0]])
    pick = np.linalg.norm(v1, axis=0) >= np.linalg.norm(v2, axis=0)
    v = np.where(pick, v1, v2)
    return v / np.linalg.norm(v, axis=0)


@dataclass
class MappingTensorSample:
    s: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    det_residual: np.ndarray
    xi_eta_residual: np.ndarray
    ls_residual: np.ndarray
    symmetry_residual: np.ndarray     # II_A s must be symmetric
    margulies_residual: Optional[np.ndarray] = None
    codazzi_residual: Optional[np.ndarray] = None

    def report(self):
        out = {k: float(np.max(np.abs(getattr(self, k)))) for k in
               ("det_residual", "xi_eta_residual", "ls_residual", "symmetry_residual")}
        for k in ("margulies_residual", "codazzi_residual"):
            v = getattr(self, k)
            if v is not None:
                out[k] = float(np.max(np.abs(v)))
        return out


def _christoffel(r):
    """Gamma[k, i, j] of the metric of the jet r (chart coordinates)."""
    e = np.stack([r.d_p, r.d_q])
    rr = np.array([[r.d_pp, r.d_pq], [r.d_pq, r.d_qq]])
    G = _mat(e, e)
    Gi = np.moveaxis(np.linalg.inv(np.moveaxis(G, (0, 1), (-2, -1))), (-2, -1), (0, 1))
    low = np.array([[[_dot(rr[i, j], e[l]) for l in range(2)] for j in range(2)]
                    for i in range(2)])  # low[i, j, l] = r_ij . r_l
    return np.einsum("kl...,ijl...->kij...", Gi, low)


def asymptotic_directions(II):
    """The two null directions of a 2x2 indefinite form, chart components,
    unit Euclidean length; shape (2, 2, ...) indexed [direction, component]."""
    a, b, c = II[0, 0], II[0, 1], II[1, 1]
    rt = np.sqrt(np.maximum(b * b - a * c, 0.0))
    out = []
    for sgn in (1.0, -1.0):
        use_q = np.abs(c) >= np.abs(a)
        d = np.where(use_q, np.stack([c, -b + sgn * rt]), np.stack([-b + sgn * rt, a]))
        out.append(d / np.linalg.norm(d, axis=0))
    return np.stack(out)


def _check_generic(td, eps_gen=1e-8, eps_eig=1e-10):
    scale = np.maximum(1.0, np.abs(td.s).max(axis=(0, 1)))
    detII = td.IIA[0, 0] * td.IIA[1, 1] - td.IIA[0, 1] ** 2
    detG = td.GA[0, 0] * td.GA[1, 1] - td.GA[0, 1] ** 2
    if np.any(detII / detG >= -eps_gen):
        raise GenericityViolation("surface A is not hyperbolic here (no asymptotic directions)")
    if np.any(np.abs(td.disc) <= eps_eig * scale**2):
        raise DegenerateEigen("mapping tensor eigenvalues coincide (xi = 1/xi)")
    # no asymptotic direction of A may go to an asymptotic direction of B
    ref = np.sqrt(np.sum(td.IIB**2, axis=(0, 1)))
    for d in asymptotic_directions(td.IIA):
        iib = np.einsum("i...,ij...,j...->...", d, td.IIB, d)
        if np.any(np.abs(iib) <= eps_gen * np.maximum(ref, 1e-300)):
            raise GenericityViolation("an asymptotic direction of A is asymptotic on B")


def mapping_tensor(pp: ParallelPair, p, q, residuals=True, fd_step=1e-3, check=True):
    """Mapping tensor with determinant, eigenvalue and Margulies residuals.

    The compatibility and Codazzi residuals are evaluated in the chart
    coordinates by finite-difference promotion (both are tensor identities).
    """
    td = tensor_data(pp, p, q)
    if check:
        _check_generic(td)
    det = td.s[0, 0] * td.s[1, 1] - td.s[0, 1] * td.s[1, 0]
    M = np.einsum("ik...,kj...->ij...", td.IIA, td.s)
    sym = np.abs(M[0, 1] - M[1, 0]) / np.maximum(1.0, np.abs(M).max(axis=(0, 1)))
    sample = MappingTensorSample(td.s, td.xi, td.eta, det - 1.0,
                                 np.abs(td.xi * td.eta - 1.0), td.ls_residual, sym)
    if residuals:
        sample.margulies_residual = _margulies(pp, p, q, td, fd_step)
        sample.codazzi_residual = _codazzi(pp, p, q, fd_step)
    return sample


def _margulies(pp, p, q, td, h):
    ds = fd_gradient(lambda a, b: tensor_data(pp, a, b).s, p, q, h)  # ds[l, k, i] = d_l s^k_i
    G = _christoffel(td.rA)
    s = td.s
    out = []
    for k in range(2):
        # s^k_{1;2} - s^k_{2;1}
        r = ds[1, k, 0] - ds[0, k, 1]
        r = r + sum(G[k, 1, l] * s[l, 0] - G[k, 0, l] * s[l, 1] for l in range(2))
        out.append(r)
    return np.max(np.abs(np.stack(out)), axis=0)


def _codazzi(pp, p, q, h):
    def ii(a, b):
        r = surface_jet(pp.A, a, b)
        n = normal_from_jet(r, pp.A.orientation, pp.A.eps_reg).value
        return np.array([[_dot(r.d_pp, n), _dot(r.d_pq, n)], [_dot(r.d_pq, n), _dot(r.d_qq, n)]])

    dII = fd_gradient(ii, p, q, h)   # dII[k, i, j]
    II = ii(p, q)
    G = _christoffel(surface_jet(pp.A, p, q))

    def cov(i, j, k):
        return (dII[k, i, j] - sum(G[l, k, i] * II[l, j] + G[l, k, j] * II[i, l]
                                   for l in range(2)))

    r1 = cov(0, 0, 1) - cov(0, 1, 0)
    r2 = cov(1, 1, 0) - cov(1, 0, 1)
    return np.maximum(np.abs(r1), np.abs(r2))


# -- middle surface -----------------------------------------------------------

def middle_surface(pp: ParallelPair) -> SurfacePatch:
    A, B = pp.A, pp.B

    def immersion(P, Q):
        return (A.immersion(P, Q) + B.immersion(P, Q)) * 0.5

    mid = SurfacePatch(f"middle({pp.sources[0] if pp.sources else A.id},"
                       f"{pp.sources[1] if pp.sources else B.id})",
                       pp.domain, immersion, None, 1, A.eps_reg, None, {}, "middle surface")
    pc, qc = pp.center
    same = float(np.dot(gauss_map(mid, pc, qc), gauss_map(A, pc, qc))) > 0
    return mid.with_orientation(1 if same else -1)


def _gauss_curvature(patch, p, q):
    r = surface_jet(patch, p, q)
    n = normal_from_jet(r, patch.orientation, patch.eps_reg).value
    E, F, G = _dot(r.d_p, r.d_p), _dot(r.d_p, r.d_q), _dot(r.d_q, r.d_q)
    L, M, N = _dot(r.d_pp, n), _dot(r.d_pq, n), _dot(r.d_qq, n)
    return (L * N - M * M) / (E * G - F * F)


def gauss_curvature(patch, p, q):
    return _gauss_curvature(patch, p, q)


def middle_curvature(pp: ParallelPair, p, q, kappa=1.0, eps_cusp=EPS_CUSP, mid=None):
    """Jet curvature of the middle surface next to the value predicted by xi.

    Returns ``(K_jet, K_formula, mask)``; masked points are cuspidal
    (|1 + xi| <= eps_cusp) and carry NaN.
    """
    td = tensor_data(pp, p, q)
    xi = td.xi
    mask = np.abs(1.0 + xi) <= eps_cusp
    mid = mid or middle_surface(pp)
    with np.errstate(all="ignore"):
        # real also for a unimodular conjugate pair xi = exp(i a): -1/cos^2(a/2)
        formula = np.real(-4.0 * kappa**2 * xi / (1.0 + xi) ** 2)
        try:
            Kj = _gauss_curvature(mid, p, q)
        except Exception:
            Kj = np.full(np.shape(xi), np.nan)
    return np.where(mask, np.nan, Kj), np.where(mask, np.nan, formula), mask


# -- concordant nets ----------------------------------------------------------
#
# The two nets consist of images of asymptotic directions: X1 asymptotic on A,
# X2 asymptotic on B.  The families on each surface are told apart by the sign
# of their geodesic torsion (+kappa or -kappa for an asymptotic line), which is
# continuous; the chart vector is oriented along a reference direction taken
# at the chart centre.  Of the four combinations two are conjugate (sigma = 0,
# the eps_1 = eps_2 case of the field formula) and two are concordant.

def _torsion_signs(dirs, r, nj):
    e = np.stack([r.d_p, r.d_q])
    dn = np.stack([nj.d_p, nj.d_q])
    out = []
    for d in dirs:
        t = d[0] * e[0] + d[1] * e[1]
        w = d[0] * dn[0] + d[1] * dn[1]
        out.append(np.sign(_dot(nj.value, np.cross(t, w, axis=0))))
    return np.stack(out)


def _pick_family(dirs, signs, want, ref):
    d = np.where(signs[0] == want, dirs[0], dirs[1])
    ref_b = np.reshape(ref, (2,) + (1,) * (d.ndim - 1))
    return d * np.where(np.sum(d * ref_b, axis=0) < 0, -1.0, 1.0)


def _families(pp, p, q):
    td = tensor_data(pp, p, q)
    njA = normal_from_jet(td.rA, pp.A.orientation, pp.A.eps_reg)
    dA = asymptotic_directions(td.IIA)
    dB = asymptotic_directions(td.IIB)
    return td, dA, _torsion_signs(dA, td.rA, njA), dB, _torsion_signs(dB, td.rB, njA)


def _schief(mid, p, q, X1, X2):
    r = surface_jet(mid, p, q, check_domain=False)
    n = normal_from_jet(r, mid.orientation, mid.eps_reg).value
    e = np.stack([r.d_p, r.d_q])
    G = _mat(e, e)
    II = np.array([[_dot(r.d_pp, n), _dot(r.d_pq, n)], [_dot(r.d_pq, n), _dot(r.d_qq, n)]])

    def form(F, a, b):
        return np.einsum("i...,ij...,j...->...", a, F, b)

    detI = form(G, X1, X1) * form(G, X2, X2) - form(G, X1, X2) ** 2
    return form(II, X1, X2) / np.sqrt(detI)


@dataclass
class NetOnSurface:
    base: SurfacePatch
    pair: DirectionPair
    eps: tuple
    kappa: float
    label: str
    pp: Optional[ParallelPair] = None
    fields: Optional[Callable] = None    # (p, q) -> array (2, 2, ...)
    notes: dict = field(default_factory=dict)

    def unit_fields(self, p, q):
        """Chart components of X^_1, X^_2 (unit speed on the base surface)."""
        if self.pp is not None:
            X, td = self.fields(p, q, with_data=True)
            e = 0.5 * np.stack([td.rA.d_p + td.rB.d_p, td.rA.d_q + td.rB.d_q])
        else:
            X = self.fields(p, q)
            r = surface_jet(self.base, p, q, check_domain=False)
            e = np.stack([r.d_p, r.d_q])
        G = _mat(e, e)
        nrm = np.sqrt(np.einsum("ai...,ij...,aj...->a...", X, G, X))
        return X / nrm[:, None]


def concordant_nets(pp: ParallelPair, kappa=1.0, eps=None, fd_step=1e-4, eps_cusp=EPS_CUSP,
                    center=None):
    """The two concordant Chebyshev nets on the middle surface.

    Net ``A`` has eps = (+1, -1), net ``B`` eps = (-1, +1): eps_1 is the torsion
    sign of the family of A used as X1, and eps_2 = -eps_1 marks the concordant
    partner on B (eps_1 = eps_2 would be the conjugate combination).  Passing
    ``eps`` returns that single net.
    """
    if eps is not None:
        eps = tuple(int(e) for e in eps)
        if eps[0] == eps[1]:
            raise DegenerateSigns("eps_1 = eps_2 gives sigma = 0 (no concordant net)")
        if set(eps) != {1, -1}:
            raise DegenerateSigns("eps must be (+1, -1) or (-1, +1)")
        wanted = [eps]
    else:
        wanted = [(1, -1), (-1, 1)]
    mid = middle_surface(pp)
    pc, qc = center or pp.center
    td, dA, sA, dB, sB = _families(pp, np.array(pc), np.array(qc))
    _check_generic(td)
    if np.any(sA[0] == sA[1]) or np.any(sB[0] == sB[1]):
        raise GenericityViolation("asymptotic families not separated by torsion sign")
    refA = {int(sA[i]): dA[i] for i in range(2)}
    refB = {int(sB[i]): dB[i] for i in range(2)}
    # which B family completes the A family with torsion sign +1 to a concordant net
    sig = {tb: abs(float(_schief(mid, pc, qc, refA[1], refB[tb]))) for tb in (1, -1)}
    partner_of_plus = 1 if sig[1] > sig[-1] else -1

    nets = []
    for e in wanted:
        ta = e[0]
        tb = partner_of_plus * ta
        ra, rb = refA[ta], refB[tb]

        def fields(p, q, ta=ta, tb=tb, ra=ra, rb=rb, with_data=False):
            t, dA_, sA_, dB_, sB_ = _families(pp, p, q)
            if np.any(np.abs(1.0 + t.xi) <= eps_cusp):
                raise CuspidalPoint("|1 + xi| below the cusp threshold")
            X = np.stack([_pick_family(dA_, sA_, ta, ra), _pick_family(dB_, sB_, tb, rb)])
            return (X, t) if with_data else X

        pair = DirectionPair.from_function(fields, step=fd_step, label=f"eps={e}")
        label = "A" if e[0] > 0 else "B"
        nets.append(NetOnSurface(mid, pair, e, float(kappa), label, pp, fields,
                                 {"torsion_signs": (ta, tb), "center": (pc, qc)}))
    return nets[0] if eps is not None else tuple(nets)


def eigen_field_directions(pp: ParallelPair, p, q, eps, kappa=1.0):
    """The field formula X_i = e_p + eps_i xi^(i-1) II_11 / (kappa sqrt(Delta)) e_q
    in the eigenbasis of s (real eigenvalues only), as chart vectors."""
    td = tensor_data(pp, p, q)
    if np.iscomplexobj(td.xi):
        raise GenericityViolation("field formula needs real eigenvalues of s")
    ep, eq = _eigvec(td.s, td.xi), _eigvec(td.s, td.eta)
    II11 = np.einsum("i...,ij...,j...->...", ep, td.IIA, ep)
    detE = ep[0] * eq[1] - ep[1] * eq[0]
    Delta = (td.GA[0, 0] * td.GA[1, 1] - td.GA[0, 1] ** 2) * detE**2
    base = II11 / (kappa * np.sqrt(Delta))
    return np.stack([ep + eps[0] * base * eq, ep + eps[1] * td.xi * base * eq])


def check_net(net: NetOnSurface, points, tol=1e-6):
    """Chebyshev and concordance residuals of a constructed net.

    The concordance sign is chosen once for the whole sample: the smaller of
    max|K + kappa sigma| and max|K - kappa sigma|.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rep_p = classify_net(net.base, net.pair, pts, ConcordanceSpec(1.0, net.kappa, 0.0),
                         tol_chebyshev=tol, tol_concordant=tol)
    rep_m = classify_net(net.base, net.pair, pts, ConcordanceSpec(1.0, -net.kappa, 0.0),
                         tol_chebyshev=tol, tol_concordant=tol)
    use_plus = rep_p["max"]["concordance"] <= rep_m["max"]["concordance"]
    rep = rep_p if use_plus else rep_m
    rep["sign"] = 1 if use_plus else -1
    rep["kappa_eff"] = net.kappa * rep["sign"]
    cheb = max(rep["max"][k] for k in ("iota", "pi"))
    rep["ok"] = bool(cheb < tol and rep["max"]["concordance"] < tol)
    return rep


def net_record(net: NetOnSurface, p, q):
    return invariant_record(net.base, p, q, net.pair)
