"""Closed-form surfaces used as inputs and oracles.

Every pseudospherical entry has curvature -1.  Orientation conventions:

* ``pseudosphere`` (isodiagonal u, v): the normal is
  ``sign(v) * [1/cosh v, tanh v cos u, tanh v sin u]`` (axis x; the other axes
  permute the components), i.e. it points away from the axis on either sheet.
* ``elliptic``: the downward cap of the coaxial elliptic-type surface of
  revolution, normal ``[sin k cn cos u, sin k cn sin u, -cos k dn]``.
* ``sphere``: outward.  ``plane``, ``graph``: upward (+z component).

The ``*-asym`` variants substitute u = x + y, v = x - y, giving asymptotic
Chebyshev parameters with unit-speed coordinate lines.
"""

from __future__ import annotations

import numpy as np

from . import jets as J
from . import special
from .errors import (BadParams, DerivativeSingular, DomainEmpty, DomainViolation,
                     NewtonDiverged, OutsideGaussImage)
from .jets import Jet2, Jet2Vec3
from .surfaces import SurfacePatch, gauss_map, unit_normal_jet

_PI = np.pi


def _val(x):
    return x.value if isinstance(x, Jet2) else np.asarray(x, dtype=float)


def _comps(N):
    if isinstance(N, Jet2Vec3):
        return N.x, N.y, N.z
    N = np.asarray(N, dtype=float)
    return N[0], N[1], N[2]


def _shift_into(u, lo, hi, period=2 * _PI):
    """Add the multiple of ``period`` placing ``u`` inside [lo, hi] when possible."""
    uv = _val(u)
    k = np.ceil((lo - uv) / period - 1e-12)
    return u + k * period


# -- elementary entries -------------------------------------------------------

def _plane(params):
    def immersion(P, Q):
        return Jet2Vec3(P, Q, 0.0 * P)

    def inv(N):
        raise OutsideGaussImage("the plane has a constant Gauss map; no inverse")

    L = float(params.get("size", 10.0))
    return SurfacePatch("plane", ((-L, L), (-L, L)), immersion, inv, 1, params=params,
                        notes="r = (p, q, 0); normal (0, 0, 1)")


def _sphere(params):
    def immersion(P, Q):
        cq = J.cos(Q)
        return Jet2Vec3(J.cos(P) * cq, J.sin(P) * cq, J.sin(Q))

    def inv(N):
        n1, n2, n3 = _comps(N)
        if np.any(np.abs(_val(n3)) >= 1.0):
            raise OutsideGaussImage("poles are outside the chart")
        return J.arctan2(n2, n1), J.arcsin(n3)

    return SurfacePatch("sphere", ((-3.1, 3.1), (-1.4, 1.4)), immersion, inv, 1,
                        gauss=immersion, params=params,
                        notes="r = (cos p cos q, sin p cos q, sin q); outward normal n = r")


_GRAPHS = {
    "sinprod": lambda p, q: J.sin(p) * J.cos(q),
    "bilinear": lambda p, q: p * q,
    "paraboloid": lambda p, q: 0.5 * (p * p + q * q),
    "monkey": lambda p, q: p * p * p - 3.0 * p * q * q,
    "gaussian": lambda p, q: J.exp(-0.5 * (p * p + q * q)),
}


def _graph(params):
    f = params.get("f", "sinprod")
    a = float(params.get("a", 1.0))
    if f not in _GRAPHS:
        raise BadParams(f"unknown graph function {f!r}; choose from {sorted(_GRAPHS)}")
    fn = _GRAPHS[f]

    def immersion(P, Q):
        return Jet2Vec3(P, Q, a * fn(P, Q))

    L = float(params.get("size", 2.0))
    return SurfacePatch(f"graph-{f}", ((-L, L), (-L, L)), immersion, None, 1, params=params,
                        notes="z = a f(p, q); upward normal")


def _translation(params):
    R = float(params.get("R", 1.0))
    h = float(params.get("h", 0.5))
    rho = float(params.get("rho", 1.0))
    if R <= 0 or rho <= 0:
        raise BadParams("R and rho must be positive")
    c = np.hypot(R, h)

    def immersion(X, Y):
        # unit-speed helix a(x) plus unit-speed circle b(y) in the xz-plane
        return Jet2Vec3(R * J.cos(X / c) + rho * J.sin(Y / rho),
                        R * J.sin(X / c),
                        h * X / c + rho * J.cos(Y / rho))

    xm = 0.9 * c * _PI / 2
    return SurfacePatch("translation", ((-xm, xm), (-1.0, 1.0)), immersion, None, 1,
                        params=params, notes="helix(x) + circle(y); r_xy = 0")


# -- pseudospheres ------------------------------------------------------------

_AXES = {"x": (0, 1, 2), "y": (1, 0, 2), "z": (2, 0, 1)}


def _perm(axis, a, b, c):
    """Place (axial, radial-cos, radial-sin) components for the given axis."""
    out = [None, None, None]
    ia, ib, ic = _AXES[axis]
    out[ia], out[ib], out[ic] = a, b, c
    return out


def _unperm(axis, N):
    ia, ib, ic = _AXES[axis]
    comps = _comps(N)
    return comps[ia], comps[ib], comps[ic]


def _pseudo_uv(U, V, axis):
    ch = J.cosh(V)
    return Jet2Vec3(*_perm(axis, V - J.tanh(V), J.cos(U) / ch, J.sin(U) / ch))


def _pseudo_normal_uv(U, V, axis):
    s = np.sign(_val(V))
    th = J.tanh(V)
    return Jet2Vec3(*_perm(axis, s / J.cosh(V), s * th * J.cos(U), s * th * J.sin(U)))


def _pseudo_inverse_uv(N, axis, sheet):
    a, b, c = _unperm(axis, N)
    av = _val(a)
    if np.any(np.abs(av) >= 1.0 - 1e-15) or np.any(np.abs(av) <= 1e-300):
        raise OutsideGaussImage("normal on the rim or at infinity of the pseudosphere")
    if sheet and np.any(np.sign(av) != sheet):
        raise OutsideGaussImage("normal belongs to the other sheet")
    s = np.sign(av)
    U = J.arctan2(c, b)
    V = s * J.arcosh(1.0 / J.absolute(a))
    return U, V


def _check_axis(params):
    axis = params.get("axis", "x")
    if axis not in _AXES:
        raise BadParams("axis must be one of x, y, z")
    sheet = int(params.get("sheet", 1))
    if sheet not in (1, -1):
        raise BadParams("sheet must be +1 or -1")
    return axis, sheet


def _auto_orient(patch, closed_form):
    pc, qc = patch.center
    n = gauss_map(patch, pc, qc)
    ref = closed_form(*Jet2.seeds(pc, qc)).value
    return patch.with_orientation(1 if float(np.dot(n, ref)) > 0 else -1)


def _pseudosphere(params):
    axis, sheet = _check_axis(params)
    vmax = float(params.get("vmax", 4.0))
    vmin = float(params.get("vmin", 0.02))
    if not 0 <= vmin < vmax:
        raise DomainEmpty("need 0 <= vmin < vmax")
    vdom = (vmin, vmax) if sheet > 0 else (-vmax, -vmin)
    udom = (-_PI, _PI)

    def immersion(U, V):
        return _pseudo_uv(U, V, axis)

    def normal(U, V):
        return _pseudo_normal_uv(U, V, axis)

    def inv(N):
        U, V = _pseudo_inverse_uv(N, axis, sheet)
        return _shift_into(U, *udom), V

    patch = SurfacePatch(f"pseudosphere-{axis}", (udom, vdom), immersion, inv, 1,
                         gauss=normal, params=dict(params, axis=axis, sheet=sheet),
                         notes="isodiagonal (u, v); normal sign(v)[...] pointing away from the axis")
    return _auto_orient(patch, normal)


def _pseudosphere_asym(params):
    axis, sheet = _check_axis(params)
    dom = params.get("domain")
    if dom is None:
        dom = ((0.3, 1.8), (-0.7, 0.2)) if sheet > 0 else ((-0.7, 0.2), (0.3, 1.8))
    dom = tuple(tuple(float(t) for t in d) for d in dom)
    (x0, x1), (y0, y1) = dom
    vlo, vhi = x0 - y1, x1 - y0
    if (sheet > 0 and vlo <= 0) or (sheet < 0 and vhi >= 0):
        raise DomainEmpty("the box must lie strictly on one side of the rim x = y")

    def immersion(X, Y):
        return _pseudo_uv(X + Y, X - Y, axis)

    def normal(X, Y):
        return _pseudo_normal_uv(X + Y, X - Y, axis)

    def inv(N):
        U, V = _pseudo_inverse_uv(N, axis, sheet)
        U = _shift_into(U, x0 + y0, x1 + y1)
        return 0.5 * (U + V), 0.5 * (U - V)

    patch = SurfacePatch(f"pseudosphere-asym-{axis}", dom, immersion, inv, 1, gauss=normal,
                         params=dict(params, axis=axis, sheet=sheet),
                         notes="asymptotic Chebyshev (x, y), u = x + y, v = x - y")
    return _auto_orient(patch, normal)


def _sphere_chebyshev(params):
    """Spherical image of the asymptotic net of the x-axis pseudosphere.

    A Chebyshev net on the unit sphere (K = 1); used as a non-concordant control.
    """
    dom = params.get("domain") or ((0.3, 1.8), (-0.7, 0.2))
    dom = tuple(tuple(float(t) for t in d) for d in dom)

    def immersion(X, Y):
        V, U = X - Y, X + Y
        th = J.tanh(V)
        return Jet2Vec3(1.0 / J.cosh(V), th * J.cos(U), th * J.sin(U))

    def inv(N):
        n1, n2, n3 = _comps(N)
        if np.any(_val(n1) <= 0) or np.any(_val(n1) >= 1):
            raise OutsideGaussImage("outside the hemisphere covered by the chart")
        V = J.arcosh(1.0 / n1)
        (x0, x1), (y0, y1) = dom
        U = _shift_into(J.arctan2(n3, n2), x0 + y0, x1 + y1)
        return 0.5 * (U + V), 0.5 * (U - V)

    patch = SurfacePatch("sphere-chebyshev", dom, immersion, inv, 1, gauss=immersion,
                         params=params, notes="unit sphere, Chebyshev (x, y); outward normal")
    return _auto_orient(patch, immersion)


# -- elliptic-type surface of revolution ---------------------------------------

def _check_k(params):
    k = float(params.get("k", 1.0))
    if not 0.0 < k < _PI / 2:
        raise BadParams("k must satisfy 0 < k < pi/2")
    return k


def elliptic_v_range(k):
    """Isodiagonal v-range [0, K(sin^2 k)] covering the downward cap."""
    return 0.0, special.ellip_K(np.sin(k) ** 2)


def _elliptic_uv(U, V, k, scaled=True):
    s, c = np.sin(k), np.cos(k)
    m = -np.tan(k) ** 2
    _, sn, _, _ = special.jacobi_jet(V * c, m)
    E = special.epsilon_jet(V * c, m)
    z = V - E * c
    rad = sn * s if scaled else sn
    if not scaled:
        z = z / s
    return Jet2Vec3(rad * J.cos(U), rad * J.sin(U), z)


def _elliptic_normal_uv(U, V, k):
    s, c = np.sin(k), np.cos(k)
    m = -np.tan(k) ** 2
    _, _, cn, dn = special.jacobi_jet(V * c, m)
    return Jet2Vec3(cn * s * J.cos(U), cn * s * J.sin(U), dn * (-c))


def _elliptic_inverse_uv(N, k):
    s, c = np.sin(k), np.cos(k)
    n1, n2, n3 = _comps(N)
    rho = J.sqrt(n1 * n1 + n2 * n2)
    rv = _val(rho)
    if np.any(_val(n3) >= 0) or np.any(rv > s * (1 + 1e-14)) or np.any(rv <= 1e-14):
        raise OutsideGaussImage("normal outside the open cap |N_radial| < sin k, N_3 < 0")
    y = rho / s
    if isinstance(y, Jet2):
        V = special.arccn_jet(y, -np.tan(k) ** 2) / c
    else:
        V = special.arccn(y, -np.tan(k) ** 2) / c
    return J.arctan2(n2, n1), V


def _elliptic(params, scaled=True):
    k = _check_k(params)
    _, vK = elliptic_v_range(k)
    margin = float(params.get("margin", 1e-3))
    dom = ((-_PI, _PI), (margin, vK - margin))

    def immersion(U, V):
        return _elliptic_uv(U, V, k, scaled)

    def normal(U, V):
        return _elliptic_normal_uv(U, V, k)

    def inv(N):
        U, V = _elliptic_inverse_uv(N, k)
        return _shift_into(U, -_PI, _PI), V

    name = "elliptic" if scaled else "elliptic-literal"
    note = ("elliptic-type surface of revolution, K = -1" if scaled else
            "unscaled (radius sn, height divided by sin k); its curvature is -sin^2 k")
    patch = SurfacePatch(name, dom, immersion, inv, 1, gauss=normal,
                         params=dict(params, k=k), notes=note)
    return _auto_orient(patch, normal)


def _elliptic_asym(params):
    """(U, V) = ((x + y)/sin k, (x - y)/sin k): unit-speed asymptotic lines on
    the K = -1 surface ((U, V) themselves are unit speed on the unscaled one)."""
    k = _check_k(params)
    s = np.sin(k)
    _, vK = elliptic_v_range(k)
    dom = params.get("domain")
    if dom is None:
        dom = ((0.25 * s * vK, 0.75 * s * vK), (-0.2 * s * vK, 0.2 * s * vK))
    dom = tuple(tuple(float(t) for t in d) for d in dom)
    (x0, x1), (y0, y1) = dom
    if x0 - y1 <= 0 or x1 - y0 >= s * vK:
        raise DomainEmpty("(x - y)/sin k must stay inside (0, K(sin^2 k))")

    def immersion(X, Y):
        return _elliptic_uv((X + Y) / s, (X - Y) / s, k)

    def normal(X, Y):
        return _elliptic_normal_uv((X + Y) / s, (X - Y) / s, k)

    def inv(N):
        U, V = _elliptic_inverse_uv(N, k)
        U = _shift_into(U, (x0 + y0) / s, (x1 + y1) / s)
        return 0.5 * s * (U + V), 0.5 * s * (U - V)

    patch = SurfacePatch("elliptic-asym", dom, immersion, inv, 1, gauss=normal,
                         params=dict(params, k=k), notes="asymptotic Chebyshev (x, y)")
    return _auto_orient(patch, normal)


# -- registry -----------------------------------------------------------------

_CATALOG = {
    "plane": (_plane, {"size": 10.0}, "the plane z = 0"),
    "sphere": (_sphere, {}, "unit sphere in longitude/latitude"),
    "graph": (_graph, {"f": "sinprod", "a": 1.0, "size": 2.0},
              f"graph z = a f(p, q), f in {sorted(_GRAPHS)}"),
    "translation": (_translation, {"R": 1.0, "h": 0.5, "rho": 1.0},
                    "translation surface helix + circle"),
    "pseudosphere": (_pseudosphere, {"axis": "x", "sheet": 1, "vmin": 0.02, "vmax": 4.0},
                     "pseudosphere, isodiagonal parameters"),
    "pseudosphere-asym": (_pseudosphere_asym, {"axis": "x", "sheet": 1, "domain": None},
                          "pseudosphere, asymptotic Chebyshev parameters"),
    "sphere-chebyshev": (_sphere_chebyshev, {"domain": None},
                         "unit sphere with a Chebyshev parameterisation"),
    "elliptic": (lambda p: _elliptic(p, True), {"k": 1.0, "margin": 1e-3},
                 "elliptic-type pseudospherical surface of revolution (z-axis)"),
    "elliptic-asym": (_elliptic_asym, {"k": 1.0, "domain": None},
                      "elliptic-type surface, asymptotic Chebyshev parameters"),
    "elliptic-literal": (lambda p: _elliptic(p, False), {"k": 1.0, "margin": 1e-3},
                         "unscaled elliptic-type surface of revolution (K = -sin^2 k)"),
}

_ALIASES = {
    "pseudosphere-x": ("pseudosphere", {"axis": "x"}),
    "pseudosphere-y": ("pseudosphere", {"axis": "y"}),
    "pseudosphere-z": ("pseudosphere", {"axis": "z"}),
    "pseudosphere-asym-x": ("pseudosphere-asym", {"axis": "x"}),
    "pseudosphere-asym-y": ("pseudosphere-asym", {"axis": "y"}),
    "pseudosphere-asym-z": ("pseudosphere-asym", {"axis": "z"}),
}

PSEUDOSPHERICAL = ("pseudosphere-x", "pseudosphere-y", "pseudosphere-z",
                   "pseudosphere-asym", "elliptic", "elliptic-asym")


def catalog_listing():
    """Names, parameter schemas (defaults) and descriptions."""
    out = [{"name": n, "params": dict(d), "description": desc}
           for n, (_, d, desc) in _CATALOG.items()]
    out += [{"name": a, "params": dict(_CATALOG[b][1], **extra), "description": _CATALOG[b][2]}
            for a, (b, extra) in _ALIASES.items()]
    return out


def make_surface(name, params=None) -> SurfacePatch:
    params = dict(params or {})
    if name in _ALIASES:
        base, extra = _ALIASES[name]
        params = dict(extra, **params)
        name = base
    if name not in _CATALOG:
        raise BadParams(f"unknown surface {name!r}")
    builder, defaults, _ = _CATALOG[name]
    full = dict(defaults)
    full.update(params)
    return builder(full)


# -- inverse Gauss maps -------------------------------------------------------

def newton_inverse_gauss(patch: SurfacePatch, N, seed_grid=64, max_iter=50, tol=1e-12,
                         n_seeds=8):
    """Parameters (p, q) with n(p, q) = N by Gauss-Newton from a coarse-grid seed."""
    N = np.asarray(N, dtype=float)
    (p0, p1), (q0, q1) = patch.domain
    ps = np.linspace(p0, p1, seed_grid + 2)[1:-1]
    qs = np.linspace(q0, q1, seed_grid + 2)[1:-1]
    PP, QQ = np.meshgrid(ps, qs, indexing="ij")
    try:
        nn = gauss_map(patch, PP, QQ)
    except Exception as exc:  # a degenerate seed grid is a genuine failure here
        raise NewtonDiverged(f"seed grid evaluation failed: {exc}") from exc
    d = np.linalg.norm(nn - N[:, None, None], axis=0).ravel()
    trace = []
    # several seeds: the Gauss map need not be injective, and the nearest grid
    # node can sit in the basin of a spurious least-squares minimum
    for idx in np.argsort(d)[:n_seeds]:
        x = np.array([PP.ravel()[idx], QQ.ravel()[idx]])
        for _ in range(max_iter):
            nj = unit_normal_jet(patch, x[0], x[1])
            res = nj.value - N
            err = float(np.linalg.norm(res))
            trace.append((float(x[0]), float(x[1]), err))
            if err < tol:
                return float(x[0]), float(x[1])
            Jm = np.stack([nj.d_p, nj.d_q], axis=1)
            dx, *_ = np.linalg.lstsq(Jm, -res, rcond=None)
            if np.linalg.norm(dx) < 1e-15:
                break
            x = np.clip(x + dx, [p0, q0], [p1, q1])
    raise NewtonDiverged(f"no convergence from {n_seeds} seeds (best |n - N| = "
                         f"{min(t[2] for t in trace):.3e})", trace)


def inverse_gauss(name_or_patch, params=None, N=None, tol=1e-10):
    """Parameters of the point with unit normal N, closed form when available."""
    patch = (name_or_patch if isinstance(name_or_patch, SurfacePatch)
             else make_surface(name_or_patch, params))
    N = np.asarray(N, dtype=float)
    if abs(np.linalg.norm(N) - 1.0) > 1e-12:
        raise DomainViolation("N must be a unit vector")
    if patch.inverse_gauss is not None:
        p, q = patch.inverse_gauss(N)
        p, q = float(p), float(q)
        if not patch.contains(p, q):
            raise OutsideGaussImage(f"preimage ({p:.6g}, {q:.6g}) outside the patch domain")
    else:
        p, q = newton_inverse_gauss(patch, N)
    err = float(np.linalg.norm(gauss_map(patch, p, q) - N))
    if err > tol:
        raise OutsideGaussImage(f"inverse Gauss map misses N by {err:.3e}")
    return p, q


# -- the reparameterisation function of the elliptic example -------------------

def _psi_checks(v, k):
    if not 0.0 < k < _PI / 2:
        raise BadParams("k must satisfy 0 < k < pi/2")
    vmin = -np.arctanh(np.sin(k))
    v = np.asarray(v, dtype=float)
    if np.any(v < vmin - 1e-14) or np.any(v > 1e-14):
        raise DomainViolation(f"v must lie in [{vmin:.6g}, 0]")
    return v, vmin


def psi_k(v, k):
    """w = v/2 + arccn(-tanh v / sin k | -tan^2 k) / (2 cos k)."""
    v, _ = _psi_checks(v, k)
    y = np.clip(-np.tanh(v) / np.sin(k), 0.0, 1.0)
    out = 0.5 * v + special.arccn(y, -np.tan(k) ** 2) / (2.0 * np.cos(k))
    return out if np.ndim(out) else float(out)


def psi_k_prime(v, k):
    v, vmin = _psi_checks(v, k)
    s2 = 1.0 - np.cos(k) ** 2 * np.cosh(v) ** 2
    if np.any(s2 <= 0.0):
        raise DerivativeSingular("derivative of psi_k is infinite at v = -artanh(sin k)")
    s = np.sqrt(s2)
    out = (1.0 + s) / (2.0 * s)
    return out if np.ndim(out) else float(out)


def psi_k_range(k):
    vmin = -np.arctanh(np.sin(k))
    return 0.5 * vmin, special.ellip_K(-np.tan(k) ** 2) / (2.0 * np.cos(k))


def psi_k_inv(w, k, xtol=1e-15):
    """Inverse of psi_k on its image, by bracketed root finding (Brent)."""
    from scipy.optimize import brentq

    vmin = -np.arctanh(np.sin(k))
    lo, hi = psi_k_range(k)
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(w_arr < lo - 1e-14) or np.any(w_arr > hi + 1e-14):
        raise DomainViolation(f"w must lie in [{lo:.6g}, {hi:.6g}]")
    out = np.empty_like(w_arr)
    for i, wi in enumerate(w_arr):
        if wi <= lo:
            out[i] = vmin
        elif wi >= hi:
            out[i] = 0.0
        else:
            out[i] = brentq(lambda v: psi_k(v, k) - wi, vmin, 0.0, xtol=xtol, rtol=1e-15,
                            maxiter=200)
    return out.reshape(np.shape(w)) if np.ndim(w) else float(out[0])
