"""From a concordant Chebyshev grid to its pair of associated pseudospherical
surfaces, with residual reports for every claimed property."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClosednessViolation, CompatibilityViolation, MaskedRegion
from .grid import ChebyshevGrid

EPS_MASK = 1e-6


def _dot(a, b):
    return np.einsum("i...,i...->...", a, b)


# -- quadrature along grid lines ---------------------------------------------

def _edge_integrals(f, h, axis):
    """Integrals of samples ``f`` over each unit interval along ``axis``.

    Four-point rule h(-1, 13, 13, -1)/24 inside, one-sided (9, 19, -5, 1)/24
    on the two end intervals.  Needs at least four samples.
    """
    f = np.moveaxis(np.asarray(f, dtype=float), axis, -1)
    n = f.shape[-1]
    if n < 4:
        raise ValueError("need at least 4 samples per grid line")
    out = np.empty(f.shape[:-1] + (n - 1,))
    out[..., 1:-1] = (-f[..., :-3] + 13 * f[..., 1:-2] + 13 * f[..., 2:-1] - f[..., 3:]) / 24
    out[..., 0] = (9 * f[..., 0] + 19 * f[..., 1] - 5 * f[..., 2] + f[..., 3]) / 24
    out[..., -1] = (9 * f[..., -1] + 19 * f[..., -2] - 5 * f[..., -3] + f[..., -4]) / 24
    return np.moveaxis(h * out, -1, axis)


def _cumulate(edges, origin, axis):
    """Antiderivative along ``axis`` vanishing at index ``origin``."""
    e = np.moveaxis(edges, axis, -1)
    c = np.concatenate([np.zeros(e.shape[:-1] + (1,)), np.cumsum(e, axis=-1)], axis=-1)
    c = c - c[..., origin:origin + 1]
    return np.moveaxis(c, -1, axis)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


def line_integrals(grid: ChebyshevGrid, fx, fy, quadrature="auto"):
    """Integrals of fx over every x-edge and of fy over every y-edge.

    ``fx`` and ``fy`` map node data (anything with the :class:`NodeData`
    attributes) to arrays whose trailing axes are the point axes.  With a
    sampler on the grid the integrands are evaluated at Gauss-Legendre points
    along the actual net curves; otherwise the four-point sample rule is used.
    """
    h = grid.step
    if quadrature == "samples" or (quadrature == "auto" and grid.sampler is None):
        return _edge_integrals(fx(grid), h, -2), _edge_integrals(fy(grid), h, -1)
    sp = grid.sampler
    ts = 0.5 * h * (1.0 + _GL_X)
    ws = 0.5 * h * _GL_W
    out = []
    for fam, f, start in ((0, fx, grid.chart[:, :-1, :]), (1, fy, grid.chart[:, :, :-1])):
        pts = sp.along(fam, start.reshape(2, -1), ts)
        acc = 0.0
        for w, c in zip(ws, pts):
            acc = acc + w * f(sp.node_data(c))
        out.append(acc.reshape(acc.shape[:-1] + start.shape[1:]))
    return out[0], out[1]


def integrate_edges(ex, ey, origin):
    """Potential from edge integrals: x-line through the origin first, then
    y-lines.  Returns (potential, per-cell circulation)."""
    i0, j0 = origin
    row = _cumulate(ex[..., :, j0], i0, -1)            # (..., nx)
    pot = row[..., :, None] + _cumulate(ey, j0, -1)
    loop = ex[..., :, :-1] + ey[..., 1:, :] - ex[..., :, 1:] - ey[..., :-1, :]
    return pot, loop


def integrate_gradient(fx, fy, h, origin):
    """Same as :func:`integrate_edges` for node samples (trailing two axes
    are the grid axes)."""
    return integrate_edges(_edge_integrals(fx, h, -2), _edge_integrals(fy, h, -1), origin)


def _cell_area(grid):
    s = np.sin(grid.omega)
    return grid.step**2 * 0.25 * (s[:-1, :-1] + s[1:, :-1] + s[:-1, 1:] + s[1:, 1:])


# -- vector potential ---------------------------------------------------------

@dataclass
class VectorPotential:
    m: np.ndarray            # (3, nx, ny)
    P: np.ndarray
    Q: np.ndarray
    loop: np.ndarray         # |circulation| / cell area, (nx-1, ny-1)
    kappa: float

    @property
    def loop_max(self):
        return float(np.max(self.loop))


def _P(d, k):
    return (d.h12 - k) * d.r_x - d.h11 * d.r_y


def _Q(d, k):
    return d.h22 * d.r_x + (k - d.h12) * d.r_y


def potential_fields(grid: ChebyshevGrid, kappa=None):
    k = grid.kappa if kappa is None else kappa
    return _P(grid, k), _Q(grid, k)


def vector_potential(grid: ChebyshevGrid, kappa=None, tol=1e-6, check=True, quadrature="auto"):
    """Integrate dm = P dx + Q dy from the base node.

    The closedness report is the per-cell circulation divided by the cell
    area; it vanishes (up to quadrature error) exactly on concordant grids.
    """
    k = grid.kappa if kappa is None else float(kappa)
    P, Q = potential_fields(grid, k)
    ex, ey = line_integrals(grid, lambda d: _P(d, k), lambda d: _Q(d, k), quadrature)
    m, loop = integrate_edges(ex, ey, grid.origin)
    rel = np.linalg.norm(loop, axis=0) / _cell_area(grid)
    vp = VectorPotential(m, P, Q, rel, k)
    if check and vp.loop_max > tol:
        raise ClosednessViolation(f"loop residual {vp.loop_max:.3e} per unit area exceeds {tol:g}")
    return vp


# -- finite differences on the grid ------------------------------------------

def _shift(f, ax, k):
    """f[i + k] along ``ax`` on the index range 2 .. n-3."""
    n = f.shape[ax]
    sl = [slice(None)] * f.ndim
    sl[ax] = slice(2 + k, n - 2 + k)
    return f[tuple(sl)]


def _stencil(f, axis, coeffs, scale):
    f = np.asarray(f, dtype=float)
    ax = f.ndim + axis if axis < 0 else axis
    out = np.full(f.shape, np.nan)
    if f.shape[ax] < 5:
        return out
    acc = sum(c * _shift(f, ax, k) for k, c in coeffs.items() if c)
    sl = [slice(None)] * f.ndim
    sl[ax] = slice(2, f.shape[ax] - 2)
    out[tuple(sl)] = acc / scale
    return out


def _d(f, h, axis):
    """Fourth-order central first derivative; NaN within two nodes of the edge."""
    return _stencil(f, axis, {-2: 1, -1: -8, 1: 8, 2: -1}, 12 * h)


def _dd(f, h, axis):
    return _stencil(f, axis, {-2: -1, -1: 16, 0: -30, 1: 16, 2: -1}, 12 * h * h)


def _dxy(f, h):
    return _d(_d(f, h, -2), h, -1)


def _ring(a, width=2):
    """Blank the nodes within ``width`` of the grid edge."""
    a = np.array(a, dtype=float)
    a[..., :width, :] = np.nan
    a[..., -width:, :] = np.nan
    a[..., :, :width] = np.nan
    a[..., :, -width:] = np.nan
    return a


# -- associated surfaces ------------------------------------------------------

@dataclass
class AssociatedPair:
    m: np.ndarray
    r_plus: np.ndarray
    r_minus: np.ndarray
    kappa: float
    mask: np.ndarray         # True where the node is usable
    report: dict = field(default_factory=dict)

    def summary(self):
        return {k: float(np.nanmax(v)) for k, v in self.report.items()}


def _mask(grid, eps=EPS_MASK):
    return (np.abs(grid.h12) > eps) & (np.sin(grid.omega) > eps)


def mean_curvatures(d, kappa):
    """H+ and H- of the associated surfaces with respect to the shared normal.

    Obtained from I+- and II+- of the pair; tan(phi+) and tan(phi-) are the
    ratios h12 sin(w)/(h12 cos(w) - h11) and h12 sin(w)/(h22 - h12 cos(w)).
    """
    s, c = np.sin(d.omega), np.cos(d.omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (kappa * (d.h11 - d.h12 * c) / (d.h12 * s),
                kappa * (d.h22 - d.h12 * c) / (d.h12 * s))


def chebyshev_angles(d, kappa=None):
    """Angles in (0, pi) between the asymptotic coordinate lines of r+ and r-.

    cot(phi+) = -H+/|kappa| and cot(phi-) = -H-/|kappa| (the concordance
    K = -kappa sigma forces sign(h12) = sign(kappa)).
    """
    s, c = np.sin(d.omega), np.cos(d.omega)
    a = np.abs(d.h12) * s
    return np.arctan2(a, d.h12 * c - d.h11), np.arctan2(a, d.h12 * c - d.h22)


def _xi_plus_grad(d, k):
    c = np.cos(d.omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi_x = np.sqrt(d.h11**2 - 2 * d.h11 * d.h12 * c + d.h12**2) / k
        return xi_x, d.h22 / d.h12 * xi_x


def _eta_minus_grad(d, k):
    c = np.cos(d.omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta_y = np.sqrt(d.h12**2 - 2 * d.h12 * d.h22 * c + d.h22**2) / k
        return d.h11 / d.h12 * eta_y, eta_y


def _forms(r, n, h):
    rx, ry = _d(r, h, -2), _d(r, h, -1)
    I11, I12, I22 = _dot(rx, rx), _dot(rx, ry), _dot(ry, ry)
    II11, II12, II22 = _dot(_dd(r, h, -2), n), _dot(_dxy(r, h), n), _dot(_dd(r, h, -1), n)
    return rx, ry, (I11, I12, I22), (II11, II12, II22)


def associated_surfaces(grid: ChebyshevGrid, m, kappa=None, eps_mask=EPS_MASK):
    """r+- = r +- m/kappa, with every property of the pair checked by
    fourth-order central differences of the samples."""
    k = grid.kappa if kappa is None else float(kappa)
    m = m.m if isinstance(m, VectorPotential) else np.asarray(m)
    mask = _mask(grid, eps_mask)
    if not mask.any():
        raise MaskedRegion("every grid node is masked (sigma or sin(omega) ~ 0)")
    rp = grid.r + m / k
    rm = grid.r - m / k
    h = grid.step
    n = grid.n
    s, c = np.sin(grid.omega), np.cos(grid.omega)
    h11, h12, h22 = grid.h11, grid.h12, grid.h22
    H_expected = dict(zip((+1, -1), mean_curvatures(grid, k)))
    detI_expected = (h12 / k) ** 2 * s**2
    rep = {}
    for sign, r, tag in ((+1, rp, "plus"), (-1, rm, "minus")):
        rx, ry, (I11, I12, I22), (II11, II12, II22) = _forms(r, n, h)
        detI = I11 * I22 - I12**2
        with np.errstate(divide="ignore", invalid="ignore"):
            K = (II11 * II22 - II12**2) / detI
            H = 0.5 * (I11 * II22 - 2 * I12 * II12 + I22 * II11) / detI
        rep[f"gauss_{tag}"] = np.abs(K + k * k)
        rep[f"tangency_{tag}"] = np.maximum(np.abs(_dot(rx, n)), np.abs(_dot(ry, n)))
        rep[f"detI_{tag}"] = np.abs(detI - detI_expected)
        rep[f"mean_{tag}"] = np.abs(H - H_expected[sign])
        if sign > 0:
            rep["asymptotic_plus"] = np.abs(II11)
        else:
            rep["asymptotic_minus"] = np.abs(II22)
    for key in rep:
        rep[key] = np.where(mask, _ring(rep[key]), np.nan)
    return AssociatedPair(m, rp, rm, k, mask, rep)


# -- asymptotic Chebyshev parameters of the associated pair -------------------

@dataclass
class AsymptoticData:
    xi_plus: np.ndarray
    eta_minus: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    compatibility: dict
    report: dict

    def summary(self):
        out = {k: float(np.nanmax(v)) for k, v in self.report.items()}
        out.update({f"compat_{k}": float(np.nanmax(v)) for k, v in self.compatibility.items()})
        return out


def _wedge(a, b, n):
    """Oriented angle from a to b about n, in [0, 2 pi)."""
    return np.mod(np.arctan2(_dot(np.cross(a, b, axis=0), n), _dot(a, b)), 2 * np.pi)


def asymptotic_analysis(grid: ChebyshevGrid, pair: AssociatedPair, kappa=None,
                        compat_tol=1e-5, check=True):
    """Asymptotic Chebyshev parameters and angles of r+ and r-, with residuals
    of the sine-Gordon equation, the induced nets on the Gauss sphere and the
    Lelieuvre formulas."""
    k = pair.kappa if kappa is None else float(kappa)
    h = grid.step
    c = np.cos(grid.omega)
    h11, h12, h22 = grid.h11, grid.h12, grid.h22
    mask = pair.mask
    phi_p, phi_m = chebyshev_angles(grid)

    area = _cell_area(grid)
    ex, ey = line_integrals(grid, lambda d: _xi_plus_grad(d, k)[0],
                            lambda d: _xi_plus_grad(d, k)[1])
    xi, loop_xi = integrate_edges(ex, ey, grid.origin)
    ex, ey = line_integrals(grid, lambda d: _eta_minus_grad(d, k)[0],
                            lambda d: _eta_minus_grad(d, k)[1])
    eta, loop_eta = integrate_edges(ex, ey, grid.origin)
    compat = {"xi_plus": np.abs(loop_xi) / area, "eta_minus": np.abs(loop_eta) / area}
    worst = max(float(np.nanmax(v)) for v in compat.values())
    if check and worst > compat_tol:
        raise CompatibilityViolation(f"asymptotic parameter systems incompatible ({worst:.3e})")

    # coordinate fields as combinations (a, b) of D_x, D_y
    with np.errstate(divide="ignore", invalid="ignore"):
        a_xi_p = k / np.sqrt(h11**2 - 2 * h11 * h12 * c + h12**2)
        b_eta_p = -h22 / h12
        b_xi_m = -h11 / h12
        a_eta_m = k / np.sqrt(h12**2 - 2 * h12 * h22 * c + h22**2)
    fields = {
        "xi_plus": (a_xi_p, 0.0 * a_xi_p),
        "eta_plus": (b_eta_p, np.ones_like(b_eta_p)),
        "xi_minus": (np.ones_like(b_xi_m), b_xi_m),
        "eta_minus": (0.0 * a_eta_m, a_eta_m),
    }

    def apply(key, vx, vy):
        a, b = fields[key]
        return a * vx + b * vy

    rep = {}
    # sine-Gordon: D_xi (D_eta phi) = kappa^2 sin(phi), mixed derivative expanded
    for tag, phi, kxi, keta in (("plus", phi_p, "xi_plus", "eta_plus"),
                                ("minus", phi_m, "xi_minus", "eta_minus")):
        ax, bx = fields[kxi]
        ae, be = fields[keta]
        px, py = _d(phi, h, -2), _d(phi, h, -1)
        pxx, pyy, pxy = _dd(phi, h, -2), _dd(phi, h, -1), _dxy(phi, h)
        g_x = _d(ae, h, -2) * px + ae * pxx + _d(be, h, -2) * py + be * pxy
        g_y = _d(ae, h, -1) * px + ae * pxy + _d(be, h, -1) * py + be * pyy
        rep[f"sine_gordon_{tag}"] = np.abs(ax * g_x + bx * g_y - k * k * np.sin(phi))

    # Gauss-sphere nets, from the jet derivatives of n
    Dn = {key: apply(key, grid.n_x, grid.n_y) for key in fields}
    for key, v in Dn.items():
        rep[f"sphere_speed_{key}"] = np.abs(np.linalg.norm(v, axis=0) - abs(k))
    psi = _wedge(Dn["xi_minus"], Dn["eta_plus"], grid.n)
    diff = np.mod(psi - (np.pi + grid.omega) + np.pi, 2 * np.pi) - np.pi
    rep["psi"] = np.abs(diff)

    # Lelieuvre: D_xi r = -(1/kappa) D_xi n x n, D_eta r = (1/kappa) D_eta n x n
    for tag, r, kxi, keta in (("plus", pair.r_plus, "xi_plus", "eta_plus"),
                              ("minus", pair.r_minus, "xi_minus", "eta_minus")):
        rx, ry = _d(r, h, -2), _d(r, h, -1)
        for key, sgn in ((kxi, -1.0), (keta, 1.0)):
            lhs = apply(key, rx, ry)
            rhs = sgn / k * np.cross(Dn[key], grid.n, axis=0)
            rep[f"lelieuvre_{key}"] = np.linalg.norm(lhs - rhs, axis=0)
    for key in rep:
        rep[key] = np.where(mask, _ring(rep[key]) if key.startswith(("sine", "lelieuvre"))
                            else rep[key], np.nan)
    return AsymptoticData(xi, eta, phi_p, phi_m, compat, rep)


# -- convergence --------------------------------------------------------------

def shared_nodes(coarse, fine):
    """Restrict a fine-grid array (step/2, same base node) to the coarse nodes."""
    return fine[..., ::2, ::2]


def convergence(coarse: dict, fine: dict):
    """Per-key (coarse max, fine max over the shared nodes, ratio)."""
    out = {}
    for key in coarse:
        a = np.asarray(coarse[key])
        b = shared_nodes(a, np.asarray(fine[key]))
        ok = np.isfinite(a) & np.isfinite(b)
        ca = float(np.max(a[ok])) if ok.any() else np.nan
        fb = float(np.max(b[ok])) if ok.any() else np.nan
        out[key] = (ca, fb, ca / fb if fb > 0 else np.inf)
    return out
