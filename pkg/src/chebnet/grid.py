"""Curve tracing along unit net fields and sampled Chebyshev parameterisations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import CommutationDefect, LeftDomain
from .surfaces import SurfacePatch, normal_from_jet, surface_jet


def _dot(a, b):
    return np.einsum("i...,i...->...", a, b)


def _inside(domain, c, slack=1e-12):
    (p0, p1), (q0, q1) = domain
    return ((c[0] >= p0 - slack) & (c[0] <= p1 + slack)
            & (c[1] >= q0 - slack) & (c[1] <= q1 + slack))


class _Flow:
    """RK4 flows of the unit fields of a net in chart coordinates."""

    def __init__(self, net, domain=None):
        self.net = net
        self.domain = domain or net.base.domain

    def field(self, i, c):
        if not np.all(_inside(self.domain, c)):
            raise LeftDomain("trace left the chart domain")
        return self.net.unit_fields(c[0], c[1])[i]

    def step(self, i, c, h):
        """One RK4 step; ``h`` may be an array (per-point step, 0 = frozen)."""
        k1 = self.field(i, c)
        k2 = self.field(i, c + 0.5 * h * k1)
        k3 = self.field(i, c + 0.5 * h * k2)
        k4 = self.field(i, c + h * k3)
        return c + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0

    def run(self, i, c, t, h, record=False, xyz=False):
        """Flow X^_i for signed times ``t`` (array) with nominal step ``h``.

        Each point takes ceil(|t|/h) equal steps.  Returns the end points and,
        when ``xyz``, the polyline length (sum of chords of the base surface).
        """
        c = np.array(c, dtype=float)
        t = np.broadcast_to(np.asarray(t, dtype=float), c.shape[1:])
        nsteps = np.maximum(np.ceil(np.abs(t) / h - 1e-9).astype(int), 1)
        hs = t / nsteps
        length = np.zeros(c.shape[1:])
        path = [c.copy()] if record else None
        prev = self._xyz(c) if xyz else None
        for k in range(int(nsteps.max())):
            hk = np.where(k < nsteps, hs, 0.0)
            c = self.step(i, c, hk)
            if record:
                path.append(c.copy())
            if xyz:
                cur = self._xyz(c)
                length += np.linalg.norm(cur - prev, axis=0)
                prev = cur
        return c, length, path

    def _xyz(self, c):
        return surface_jet(self.net.base, c[0], c[1], check_domain=False).value


# -- tracing ------------------------------------------------------------------

@dataclass
class Polyline:
    curve_id: int
    family: int
    seed: tuple
    chart: np.ndarray     # (n, 2)
    xyz: np.ndarray       # (n, 3)
    s: np.ndarray         # arc-length parameter (n,)
    truncated: bool = False


@dataclass
class TraceResult:
    curves: list
    parallelogram: Optional[dict] = None


def trace_curves(net, seeds, step, n_steps, families=(0, 1), domain=None):
    """Arc-length polylines along X^_1 and/or X^_2 from each seed.

    A curve that would leave the chart is truncated and flagged.
    """
    fl = _Flow(net, domain)
    out = []
    cid = 0
    for seed in np.atleast_2d(np.asarray(seeds, dtype=float)):
        for fam in families:
            c = seed.reshape(2, 1).copy()
            pts = [c[:, 0].copy()]
            truncated = False
            for _ in range(n_steps):
                try:
                    c = fl.step(fam, c, step)
                except Exception:
                    truncated = True
                    break
                if not np.all(_inside(fl.domain, c)):
                    truncated = True
                    break
                pts.append(c[:, 0].copy())
            chart = np.array(pts)
            xyz = surface_jet(net.base, chart[:, 0], chart[:, 1], check_domain=False).value.T
            s = np.arange(len(chart)) * step
            out.append(Polyline(cid, fam, tuple(seed), chart, xyz, s, truncated))
            cid += 1
    return out


def parallelogram_test(net, base, size=0.3, n=10, step=1e-3, newton_iter=6, newton_tol=1e-10,
                       domain=None):
    """Opposite-side length discrepancies of the quadrilaterals spanned from
    ``base`` by net curves, sides i*size/n by j*size/n (i, j = 1..n).

    Sides are traced polylines at the given RK4 step and their lengths are
    chord sums; the far corner is found by Newton on
    flow_1(P01, t) = flow_2(P10, s), started from (t, s) = side lengths.
    """
    fl = _Flow(net, domain)
    base = np.asarray(base, dtype=float).reshape(2, 1)
    a = np.arange(1, n + 1) * size / n
    I, Jx = np.meshgrid(a, a, indexing="ij")
    A_, B_ = I.ravel(), Jx.ravel()
    m = A_.size
    c0 = np.repeat(base, m, axis=1)
    P10, bottom, _ = fl.run(0, c0, A_, step, xyz=True)
    P01, left, _ = fl.run(1, c0, B_, step, xyz=True)
    t, s = A_.copy(), B_.copy()
    for _ in range(newton_iter):
        E1, top, _ = fl.run(0, P01, t, step, xyz=True)
        E2, right, _ = fl.run(1, P10, s, step, xyz=True)
        F = E1 - E2
        if np.max(np.abs(F)) < newton_tol:
            break
        X1 = fl.field(0, E1)
        X2 = fl.field(1, E2)
        det = X1[0] * (-X2[1]) - X1[1] * (-X2[0])
        t = t - (F[0] * (-X2[1]) - F[1] * (-X2[0])) / det
        s = s - (X1[0] * F[1] - X1[1] * F[0]) / det
    d1 = np.abs(top - bottom) / bottom
    d2 = np.abs(right - left) / left
    disc = np.maximum(d1, d2)
    return {
        "max_discrepancy": float(disc.max()),
        "discrepancy": disc.reshape(n, n),
        "param_mismatch": float(max(np.max(np.abs(t - A_)), np.max(np.abs(s - B_)))),
        "step": step, "size": size, "n": n,
    }


def trace_net(net, seeds, step, n_steps, quad_base=None, quad_size=0.3, quad_n=10,
              domain=None):
    curves = trace_curves(net, seeds, step, n_steps, domain=domain)
    rep = None
    if quad_base is not None:
        rep = parallelogram_test(net, quad_base, quad_size, quad_n, step, domain=domain)
    return TraceResult(curves, rep)


# -- Chebyshev grids ----------------------------------------------------------

class NodeData(NamedTuple):
    r: np.ndarray
    n: np.ndarray
    r_x: np.ndarray
    r_y: np.ndarray
    n_x: np.ndarray
    n_y: np.ndarray
    omega: np.ndarray
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray


class NetSampler:
    """Evaluates node data anywhere on the chart and flows along grid lines,
    so that line integrals over grid edges need not rely on node samples."""

    def __init__(self, net, domain=None, substeps=2):
        self.flow = _Flow(net, domain)
        self.net = net
        self.substeps = substeps

    def node_data(self, chart):
        U = self.net.unit_fields(chart[0], chart[1])
        return NodeData(*_node_data(self.net.base, chart, U))

    def along(self, fam, c, times):
        """Chart points at increasing flow times ``times`` from ``c``."""
        out, t0 = [], 0.0
        for t in times:
            for _ in range(self.substeps):
                c = self.flow.step(fam, c, (t - t0) / self.substeps)
            out.append(c)
            t0 = t
        return out


class PatchSampler:
    """Same interface for a patch whose own parameters are Chebyshev."""

    def __init__(self, patch):
        self.patch = patch

    def node_data(self, chart):
        r = surface_jet(self.patch, chart[0], chart[1], check_domain=False)
        U = np.zeros((2, 2) + chart.shape[1:])
        U[0, 0] = 1.0 / np.linalg.norm(r.d_p, axis=0)
        U[1, 1] = 1.0 / np.linalg.norm(r.d_q, axis=0)
        return NodeData(*_node_data(self.patch, chart, U))

    def along(self, fam, c, times):
        e = np.zeros((2,) + (1,) * (c.ndim - 1))
        e[fam] = 1.0
        return [c + t * e for t in times]


@dataclass
class ChebyshevGrid:
    step: float
    chart: np.ndarray       # (2, nx, ny)
    r: np.ndarray           # (3, nx, ny)
    n: np.ndarray
    r_x: np.ndarray         # unit tangents X^_1 r, X^_2 r
    r_y: np.ndarray
    n_x: np.ndarray         # X^_1 n, X^_2 n from jets
    n_y: np.ndarray
    omega: np.ndarray
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray
    kappa: float = 1.0
    origin: tuple = (0, 0)
    commutation_defect: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)
    sampler: object = field(default=None, repr=False, compare=False)

    @property
    def shape(self):
        return self.omega.shape

    @property
    def K(self):
        return self.h11 * self.h22 - self.h12**2

    def constraint_residual(self, kappa=None):
        kappa = self.kappa if kappa is None else kappa
        return self.h11 * self.h22 - self.h12**2 + kappa * self.h12

    def corrupted(self, dh12=1e-3):
        g = ChebyshevGrid(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        g.h12 = self.h12 + dh12
        g.sampler = None
        return g


def _node_data(patch, chart, U):
    """r, n, unit tangents, normal derivatives and h_ij at chart points for
    unit chart fields U."""
    r = surface_jet(patch, chart[0], chart[1], check_domain=False)
    nj = normal_from_jet(r, patch.orientation, patch.eps_reg)
    n = nj.value
    e = np.stack([r.d_p, r.d_q])
    rx = U[0, 0] * e[0] + U[0, 1] * e[1]
    ry = U[1, 0] * e[0] + U[1, 1] * e[1]
    nx = U[0, 0] * nj.d_p + U[0, 1] * nj.d_q
    ny = U[1, 0] * nj.d_p + U[1, 1] * nj.d_q
    # the net's own orientation: n along X^_1 r x X^_2 r, so that omega is the
    # oriented angle in (0, pi) and the Lelieuvre signs hold
    flip = np.where(_dot(n, np.cross(rx, ry, axis=0)) < 0, -1.0, 1.0)
    n, nx, ny = n * flip, nx * flip, ny * flip
    II = np.array([[_dot(r.d_pp, n), _dot(r.d_pq, n)], [_dot(r.d_pq, n), _dot(r.d_qq, n)]])

    def form(a, b):
        return np.einsum("i...,ij...,j...->...", a, II, b)

    cos = np.clip(_dot(rx, ry), -1.0, 1.0)
    omega = np.arccos(cos)
    sin = np.sin(omega)
    return (r.value, n, rx, ry, nx, ny, omega, form(U[0], U[0]) / sin,
            form(U[0], U[1]) / sin, form(U[1], U[1]) / sin)


def _orientation(patch, c, U):
    """+1 when the patch normal agrees with the net orientation at chart point
    ``c``, else -1.  ``kappa`` is given relative to the patch normal, so it
    flips together with the normal."""
    r = surface_jet(patch, c[0], c[1], check_domain=False)
    n = normal_from_jet(r, patch.orientation, patch.eps_reg).value
    e = np.stack([r.d_p, r.d_q])
    rx = U[0, 0] * e[0] + U[0, 1] * e[1]
    ry = U[1, 0] * e[0] + U[1, 1] * e[1]
    return 1.0 if _dot(n, np.cross(rx, ry, axis=0)) > 0 else -1.0


def chebyshev_grid(net, base, nx, ny, step, substeps=8, origin=None, kappa=None,
                   defect_tol=1e-6, check_defect=True, domain=None):
    """Nodes obtained by flowing X^_1 from ``base`` and then X^_2 from every
    x-node, ``step`` apart in arc length.  ``origin`` is the node index of the
    base point (default: the centre).  ``kappa`` refers to the normal of
    ``net.base``; the grid stores it relative to the net orientation."""
    fl = _Flow(net, domain)
    i0, j0 = origin if origin is not None else (nx // 2, ny // 2)
    h = step / substeps
    chart = np.empty((2, nx, ny))
    base = np.asarray(base, dtype=float)
    chart[:, i0, j0] = base
    for direction, rng in ((1, range(i0 + 1, nx)), (-1, range(i0 - 1, -1, -1))):
        c = base.reshape(2, 1).copy()
        for i in rng:
            for _ in range(substeps):
                c = fl.step(0, c, direction * h)
            chart[:, i, j0] = c[:, 0]
    row = chart[:, :, j0].copy()
    for direction, rng in ((1, range(j0 + 1, ny)), (-1, range(j0 - 1, -1, -1))):
        c = row.copy()
        for j in rng:
            for _ in range(substeps):
                c = fl.step(1, c, direction * h)
            chart[:, :, j] = c
    U = net.unit_fields(chart[0], chart[1])
    kappa = 1.0 if kappa is None else float(kappa)
    grid = ChebyshevGrid(step, chart, *_node_data(net.base, chart, U),
                         kappa=kappa * _orientation(net.base, chart[:, i0, j0], U[:, :, i0, j0]),
                         origin=(i0, j0), sampler=NetSampler(net, domain))
    if check_defect:
        grid.commutation_defect = commutation_defect(net, grid, substeps, domain)
        worst = float(np.max(grid.commutation_defect))
        if worst > defect_tol * step**2:
            raise CommutationDefect(f"flow commutation defect {worst:.3e} exceeds "
                                    f"{defect_tol:g} * step^2")
    return grid


def commutation_defect(net, grid, substeps=4, domain=None):
    """Per cell: distance between flowing X^_1 then X^_2 and X^_2 then X^_1."""
    fl = _Flow(net, domain)
    h = grid.step / substeps
    c = grid.chart[:, :-1, :-1].reshape(2, -1)

    def seq(c, fams):
        for fam in fams:
            for _ in range(substeps):
                c = fl.step(fam, c, h)
        return c

    a = seq(c, (0, 1))
    b = seq(c, (1, 0))
    ra = surface_jet(net.base, a[0], a[1], check_domain=False).value
    rb = surface_jet(net.base, b[0], b[1], check_domain=False).value
    return np.linalg.norm(ra - rb, axis=0).reshape(grid.shape[0] - 1, grid.shape[1] - 1)


def grid_from_patch(patch: SurfacePatch, x0, y0, nx, ny, step, kappa=1.0):
    """Grid of a patch whose own parameters are Chebyshev (unit-speed lines).

    ``kappa`` refers to the net orientation (normal along r_x x r_y)."""
    xs = x0 + step * np.arange(nx)
    ys = y0 + step * np.arange(ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    chart = np.stack([X, Y])
    if not np.all(patch.contains(X, Y)):
        raise LeftDomain(f"grid leaves the domain of {patch.id}")
    sampler = PatchSampler(patch)
    return ChebyshevGrid(step, chart, *sampler.node_data(chart), kappa=kappa,
                         origin=(0, 0), meta={"patch": patch.id}, sampler=sampler)
