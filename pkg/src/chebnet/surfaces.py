"""Parameterised surface patches evaluated through jets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateTangent, DomainViolation, NonFinite
from .jets import Jet2, Jet2Vec3

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class SurfacePatch:
    """A rectangle of parameters with a jet-evaluating immersion.

    ``immersion(P, Q)`` takes two :class:`Jet2` and returns a :class:`Jet2Vec3`.
    ``gauss(P, Q)``, when given, is a closed-form unit normal written with jet
    operations (used where the normal itself has to be differentiated twice).
    ``inverse_gauss(N)`` maps unit vectors (arrays of shape (3, ...), or a
    :class:`Jet2Vec3`) back to parameters.
    """

    id: str
    domain: tuple
    immersion: Callable
    inverse_gauss: Optional[Callable] = None
    orientation: int = 1
    eps_reg: float = 1e-10
    gauss: Optional[Callable] = None
    params: dict = field(default_factory=dict)
    notes: str = ""

    def contains(self, p, q, slack=_DOMAIN_SLACK):
        (p0, p1), (q0, q1) = self.domain
        p, q = np.asarray(p), np.asarray(q)
        return (p >= p0 - slack) & (p <= p1 + slack) & (q >= q0 - slack) & (q <= q1 + slack)

    @property
    def center(self):
        (p0, p1), (q0, q1) = self.domain
        return 0.5 * (p0 + p1), 0.5 * (q0 + q1)

    def with_orientation(self, sign):
        return SurfacePatch(self.id, self.domain, self.immersion, self.inverse_gauss,
                            int(sign), self.eps_reg, self.gauss, dict(self.params), self.notes)


class NormalJet(NamedTuple):
    value: np.ndarray
    d_p: np.ndarray
    d_q: np.ndarray


def surface_jet(patch: SurfacePatch, p, q, check_domain=True) -> Jet2Vec3:
    """r(p, q) with all partials up to order two."""
    if check_domain and not np.all(patch.contains(p, q)):
        raise DomainViolation(f"{patch.id}: point outside domain {patch.domain}")
    P, Q = Jet2.seeds(p, q)
    with np.errstate(all="ignore"):
        r = patch.immersion(P, Q)
    if not r.is_finite():
        raise NonFinite(f"{patch.id}: non-finite immersion jet")
    return r


def normal_from_jet(r: Jet2Vec3, orientation=1, eps_reg=1e-10) -> NormalJet:
    """Unit normal and its first partials from a second-order jet of r."""
    rp, rq = r.d_p, r.d_q
    c = np.cross(rp, rq, axis=0)
    cn = np.linalg.norm(c, axis=0)
    if np.any(cn <= eps_reg):
        raise DegenerateTangent("r_p x r_q vanishes to within eps_reg")
    c_p = np.cross(r.d_pp, rq, axis=0) + np.cross(rp, r.d_pq, axis=0)
    c_q = np.cross(r.d_pq, rq, axis=0) + np.cross(rp, r.d_qq, axis=0)
    n = c / cn
    n_p = (c_p - n * np.einsum("i...,i...->...", n, c_p)) / cn
    n_q = (c_q - n * np.einsum("i...,i...->...", n, c_q)) / cn
    s = float(orientation)
    return NormalJet(s * n, s * n_p, s * n_q)


def unit_normal_jet(patch: SurfacePatch, p, q) -> NormalJet:
    r = surface_jet(patch, p, q)
    return normal_from_jet(r, patch.orientation, patch.eps_reg)


def gauss_map(patch: SurfacePatch, p, q):
    """Unit normal values only."""
    return unit_normal_jet(patch, p, q).value


def compose(patch: SurfacePatch, chart_map: Callable, domain, id=None, orientation=None):
    """Reparameterise ``patch`` by a jet map ``(P, Q) -> (p, q)`` on a new domain.

    The orientation of the new patch defaults to the one reproducing the
    original normal at the centre of the new domain.
    """

    def immersion(P, Q):
        a, b = chart_map(P, Q)
        return patch.immersion(a, b)

    new = SurfacePatch(id or patch.id, domain, immersion, None, 1, patch.eps_reg,
                       None, dict(patch.params), patch.notes)
    if orientation is None:
        (p0, p1), (q0, q1) = domain
        pc, qc = 0.5 * (p0 + p1), 0.5 * (q0 + q1)
        a, b = chart_map(*Jet2.seeds(pc, qc))
        n_old = gauss_map(patch, a.value, b.value)
        n_new = gauss_map(new, pc, qc)
        orientation = 1 if float(np.dot(n_old, n_new)) > 0 else -1
    return new.with_orientation(orientation)
