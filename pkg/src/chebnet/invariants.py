"""Second-order invariants of a net (direction pair) on a surface patch.

Everything here is computed pointwise from the jet of r, the first partials
of the normal, and the field components with their first partials.  Points
may be given as arrays; all quantities are then arrays of the same shape.

Sign conventions (see the decisions ledger for the reasons):

* II, K, H, kn, sigma and the geodesic torsions use the patch normal n.
* H is the usual mean curvature (half the trace of the shape operator).
* Geodesic curvatures and the spherical-image angle are measured against the
  pair normal n_pair = X1r x X2r / |X1r x X2r|, which makes them behave as
  listed in the discrete-symmetry table.
* iota_i are the coefficients in [X1^, X2^] r = iota_1 X1^r + iota_2 X2^r.
* Concordance is written mu K + kappa sigma + lambda = 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import numpy as np

from .errors import ChebnetError, DegeneratePair, SingularNet
from .jets import Jet2, fd_gradient
from .surfaces import SurfacePatch, normal_from_jet, surface_jet


def _dot(a, b):
    return np.einsum("i...,i...->...", a, b)


def _cross(a, b):
    return np.cross(a, b, axis=0)


def _det3(a, b, c):
    return _dot(_cross(a, b), c)


# -- direction pairs ----------------------------------------------------------

class DirectionPair:
    """Two tangent fields X_i = a_i d/dp + b_i d/dq.

    The evaluator returns ``(X, dX)`` with ``X[i, c]`` the component c of field
    i and ``dX[i, c, k]`` its partial derivative in parameter k.
    """

    def __init__(self, evaluator: Callable, kind: str = "function", label: str = ""):
        self._eval = evaluator
        self.kind = kind
        self.label = label

    def __call__(self, p, q):
        return self._eval(np.asarray(p, dtype=float), np.asarray(q, dtype=float))

    @classmethod
    def constant(cls, X1, X2, label=""):
        X = np.array([X1, X2], dtype=float)

        def ev(p, q):
            shape = np.broadcast(p, q).shape
            Xv = np.broadcast_to(X.reshape(2, 2, *([1] * len(shape))), (2, 2, *shape))
            return Xv.copy(), np.zeros((2, 2, 2, *shape))

        return cls(ev, "constant", label)

    @classmethod
    def coordinate(cls):
        return cls.constant((1.0, 0.0), (0.0, 1.0), "coordinate")

    @classmethod
    def from_jets(cls, fn, label=""):
        """``fn(P, Q)`` returns ``((a1, b1), (a2, b2))`` as jets or numbers."""

        def ev(p, q):
            P, Q = Jet2.seeds(p, q)
            comps = fn(P, Q)
            shape = P.value.shape
            X = np.empty((2, 2, *shape))
            dX = np.zeros((2, 2, 2, *shape))
            for i in range(2):
                for c in range(2):
                    v = comps[i][c]
                    if isinstance(v, Jet2):
                        X[i, c] = v.value
                        dX[i, c, 0] = v.d_p
                        dX[i, c, 1] = v.d_q
                    else:
                        X[i, c] = v
            return X, dX

        return cls(ev, "jets", label)

    @classmethod
    def from_function(cls, fn, step=1e-3, label=""):
        """``fn(p, q)`` returns an array ``(2, 2, ...)``; derivatives by
        fourth-order central differences with the given step."""

        def ev(p, q):
            X = np.asarray(fn(p, q), dtype=float)
            g = fd_gradient(fn, p, q, step)  # (2, 2, 2, ...) with the partial first
            return X, np.moveaxis(g, 0, 2)

        return cls(ev, "function", label)

    def transformed(self, f1=1.0, f2=1.0, swap=False):
        """Pair (f1 X1, f2 X2), optionally swapped; f1, f2 constants."""
        base = self

        def ev(p, q):
            X, dX = base(p, q)
            X = X.copy()
            dX = dX.copy()
            X[0] *= f1
            dX[0] *= f1
            X[1] *= f2
            dX[1] *= f2
            if swap:
                X = X[::-1].copy()
                dX = dX[::-1].copy()
            return X, dX

        return DirectionPair(ev, self.kind, self.label)


# -- fundamental data ---------------------------------------------------------

@dataclass
class FundamentalData:
    I11: np.ndarray
    I12: np.ndarray
    I22: np.ndarray
    II11: np.ndarray
    II12: np.ndarray
    II22: np.ndarray
    detI: np.ndarray
    n: np.ndarray
    commutator_defect: np.ndarray
    # ingredients kept for the derived invariants
    e: np.ndarray          # e[i] = X_i r
    T: np.ndarray          # T[k, i] = X_k X_i r
    Xn: np.ndarray         # Xn[i] = X_i n
    X: np.ndarray
    dX: np.ndarray


def fundamental_data(patch: SurfacePatch, p, q, pair: DirectionPair,
                     eps_trans=1e-12) -> FundamentalData:
    r = surface_jet(patch, p, q)
    nj = normal_from_jet(r, patch.orientation, patch.eps_reg)
    X, dX = pair(p, q)
    det = X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0]
    if np.any(np.abs(det) <= eps_trans):
        raise DegeneratePair("direction fields are not transversal")
    rp, rq = r.d_p, r.d_q
    rpp, rpq, rqq = r.d_pp, r.d_pq, r.d_qq
    a, b = X[:, 0], X[:, 1]
    e = np.stack([a[i] * rp + b[i] * rq for i in range(2)])
    Xn = np.stack([a[i] * nj.d_p + b[i] * nj.d_q for i in range(2)])
    T = np.empty((2, 2) + e.shape[1:])
    for k in range(2):
        for i in range(2):
            Xa = a[k] * dX[i, 0, 0] + b[k] * dX[i, 0, 1]
            Xb = a[k] * dX[i, 1, 0] + b[k] * dX[i, 1, 1]
            T[k, i] = (Xa * rp + Xb * rq
                       + a[i] * (a[k] * rpp + b[k] * rpq)
                       + b[i] * (a[k] * rpq + b[k] * rqq))
    n = nj.value
    I11, I12, I22 = _dot(e[0], e[0]), _dot(e[0], e[1]), _dot(e[1], e[1])
    return FundamentalData(
        I11=I11, I12=I12, I22=I22,
        II11=_dot(T[0, 0], n), II12=_dot(T[1, 0], n), II22=_dot(T[1, 1], n),
        detI=I11 * I22 - I12 * I12, n=n,
        commutator_defect=_dot(T[0, 1] - T[1, 0], n),
        e=e, T=T, Xn=Xn, X=X, dX=dX,
    )


# -- invariant record ---------------------------------------------------------

@dataclass
class InvariantRecord:
    omega: np.ndarray
    omega_oriented: np.ndarray
    K: np.ndarray
    H: np.ndarray
    sigma: np.ndarray
    kn1: np.ndarray
    kn2: np.ndarray
    kg1: np.ndarray
    kg2: np.ndarray
    tg1: np.ndarray
    tg2: np.ndarray
    curv1: np.ndarray
    curv2: np.ndarray
    pi1: np.ndarray
    pi2: np.ndarray
    iota1: np.ndarray
    iota2: np.ndarray
    omega_1: np.ndarray
    omega_2: np.ndarray
    omega_III: np.ndarray

    def as_dict(self):
        return {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in asdict(self).items()}

    @staticmethod
    def names():
        return [f.name for f in fields(InvariantRecord)]


@dataclass
class _Derived:
    """Intermediate quantities shared by the record and the identity suite."""
    fd: FundamentalData
    rec: InvariantRecord
    sin: np.ndarray
    cos: np.ndarray
    e_hat: np.ndarray
    n_pair: np.ndarray
    XhXh: np.ndarray       # XhXh[k, i] = X^_k X^_i r
    Xh_n: np.ndarray       # X^_i n
    commutator: np.ndarray  # [X^1, X^2] r


def _derive(patch, p, q, pair, eps_sing=1e-6) -> _Derived:
    fd = fundamental_data(patch, p, q, pair)
    e, T = fd.e, fd.T
    I = np.array([[fd.I11, fd.I12], [fd.I12, fd.I22]])
    rt = np.sqrt(fd.I11 * fd.I22)
    cos = fd.I12 / rt
    sin = np.sqrt(np.maximum(fd.detI, 0.0) / (fd.I11 * fd.I22))
    if np.any(sin <= eps_sing):
        raise SingularNet(f"sin(omega) <= {eps_sing:g}")
    omega = np.arctan2(sin, cos)
    sqdet = np.sqrt(fd.detI)
    n = fd.n
    cr = _cross(e[0], e[1])
    n_pair = cr / np.linalg.norm(cr, axis=0)
    orient = np.sign(_dot(n_pair, n))
    omega_or = np.mod(np.arctan2(orient * sin, cos), 2 * np.pi)

    II11, II12, II22 = fd.II11, fd.II12, fd.II22
    K = (II11 * II22 - II12 * II12) / fd.detI
    H = (fd.I11 * II22 - 2.0 * fd.I12 * II12 + fd.I22 * II11) / (2.0 * fd.detI)
    sigma = II12 / sqdet
    kn = [II11 / fd.I11, II22 / fd.I22]
    Iii = [fd.I11, fd.I22]
    IIii = [II11, II22]
    kg = [_det3(e[i], T[i, i], n_pair) / Iii[i] ** 1.5 for i in range(2)]
    tg = [(-1) ** (i + 1) * (fd.I12 * IIii[i] - Iii[i] * II12) / (Iii[i] * sqdet)
          for i in range(2)]
    curv = [np.sqrt(kn[i] ** 2 + kg[i] ** 2) for i in range(2)]

    # derivatives of the metric coefficients along the fields
    XI = np.empty((2, 2, 2) + fd.I11.shape)  # XI[k, i, j] = X_k I_ij
    for k in range(2):
        for i in range(2):
            for j in range(2):
                XI[k, i, j] = _dot(T[k, i], e[j]) + _dot(e[i], T[k, j])
    Xcos = np.stack([XI[k, 0, 1] / rt - 0.5 * cos * (XI[k, 0, 0] / fd.I11 + XI[k, 1, 1] / fd.I22)
                     for k in range(2)])
    Xomega = -Xcos / sin
    omega_k = [Xomega[k] / np.sqrt(Iii[k]) for k in range(2)]

    G112 = (_dot(e[0], T[0, 1]) * fd.I22 - fd.I12 * _dot(e[1], T[0, 1])) / fd.detI
    G221 = (fd.I11 * _dot(e[1], T[1, 0]) - fd.I12 * _dot(e[0], T[1, 0])) / fd.detI
    pi1 = G112 / np.sqrt(fd.I22)
    pi2 = G221 / np.sqrt(fd.I11)

    f = [1.0 / np.sqrt(Iii[i]) for i in range(2)]
    Xf = np.stack([np.stack([-0.5 * f[i] ** 3 * XI[k, i, i] for i in range(2)])
                   for k in range(2)])  # Xf[k, i] = X_k f_i
    e_hat = np.stack([f[i] * e[i] for i in range(2)])
    XhXh = np.empty_like(T)
    for k in range(2):
        for i in range(2):
            XhXh[k, i] = f[k] * (Xf[k, i] * e[i] + f[i] * T[k, i])
    comm = XhXh[0, 1] - XhXh[1, 0]
    # decompose [X^1, X^2] r = iota_1 e^1 + iota_2 e^2
    c1, c2 = _dot(comm, e_hat[0]), _dot(comm, e_hat[1])
    iota1 = (c1 - cos * c2) / sin**2
    iota2 = (c2 - cos * c1) / sin**2

    Xh_n = np.stack([f[i] * fd.Xn[i] for i in range(2)])
    omega_III = np.mod(np.arctan2(_dot(_cross(Xh_n[0], Xh_n[1]), n_pair),
                                  _dot(Xh_n[0], Xh_n[1])), 2 * np.pi)

    rec = InvariantRecord(
        omega=omega, omega_oriented=omega_or, K=K, H=H, sigma=sigma,
        kn1=kn[0], kn2=kn[1], kg1=kg[0], kg2=kg[1], tg1=tg[0], tg2=tg[1],
        curv1=curv[0], curv2=curv[1], pi1=pi1, pi2=pi2, iota1=iota1, iota2=iota2,
        omega_1=omega_k[0], omega_2=omega_k[1], omega_III=omega_III,
    )
    return _Derived(fd, rec, sin, cos, e_hat, n_pair, XhXh, Xh_n, comm)


def invariant_record(patch: SurfacePatch, p, q, pair: DirectionPair,
                     eps_sing=1e-6) -> InvariantRecord:
    return _derive(patch, p, q, pair, eps_sing).rec


# -- identities ---------------------------------------------------------------

def _rel(lhs, rhs):
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return np.abs(lhs - rhs) / scale


def _vec_rel(lhs, rhs):
    scale = np.maximum(1.0, np.maximum(np.linalg.norm(lhs, axis=0), np.linalg.norm(rhs, axis=0)))
    return np.linalg.norm(lhs - rhs, axis=0) / scale


@dataclass
class IdentityReport:
    residuals: dict
    zero_gauss_curvature: np.ndarray

    @property
    def max(self):
        return max(float(np.max(v)) for v in self.residuals.values())

    def as_dict(self):
        return {k: float(np.max(v)) for k, v in self.residuals.items()}


def identity_suite(patch, p, q, pair, eps_sing=1e-6, k_zero=1e-8) -> IdentityReport:
    """Relative residuals of the relations among second-order invariants."""
    d = _derive(patch, p, q, pair, eps_sing)
    R = d.rec
    s, c = d.sin, d.cos
    cot = c / s
    kn, tg, kg = (R.kn1, R.kn2), (R.tg1, R.tg2), (R.kg1, R.kg2)
    pi, om = (R.pi1, R.pi2), (R.omega_1, R.omega_2)
    res = {}
    for i in range(2):
        res[f"beetle_{i + 1}"] = _rel(tg[i] ** 2 + kn[i] ** 2 + R.K, 2 * R.H * kn[i])
        res[f"gtncsigma_{i + 1}"] = _rel((-1) ** (i + 1) * tg[i], kn[i] * cot - R.sigma)
        res[f"pigc_{i + 1}"] = _rel(pi[i] * s + om[i], (-1) ** (i + 1) * kg[i])
    res["torsion_sum"] = _rel(tg[0] + tg[1], (kn[1] - kn[0]) * cot)
    res["gauss_from_pair"] = _rel(R.K, kn[0] * kn[1] + tg[0] * tg[1]
                                  + (kn[0] * tg[1] - kn[1] * tg[0]) * cot)
    res["mean_from_pair"] = _rel(2 * R.H, kn[0] + kn[1] + (tg[1] - tg[0]) * cot)
    res["iotapi_1"] = _rel(R.pi1 + R.pi2 * c, R.iota1)
    res["iotapi_2"] = _rel(R.pi1 * c + R.pi2, -R.iota2)
    res["kn_product"] = _rel(kn[0] * kn[1], (R.K + R.sigma**2) * s**2)
    res["kn_sum"] = _rel(kn[0] + kn[1], 2 * (R.H * s + R.sigma * c) * s)
    n, eh = d.fd.n, d.e_hat
    res["xyvect_12"] = _vec_rel(d.XhXh[0, 1], R.sigma * s * n + R.pi1 * eh[0] - R.pi1 * c * eh[1])
    res["xyvect_21"] = _vec_rel(d.XhXh[1, 0], R.sigma * s * n + R.pi2 * eh[1] - R.pi2 * c * eh[0])
    W = np.array([[_dot(eh[i], d.Xh_n[j]) for j in range(2)] for i in range(2)])
    Wp = -np.array([[kn[0], R.sigma * s], [R.sigma * s, kn[1]]])
    res["weingarten"] = np.max(np.abs(W - Wp) / np.maximum(1.0, np.abs(Wp)), axis=(0, 1))
    zero_K = np.abs(R.K) <= k_zero
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = 1.0 / np.tan(R.omega_III)
        rhs = 2 * R.H * R.sigma / R.K - cot
        r3 = np.where(zero_K, 0.0, _rel(lhs, rhs))
    res["cotphiIII"] = r3
    return IdentityReport(res, zero_K)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class ConcordanceSpec:
    mu: float = 1.0
    kappa: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if self.mu == 0 and self.kappa == 0 and self.lam == 0:
            raise ValueError("mu, kappa, lambda must not all vanish")

    def residual(self, K, sigma):
        return self.mu * K + self.kappa * sigma + self.lam


def classify_net(patch, pair, sample_points, spec: Optional[ConcordanceSpec] = None,
                 tol_chebyshev=1e-9, tol_conjugate=1e-9, tol_concordant=1e-9, eps_sing=1e-6):
    """Per-point residuals of the Chebyshev, conjugacy and concordance criteria.

    Singular points are reported in ``singular`` and excluded from verdicts.
    """
    spec = spec or ConcordanceSpec()
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    rows, singular = [], []
    for p, q in pts:
        try:
            d = _derive(patch, p, q, pair, eps_sing)
        except SingularNet:
            singular.append((float(p), float(q)))
            continue
        R = d.rec
        rows.append({
            "point": (float(p), float(q)),
            "commutator": float(np.linalg.norm(d.commutator)),
            "iota": float(max(abs(R.iota1), abs(R.iota2))),
            "pi": float(max(abs(R.pi1), abs(R.pi2))),
            "kg1_plus_omega1": float(abs(R.kg1 + R.omega_1)),
            "kg2_minus_omega2": float(abs(R.kg2 - R.omega_2)),
            "concordance": float(abs(spec.residual(R.K, R.sigma))),
            "sigma": float(abs(R.sigma)),
            "kappa_fit": float(-(spec.mu * R.K + spec.lam) / R.sigma) if abs(R.sigma) > 0 else np.nan,
        })
    if not rows:
        raise SingularNet("every sample point is singular")

    def mx(key):
        return max(r[key] for r in rows)

    cheb = max(mx("commutator"), mx("iota"), mx("pi"), mx("kg1_plus_omega1"), mx("kg2_minus_omega2"))
    return {
        "points": rows,
        "singular": singular,
        "max": {k: mx(k) for k in ("commutator", "iota", "pi", "kg1_plus_omega1",
                                   "kg2_minus_omega2", "concordance", "sigma")},
        "chebyshev": bool(cheb < tol_chebyshev),
        "conjugate": bool(mx("sigma") < tol_conjugate),
        "concordant": bool(mx("concordance") < tol_concordant),
        "spec": asdict(spec),
    }


# -- discrete symmetries ------------------------------------------------------

def _mirror_patch(patch: SurfacePatch) -> SurfacePatch:
    def immersion(P, Q):
        r = patch.immersion(P, Q)
        return type(r)(r.x, r.y, -r.z)

    return SurfacePatch(patch.id + "~mirror", patch.domain, immersion, None, patch.orientation,
                        patch.eps_reg, None, dict(patch.params), patch.notes)


def _pi_minus(a):
    return np.pi - a


def _pi_minus_mod(a):
    return np.mod(np.pi - a, 2 * np.pi)


def _neg(a):
    return -a


_SAME = None
# entries: name -> (source name, transform); None keeps the value unchanged
_TABLE = {
    "T0": {"H": ("H", _neg), "sigma": ("sigma", _neg), "kn1": ("kn1", _neg),
           "kn2": ("kn2", _neg), "tg1": ("tg1", _neg), "tg2": ("tg2", _neg)},
    "T1": {"omega": ("omega", _pi_minus), "sigma": ("sigma", _neg), "kg2": ("kg2", _neg),
           "tg1": ("tg1", _neg), "tg2": ("tg2", _neg), "pi2": ("pi2", _neg),
           "iota2": ("iota2", _neg), "omega_2": ("omega_2", _neg),
           "omega_III": ("omega_III", _pi_minus_mod)},
    "T2": {"omega": ("omega", _pi_minus), "sigma": ("sigma", _neg), "kg1": ("kg1", _neg),
           "tg1": ("tg1", _neg), "tg2": ("tg2", _neg), "pi1": ("pi1", _neg),
           "iota1": ("iota1", _neg), "omega_1": ("omega_1", _neg),
           "omega_III": ("omega_III", _pi_minus_mod)},
    "T3": {"kn1": ("kn2", None), "kn2": ("kn1", None), "kg1": ("kg2", _neg),
           "kg2": ("kg1", _neg), "tg1": ("tg2", _neg), "tg2": ("tg1", _neg),
           "pi1": ("pi2", None), "pi2": ("pi1", None), "iota1": ("iota2", _neg),
           "iota2": ("iota1", _neg), "omega_1": ("omega_2", None), "omega_2": ("omega_1", None),
           "curv1": ("curv2", None), "curv2": ("curv1", None)},
}

# entries compared by apply_symmetry checks (the oriented angle is a reporting
# convention and not part of the table)
SYMMETRY_FIELDS = ("omega", "K", "H", "sigma", "kn1", "kn2", "kg1", "kg2", "tg1", "tg2",
                   "curv1", "curv2", "pi1", "pi2", "iota1", "iota2", "omega_1", "omega_2",
                   "omega_III")


def predict_record(T: str, rec: InvariantRecord) -> dict:
    """The record predicted for the transformed net, as a dict of arrays."""
    if T not in _TABLE:
        raise ValueError(f"unknown symmetry {T!r}")
    src = {k: getattr(rec, k) for k in SYMMETRY_FIELDS}
    out = dict(src)
    for name, (source, fn) in _TABLE[T].items():
        v = src[source]
        out[name] = fn(v) if fn is not None else v
    return out


def apply_symmetry(T: str, patch: SurfacePatch, pair: DirectionPair):
    """Transformed (patch, pair) and the predicted-record function."""
    if T == "T0":
        new = (_mirror_patch(patch), pair)
    elif T == "T1":
        new = (patch, pair.transformed(f1=-1.0))
    elif T == "T2":
        new = (patch, pair.transformed(f2=-1.0))
    elif T == "T3":
        new = (patch, pair.transformed(swap=True))
    else:
        raise ValueError(f"unknown symmetry {T!r}; T-1 is an output convention only")
    return new[0], new[1], (lambda rec: predict_record(T, rec))


def symmetry_residuals(T, patch, p, q, pair):
    """Entrywise |recomputed - predicted| (angles compared modulo 2 pi)."""
    rec = invariant_record(patch, p, q, pair)
    patch2, pair2, predict = apply_symmetry(T, patch, pair)
    rec2 = invariant_record(patch2, p, q, pair2)
    pred = predict(rec)
    out = {}
    for k in SYMMETRY_FIELDS:
        diff = getattr(rec2, k) - pred[k]
        if k == "omega_III":
            diff = np.angle(np.exp(1j * diff))
        out[k] = np.abs(diff)
    return out


def flip_protractor(rec: InvariantRecord) -> InvariantRecord:
    """Output convention T-1: report oriented quantities with the opposite
    protractor (omega -> -omega and the signs of the table row)."""
    d = asdict(rec)
    for k in ("omega", "sigma", "kg1", "kg2", "tg1", "tg2", "omega_1"):
        d[k] = -np.asarray(d[k])
    return InvariantRecord(**d)


# -- Gauss-Mainardi-Codazzi on a sampled Chebyshev grid ----------------------

def _d1(f, h, axis):
    """Fourth-order central first derivative; two-node margins are NaN."""
    out = np.full_like(f, np.nan)
    s = [slice(None)] * f.ndim

    def sh(k):
        t = list(s)
        n = f.shape[axis]
        t[axis] = slice(2 + k, n - 2 + k)
        return f[tuple(t)]

    t = list(s)
    t[axis] = slice(2, f.shape[axis] - 2)
    out[tuple(t)] = (8 * (sh(1) - sh(-1)) - (sh(2) - sh(-2))) / (12 * h)
    return out


def gmc_residuals(grid):
    """Residuals of the Gauss and the two Codazzi equations in Chebyshev form.

    ``grid`` needs arrays ``omega, h11, h12, h22`` indexed [i, j] along x, y
    and a scalar ``step``.  Returns three arrays (NaN where the stencil does
    not fit).
    """
    h = grid.step
    w, h11, h12, h22 = grid.omega, grid.h11, grid.h12, grid.h22
    s, c = np.sin(w), np.cos(w)
    wx, wy = _d1(w, h, 0), _d1(w, h, 1)
    wxy = _d1(wx, h, 1)
    K = h11 * h22 - h12**2
    r1 = wxy + K * s
    r2 = _d1(h11, h, 1) - _d1(h12, h, 0) + h11 * wy * c / s - h22 * wx / s
    r3 = _d1(h12, h, 1) - _d1(h22, h, 0) + h11 * wy / s - h22 * wx * c / s
    return r1, r2, r3


# -- sampling helpers ---------------------------------------------------------

def random_pair(rng, scale=0.3, label="random"):
    """A point-dependent direction pair with random polynomial components."""
    A = rng.normal(size=(2, 2))
    B = rng.normal(size=(2, 2, 2)) * scale

    def fn(P, Q):
        return ((A[0, 0] + B[0, 0, 0] * P * P + B[0, 0, 1] * Q, A[0, 1] + B[0, 1, 0] * Q * P),
                (A[1, 0] + B[1, 0, 0] * P, A[1, 1] + B[1, 1, 1] * Q * Q + B[1, 1, 0] * P))

    return DirectionPair.from_jets(fn, label=label)


def conditioned_samples(patch, n, rng, min_sin=1e-2, max_draws=None):
    """``n`` triples ``(p, q, pair)`` with random points and pairs, redrawing
    any whose net angle has |sin omega| < ``min_sin`` or is singular.

    The identities divide by sin^2 omega, so nearly parallel pairs lose
    accuracy to rounding alone.  Returns ``(samples, redrawn)``.
    """
    max_draws = 20 * n if max_draws is None else max_draws
    out, redrawn = [], 0
    while len(out) < n:
        if len(out) + redrawn >= max_draws:
            raise SingularNet(f"only {len(out)} of {n} well-conditioned samples in {max_draws} draws")
        (p, q), = sample_points(patch, 1, rng)
        pair = random_pair(rng)
        try:
            ok = abs(float(np.sin(invariant_record(patch, p, q, pair).omega))) >= min_sin
        except ChebnetError:
            ok = False
        if ok:
            out.append((p, q, pair))
        else:
            redrawn += 1
    return out, redrawn


def sample_points(patch, n, rng, inset=0.1):
    """``n`` uniform points of the patch rectangle (or a ``((p0, p1), (q0, q1))``
    domain) shrunk by ``inset`` per side."""
    (p0, p1), (q0, q1) = getattr(patch, "domain", patch)
    u = inset + (1 - 2 * inset) * rng.random((n, 2))
    return np.c_[p0 + (p1 - p0) * u[:, 0], q0 + (q1 - q0) * u[:, 1]]
