"""Elliptic integrals and Jacobi elliptic functions for real parameter m < 1.

Incomplete integrals use Carlson's symmetric forms R_F and R_D computed by
the duplication theorem, which are valid for any m < 1 without special
casing.  The amplitude am(x|m) is computed by the descending AGM/Landen
scheme for 0 <= m < 1 and by the imaginary-modulus transformation
(m < 0 mapped to mu = -m/(1-m) in (0, 1)) otherwise.

Accuracy is close to machine precision for m bounded away from 1; as
m -> 1- the AGM needs more steps and the quarter period K(m) diverges
logarithmically, so absolute errors grow roughly like K(m) * eps.
"""

from __future__ import annotations

import numpy as np

from . import jets
from .errors import BranchViolation, ParamOutOfRange
from .jets import Jet2

_DUP_TOL = 1e-3
_MAX_DUP = 60


def _check_m(m):
    m = float(m)
    if not m < 1.0:
        raise ParamOutOfRange(f"parameter m={m} must satisfy m < 1")
    return m


# -- Carlson symmetric integrals ----------------------------------------------

def carlson_rf(x, y, z):
    """R_F(x, y, z) for nonnegative arguments, at most one of them zero."""
    x, y, z = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x, y, z)))
    x, y, z = x.copy(), y.copy(), z.copy()
    for _ in range(_MAX_DUP):
        a = (x + y + z) / 3.0
        dev = np.max(np.abs(np.stack([x, y, z]) - a) / a, initial=0.0)
        if dev < _DUP_TOL:
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
    a = (x + y + z) / 3.0
    X, Y = 1.0 - x / a, 1.0 - y / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / np.sqrt(a)


def carlson_rd(x, y, z):
    """R_D(x, y, z); x, y >= 0 with at most one zero, z > 0."""
    x, y, z = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x, y, z)))
    x, y, z = x.copy(), y.copy(), z.copy()
    acc = np.zeros_like(x)
    fac = 1.0
    for _ in range(_MAX_DUP):
        a = (x + y + 3.0 * z) / 5.0
        dev = np.max(np.abs(np.stack([x, y, z]) - a) / a, initial=0.0)
        if dev < _DUP_TOL:
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        acc = acc + fac / (sz * (z + lam))
        fac /= 4.0
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
    a = (x + y + 3.0 * z) / 5.0
    X, Y = 1.0 - x / a, 1.0 - y / a
    Z = -(X + Y) / 3.0
    xy, z2 = X * Y, Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return fac * series / (a * np.sqrt(a)) + 3.0 * acc


# -- complete and incomplete integrals ----------------------------------------

def ellip_K(m):
    m = _check_m(m)
    return float(carlson_rf(0.0, 1.0 - m, 1.0))


def ellip_Ecomplete(m):
    m = _check_m(m)
    return float(carlson_rf(0.0, 1.0 - m, 1.0) - m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0))


def _reduce(s):
    n = np.round(np.asarray(s, dtype=float) / np.pi)
    return n, s - n * np.pi


def ellip_F(s, m):
    """Incomplete integral of the first kind F(s|m) = int_0^s (1 - m sin^2 t)^(-1/2) dt."""
    m = _check_m(m)
    n, r = _reduce(s)
    sn, cn = np.sin(r), np.cos(r)
    val = sn * carlson_rf(cn * cn, 1.0 - m * sn * sn, 1.0)
    out = val + 2.0 * n * ellip_K(m)
    return out if np.ndim(out) else float(out)


def ellip_E(s, m):
    """Incomplete integral of the second kind E(s|m) = int_0^s (1 - m sin^2 t)^(1/2) dt."""
    m = _check_m(m)
    n, r = _reduce(s)
    sn, cn = np.sin(r), np.cos(r)
    c2, d2 = cn * cn, 1.0 - m * sn * sn
    val = sn * carlson_rf(c2, d2, 1.0) - m / 3.0 * sn**3 * carlson_rd(c2, d2, 1.0)
    out = val + 2.0 * n * ellip_Ecomplete(m)
    return out if np.ndim(out) else float(out)


# -- Jacobi functions ---------------------------------------------------------

def _am_agm(x, m):
    """Amplitude for 0 <= m < 1 by the descending AGM (continuous in x)."""
    x = np.asarray(x, dtype=float)
    if m == 0.0:
        return x.copy()
    a, b, c = 1.0, np.sqrt(1.0 - m), np.sqrt(m)
    av, cv = [a], [c]
    while abs(c) > 1e-17 * a and len(av) < 40:
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        av.append(a)
        cv.append(c)
    n = len(av) - 1
    phi = (2.0**n) * av[n] * x
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(cv[j] / av[j] * np.sin(phi)))
    return phi


def amplitude(x, m):
    """am(x|m), the inverse of F(.|m)."""
    m = _check_m(m)
    x = np.asarray(x, dtype=float)
    if m >= 0.0:
        out = _am_agm(x, m)
    else:
        # imaginary modulus: evaluate at mu in (0,1) and map the angle
        mu = -m / (1.0 - m)
        kp = 1.0 / np.sqrt(1.0 - m)
        a1 = _am_agm(x * np.sqrt(1.0 - m), mu)
        k = np.round(a1 / np.pi)
        r = a1 - k * np.pi
        out = k * np.pi + np.arctan2(kp * np.sin(r), np.cos(r))
    return out if out.ndim else float(out)


def jacobi(x, m):
    """Return (am, sn, cn, dn) at x for parameter m < 1.

    dn is the positive root of 1 - m sn^2.
    """
    m = _check_m(m)
    x = np.asarray(x, dtype=float)
    if m >= 0.0:
        am = _am_agm(x, m)
        sn, cn = np.sin(am), np.cos(am)
        dn = np.sqrt(1.0 - m * sn * sn)
    else:
        mu = -m / (1.0 - m)
        kp = 1.0 / np.sqrt(1.0 - m)
        a1 = _am_agm(x * np.sqrt(1.0 - m), mu)
        s1, c1 = np.sin(a1), np.cos(a1)
        d1 = np.sqrt(1.0 - mu * s1 * s1)
        sn, cn, dn = kp * s1 / d1, c1 / d1, 1.0 / d1
        k = np.round(a1 / np.pi)
        r = a1 - k * np.pi
        am = k * np.pi + np.arctan2(kp * np.sin(r), np.cos(r))
    if x.ndim == 0:
        return float(am), float(sn), float(cn), float(dn)
    return am, sn, cn, dn


def arccn(y, m, tol=1e-14):
    """Principal inverse of cn: the x in [0, K(m)] with cn(x|m) = y, y in [0, 1]."""
    m = _check_m(m)
    y = np.asarray(y, dtype=float)
    if np.any(y < -tol) or np.any(y > 1.0 + tol):
        raise BranchViolation("arccn principal branch needs y in [0, 1]")
    out = ellip_F(np.arccos(np.clip(y, 0.0, 1.0)), m)
    return out


# -- jet versions -------------------------------------------------------------

def ellip_F_jet(phi: Jet2, m) -> Jet2:
    m = _check_m(m)
    s, c = np.sin(phi.value), np.cos(phi.value)
    d2 = 1.0 - m * s * s
    return phi.chain(ellip_F(phi.value, m), d2**-0.5, m * s * c * d2**-1.5)


def ellip_E_jet(phi: Jet2, m) -> Jet2:
    m = _check_m(m)
    s, c = np.sin(phi.value), np.cos(phi.value)
    d2 = 1.0 - m * s * s
    return phi.chain(ellip_E(phi.value, m), np.sqrt(d2), -m * s * c / np.sqrt(d2))


def jacobi_jet(u: Jet2, m):
    """(am, sn, cn, dn) as jets of a jet argument."""
    m = _check_m(m)
    am, sn, cn, dn = jacobi(u.value, m)
    j_am = u.chain(am, dn, -m * sn * cn)
    j_sn = u.chain(sn, cn * dn, -sn * dn * dn - m * sn * cn * cn)
    j_cn = u.chain(cn, -sn * dn, -cn * dn * dn + m * sn * sn * cn)
    j_dn = u.chain(dn, -m * sn * cn, -m * (cn * cn - sn * sn) * dn)
    return j_am, j_sn, j_cn, j_dn


def epsilon_jet(u: Jet2, m) -> Jet2:
    """E(am(u|m) | m) as a jet; its derivative is dn^2."""
    m = _check_m(m)
    am, sn, cn, dn = jacobi(u.value, m)
    return u.chain(ellip_E(am, m), dn * dn, -2.0 * m * sn * cn * dn)


def arccn_jet(y: Jet2, m) -> Jet2:
    """Principal arccn of a jet, via F(arccos y | m)."""
    arccn(y.value, m)  # branch check
    return ellip_F_jet(jets.arccos(y), m)
