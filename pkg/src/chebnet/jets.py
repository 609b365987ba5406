"""Truncated bivariate Taylor arithmetic (second-order jets).

A :class:`Jet2` carries a scalar field together with its partial derivatives
up to order two with respect to the two chart parameters ``p`` and ``q``.
Components may be numpy arrays, in which case every operation acts
elementwise; that is how whole parameter grids are evaluated in one call.

Immersions in this package are written as ordinary Python functions of two
``Jet2`` arguments.  Feeding them :meth:`Jet2.variable` seeds evaluates the
surface together with r_p, r_q, r_pp, r_pq, r_qq at roundoff accuracy;
feeding them other jets performs a reparameterisation by the chain rule.

Third-order information is never available from a jet.  When a derivative of
a derivative is requested (:meth:`Jet2.partial_p`), the unknown second
partials are filled with NaN so that any attempt to use them is visible.
:func:`fd_promote` supplies the one extra order by Richardson-extrapolated
central differences where the verification code needs it.
"""

from __future__ import annotations

import numpy as np

from .errors import StencilOutOfDomain

_FIELDS = ("value", "d_p", "d_q", "d_pp", "d_pq", "d_qq")


def _arr(x):
    return np.asarray(x, dtype=float)


class Jet2:
    """Value plus first and second partials in (p, q); d_pq stored once."""

    __slots__ = _FIELDS
    __array_priority__ = 1000  # keep ndarray * Jet2 dispatching to Jet2

    def __init__(self, value, d_p=0.0, d_q=0.0, d_pp=0.0, d_pq=0.0, d_qq=0.0):
        self.value = _arr(value)
        self.d_p = _arr(d_p)
        self.d_q = _arr(d_q)
        self.d_pp = _arr(d_pp)
        self.d_pq = _arr(d_pq)
        self.d_qq = _arr(d_qq)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, c):
        c = _arr(c)
        z = np.zeros_like(c)
        return cls(c, z, z, z, z, z)

    @classmethod
    def variable(cls, value, axis):
        """Seed jet for the coordinate p (axis 0) or q (axis 1)."""
        v = _arr(value)
        one, z = np.ones_like(v), np.zeros_like(v)
        if axis == 0:
            return cls(v, one, z, z, z, z)
        if axis == 1:
            return cls(v, z, one, z, z, z)
        raise ValueError("axis must be 0 (p) or 1 (q)")

    @classmethod
    def seeds(cls, p, q):
        p, q = np.broadcast_arrays(_arr(p), _arr(q))
        return cls.variable(p, 0), cls.variable(q, 1)

    # -- helpers --------------------------------------------------------------

    def __repr__(self):
        return "Jet2(" + ", ".join(f"{k}={getattr(self, k)!r}" for k in _FIELDS) + ")"

    @property
    def gradient(self):
        return np.stack([self.d_p, self.d_q])

    @property
    def hessian(self):
        return np.stack([np.stack([self.d_pp, self.d_pq]),
                         np.stack([self.d_pq, self.d_qq])])

    def partial_p(self):
        """The jet of d/dp; its second partials are unknown (NaN)."""
        nan = np.full_like(self.value, np.nan)
        return Jet2(self.d_p, self.d_pp, self.d_pq, nan, nan, nan)

    def partial_q(self):
        nan = np.full_like(self.value, np.nan)
        return Jet2(self.d_q, self.d_pq, self.d_qq, nan, nan, nan)

    def chain(self, f0, f1, f2):
        """Compose with a scalar function given f, f', f'' at ``self.value``."""
        u = self
        return Jet2(
            f0,
            f1 * u.d_p,
            f1 * u.d_q,
            f2 * u.d_p * u.d_p + f1 * u.d_pp,
            f2 * u.d_p * u.d_q + f1 * u.d_pq,
            f2 * u.d_q * u.d_q + f1 * u.d_qq,
        )

    def is_finite(self):
        return all(np.all(np.isfinite(getattr(self, k))) for k in _FIELDS)

    def __getitem__(self, idx):
        return Jet2(*(getattr(self, k)[idx] for k in _FIELDS))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(*(getattr(self, k) + getattr(other, k) for k in _FIELDS))
        return Jet2(self.value + other, self.d_p, self.d_q, self.d_pp, self.d_pq, self.d_qq)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(*(-getattr(self, k) for k in _FIELDS))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            u, v = self, other
            return Jet2(
                u.value * v.value,
                u.d_p * v.value + u.value * v.d_p,
                u.d_q * v.value + u.value * v.d_q,
                u.d_pp * v.value + 2.0 * u.d_p * v.d_p + u.value * v.d_pp,
                u.d_pq * v.value + u.d_p * v.d_q + u.d_q * v.d_p + u.value * v.d_pq,
                u.d_qq * v.value + 2.0 * u.d_q * v.d_q + u.value * v.d_qq,
            )
        if isinstance(other, Jet2Vec3):
            return NotImplemented
        c = _arr(other)
        return Jet2(*(getattr(self, k) * c for k in _FIELDS))

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        return self.chain(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return self * (1.0 / _arr(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, a):
        if isinstance(a, Jet2):
            return exp(a * log(self))
        if a == 2:
            return self * self
        v = self.value
        return self.chain(v**a, a * v ** (a - 1), a * (a - 1) * v ** (a - 2))


# -- elementary functions -----------------------------------------------------
# Each accepts a Jet2 or a plain number/array (falls back to numpy).

def _unary(name, f0, f1, f2):
    def fn(u):
        if not isinstance(u, Jet2):
            return f0(_arr(u))
        x = u.value
        return u.chain(f0(x), f1(x), f2(x))
    fn.__name__ = name
    return fn


sin = _unary("sin", np.sin, np.cos, lambda x: -np.sin(x))
cos = _unary("cos", np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))
tan = _unary("tan", np.tan, lambda x: 1.0 / np.cos(x) ** 2,
             lambda x: 2.0 * np.tan(x) / np.cos(x) ** 2)
sinh = _unary("sinh", np.sinh, np.cosh, np.sinh)
cosh = _unary("cosh", np.cosh, np.sinh, np.cosh)
tanh = _unary("tanh", np.tanh, lambda x: 1.0 / np.cosh(x) ** 2,
              lambda x: -2.0 * np.tanh(x) / np.cosh(x) ** 2)
exp = _unary("exp", np.exp, np.exp, np.exp)
log = _unary("log", np.log, lambda x: 1.0 / x, lambda x: -1.0 / x**2)
sqrt = _unary("sqrt", np.sqrt, lambda x: 0.5 / np.sqrt(x), lambda x: -0.25 / x**1.5)
arctan = _unary("arctan", np.arctan, lambda x: 1.0 / (1.0 + x * x),
                lambda x: -2.0 * x / (1.0 + x * x) ** 2)
arcsin = _unary("arcsin", np.arcsin, lambda x: 1.0 / np.sqrt(1.0 - x * x),
                lambda x: x / (1.0 - x * x) ** 1.5)
arccos = _unary("arccos", np.arccos, lambda x: -1.0 / np.sqrt(1.0 - x * x),
                lambda x: -x / (1.0 - x * x) ** 1.5)
arcosh = _unary("arcosh", np.arccosh, lambda x: 1.0 / np.sqrt(x * x - 1.0),
                lambda x: -x / (x * x - 1.0) ** 1.5)
artanh = _unary("artanh", np.arctanh, lambda x: 1.0 / (1.0 - x * x),
                lambda x: 2.0 * x / (1.0 - x * x) ** 2)


def absolute(u):
    if not isinstance(u, Jet2):
        return np.abs(u)
    return u * np.sign(u.value)


def arctan2(y, x):
    """Two-argument arctangent of jets; derivatives from whichever of
    arctan(y/x), -arctan(x/y) is better conditioned at each point."""
    if not isinstance(y, Jet2) and not isinstance(x, Jet2):
        return np.arctan2(y, x)
    if not isinstance(y, Jet2):
        y = Jet2.constant(np.broadcast_to(_arr(y), x.value.shape))
    if not isinstance(x, Jet2):
        x = Jet2.constant(np.broadcast_to(_arr(x), y.value.shape))
    with np.errstate(divide="ignore", invalid="ignore"):
        a = arctan(y / x)
        b = -arctan(x / y)
    use_a = np.abs(x.value) >= np.abs(y.value)
    val = np.arctan2(y.value, x.value)
    parts = [np.where(use_a, getattr(a, k), getattr(b, k)) for k in _FIELDS[1:]]
    return Jet2(val, *parts)


# -- vectors of jets ----------------------------------------------------------

class Jet2Vec3:
    """A point of 3-space with all partials up to order two."""

    __slots__ = ("x", "y", "z")
    __array_priority__ = 1000

    def __init__(self, x, y, z):
        self.x, self.y, self.z = (c if isinstance(c, Jet2) else Jet2.constant(c)
                                  for c in (x, y, z))

    @classmethod
    def constant(cls, v):
        v = _arr(v)
        return cls(Jet2.constant(v[0]), Jet2.constant(v[1]), Jet2.constant(v[2]))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __repr__(self):
        return f"Jet2Vec3(value={self.value!r})"

    def _stack(self, name):
        return np.stack([getattr(c, name) for c in self])

    value = property(lambda self: self._stack("value"))
    d_p = property(lambda self: self._stack("d_p"))
    d_q = property(lambda self: self._stack("d_q"))
    d_pp = property(lambda self: self._stack("d_pp"))
    d_pq = property(lambda self: self._stack("d_pq"))
    d_qq = property(lambda self: self._stack("d_qq"))

    def map(self, fn):
        return Jet2Vec3(*(fn(c) for c in self))

    def partial_p(self):
        return self.map(Jet2.partial_p)

    def partial_q(self):
        return self.map(Jet2.partial_q)

    def is_finite(self):
        return all(c.is_finite() for c in self)

    def __getitem__(self, idx):
        return self.map(lambda c: c[idx])

    def __add__(self, other):
        if isinstance(other, Jet2Vec3):
            return Jet2Vec3(self.x + other.x, self.y + other.y, self.z + other.z)
        o = _arr(other)
        return Jet2Vec3(self.x + o[0], self.y + o[1], self.z + o[2])

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, s):
        return self.map(lambda c: c * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        if isinstance(s, Jet2):
            r = s.reciprocal()
            return self.map(lambda c: c * r)
        return self.map(lambda c: c / s)

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        a, b = self, other
        return Jet2Vec3(a.y * b.z - a.z * b.y,
                        a.z * b.x - a.x * b.z,
                        a.x * b.y - a.y * b.x)

    def norm(self):
        return sqrt(self.dot(self))


def triple(u, v, w):
    """Triple product [u, v, w] = (u x v) . w for jets or plain 3-vectors."""
    if isinstance(u, Jet2Vec3):
        return u.cross(v).dot(w)
    return np.einsum("i...,i...->...", np.cross(u, v, axis=0), w)


# -- finite-difference promotion ----------------------------------------------

def fd_promote(field, p, q, step, domain=None):
    """Gradient and Hessian of a scalar (or array-valued) field by central
    differences at ``step`` and ``2*step`` combined by Richardson
    extrapolation; truncation error O(step**4).

    ``field(p, q)`` must accept numpy arrays.  Returns ``(grad, hess)`` with
    shapes ``(2, *s)`` and ``(2, 2, *s)`` where ``s`` is the field's shape.
    ``domain`` is an optional ``((p_min, p_max), (q_min, q_max))`` rectangle
    that the 5x5 stencil must not leave.
    """
    p = _arr(p)
    q = _arr(q)
    h = float(step)
    if domain is not None:
        (p0, p1), (q0, q1) = domain
        if (np.any(p - 2 * h < p0) or np.any(p + 2 * h > p1)
                or np.any(q - 2 * h < q0) or np.any(q + 2 * h > q1)):
            raise StencilOutOfDomain("5x5 stencil leaves the parameter domain")

    offs = (-2, -1, 1, 2)
    f0 = _arr(field(p, q))
    fp = {k: _arr(field(p + k * h, q)) for k in offs}
    fq = {k: _arr(field(p, q + k * h)) for k in offs}
    fd = {(a, b): _arr(field(p + a * h, q + b * h))
          for a in (-2, -1, 1, 2) for b in (-2, -1, 1, 2) if abs(a) == abs(b)}

    def rich(d1, d2):
        return (4.0 * d1 - d2) / 3.0

    gp = rich((fp[1] - fp[-1]) / (2 * h), (fp[2] - fp[-2]) / (4 * h))
    gq = rich((fq[1] - fq[-1]) / (2 * h), (fq[2] - fq[-2]) / (4 * h))
    hpp = rich((fp[1] - 2 * f0 + fp[-1]) / h**2, (fp[2] - 2 * f0 + fp[-2]) / (4 * h**2))
    hqq = rich((fq[1] - 2 * f0 + fq[-1]) / h**2, (fq[2] - 2 * f0 + fq[-2]) / (4 * h**2))
    m1 = (fd[1, 1] - fd[1, -1] - fd[-1, 1] + fd[-1, -1]) / (4 * h**2)
    m2 = (fd[2, 2] - fd[2, -2] - fd[-2, 2] + fd[-2, -2]) / (16 * h**2)
    hpq = rich(m1, m2)
    grad = np.stack([gp, gq])
    hess = np.stack([np.stack([hpp, hpq]), np.stack([hpq, hqq])])
    return grad, hess


def fd_gradient(field, p, q, step):
    """First derivatives only (4 evaluations per axis), O(step**4)."""
    p = _arr(p)
    q = _arr(q)
    h = float(step)

    def d(g):
        return (8.0 * (g(1) - g(-1)) - (g(2) - g(-2))) / (12.0 * h)

    gp = d(lambda k: _arr(field(p + k * h, q)))
    gq = d(lambda k: _arr(field(p, q + k * h)))
    return np.stack([gp, gq])
