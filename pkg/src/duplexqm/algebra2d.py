"""Two-dimensional unital algebras span{1, a} with a^2 = alpha + beta*a.

The complex numbers are signature (-1, 0), the duplex (hyperbolic,
split-complex) numbers are (+1, 0).  Every other signature is isomorphic
to one of these or to the parabolic (dual-number) case, see `classify`.

Elements are stored as coefficient pairs (c0, c1) meaning c0 + c1*a.
Scalar arithmetic is written without float coercion so exact types such
as `fractions.Fraction` pass through unchanged.  The ``*_coeffs``
functions are the vectorized counterparts acting on arrays whose last
axis has length 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NullNorm, OutOfCone, SignatureMismatch

DEFAULT_NULL_EPS = 1e-14


@dataclass(frozen=True)
class AlgebraSignature2D:
    alpha: float
    beta: float

    @property
    def discriminant(self):
        return self.beta * self.beta + 4 * self.alpha

    @property
    def is_canonical(self):
        return self.beta == 0 and self.alpha in (-1, 0, 1)

    def __str__(self):
        return f"({self.alpha}, {self.beta})"


COMPLEX = AlgebraSignature2D(-1, 0)
DUPLEX = AlgebraSignature2D(1, 0)
DUAL = AlgebraSignature2D(0, 0)
IDEMPOTENT = AlgebraSignature2D(0, 1)


def _mul(alpha, beta, x0, x1, y0, y1):
    return (x0 * y0 + alpha * x1 * y1, x0 * y1 + x1 * y0 + beta * x1 * y1)


def _norm_sq(alpha, beta, c0, c1):
    if alpha == 1 and beta == 0:
        # light-cone factorization; avoids cancellation in c0^2 - c1^2
        return (c0 - c1) * (c0 + c1)
    return c0 * c0 + beta * c0 * c1 - alpha * c1 * c1


@dataclass(frozen=True)
class Element2D:
    sig: AlgebraSignature2D
    c0: float = 0
    c1: float = 0

    def _check(self, other):
        if not isinstance(other, Element2D):
            return False
        if other.sig != self.sig:
            raise SignatureMismatch(f"signature {self.sig} vs {other.sig}")
        return True

    def __add__(self, other):
        if self._check(other):
            return Element2D(self.sig, self.c0 + other.c0, self.c1 + other.c1)
        return Element2D(self.sig, self.c0 + other, self.c1)

    __radd__ = __add__

    def __neg__(self):
        return Element2D(self.sig, -self.c0, -self.c1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._check(other):
            return mul(self, other)
        return Element2D(self.sig, self.c0 * other, self.c1 * other)

    def __rmul__(self, other):
        return Element2D(self.sig, other * self.c0, other * self.c1)

    def __truediv__(self, other):
        if isinstance(other, Element2D):
            return self * inverse(other)
        return Element2D(self.sig, self.c0 / other, self.c1 / other)

    def conj(self):
        return conj(self)

    def norm_sq(self):
        return norm_sq(self)

    def as_tuple(self):
        return (self.c0, self.c1)

    def isclose(self, other, tol=1e-12):
        self._check(other)
        return abs(self.c0 - other.c0) <= tol and abs(self.c1 - other.c1) <= tol


def one(sig):
    return Element2D(sig, 1, 0)


def unit(sig):
    """The generator a itself."""
    return Element2D(sig, 0, 1)


def mul(x: Element2D, y: Element2D) -> Element2D:
    if x.sig != y.sig:
        raise SignatureMismatch(f"signature {x.sig} vs {y.sig}")
    s = x.sig
    return Element2D(s, *_mul(s.alpha, s.beta, x.c0, x.c1, y.c0, y.c1))


def conj(x: Element2D) -> Element2D:
    """Conjugate: the reflection f -> -f of the canonical unit, pulled back.

    With a = beta/2 + (scale) f this gives conj(c0 + c1 a) = (c0 + beta c1) - c1 a,
    which reduces to c0 - c1 a whenever beta = 0.
    """
    return Element2D(x.sig, x.c0 + x.sig.beta * x.c1, -x.c1)


def norm_sq(x: Element2D):
    """Scalar part of x * conj(x); the product is always purely scalar."""
    return _norm_sq(x.sig.alpha, x.sig.beta, x.c0, x.c1)


def inverse(x: Element2D, eps: float = DEFAULT_NULL_EPS) -> Element2D:
    n = norm_sq(x)
    scale = x.c0 * x.c0 + x.c1 * x.c1
    if scale == 0 or abs(n) <= eps * scale:
        raise NullNorm(f"element {x.as_tuple()} lies on the null cone of {x.sig}")
    c = conj(x)
    return Element2D(x.sig, c.c0 / n, c.c1 / n)


def is_invertible(x: Element2D, eps: float = DEFAULT_NULL_EPS) -> bool:
    try:
        inverse(x, eps)
    except NullNorm:
        return False
    return True


class Kind(str, Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"


@dataclass(frozen=True)
class Classification:
    """Result of `classify`.

    ``f`` is the canonical unit expressed in the original basis {1, a};
    the inverse change of basis is ``a = shift + scale * f``.
    """

    kind: Kind
    f: Element2D
    f_squared: Element2D
    shift: float
    scale: float

    @property
    def canonical(self) -> AlgebraSignature2D:
        return {Kind.ELLIPTIC: COMPLEX, Kind.HYPERBOLIC: DUPLEX, Kind.PARABOLIC: DUAL}[self.kind]

    def to_canonical(self, x: Element2D) -> Element2D:
        # c0 + c1 a = (c0 + c1 shift) + c1 scale f
        return Element2D(self.canonical, x.c0 + x.c1 * self.shift, x.c1 * self.scale)

    def from_canonical(self, y: Element2D) -> Element2D:
        c1 = y.c1 / self.scale
        return Element2D(self.f.sig, y.c0 - c1 * self.shift, c1)


def classify(sig: AlgebraSignature2D) -> Classification:
    """Map span{1, a} onto the complex, duplex or dual-number case.

    f = (2a - beta)/sqrt|D| with D = beta^2 + 4 alpha, so that f^2 = sgn(D);
    for D = 0 the nilpotent f = a - beta/2 is returned instead.
    """
    d = sig.discriminant
    if d == 0:
        kind = Kind.PARABOLIC
        f = Element2D(sig, -sig.beta / 2, 1)
        shift, scale = sig.beta / 2, 1
    else:
        kind = Kind.ELLIPTIC if d < 0 else Kind.HYPERBOLIC
        s = math.sqrt(abs(d))
        f = Element2D(sig, -sig.beta / s, 2 / s)
        shift, scale = sig.beta / 2, s / 2
    return Classification(kind, f, mul(f, f), shift, scale)


def exp_polar(sig: AlgebraSignature2D, R, S) -> Element2D:
    """e^(R + a S).

    complex: e^R (cos S + i sin S); duplex: e^R (cosh S + I sinh S);
    dual (f^2 = 0): e^R (1 + f S).  Non-canonical signatures go through
    `classify`.
    """
    c0, c1 = exp_polar_coeffs(sig, R, S)
    return Element2D(sig, float(c0), float(c1))


def polar_decompose(x: Element2D) -> tuple[float, float]:
    """Inverse of `exp_polar` on its principal domain.

    Complex phases are principal, in (-pi, pi].  Duplex elements must lie
    in the positive cone (norm > 0 and c0 > 0), otherwise `OutOfCone`.
    """
    sig = x.sig
    if not sig.is_canonical:
        cl = classify(sig)
        R, S = polar_decompose(cl.to_canonical(x))
        S = S / cl.scale
        return R - cl.shift * S, S
    if sig == COMPLEX:
        if x.c0 == 0 and x.c1 == 0:
            raise OutOfCone("zero has no polar form")
        S = math.atan2(x.c1, x.c0)
        if S == -math.pi:
            S = math.pi
        return math.log(math.hypot(x.c0, x.c1)), S
    if sig == DUPLEX:
        n = norm_sq(x)
        if n <= 0 or x.c0 <= 0:
            raise OutOfCone(f"duplex element {x.as_tuple()} outside the positive cone")
        return 0.5 * math.log(n), math.atanh(x.c1 / x.c0)
    if sig == DUAL:
        if x.c0 <= 0:
            raise OutOfCone(f"dual element {x.as_tuple()} has non-positive scalar part")
        return math.log(x.c0), x.c1 / x.c0
    raise OutOfCone(f"no polar form for signature {sig}")


@dataclass(frozen=True)
class IsotropicPair:
    """Duplex coordinates in the idempotent basis gamma = (1+I)/2, gamma_bar = (1-I)/2."""

    gamma_coeff: float
    gamma_bar_coeff: float

    @classmethod
    def exp_polar(cls, R, S):
        """exp(R + I S) = exp(R + S) gamma + exp(R - S) gamma_bar; works on arrays too."""
        return cls(np.exp(np.add(R, S)), np.exp(np.subtract(R, S)))

    def __add__(self, other):
        return IsotropicPair(self.gamma_coeff + other.gamma_coeff,
                             self.gamma_bar_coeff + other.gamma_bar_coeff)

    def __mul__(self, other):
        return IsotropicPair(self.gamma_coeff * other.gamma_coeff,
                             self.gamma_bar_coeff * other.gamma_bar_coeff)

    def conj(self):
        return IsotropicPair(self.gamma_bar_coeff, self.gamma_coeff)

    def norm_sq(self):
        return self.gamma_coeff * self.gamma_bar_coeff


def gamma() -> Element2D:
    return Element2D(DUPLEX, 0.5, 0.5)


def gamma_bar() -> Element2D:
    return Element2D(DUPLEX, 0.5, -0.5)


def to_isotropic(x: Element2D) -> IsotropicPair:
    if x.sig != DUPLEX:
        raise SignatureMismatch("isotropic coordinates exist only for the duplex algebra")
    return IsotropicPair(x.c0 + x.c1, x.c0 - x.c1)


def from_isotropic(p: IsotropicPair) -> Element2D:
    u, v = p.gamma_coeff, p.gamma_bar_coeff
    return Element2D(DUPLEX, (u + v) / 2, (u - v) / 2)


# -- vectorized coefficient arrays, last axis = (c0, c1) --------------------

def mul_coeffs(sig: AlgebraSignature2D, x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    z0, z1 = _mul(sig.alpha, sig.beta, x[..., 0], x[..., 1], y[..., 0], y[..., 1])
    return np.stack(np.broadcast_arrays(z0, z1), axis=-1)


def conj_coeffs(sig: AlgebraSignature2D, x):
    x = np.asarray(x)
    return np.stack([x[..., 0] + sig.beta * x[..., 1], -x[..., 1]], axis=-1)


def norm_sq_coeffs(sig: AlgebraSignature2D, x):
    x = np.asarray(x)
    return _norm_sq(sig.alpha, sig.beta, x[..., 0], x[..., 1])


def exp_polar_coeffs(sig: AlgebraSignature2D, R, S):
    R, S = np.broadcast_arrays(np.asarray(R, dtype=float), np.asarray(S, dtype=float))
    if sig == COMPLEX:
        amp = np.exp(R)
        return np.stack([amp * np.cos(S), amp * np.sin(S)], axis=-1)
    if sig == DUPLEX:
        amp = np.exp(R)
        return np.stack([amp * np.cosh(S), amp * np.sinh(S)], axis=-1)
    if sig == DUAL:
        amp = np.exp(R)
        return np.stack([amp, amp * S], axis=-1)
    cl = classify(sig)
    can = exp_polar_coeffs(cl.canonical, R + cl.shift * S, cl.scale * S)
    c1 = can[..., 1] / cl.scale
    return np.stack([can[..., 0] - c1 * cl.shift, c1], axis=-1)
