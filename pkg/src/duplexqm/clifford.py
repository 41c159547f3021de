"""Clifford algebras R_{p,q} with dense, bitmask-indexed coefficients.

Generators follow the convention v v = -g(v, v) with g = diag(+1 x p, -1 x q),
so e_i^2 = -1 for i <= p and e_i^2 = +1 for i > p.  R_{1,0} is then the
complex numbers, R_{0,1} the duplex numbers and R_{2,0} the quaternions.

Blade e_A is stored at index ``mask(A)`` where bit i-1 is set iff i is in A.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np

from .errors import SignatureMismatch

MAX_DIM = 8


@dataclass(frozen=True)
class CliffordSignature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("p and q must be non-negative")
        if self.p + self.q > MAX_DIM:
            raise ValueError(f"n = p + q must not exceed {MAX_DIM}")

    @property
    def n(self):
        return self.p + self.q

    @property
    def dim(self):
        return 1 << self.n

    def generator_square(self, i: int) -> int:
        """e_i^2 for the 1-based generator index i."""
        return -1 if i <= self.p else 1


def mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise ValueError("generator indices are 1-based")
        bit = 1 << (i - 1)
        if m & bit:
            raise ValueError(f"repeated index {i} in blade")
        m |= bit
    return m


def indices(m: int) -> tuple[int, ...]:
    out = []
    i = 1
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def grade(m: int) -> int:
    return bin(m).count("1")


def blade_name(m: int) -> str:
    return "1" if m == 0 else "e" + "".join(str(i) for i in indices(m))


def _reorder_sign(a: int, b: int) -> int:
    # number of pairs (i in a, j in b) with i > j = transpositions to sort a||b
    swaps = 0
    a >>= 1
    while a:
        swaps += grade(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def _blade_product_masks(a: int, b: int, sig: CliffordSignature) -> tuple[int, int]:
    sign = _reorder_sign(a, b)
    common = a & b
    for i in indices(common):
        sign *= sig.generator_square(i)
    return sign, a ^ b


def blade_product(A, B, sig: CliffordSignature) -> tuple[int, frozenset]:
    """e_A e_B = sign * e_C with C the symmetric difference of A and B.

    ``A`` and ``B`` are collections of 1-based generator indices.
    """
    sign, c = _blade_product_masks(mask(A), mask(B), sig)
    return sign, frozenset(indices(c))


@lru_cache(maxsize=None)
def _tables(sig: CliffordSignature):
    d = sig.dim
    signs = np.empty((d, d), dtype=np.int8)
    for a in range(d):
        for b in range(d):
            signs[a, b] = _blade_product_masks(a, b, sig)[0]
    signs.setflags(write=False)
    grades = np.array([grade(m) for m in range(d)])
    grades.setflags(write=False)
    return signs, grades


def sign_table(sig: CliffordSignature) -> np.ndarray:
    """signs[a, b] such that e_a e_b = signs[a, b] e_(a xor b)."""
    return _tables(sig)[0]


def mv_mul_coeffs(sig: CliffordSignature, x, y) -> np.ndarray:
    """Geometric product of coefficient arrays with trailing axis of length 2^n."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = sig.dim
    signs = sign_table(sig)
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = np.zeros(shape, dtype=float)
    ks = np.arange(d)
    for a in range(d):
        js = a ^ ks
        # e_a e_(a^k) lands on e_k
        out += signs[a, js] * x[..., a, None] * y[..., js]
    return out


class CliffordElement:
    """Multivector in R_{p,q}.  Coefficients are a dense float array of length 2^n."""

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: CliffordSignature, coeffs=None):
        self.sig = sig
        if coeffs is None:
            coeffs = np.zeros(sig.dim)
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (sig.dim,):
            raise ValueError(f"expected {sig.dim} coefficients, got shape {coeffs.shape}")
        self.coeffs = coeffs

    @classmethod
    def scalar(cls, sig, value=1.0):
        c = np.zeros(sig.dim)
        c[0] = value
        return cls(sig, c)

    @classmethod
    def blade(cls, sig, idx=(), value=1.0):
        c = np.zeros(sig.dim)
        c[mask(idx)] = value
        return cls(sig, c)

    @classmethod
    def pseudoscalar(cls, sig):
        return cls.blade(sig, range(1, sig.n + 1))

    def __getitem__(self, idx):
        return self.coeffs[mask(idx)]

    def _other(self, other):
        if isinstance(other, CliffordElement):
            if other.sig != self.sig:
                raise SignatureMismatch(f"R_{self.sig.p},{self.sig.q} vs R_{other.sig.p},{other.sig.q}")
            return other
        return CliffordElement.scalar(self.sig, other)

    def __add__(self, other):
        return CliffordElement(self.sig, self.coeffs + self._other(other).coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return CliffordElement(self.sig, self.coeffs - self._other(other).coeffs)

    def __rsub__(self, other):
        return CliffordElement(self.sig, self._other(other).coeffs - self.coeffs)

    def __neg__(self):
        return CliffordElement(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return mv_mul(self, other)
        return CliffordElement(self.sig, self.coeffs * other)

    def __rmul__(self, other):
        return CliffordElement(self.sig, other * self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, CliffordElement) and other.sig == self.sig
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.sig, self.coeffs.tobytes()))

    def allclose(self, other, atol=1e-12):
        return np.allclose(self.coeffs, self._other(other).coeffs, rtol=0, atol=atol)

    def __repr__(self):
        terms = [f"{c:+g}*{blade_name(m)}" for m, c in enumerate(self.coeffs) if c != 0]
        return f"CliffordElement(R_{self.sig.p},{self.sig.q}: {' '.join(terms) or '0'})"


def mv_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    if x.sig != y.sig:
        raise SignatureMismatch(f"R_{x.sig.p},{x.sig.q} vs R_{y.sig.p},{y.sig.q}")
    return CliffordElement(x.sig, mv_mul_coeffs(x.sig, x.coeffs, y.coeffs))


class PseudoscalarSquare(NamedTuple):
    closed_form: int
    direct: int


def pseudoscalar_square(sig: CliffordSignature) -> PseudoscalarSquare:
    """e_I^2 from the closed form (-1)^(n(n-1)/2 + p) and from the product itself."""
    n = sig.n
    closed = -1 if (n * (n - 1) // 2 + sig.p) % 2 else 1
    e = CliffordElement.pseudoscalar(sig)
    sq = mv_mul(e, e).coeffs
    direct = int(sq[0])
    if not (abs(sq[0]) == 1 and np.count_nonzero(sq) == 1):
        raise AssertionError("pseudoscalar square is not a unit scalar")
    if closed != direct:
        raise AssertionError(f"closed form {closed} disagrees with direct product {direct} for {sig}")
    return PseudoscalarSquare(closed, direct)


def grade_signs(sig: CliffordSignature):
    g = _tables(sig)[1]
    involution = np.where(g % 2, -1.0, 1.0)
    reversion = np.where((g * (g - 1) // 2) % 2, -1.0, 1.0)
    return involution, reversion


class Involutions(NamedTuple):
    grade_involution: CliffordElement
    reversion: CliffordElement
    clifford_conjugation: CliffordElement


def involutions(x: CliffordElement) -> Involutions:
    inv, rev = grade_signs(x.sig)
    return Involutions(
        CliffordElement(x.sig, inv * x.coeffs),
        CliffordElement(x.sig, rev * x.coeffs),
        CliffordElement(x.sig, inv * rev * x.coeffs),
    )


def mv_norm_sq(x: CliffordElement) -> float:
    """Scalar part of x * conj(x).

    Multiplicative only on composition subalgebras (complex, duplex,
    quaternion); not a norm on a general R_{p,q}.
    """
    return float(mv_mul(x, involutions(x).clifford_conjugation).coeffs[0])


def inverse_pseudoscalar(sig: CliffordSignature) -> CliffordElement:
    # e_I^{-1} = e_I^2 * e_I since e_I^2 = +-1
    return CliffordElement.pseudoscalar(sig) * pseudoscalar_square(sig).closed_form


# -- quaternion view of R_{2,0}: i = e1, j = e2, k = e1 e2 ------------------

QUATERNIONS = CliffordSignature(2, 0)
_E1, _E2, _E12 = 0b01, 0b10, 0b11


def _require_quaternions(sig):
    if sig != QUATERNIONS:
        raise SignatureMismatch("quaternion split needs R_{2,0}")


def quaternion_split(x: CliffordElement) -> tuple[complex, complex]:
    """x = psi + k phi with psi, phi in span{1, i}.

    Since k i = e1 e2 e1 = e2 = j, the e2 coefficient is Im(phi) and the
    e12 coefficient is Re(phi).
    """
    _require_quaternions(x.sig)
    c = x.coeffs
    return complex(c[0], c[_E1]), complex(c[_E12], c[_E2])


def quaternion_assemble(psi: complex, phi: complex) -> CliffordElement:
    c = np.zeros(4)
    c[0], c[_E1] = psi.real, psi.imag
    c[_E12], c[_E2] = phi.real, phi.imag
    return CliffordElement(QUATERNIONS, c)


def quaternion_split_coeffs(c) -> tuple[np.ndarray, np.ndarray]:
    """Field version of `quaternion_split` on arrays with trailing axis 4."""
    c = np.asarray(c)
    return c[..., 0] + 1j * c[..., _E1], c[..., _E12] + 1j * c[..., _E2]


def quaternion_assemble_coeffs(psi, phi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    out = np.zeros(np.broadcast_shapes(psi.shape, phi.shape) + (4,))
    out[..., 0], out[..., _E1] = psi.real, psi.imag
    out[..., _E12], out[..., _E2] = phi.real, phi.imag
    return out


def multiplication_table(sig: CliffordSignature) -> list[tuple[str, str, str]]:
    """All blade products as (left, right, result) strings, e.g. ('e12', 'e12', '-1')."""
    rows = []
    for a in range(sig.dim):
        for b in range(sig.dim):
            s, c = _blade_product_masks(a, b, sig)
            if c == 0:
                res = "+1" if s > 0 else "-1"
            else:
                res = ("" if s > 0 else "-") + blade_name(c)
            rows.append((blade_name(a), blade_name(b), res))
    return rows
