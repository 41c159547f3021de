import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duplexqm import algebra2d as a2
from duplexqm.algebra2d import COMPLEX, DUPLEX, AlgebraSignature2D, Element2D, Kind
from duplexqm.errors import NullNorm, OutOfCone, SignatureMismatch

coef = st.floats(-10, 10, allow_nan=False)
sigs = st.builds(AlgebraSignature2D, st.floats(-5, 5), st.floats(-5, 5))


def D(a, b):
    return Element2D(DUPLEX, a, b)


def C(a, b):
    return Element2D(COMPLEX, a, b)


def test_duplex_null_elements_are_zero_divisors():
    assert a2.mul(D(1, 1), D(1, -1)).as_tuple() == (0, 0)


def test_complex_unit_squares_to_minus_one():
    assert a2.mul(C(0, 1), C(0, 1)).as_tuple() == (-1, 0)


def test_idempotent_unit():
    sig = a2.IDEMPOTENT
    a = a2.unit(sig)
    assert (a * a).as_tuple() == (0, 1)


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        a2.mul(D(1, 0), C(1, 0))


def test_conj_examples():
    assert a2.conj(D(2, 3)).as_tuple() == (2, -3)
    assert a2.conj(a2.gamma()) == a2.gamma_bar()


@given(sigs, coef, coef)
def test_conj_involution(sig, c0, c1):
    x = Element2D(sig, c0, c1)
    assert a2.conj(a2.conj(x)).isclose(x, 1e-9)


@given(sigs, coef, coef)
def test_x_times_conj_is_scalar(sig, c0, c1):
    x = Element2D(sig, c0, c1)
    p = x * a2.conj(x)
    assert abs(p.c1) <= 1e-9 * (1 + abs(c0) + abs(c1)) ** 2 * (1 + abs(sig.beta) + abs(sig.alpha))
    assert p.c0 == pytest.approx(a2.norm_sq(x), abs=1e-8 * (1 + c0 * c0 + c1 * c1) * (1 + abs(sig.alpha) + abs(sig.beta)))


def test_norm_sq_examples():
    assert a2.norm_sq(D(2, 1)) == 3
    assert a2.norm_sq(D(1, 1)) == 0
    assert a2.norm_sq(C(3, 4)) == 25


def test_inverse_examples():
    with pytest.raises(NullNorm):
        a2.inverse(D(1, 1))
    assert a2.inverse(a2.one(DUPLEX)).as_tuple() == (1, 0)
    inv = a2.inverse(D(2, 1))
    assert inv.isclose(D(2 / 3, -1 / 3), 1e-15)


@given(st.sampled_from([COMPLEX, DUPLEX]), coef, coef)
def test_inverse_round_trip(sig, c0, c1):
    x = Element2D(sig, c0, c1)
    n = a2.norm_sq(x)
    if abs(n) < 1e-3 * (c0 * c0 + c1 * c1) or c0 * c0 + c1 * c1 < 1e-6:
        return
    y = x * a2.inverse(x)
    cond = (c0 * c0 + c1 * c1) / abs(n)
    assert abs(y.c0 - 1) <= 8 * np.finfo(float).eps * cond
    assert abs(y.c1) <= 8 * np.finfo(float).eps * cond


def test_exact_arithmetic_with_fractions():
    sig = AlgebraSignature2D(Fraction(3, 7), Fraction(-2, 5))
    x = Element2D(sig, Fraction(1, 3), Fraction(2, 9))
    inv = a2.inverse(x)
    assert (x * inv).as_tuple() == (1, 0)


def test_exp_polar_examples():
    assert a2.exp_polar(DUPLEX, 0, 0).as_tuple() == (1, 0)
    z = a2.exp_polar(COMPLEX, math.log(2), math.pi)
    assert z.isclose(C(-2, 0), 1e-15)


@given(st.sampled_from([COMPLEX, DUPLEX]), st.floats(-5, 5), st.floats(-5, 5))
def test_de_moivre(sig, p1, p2):
    lhs = a2.exp_polar(sig, 0, p1) * a2.exp_polar(sig, 0, p2)
    rhs = a2.exp_polar(sig, 0, p1 + p2)
    scale = max(1.0, abs(rhs.c0))
    assert lhs.isclose(rhs, 1e-12 * scale)


def test_polar_decompose_examples():
    R, S = a2.polar_decompose(D(math.cosh(1), math.sinh(1)))
    assert R == pytest.approx(0, abs=1e-15) and S == pytest.approx(1, abs=1e-15)
    with pytest.raises(OutOfCone):
        a2.polar_decompose(D(1, 1))
    with pytest.raises(OutOfCone):
        a2.polar_decompose(D(-2, 1))
    assert a2.polar_decompose(C(-1, 0)) == (0.0, math.pi)
    assert a2.polar_decompose(C(-1, -0.0))[1] == math.pi


@given(st.sampled_from([COMPLEX, DUPLEX, a2.DUAL, AlgebraSignature2D(2, 1), AlgebraSignature2D(-3, 1)]),
       st.floats(-3, 3), st.floats(-3, 3))
def test_polar_round_trip(sig, R, S):
    c = a2.classify(sig)
    if c.kind is Kind.ELLIPTIC and abs(S * c.scale) >= 3.1:
        return  # phase is principal in the canonical frame
    R2, S2 = a2.polar_decompose(a2.exp_polar(sig, R, S))
    assert R2 == pytest.approx(R, abs=1e-12)
    assert S2 == pytest.approx(S, abs=1e-11)


@pytest.mark.parametrize("sig,kind,f", [
    ((-1, 0), Kind.ELLIPTIC, (0, 1)),
    ((0, 1), Kind.HYPERBOLIC, (-1, 2)),
    ((-0.25, 1), Kind.PARABOLIC, (-0.5, 1)),
    ((1, 0), Kind.HYPERBOLIC, (0, 1)),
])
def test_classify_examples(sig, kind, f):
    c = a2.classify(AlgebraSignature2D(*sig))
    assert c.kind is kind
    assert c.f.as_tuple() == pytest.approx(f)
    expect = {Kind.ELLIPTIC: -1, Kind.HYPERBOLIC: 1, Kind.PARABOLIC: 0}[kind]
    assert c.f_squared.as_tuple() == pytest.approx((expect, 0), abs=1e-15)


@settings(max_examples=300)
@given(st.fractions(-20, 20, max_denominator=50), st.fractions(-20, 20, max_denominator=50))
def test_unnormalized_f_squares_to_discriminant_exactly(alpha, beta):
    sig = AlgebraSignature2D(alpha, beta)
    g = 2 * a2.unit(sig) - beta
    assert (g * g).as_tuple() == (sig.discriminant, 0)


@given(sigs, coef, coef, coef, coef)
def test_classification_is_an_isomorphism(sig, x0, x1, y0, y1):
    c = a2.classify(sig)
    x, y = Element2D(sig, x0, x1), Element2D(sig, y0, y1)
    lhs = c.to_canonical(x * y)
    rhs = c.to_canonical(x) * c.to_canonical(y)
    assert lhs.isclose(rhs, 1e-8 * (1 + abs(lhs.c0) + abs(lhs.c1)))
    assert c.from_canonical(c.to_canonical(x)).isclose(x, 1e-9 * (1 + abs(x0) + abs(x1)))


@given(sigs, coef, coef, coef, coef)
def test_conj_is_multiplicative(sig, x0, x1, y0, y1):
    x, y = Element2D(sig, x0, x1), Element2D(sig, y0, y1)
    lhs = a2.conj(x * y)
    rhs = a2.conj(x) * a2.conj(y)
    assert lhs.isclose(rhs, 1e-8 * (1 + abs(lhs.c0) + abs(lhs.c1)))


def test_isotropic_examples():
    assert a2.to_isotropic(a2.one(DUPLEX)) == a2.IsotropicPair(1, 1)
    assert a2.to_isotropic(a2.unit(DUPLEX)) == a2.IsotropicPair(1, -1)
    g, gb = a2.gamma(), a2.gamma_bar()
    assert g * g == g and gb * gb == gb
    assert (g * gb).as_tuple() == (0, 0)


@given(coef, coef, coef, coef)
def test_isotropic_multiplication_is_componentwise(x0, x1, y0, y1):
    x, y = D(x0, x1), D(y0, y1)
    oracle = a2.to_isotropic(x * y)
    got = a2.to_isotropic(x) * a2.to_isotropic(y)
    tol = 1e-12 * (1 + abs(oracle.gamma_coeff) + abs(oracle.gamma_bar_coeff))
    assert got.gamma_coeff == pytest.approx(oracle.gamma_coeff, abs=tol)
    assert got.gamma_bar_coeff == pytest.approx(oracle.gamma_bar_coeff, abs=tol)
    assert a2.from_isotropic(a2.to_isotropic(x)).isclose(x, 1e-12 * (1 + abs(x0) + abs(x1)))
    assert a2.to_isotropic(x).norm_sq() == pytest.approx(a2.norm_sq(x), abs=1e-10 * (1 + x0 * x0 + x1 * x1))


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(1)
    for sig in (COMPLEX, DUPLEX, AlgebraSignature2D(0.3, -1.2)):
        x = rng.normal(size=(20, 2))
        y = rng.normal(size=(20, 2))
        z = a2.mul_coeffs(sig, x, y)
        for k in range(20):
            e = Element2D(sig, *x[k]) * Element2D(sig, *y[k])
            assert z[k] == pytest.approx(e.as_tuple(), abs=1e-14)
        R, S = rng.normal(size=20), rng.normal(size=20)
        ep = a2.exp_polar_coeffs(sig, R, S)
        for k in range(20):
            assert ep[k] == pytest.approx(a2.exp_polar(sig, R[k], S[k]).as_tuple(), rel=1e-13)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20))
def test_isotropic_exp_and_sum(R, S, S2):
    z = a2.IsotropicPair.exp_polar(R, S)
    assert z.gamma_coeff == pytest.approx(math.exp(R + S), rel=1e-14)
    assert z.gamma_bar_coeff == pytest.approx(math.exp(R - S), rel=1e-14)
    # agrees with the cosh/sinh form wherever that form does not cancel
    ref = a2.to_isotropic(a2.exp_polar(DUPLEX, R, S))
    big = ref.gamma_coeff if S > 0 else ref.gamma_bar_coeff
    assert max(z.gamma_coeff, z.gamma_bar_coeff) == pytest.approx(big, rel=1e-12)
    assert z.norm_sq() == pytest.approx(math.exp(2 * R), rel=1e-14)
    w = z + a2.IsotropicPair.exp_polar(R, S2)
    # the norm of a two-term sum stays accurate at any hyperbolic angle
    assert w.norm_sq() == pytest.approx(math.exp(2 * R) * (2 + 2 * math.cosh(S - S2)), rel=1e-13)
