import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from duplexqm import clifford as cl
from duplexqm.clifford import CliffordElement, CliffordSignature
from duplexqm.errors import SignatureMismatch

ALL_SIGS = [CliffordSignature(p, n - p) for n in range(1, 7) for p in range(n + 1)]


def naive_blade_product(A, B, sig):
    """Bubble sort of the concatenated word, contracting equal neighbours."""
    word = list(A) + list(B)
    sign = 1
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            if word[k] > word[k + 1]:
                word[k], word[k + 1] = word[k + 1], word[k]
                sign = -sign
                changed = True
                break
            if word[k] == word[k + 1]:
                sign *= sig.generator_square(word[k])
                del word[k:k + 2]
                changed = True
                break
    return sign, frozenset(word)


def test_blade_examples():
    q = cl.QUATERNIONS
    assert cl.blade_product({1}, {2}, q) == (1, frozenset({1, 2}))
    assert cl.blade_product({2}, {1}, q) == (-1, frozenset({1, 2}))
    assert cl.blade_product({1, 2}, {1, 2}, q) == (-1, frozenset())
    assert cl.blade_product({1}, {1}, CliffordSignature(0, 1)) == (1, frozenset())
    assert cl.blade_product({1}, {1}, CliffordSignature(1, 0)) == (-1, frozenset())


@pytest.mark.parametrize("sig", [CliffordSignature(p, n - p) for n in range(1, 5) for p in range(n + 1)],
                         ids=lambda s: f"R{s.p}{s.q}")
def test_blade_product_matches_naive_oracle(sig):
    gens = range(1, sig.n + 1)
    blades = [c for r in range(sig.n + 1) for c in itertools.combinations(gens, r)]
    for A in blades:
        for B in blades:
            assert cl.blade_product(A, B, sig) == naive_blade_product(A, B, sig)


@pytest.mark.parametrize("sig", [CliffordSignature(p, n - p) for n in range(1, 5) for p in range(n + 1)],
                         ids=lambda s: f"R{s.p}{s.q}")
def test_associativity_on_basis_blades(sig):
    d = sig.dim
    E = np.eye(d)
    for a in range(d):
        for b in range(d):
            ab = cl.mv_mul_coeffs(sig, E[a], E[b])
            for c in range(d):
                lhs = cl.mv_mul_coeffs(sig, ab, E[c])
                rhs = cl.mv_mul_coeffs(sig, E[a], cl.mv_mul_coeffs(sig, E[b], E[c]))
                assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("sig", ALL_SIGS + [CliffordSignature(p, 7 - p) for p in range(8)],
                         ids=lambda s: f"R{s.p}{s.q}")
def test_pseudoscalar_square_closed_form(sig):
    r = cl.pseudoscalar_square(sig)
    assert r.closed_form == r.direct


def test_pseudoscalar_square_examples():
    assert cl.pseudoscalar_square(CliffordSignature(1, 0)).direct == -1
    assert cl.pseudoscalar_square(CliffordSignature(0, 1)).direct == 1
    assert cl.pseudoscalar_square(CliffordSignature(2, 0)).direct == -1
    assert cl.pseudoscalar_square(CliffordSignature(0, 2)).direct == -1
    assert cl.pseudoscalar_square(CliffordSignature(1, 1)).direct == 1
    assert cl.pseudoscalar_square(CliffordSignature(3, 0)).direct == 1


def test_quaternion_table():
    q = cl.QUATERNIONS
    i, j, k = (CliffordElement.blade(q, b) for b in ((1,), (2,), (1, 2)))
    m1 = CliffordElement.scalar(q, -1)
    assert i * i == m1 and j * j == m1 and k * k == m1
    assert i * j == k and j * k == i and k * i == j
    assert j * i == -k
    assert (i * j * k) == m1


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_k_anticommutes_into_conjugate(z):
    k = CliffordElement.blade(cl.QUATERNIONS, (1, 2))
    zz = cl.quaternion_assemble(z, 0)
    lhs = k * zz
    rhs = cl.quaternion_assemble(z.conjugate(), 0) * k
    assert lhs.allclose(rhs, 1e-12)


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_quaternion_split_round_trip(c):
    x = CliffordElement(cl.QUATERNIONS, c)
    psi, phi = cl.quaternion_split(x)
    k = CliffordElement.blade(cl.QUATERNIONS, (1, 2))
    rebuilt = cl.quaternion_assemble(psi, 0) + k * cl.quaternion_assemble(phi, 0)
    assert rebuilt.allclose(x, 1e-12)
    assert cl.quaternion_assemble(psi, phi) == x
    p2, f2 = cl.quaternion_split_coeffs(np.array([c]))
    assert p2[0] == psi and f2[0] == phi


@given(st.sampled_from([CliffordSignature(p, 3 - p) for p in range(4)]),
       st.lists(st.floats(-3, 3), min_size=8, max_size=8),
       st.lists(st.floats(-3, 3), min_size=8, max_size=8))
def test_involution_properties(sig, a, b):
    x, y = CliffordElement(sig, a), CliffordElement(sig, b)
    inv = cl.involutions
    xy = x * y
    assert inv(xy).grade_involution.allclose(inv(x).grade_involution * inv(y).grade_involution, 1e-10)
    assert inv(xy).reversion.allclose(inv(y).reversion * inv(x).reversion, 1e-10)
    assert inv(xy).clifford_conjugation.allclose(
        inv(y).clifford_conjugation * inv(x).clifford_conjugation, 1e-10)
    assert inv(inv(x).reversion).reversion == x


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_quaternion_norm_is_multiplicative(a, b):
    x, y = CliffordElement(cl.QUATERNIONS, a), CliffordElement(cl.QUATERNIONS, b)
    assert cl.mv_norm_sq(x) == pytest.approx(float(np.dot(a, a)), abs=1e-12)
    assert cl.mv_norm_sq(x * y) == pytest.approx(cl.mv_norm_sq(x) * cl.mv_norm_sq(y), abs=1e-9, rel=1e-12)


@pytest.mark.parametrize("sig", ALL_SIGS[:10], ids=lambda s: f"R{s.p}{s.q}")
def test_inverse_pseudoscalar(sig):
    e = CliffordElement.pseudoscalar(sig)
    assert (e * cl.inverse_pseudoscalar(sig)) == CliffordElement.scalar(sig, 1)


def test_low_dimensional_identifications():
    c = CliffordSignature(1, 0)
    d = CliffordSignature(0, 1)
    e1c, e1d = CliffordElement.blade(c, (1,)), CliffordElement.blade(d, (1,))
    assert (e1c * e1c)[()] == -1
    assert (e1d * e1d)[()] == 1


def test_multiplication_table_strings():
    rows = {(a, b): r for a, b, r in cl.multiplication_table(cl.QUATERNIONS)}
    assert rows[("e1", "e2")] == "e12"
    assert rows[("e2", "e1")] == "-e12"
    assert rows[("e12", "e12")] == "-1"
    assert rows[("1", "1")] == "+1"
    assert len(rows) == 16
    rows_d = {(a, b): r for a, b, r in cl.multiplication_table(CliffordSignature(0, 1))}
    assert rows_d[("e1", "e1")] == "+1"


def test_errors():
    with pytest.raises(ValueError):
        CliffordSignature(5, 4)
    with pytest.raises(ValueError):
        cl.mask([1, 1])
    with pytest.raises(SignatureMismatch):
        CliffordElement.scalar(CliffordSignature(1, 0)) * CliffordElement.scalar(CliffordSignature(0, 1))
    with pytest.raises(SignatureMismatch):
        cl.quaternion_split(CliffordElement.scalar(CliffordSignature(1, 1)))


def test_vectorized_product_matches_elementwise():
    sig = CliffordSignature(2, 1)
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=(7, 8)), rng.normal(size=(7, 8))
    z = cl.mv_mul_coeffs(sig, x, y)
    for k in range(7):
        assert np.allclose(z[k], (CliffordElement(sig, x[k]) * CliffordElement(sig, y[k])).coeffs, atol=1e-14)
