import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from affsums.cyclotomic import (
    Cyclotomic,
    canonicalize,
    change_order,
    conj,
    cyclotomic_polynomial,
    embed,
    euler_phi,
)
from affsums.errors import CapExceeded, NotDivisible

Z = Cyclotomic.zeta


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == [-1, 1]
    assert cyclotomic_polynomial(4) == [1, 0, 1]
    assert cyclotomic_polynomial(6) == [1, -1, 1]
    with pytest.raises(CapExceeded):
        cyclotomic_polynomial(10 ** 5)


@pytest.mark.parametrize("m", range(1, 40))
def test_phi_roots_are_primitive(m):
    # oracle: numeric product over primitive m-th roots of unity
    coeffs = cyclotomic_polynomial(m)
    assert len(coeffs) - 1 == sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1) == euler_phi(m)
    for k in range(1, m + 1):
        if math.gcd(k, m) == 1:
            z = cmath.exp(2j * math.pi * k / m)
            assert abs(sum(c * z ** i for i, c in enumerate(coeffs))) < 1e-8


def test_canonical_examples():
    assert (Z(3, 0) + Z(3, 1) + Z(3, 2)).is_zero()
    assert Z(4, 2) == -1
    assert Z(5, 5) == 1


def test_canonical_degree_below_phi():
    z = canonicalize(Cyclotomic(12, range(12)))
    assert all(c == 0 for c in z.coeffs[euler_phi(12):])


def test_conj_examples():
    assert conj(Cyclotomic.one(5)) == 1
    assert conj(Z(3)) == Z(3, 2)
    assert conj(Z(3) - Z(3, 2)) == Z(3, 2) - Z(3)


def test_embed_examples():
    z = embed(Cyclotomic.zero(7))
    assert (z.re, z.im) == (0.0, 0.0)
    z = embed(Z(4))
    assert abs(z.re) < 1e-12 and abs(z.im - 1) < 1e-12
    z = embed(Z(3) - Z(3, 2))
    assert abs(z.re) < 1e-12 and abs(z.im - math.sqrt(3)) < 1e-12


def test_change_order_examples():
    assert change_order(Z(2), 6).coeffs == Z(6, 3).coeffs
    w = Z(3)
    assert change_order(w, 3) is w
    assert change_order(Z(3), 6) == Z(6, 2)
    with pytest.raises(NotDivisible):
        change_order(Z(4), 6)


def test_mixed_order_equality_and_hash():
    a = Z(2)
    b = Z(6, 3)
    assert a == b and hash(a) == hash(b) == hash(Cyclotomic.const(-1))
    assert Z(3) + Z(4) == change_order(Z(3), 12) + change_order(Z(4), 12)


ORDERS = [3, 4, 6, 8, 12]


@st.composite
def elems(draw, m=None):
    m = m or draw(st.sampled_from(ORDERS))
    cs = [Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 3))) for _ in range(m)]
    return Cyclotomic(m, cs)


@st.composite
def triples(draw):
    m = draw(st.sampled_from(ORDERS))
    return draw(elems(m)), draw(elems(m)), draw(elems(m))


@given(triples())
def test_ring_axioms(t):
    x, y, z = t
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    assert x * 1 == x


@given(triples())
def test_embedding_is_a_ring_map(t):
    x, y, _ = t
    for u, v in ((x + y, complex(embed(x)) + complex(embed(y))), (x * y, complex(embed(x)) * complex(embed(y)))):
        assert abs(complex(embed(u)) - v) < 1e-9 * (1 + abs(v))


@given(elems())
def test_norm_square_is_nonnegative_real(x):
    n = x * conj(x)
    z = embed(n)
    assert abs(z.im) <= 1e-9 * (1 + abs(z))
    assert z.re >= -1e-9
    assert n.is_zero() == x.is_zero()


@given(elems())
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inverse()
        return
    assert x * x.inverse() == 1
    assert (x / x) == 1


@given(elems(), st.integers(1, 11))
def test_galois_is_automorphism(x, k):
    m = x.m
    if math.gcd(k, m) != 1:
        return
    y = x * x + 1
    assert (x * y).galois(k) == x.galois(k) * y.galois(k)
    # sigma_k sends zeta to zeta^k
    want = sum(float(c) * cmath.exp(2j * math.pi * j * k / m) for j, c in enumerate(x.coeffs))
    assert abs(complex(embed(x.galois(k))) - want) < 1e-9


@given(elems())
def test_serialization_roundtrip(x):
    assert Cyclotomic.from_dict(x.to_dict()) == x


def test_integrality():
    assert (Z(5) + 3).is_integral()
    assert not Cyclotomic.const(Fraction(1, 2), 4).is_integral()
    assert Cyclotomic.const(7, 3).is_rational()
    # (1 + zeta_4)/(1 + zeta_4) is 1 even though written with fractions
    assert ((1 + Z(4)) / (1 + Z(4))).is_integral()
