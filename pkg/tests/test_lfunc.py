import itertools
import math
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from affsums.characters import MultChar, product_char
from affsums.charsum import char_sum
from affsums.corpus import admissible_stream, take
from affsums.cyclotomic import Cyclotomic, embed
from affsums.errors import BoundViolated, DegreeMismatch, NonConvergence, NotInPosition
from affsums.ff import make_field
from affsums.lfunc import (
    LPolynomial,
    exact_reciprocal_roots,
    expected_general_weights,
    l_polynomial,
    newton_to_coeffs,
    poly_roots,
    power_sums_from_coeffs,
    reciprocal_roots,
    squarefree_factors,
    verify_bounds,
    weight_profile,
)
from affsums.subspace import GENERAL, AffineSubspace, classify_position

F3, F5, F7 = make_field(3), make_field(5), make_field(7)
LINE = AffineSubspace(F5, [[4, 1, 0], [0, 0, 1]], [1, 1])


def elementary(roots):
    """e_1..e_k by expanding prod (1 + r X) term by term."""
    e = [1]
    for r in roots:
        e = [a + r * b for a, b in zip(e + [0], [0] + e)]
    return e[1:]


def test_newton_examples():
    assert newton_to_coeffs([5, 13]) == [5, 6]
    assert newton_to_coeffs([0]) == [0]
    a = Cyclotomic.zeta(8, 3) + 2
    assert newton_to_coeffs([a, a * a]) == [a, 0]


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_newton_against_expansion(roots):
    # oracle: power sums and elementary functions of explicit integer roots
    k = len(roots)
    p = [sum(r ** j for r in roots) for j in range(1, k + 1)]
    assert newton_to_coeffs(p) == elementary(roots)
    more = power_sums_from_coeffs(elementary(roots), k + 3)
    assert more == [sum(r ** j for r in roots) for j in range(1, k + 4)]


def test_newton_three_roots():
    # 1, 2, 3: e = (6, 11, 6)
    assert newton_to_coeffs([6, 14, 36]) == [6, 11, 6]


def test_poly_roots_examples():
    assert sorted(reciprocal_roots([1, -5, 6]).real) == pytest.approx([2, 3])
    assert reciprocal_roots([1, 1]) == pytest.approx([-1])
    assert len(poly_roots([3])) == 0


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=8))
def test_poly_roots_recovers_roots(roots):
    roots = [r for r in roots if abs(r) > 0.05]
    # keep roots well separated so the comparison below is meaningful
    if not roots or min((abs(a - b) for a, b in itertools.combinations(roots, 2)), default=1) < 1e-2:
        return
    coeffs = np.poly(roots)[::-1]
    got = poly_roots(coeffs)
    for r in roots:
        assert min(abs(got - r)) < 1e-6 * max(1, abs(r))


def test_nonconvergence_reported():
    with pytest.raises(NonConvergence):
        poly_roots(np.poly([1, 2, 3, 4, 5])[::-1], maxiter=1)


def test_squarefree_split_multiple_roots():
    # (1 - 2T)^3 (1 + T) as integer coefficients, low degree first
    c = np.polynomial.polynomial.polymul(
        np.polynomial.polynomial.polypow([1, -2], 3), [1, 1]
    ).astype(int)
    cyc = [Cyclotomic.const(int(v)) for v in c]
    facs = squarefree_factors(list(reversed(cyc)))
    assert sorted(mult for _, mult in facs) == [1, 3]
    roots = sorted(exact_reciprocal_roots(cyc), key=lambda z: z.real)
    assert roots == pytest.approx([-1, 2, 2, 2], abs=1e-12)


def test_line_lpolynomial():
    chis = [MultChar(F5, e) for e in (1, 2, 3)]
    P = l_polynomial(LINE, chis)
    assert P.degree == 1 and P.l_exponent == 1 and P.integral
    # d = 1: P = 1 + S_1 T, root -S_1 of modulus sqrt(5)
    S1 = complex(embed(char_sum(LINE, chis).value))
    assert P.roots[0] == pytest.approx(-S1)
    assert abs(P.roots[0]) == pytest.approx(math.sqrt(5))
    assert weight_profile(P).counts == {1: 1}


def test_point_lpolynomial():
    L = AffineSubspace(F7, [[1, 0], [0, 1]], [3, 5])
    chis = [MultChar(F7, 1), MultChar(F7, 2)]
    P = l_polynomial(L, chis)
    assert P.degree == 1 and P.l_exponent == -1
    assert abs(P.roots[0]) == pytest.approx(1)
    assert weight_profile(P).counts == {0: 1}


def test_degree_zero():
    L = AffineSubspace(F3, [[1, 0]], [1])
    P = l_polynomial(L, [MultChar(F3, 1)] * 2)
    assert P.degree == 0 and P.roots == []
    assert weight_profile(P).counts == {}


def test_neither_rejected():
    L = AffineSubspace(F5, [[1, 0, 0]], [0])
    with pytest.raises(NotInPosition):
        l_polynomial(L, [MultChar(F5, 1)] * 3)


def test_general_position_weights_exhaustive_small():
    # every general-position plane in A^3(F_3) or A^3(F_5) and every character triple
    for f in (F3, F5):
        L = AffineSubspace(f, [[1, 1, 1]], [1])
        for es in itertools.product(range(1, f.order), repeat=3):
            chis = [MultChar(f, e) for e in es]
            P = l_polynomial(L, chis)
            assert P.degree == comb(2, 2)
            want = expected_general_weights(3, 2, product_char(chis).is_trivial)
            assert weight_profile(P).counts == want
            verify_bounds(L, chis, P)


def test_expected_general_weights():
    assert expected_general_weights(4, 2, False) == {2: 3}
    assert expected_general_weights(4, 2, True) == {2: 1, 1: 2}
    assert expected_general_weights(3, 2, True) == {1: 1}


def test_bound_report_and_violation(monkeypatch):
    chis = [MultChar(F5, e) for e in (1, 2, 3)]
    B = verify_bounds(LINE, chis)
    assert B.margin == pytest.approx(0, abs=1e-9)
    import affsums.lfunc as lf

    fake = classify_position(LINE)
    monkeypatch.setattr(lf, "classify_position", lambda L: type(fake)(fake.classification, fake.a, 0))
    with pytest.raises(BoundViolated) as exc:
        verify_bounds(LINE, chis)
    assert exc.value.instance["chars"] == [1, 2, 3]


def test_wrong_degree_detected(monkeypatch):
    import affsums.lfunc as lf

    fake = classify_position(LINE)
    monkeypatch.setattr(lf, "classify_position", lambda L: type(fake)(fake.classification, fake.a, 2))
    with pytest.raises(DegreeMismatch):
        l_polynomial(LINE, [MultChar(F5, e) for e in (1, 2, 3)])


def test_corpus_sample():
    for inst in take(admissible_stream(11), 25):
        P = l_polynomial(inst.subspace, inst.chars)
        rep = classify_position(inst.subspace)
        assert P.degree == rep.D_L
        W = weight_profile(P)
        assert not W.unclassified
        if rep.classification == GENERAL:
            assert W.counts == expected_general_weights(
                inst.subspace.n, inst.subspace.d, product_char(inst.chars).is_trivial
            )
        verify_bounds(inst.subspace, inst.chars, P)
        assert isinstance(P, LPolynomial) and P.to_dict()["degree"] == P.degree
