import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from affsums.errors import CapExceeded, NotPrime, ZeroArgument
from affsums.ff import (
    Field,
    det,
    dlog,
    extend,
    first_irreducible,
    is_irreducible,
    is_prime,
    make_field,
    norm,
    rank,
    row_reduce,
)

SMALL = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]


def brute_order(f, x):
    k, y = 1, x
    while y != 1:
        y = f.mul(y, x)
        k += 1
    return k


# -- construction -------------------------------------------------------------


def test_f3_generator():
    f = make_field(3)
    assert f.q == 3 and f.generator == 2


def test_f9_lagrange():
    f = make_field(3, 2)
    assert f.q == 9
    assert all(f.pow(x, 8) == 1 for x in range(1, 9))


def test_f8_generator_has_order_7():
    f = make_field(2, 3)
    assert f.q == 8
    assert brute_order(f, f.generator) == 7


@pytest.mark.parametrize("p,a", SMALL)
def test_generator_is_least_of_full_order(p, a):
    f = make_field(p, a)
    orders = {x: brute_order(f, x) for x in range(1, f.q)}
    assert orders[f.generator] == f.q - 1
    assert all(orders[x] < f.q - 1 for x in range(1, f.generator))


@pytest.mark.parametrize("p,a", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)])
def test_modulus_is_first_irreducible(p, a):
    mod = first_irreducible(p, a)
    assert is_irreducible(mod, p)
    # everything earlier in ascending code order factors (brute force over divisors)
    code = sum(c * p ** i for i, c in enumerate(mod[:-1]))
    for smaller in range(code):
        cand = [(smaller // p ** i) % p for i in range(a)] + [1]
        assert not is_irreducible(cand, p)


def test_errors():
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(CapExceeded):
        make_field(2, 30)
    assert is_prime(97) and not is_prime(91)


def test_tables_read_only():
    f = make_field(5)
    with pytest.raises(ValueError):
        f.exp[0] = 3


def test_descriptor_roundtrip():
    f = make_field(3, 2)
    g = Field.from_descriptor(f.descriptor())
    assert g == f and hash(g) == hash(f)
    assert Field.from_descriptor({"p": 3, "a": 2}) == f


# -- arithmetic ---------------------------------------------------------------


def naive_ops(p, a):
    """Polynomial-arithmetic oracle independent of the log tables."""
    f = make_field(p, a)
    mod = list(f.modulus)

    def digits(x):
        return [(x // p ** i) % p for i in range(a)]

    def code(ds):
        return sum(c * p ** i for i, c in enumerate(ds))

    def add(x, y):
        return code([(u + v) % p for u, v in zip(digits(x), digits(y))])

    def mul(x, y):
        prod = [0] * (2 * a - 1)
        for i, u in enumerate(digits(x)):
            for j, v in enumerate(digits(y)):
                prod[i + j] = (prod[i + j] + u * v) % p
        for k in range(len(prod) - 1, a - 1, -1):
            c = prod[k]
            if c:
                for i in range(a + 1):
                    prod[k - a + i] = (prod[k - a + i] - c * mod[i]) % p
        return code(prod[:a])

    return f, add, mul


@pytest.mark.parametrize("p,a", [(3, 1), (5, 1), (2, 2), (2, 3), (3, 2)])
def test_ops_match_polynomial_oracle(p, a):
    f, add, mul = naive_ops(p, a)
    for x, y in itertools.product(range(f.q), repeat=2):
        assert f.add(x, y) == add(x, y)
        assert f.mul(x, y) == mul(x, y)


fields = st.sampled_from(SMALL).map(lambda pa: make_field(*pa))


@st.composite
def field_and_elems(draw, k=3):
    f = draw(fields)
    return (f,) + tuple(draw(st.integers(0, f.q - 1)) for _ in range(k))


@given(field_and_elems())
def test_ring_axioms(fxyz):
    f, x, y, z = fxyz
    assert f.add(x, y) == f.add(y, x)
    assert f.mul(x, y) == f.mul(y, x)
    assert f.add(f.add(x, y), z) == f.add(x, f.add(y, z))
    assert f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
    assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))
    assert f.add(x, f.neg(x)) == 0
    assert f.sub(f.add(x, y), y) == x
    if x:
        assert f.mul(x, f.inv(x)) == 1
        assert f.div(f.mul(x, y), x) == y


@given(field_and_elems(1), st.integers(-50, 50))
def test_exp_log_roundtrip_and_pow(fx, e):
    f, x = fx
    if x == 0:
        assert f.log[0] == f.order
        with pytest.raises(ZeroArgument):
            f.inv(0)
        return
    assert f.exp[f.log[x]] == x
    naive = 1
    for _ in range(e % f.order):
        naive = f.mul(naive, x)
    assert f.pow(x, e) == naive


def test_dlog_examples():
    assert dlog(make_field(7), 1) == 0
    assert dlog(make_field(3), 2) == 1
    f5 = make_field(5)
    assert f5.generator == 2 and dlog(f5, 4) == 2
    with pytest.raises(ZeroArgument):
        dlog(f5, 0)


@pytest.mark.parametrize("p,a", [(2, 2), (3, 2), (2, 3)])
def test_trace_is_additive_and_onto_prime_field(p, a):
    f = make_field(p, a)
    tr = [f.trace(x) for x in range(f.q)]
    assert set(tr) == set(range(p))
    for x, y in itertools.product(range(f.q), repeat=2):
        assert tr[f.add(x, y)] == (tr[x] + tr[y]) % p


# -- extensions ---------------------------------------------------------------


def test_embedding_f3_f9():
    emb = extend(make_field(3), 2)
    ext = emb.ext
    assert emb.image_map(1) == 1 and emb.image_map(0) == 0
    order2 = [x for x in range(1, 9) if brute_order(ext, x) == 2]
    assert order2 == [emb.image_map(2)]


def test_embedding_identity():
    f4 = make_field(2, 2)
    emb = extend(f4, 1)
    assert emb.ext == f4
    assert all(emb.image_map(x) == x for x in range(4))


@pytest.mark.parametrize("p,a,r", [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (3, 1, 3)])
def test_embedding_is_homomorphism(p, a, r):
    emb = extend(make_field(p, a), r)
    base, ext = emb.base, emb.ext
    im = emb.image_map
    for x, y in itertools.product(range(base.q), repeat=2):
        assert im(base.add(x, y)) == ext.add(im(x), im(y))
        assert im(base.mul(x, y)) == ext.mul(im(x), im(y))
        assert emb.preimage(im(x)) == x


@pytest.mark.parametrize("p,a,r", [(3, 1, 2), (2, 2, 2), (2, 1, 4), (5, 1, 2), (3, 1, 3)])
def test_norm_is_literal_power(p, a, r):
    emb = extend(make_field(p, a), r)
    ext = emb.ext
    e = (ext.q - 1) // (emb.base.q - 1)
    for x in range(ext.q):
        assert emb.image_map(norm(emb, x)) == ext.pow(x, e) if x else norm(emb, x) == 0
    # multiplicative and onto
    vals = {norm(emb, x) for x in range(1, ext.q)}
    assert vals == set(range(1, emb.base.q))


def test_norm_examples():
    emb = extend(make_field(3), 2)
    assert norm(emb, 1) == 1
    assert norm(emb, 0) == 0
    assert norm(emb, emb.ext.generator) == 2


# -- linear algebra -----------------------------------------------------------


def test_row_reduce_examples():
    f3, f5 = make_field(3), make_field(5)
    R, rk, piv = row_reduce(f3, [[1, 0], [0, 1]])
    assert rk == 2 and tuple(piv) == (0, 1)
    assert rank(f3, [[1, 1], [2, 2]]) == 1
    R, rk, piv = row_reduce(f5, [[1, 1, 1], [0, 1, 2]])
    assert rk == 2 and tuple(piv) == (0, 1)
    assert [list(r) for r in R[:2]] == [[1, 0, 4], [0, 1, 2]]


def brute_rank(f, M):
    """Largest k with a nonzero k x k minor, determinants by Leibniz expansion."""
    rows, cols = len(M), len(M[0])

    def leibniz(sub):
        k = len(sub)
        total = 0
        for perm in itertools.permutations(range(k)):
            inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
            term = 1
            for i in range(k):
                term = f.mul(term, sub[i][perm[i]])
            total = f.sub(total, term) if inv % 2 else f.add(total, term)
        return total

    for k in range(min(rows, cols), 0, -1):
        for R in itertools.combinations(range(rows), k):
            for C in itertools.combinations(range(cols), k):
                if leibniz([[M[i][j] for j in C] for i in R]):
                    return k
    return 0


@st.composite
def small_matrix(draw):
    f = draw(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]).map(lambda pa: make_field(*pa)))
    r, c = draw(st.integers(1, 3)), draw(st.integers(1, 4))
    M = [[draw(st.integers(0, f.q - 1)) for _ in range(c)] for _ in range(r)]
    return f, M


@given(small_matrix())
def test_rank_matches_minors(fm):
    f, M = fm
    R, rk, piv = row_reduce(f, M)
    assert rk == brute_rank(f, M)
    # reduced echelon shape
    for i, pc in enumerate(piv):
        assert R[i][pc] == 1
        assert all(R[k][pc] == 0 for k in range(len(R)) if k != i)
    if len(M) == len(M[0]):
        assert (det(f, M) != 0) == (rk == len(M))


def test_large_field_builds():
    f = make_field(2, 20)
    assert f.q == 1 << 20
    assert isinstance(f.exp, np.ndarray) and f.exp[f.log[12345]] == 12345
