"""
Affine subspaces ``L = {x : A x = b}`` of affine n-space over GF(q).

Coordinate indices are 0-based throughout the code (``I`` is a subset of
``range(n)``); reports print them 0-based as well. Empty intersections have
dimension -1.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from math import comb

from .errors import CapExceeded, FieldMismatch, RankDeficient
from .ff import DEFAULT_CAP, Field, extend, row_reduce

GENERAL = "GeneralPosition"
TRANSLATES = "GeneralAmongTranslates"
NEITHER = "Neither"

ENUM_CAP = 10 ** 9


def solution_dim(f: Field, rows, rhs) -> int:
    """Dimension of ``{x : rows . x = rhs}``, -1 if inconsistent."""
    if not rows:
        raise ValueError("need at least one equation to know the ambient dimension")
    n = len(rows[0])
    aug = [list(r) + [c] for r, c in zip(rows, rhs)]
    _, rk, pivots = row_reduce(f, aug)
    if pivots and pivots[-1] == n:
        return -1
    return n - rk


@functools.lru_cache(maxsize=1 << 16)
def _rank_cached(f: Field, rows: tuple) -> int:
    if not rows or not rows[0]:
        return 0
    return row_reduce(f, rows)[1]


@functools.lru_cache(maxsize=1 << 16)
def _det_nonzero_cached(f: Field, rows: tuple) -> bool:
    return row_reduce(f, rows)[1] == len(rows)


class AffineSubspace:
    """Solution set of ``A x = b`` with ``A`` of full row rank ``m``."""

    def __init__(self, field: Field, A, b):
        self.field = field
        self.A = tuple(tuple(int(v) for v in row) for row in A)
        self.b = tuple(int(v) for v in b)
        self.m = len(self.A)
        if self.m < 1:
            raise ValueError("need at least one equation")
        self.n = len(self.A[0])
        if any(len(row) != self.n for row in self.A) or len(self.b) != self.m:
            raise ValueError("A must be m x n and b of length m")
        if self.m > self.n:
            raise RankDeficient("more equations than unknowns")
        if any(not 0 <= v < field.q for row in self.A for v in row) or any(
            not 0 <= v < field.q for v in self.b
        ):
            raise ValueError("entries must be element codes of the field")
        R, rk, pivots = row_reduce(field, [list(r) + [c] for r, c in zip(self.A, self.b)])
        if rk != self.m or pivots[-1] == self.n:
            raise RankDeficient(f"A has rank below {self.m}")
        self.rref = tuple(tuple(r) for r in R)
        self.pivots = tuple(pivots)
        self.d = self.n - self.m

    @property
    def key(self):
        """Canonical key of the point set (reduced augmented matrix)."""
        return (self.field, self.rref)

    def __eq__(self, other):
        return isinstance(other, AffineSubspace) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"AffineSubspace({self.field}, A={list(map(list, self.A))}, b={list(self.b)})"

    def contains(self, x) -> bool:
        f = self.field
        return all(f.dot(row, x) == bi for row, bi in zip(self.A, self.b))

    def to_dict(self) -> dict:
        return {"field": self.field.descriptor(), "A": [list(r) for r in self.A], "b": list(self.b)}

    @classmethod
    def from_dict(cls, d, cap: int = DEFAULT_CAP) -> "AffineSubspace":
        return cls(Field.from_descriptor(d["field"], cap), d["A"], d["b"])

    def parametrization(self):
        """``(x0, V, free)`` with ``L = {x0 + sum_j t_j V[j]}``, ``t_j`` the free coordinates."""
        f = self.field
        n = self.n
        free = [c for c in range(n) if c not in self.pivots]
        x0 = [0] * n
        for k, pc in enumerate(self.pivots):
            x0[pc] = self.rref[k][n]
        V = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for k, pc in enumerate(self.pivots):
                v[pc] = f.neg(self.rref[k][fc])
            V.append(v)
        return x0, V, free

    def over(self, emb) -> "AffineSubspace":
        """The same equations read in the extension field of ``emb``."""
        if emb.base != self.field:
            raise FieldMismatch("embedding base differs from the subspace field")
        img = emb.image_map
        return AffineSubspace(emb.ext, [[img(v) for v in row] for row in self.A], [img(v) for v in self.b])


@dataclass(frozen=True)
class PositionReport:
    classification: str
    a: tuple
    D_L: int
    witness: tuple | None = None
    dims: dict = dc_field(default_factory=dict, repr=False)

    @property
    def admissible(self) -> bool:
        return self.classification in (GENERAL, TRANSLATES)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "a": list(self.a),
            "D_L": self.D_L,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def dim_intersection(L: AffineSubspace, I) -> int:
    f = L.field
    rows = [list(r) for r in L.A]
    rhs = list(L.b)
    for i in I:
        e = [0] * L.n
        e[i] = 1
        rows.append(e)
        rhs.append(0)
    return solution_dim(f, rows, rhs)


def degree_from_counts(d: int, a) -> int:
    """``(-1)^d + sum_{j=1..d} (-1)^(d+j) a_j``."""
    return (-1) ** d + sum((-1) ** (d + j) * a[j - 1] for j in range(1, d + 1))


def general_position_degree(n: int, d: int) -> int:
    return comb(n - 1, d) if d >= 0 and n >= 1 else 0


def classify_position(L: AffineSubspace) -> PositionReport:
    return _classify(L.key, L.n, L.d)


@functools.lru_cache(maxsize=1 << 16)
def _classify(key, n, d):
    f, rref = key
    L = _from_rref(f, rref, n)
    general = True
    translates = True
    witness = None
    counts = [0] * (d + 1)
    dims = {}
    for size in range(0, min(d + 1, n) + 1):
        for I in itertools.combinations(range(n), size):
            dim = dim_intersection(L, I)
            dims[I] = dim
            if dim != d - size:
                general = False
            if dim > d - size:
                translates = False
                if witness is None:
                    witness = I
            if 1 <= size <= d and dim >= 0:
                counts[size] += 1
    a = counts[1:]
    cls = GENERAL if general else TRANSLATES if translates else NEITHER
    return PositionReport(cls, tuple(a), degree_from_counts(d, a), witness, dims)


def _from_rref(f, rref, n):
    m = sum(1 for row in rref if any(row))
    return AffineSubspace(f, [row[:n] for row in rref[:m]], [row[n] for row in rref[:m]])


def minors_criterion(L: AffineSubspace) -> bool:
    """Every m x m minor of the augmented matrix ``(A|b)`` is nonzero."""
    cols = [tuple(row[j] for row in L.A) for j in range(L.n)] + [L.b]
    for J in itertools.combinations(range(L.n + 1), L.m):
        sub = tuple(tuple(cols[j][i] for j in J) for i in range(L.m))
        if not _det_nonzero_cached(L.field, sub):
            return False
    return True


def translates_criterion(L: AffineSubspace) -> bool:
    """``b`` lies outside every proper subspace spanned by a set of columns of ``A``."""
    f = L.field
    m = L.m
    for size in range(L.n + 1):
        for J in itertools.combinations(range(L.n), size):
            sub = tuple(tuple(row[j] for j in J) for row in L.A)
            rk = _rank_cached(f, sub) if J else 0
            if rk == m:
                continue
            aug = tuple(r + (bi,) for r, bi in zip(sub, L.b))
            if _rank_cached(f, aug) == rk:
                return False
    return True


def point_count(L: AffineSubspace, r: int = 1) -> int:
    return L.field.q ** (r * L.d)


def enumerate_points(L: AffineSubspace, r: int = 1, cap: int = ENUM_CAP, start: int = 0, stop=None):
    """Yield the points of ``L`` over GF(q^r) as tuples of extension codes.

    Points come in lexicographic order of the free-coordinate codes; ``start``
    and ``stop`` select a contiguous chunk of that order.
    """
    emb = extend(L.field, r, cap=max(cap, DEFAULT_CAP))
    total = emb.ext.q ** L.d
    if total > cap:
        raise CapExceeded(f"{total} points exceed enumeration cap {cap}")
    Le = L.over(emb) if r > 1 else L
    f = Le.field
    x0, V, _ = Le.parametrization()
    stop = total if stop is None else min(stop, total)
    Q = f.q
    d = L.d
    for idx in range(start, stop):
        t = []
        rem = idx
        for _ in range(d):
            rem, digit = divmod(rem, Q)
            t.append(digit)
        t.reverse()
        x = list(x0)
        for tj, vj in zip(t, V):
            if tj:
                x = [f.add(xi, f.mul(tj, vi)) for xi, vi in zip(x, vj)]
        yield tuple(x)


def all_subspaces(f: Field, n: int, m: int):
    """Every pair ``(A, b)`` with ``A`` an m x n matrix of rank m (all b)."""
    q = f.q
    for flat in itertools.product(range(q), repeat=m * n):
        A = [flat[i * n:(i + 1) * n] for i in range(m)]
        if _rank_cached(f, tuple(tuple(r) for r in A)) != m:
            continue
        for b in itertools.product(range(q), repeat=m):
            yield A, b


def random_subspace(f: Field, n: int, m: int, rng) -> AffineSubspace:
    while True:
        A = [[rng.below(f.q) for _ in range(n)] for _ in range(m)]
        if _rank_cached(f, tuple(tuple(r) for r in A)) == m:
            b = [rng.below(f.q) for _ in range(m)]
            return AffineSubspace(f, A, b)
