"""Character sums over affine subspaces and over parametrized linear forms."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .characters import MultChar, eval_char, jacobi_sum, product_char
from .cyclotomic import Cyclotomic, conj, embed
from .errors import CapExceeded, FieldMismatch, NotAHyperplane, RankDeficient, TrivialCharacter
from .ff import DEFAULT_CAP, Field, extend, norm, row_reduce
from .subspace import (
    ENUM_CAP,
    AffineSubspace,
    classify_position,
    degree_from_counts,
    enumerate_points,
    solution_dim,
)


@dataclass
class CharSumResult:
    value: Cyclotomic
    r: int
    point_count: int
    elapsed: float

    def to_dict(self) -> dict:
        z = embed(self.value)
        return {
            "value": self.value.to_dict(),
            "approx": [z.re, z.im],
            "modulus": abs(z),
            "r": self.r,
            "point_count": self.point_count,
            "elapsed": self.elapsed,
        }


def _check_chars(chis, f: Field, n: int):
    chis = list(chis)
    if len(chis) != n:
        raise ValueError(f"need {n} characters, got {len(chis)}")
    if any(c.field != f for c in chis):
        raise FieldMismatch("characters and subspace live on different fields")
    if any(c.is_trivial for c in chis):
        raise TrivialCharacter("all characters must be non-trivial")
    return chis


def _chunks(total: int, k: int):
    k = max(1, min(k, total)) if total else 1
    bounds = [total * i // k for i in range(k + 1)]
    return list(zip(bounds[:-1], bounds[1:]))


def char_sum(
    L: AffineSubspace,
    chis,
    r: int = 1,
    cap: int = ENUM_CAP,
    threads: int = 1,
    chunks: int | None = None,
    backend: str | None = None,
) -> CharSumResult:
    """``S_r(L; chis)``: sum of ``prod chi_i(N(x_i))`` over the GF(q^r)-points of ``L``.

    The point space is split into ``chunks`` contiguous pieces (default:
    ``threads``); each piece fills a private exponent histogram and the
    histograms are added at the end, so the result does not depend on the
    split.
    """
    f = L.field
    chis = _check_chars(chis, f, L.n)
    t0 = time.perf_counter()
    emb = extend(f, r, cap=max(DEFAULT_CAP, f.q ** r))
    ext = emb.ext
    total = ext.q ** L.d
    if total > cap:
        raise CapExceeded(f"{total} points exceed enumeration cap {cap}")
    Le = L.over(emb) if r > 1 else L
    x0, V, _ = Le.parametrization()
    x0_log = ext.log[np.asarray(x0, dtype=np.int64)]
    V_log = ext.log[np.asarray(V, dtype=np.int64).reshape(L.d, L.n)]
    N = f.order
    mult = np.array([(c.e * emb.norm_log_factor) % N for c in chis], dtype=np.int64)
    pieces = _chunks(total, chunks or threads)

    def work(span):
        lo, hi = span
        return kernels.charsum_hist(
            x0_log, V_log, mult, ext.log, ext.zech, ext.order, ext.q, lo, hi, N, backend=backend
        )

    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hists = list(pool.map(work, pieces))
    else:
        hists = [work(s) for s in pieces]
    hist = np.sum(hists, axis=0)
    value = Cyclotomic.from_histogram(N, hist)
    return CharSumResult(value, r, total, time.perf_counter() - t0)


def char_sum_reference(L: AffineSubspace, chis, r: int = 1) -> Cyclotomic:
    """Slow oracle: explicit points, explicit norms, explicit character values."""
    f = L.field
    chis = _check_chars(chis, f, L.n)
    emb = extend(f, r)
    out = Cyclotomic.zero(f.order)
    for x in enumerate_points(L, r):
        term = Cyclotomic.one(f.order)
        for c, xi in zip(chis, x):
            term = term * eval_char(c, norm(emb, xi))
        out = out + term
    return out


def hyperplane_reduction_check(L: AffineSubspace, chis) -> bool:
    """Exact check of ``S(L) = chi(b) * prod conj(chi_i(a_i)) * J(chis)``."""
    f = L.field
    if L.m != 1:
        raise NotAHyperplane(f"codimension {L.m}, expected 1")
    a, b = L.A[0], L.b[0]
    if b == 0 or any(ai == 0 for ai in a):
        raise NotAHyperplane("all a_i and b must be non-zero")
    chis = _check_chars(chis, f, L.n)
    lhs = char_sum(L, chis, 1).value
    rhs = eval_char(product_char(chis), b) * jacobi_sum(chis)
    for c, ai in zip(chis, a):
        rhs = rhs * conj(eval_char(c, ai))
    return lhs == rhs


# ---------------------------------------------------------------------------
# parametrized sums


class LinearFormSystem:
    """Forms ``L_i(t) = sum_j coeffs[i][j] t_j + consts[i]`` on affine d-space."""

    def __init__(self, field: Field, coeffs, consts):
        self.field = field
        self.coeffs = tuple(tuple(int(v) for v in row) for row in coeffs)
        self.consts = tuple(int(v) for v in consts)
        self.n = len(self.coeffs)
        self.d = len(self.coeffs[0]) if self.coeffs else 0
        if len(self.consts) != self.n or any(len(row) != self.d for row in self.coeffs):
            raise ValueError("coeffs must be n x d and consts of length n")
        rk = row_reduce(field, [list(r) for r in self.coeffs])[1] if self.d else 0
        if rk != self.d:
            raise RankDeficient(f"coefficient matrix has rank {rk} < {self.d}")

    def __call__(self, t):
        f = self.field
        return tuple(f.add(f.dot(row, t), c) for row, c in zip(self.coeffs, self.consts))

    def to_dict(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "coeffs": [list(r) for r in self.coeffs],
            "consts": list(self.consts),
        }

    @classmethod
    def from_dict(cls, d) -> "LinearFormSystem":
        return cls(Field.from_descriptor(d["field"]), d["coeffs"], d["consts"])

    def zero_set_dim(self, I) -> int:
        """``dim`` of the common zero set of the forms indexed by ``I`` (-1 if empty)."""
        I = list(I)
        if not I:
            return self.d
        f = self.field
        if self.d == 0:
            return 0 if all(self.consts[i] == 0 for i in I) else -1
        return solution_dim(f, [self.coeffs[i] for i in I], [f.neg(self.consts[i]) for i in I])

    def image_subspace(self) -> AffineSubspace:
        """Equations ``A x = b`` cutting out the image of ``t -> (L_i(t))``."""
        f = self.field
        n, d = self.n, self.d
        if d == n:
            raise ValueError("the image is the whole space, which has no defining equations")
        if d == 0:
            A = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
            return AffineSubspace(f, A, list(self.consts))
        # rows of A span the left kernel of the n x d coefficient matrix
        MT = [[self.coeffs[i][j] for i in range(n)] for j in range(d)]
        R, _, pivots = row_reduce(f, MT)
        A = []
        for fc in (c for c in range(n) if c not in pivots):
            v = [0] * n
            v[fc] = 1
            for k, pc in enumerate(pivots):
                v[pc] = f.neg(R[k][fc])
            A.append(v)
        b = [f.dot(row, self.consts) for row in A]
        return AffineSubspace(f, A, b)


@dataclass
class ParamSumResult:
    value: Cyclotomic
    hypothesis_ok: bool
    D_L: int
    a: tuple
    image_value: Cyclotomic | None
    bound: float
    violation: tuple | None = None

    @property
    def matches_image(self) -> bool:
        return self.image_value is not None and self.value == self.image_value

    @property
    def within_bound(self) -> bool:
        z = embed(self.value)
        return abs(z) <= self.bound * (1 + 1e-9) + z.err_bound

    def to_dict(self) -> dict:
        z = embed(self.value)
        return {
            "value": self.value.to_dict(),
            "modulus": abs(z),
            "hypothesis_ok": self.hypothesis_ok,
            "D_L": self.D_L,
            "a": list(self.a),
            "bound": self.bound,
            "matches_image": self.matches_image,
            "violation": list(self.violation) if self.violation is not None else None,
        }


def param_sum(F: LinearFormSystem, chis, cap: int = ENUM_CAP, cross_check: bool = True) -> ParamSumResult:
    """``sum_{t in k^d} prod chi_i(L_i(t))`` by direct enumeration of ``t``."""
    f = F.field
    chis = _check_chars(chis, f, F.n)
    d, n = F.d, F.n
    if f.q ** d > cap:
        raise CapExceeded(f"{f.q}^{d} parameter values exceed cap {cap}")

    ok = True
    violation = None
    counts = [0] * (d + 1)
    for size in range(0, min(d + 1, n) + 1):
        for I in itertools.combinations(range(n), size):
            dim = F.zero_set_dim(I)
            if dim > d - size:
                ok = False
                violation = violation or I
            if 1 <= size <= d and dim >= 0:
                counts[size] += 1
    a = tuple(counts[1:])
    D = degree_from_counts(d, a)

    N = f.order
    hist = [0] * N
    logs = f._log
    es = [c.e for c in chis]
    for t in itertools.product(range(f.q), repeat=d):
        vals = F(t)
        if 0 in vals:
            continue
        hist[sum(e * logs[v] for e, v in zip(es, vals)) % N] += 1
    value = Cyclotomic.from_histogram(N, hist)

    image_value = None
    if cross_check and d == n:
        # the image is all of affine n-space, where the sum factors coordinatewise
        image_value = Cyclotomic.one(N)
        for c in chis:
            image_value = image_value * sum((eval_char(c, x) for x in range(f.q)), Cyclotomic.zero(N))
    elif cross_check:
        image_value = char_sum(F.image_subspace(), chis, 1, cap=cap).value
    return ParamSumResult(value, ok, D, a, image_value, D * f.q ** (d / 2), violation)
