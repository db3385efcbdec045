"""
Multiplicative and additive characters, Gauss sums and Jacobi sums.

A multiplicative character is an exponent ``e`` mod ``q - 1`` against the
field's fixed generator ``g``: ``chi(g^j) = zeta_{q-1}^(e*j)``, ``chi(0) = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cyclotomic import Cyclotomic, change_order, conj
from .errors import FieldMismatch, TrivialCharacter
from .ff import Field, FieldEmbedding, dlog, norm


@dataclass(frozen=True)
class MultChar:
    field: Field
    e: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % max(self.field.order, 1))

    @property
    def is_trivial(self) -> bool:
        return self.e == 0

    def __call__(self, x: int) -> Cyclotomic:
        return eval_char(self, x)

    def conjugate(self) -> "MultChar":
        return MultChar(self.field, -self.e)

    def to_dict(self) -> dict:
        return {"field": self.field.descriptor(), "e": self.e}


@dataclass(frozen=True)
class AddChar:
    """``psi_b(x) = zeta_p^Tr(b*x)``."""

    field: Field
    b: int = 1

    @property
    def is_trivial(self) -> bool:
        return self.b == 0

    def exponent(self, x: int) -> int:
        return self.field.trace(self.field.mul(self.b, x))

    def __call__(self, x: int) -> Cyclotomic:
        return Cyclotomic.zeta(self.field.p, self.exponent(x))


def all_chars(f: Field, nontrivial: bool = True):
    start = 1 if nontrivial else 0
    return [MultChar(f, e) for e in range(start, f.order)]


def eval_char(chi: MultChar, x: int) -> Cyclotomic:
    f = chi.field
    if x == 0:
        return Cyclotomic.zero(f.order)
    return Cyclotomic.zeta(f.order, chi.e * dlog(f, x))


def product_char(chis, field: Field | None = None) -> MultChar:
    chis = list(chis)
    if not chis:
        if field is None:
            raise ValueError("empty product needs an explicit field")
        return MultChar(field, 0)
    f = chis[0].field
    if any(c.field != f for c in chis):
        raise FieldMismatch("characters live on different fields")
    return MultChar(f, sum(c.e for c in chis))


def lift_char(chi: MultChar, emb: FieldEmbedding) -> MultChar:
    """The character ``x -> chi(N(x))`` on the extension field."""
    if chi.field != emb.base:
        raise FieldMismatch("character is not on the embedding's base field")
    e = chi.e * emb.norm_log_factor * emb.norm_exponent
    lifted = MultChar(emb.ext, e)
    if emb.ext.q <= 81:
        for x in range(1, emb.ext.q):
            if eval_char(lifted, x) != eval_char(chi, norm(emb, x)):
                raise AssertionError(f"lifted character disagrees with chi(N(x)) at {x}")
    return lifted


def gauss_sum(chi: MultChar, psi: AddChar | None = None) -> Cyclotomic:
    """``sum_x chi(x) psi(x)`` in Q(zeta_{p(q-1)})."""
    f = chi.field
    psi = psi or AddChar(f)
    if psi.field != f:
        raise FieldMismatch("characters live on different fields")
    N, p = f.order, f.p
    M = p * N
    x = np.arange(1, f.q)
    bx = [f.mul(psi.b, int(v)) for v in x]
    tr = f.trace_table[bx]
    k = (chi.e * f.log[x] * p + tr * N) % M
    return Cyclotomic.from_histogram(M, np.bincount(k, minlength=M))


def _check_nontrivial(chis):
    chis = list(chis)
    if len(chis) < 1:
        raise ValueError("need at least one character")
    f = chis[0].field
    if any(c.field != f for c in chis):
        raise FieldMismatch("characters live on different fields")
    if any(c.is_trivial for c in chis):
        raise TrivialCharacter("Jacobi sums need non-trivial characters")
    return chis, f


def jacobi_sum(chis) -> Cyclotomic:
    """Direct enumeration of ``sum_{x_1+...+x_n=1} prod chi_i(x_i)``."""
    chis, f = _check_nontrivial(chis)
    n = len(chis)
    N = f.order
    hist = np.zeros(N, dtype=np.int64)
    es = [c.e for c in chis]
    logs = f._log
    for xs in itertools.product(range(1, f.q), repeat=n - 1):
        s = 0
        for x in xs:
            s = f.add(s, x)
        last = f.sub(1, s)
        if last == 0:
            continue
        k = es[-1] * logs[last]
        for e, x in zip(es, xs):
            k += e * logs[x]
        hist[k % N] += 1
    return Cyclotomic.from_histogram(N, hist)


def jacobi_via_gauss(chis, psi: AddChar | None = None) -> Cyclotomic:
    """Jacobi sum from Gauss sums, in Q(zeta_{p(q-1)}).

    Division by ``G(chi_1...chi_n)`` is multiplication by its conjugate
    followed by exact division by ``q``.
    """
    chis, f = _check_nontrivial(chis)
    psi = psi or AddChar(f)
    prod = None
    for c in chis:
        g = gauss_sum(c, psi)
        prod = g if prod is None else prod * g
    total = product_char(chis)
    if total.is_trivial:
        return -prod / f.q
    return (prod * conj(gauss_sum(total, psi))) / f.q


def char_product_value(chis, xs) -> Cyclotomic:
    """``prod_i chi_i(x_i)`` for a single point."""
    chis = list(chis)
    out = Cyclotomic.one(chis[0].field.order)
    for c, x in zip(chis, xs):
        out = out * eval_char(c, x)
    return out


__all__ = [
    "MultChar",
    "AddChar",
    "all_chars",
    "eval_char",
    "product_char",
    "lift_char",
    "gauss_sum",
    "jacobi_sum",
    "jacobi_via_gauss",
    "char_product_value",
    "change_order",
]
