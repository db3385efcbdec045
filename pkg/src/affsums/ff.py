"""
Finite fields GF(p^a) with table arithmetic.

Elements are integer codes in ``[0, q)``: the base-p digits of a code are the
coefficients (low degree first) of the representing polynomial modulo the
field's modulus. The modulus is the first monic irreducible polynomial in
ascending code order and the generator is the least code of full order, so a
field is fully determined by ``(p, a)``.
"""

from __future__ import annotations

import functools
import json
from functools import cached_property

import numpy as np

from . import kernels
from .errors import CapExceeded, FieldMismatch, NotPrime, ZeroArgument

DEFAULT_CAP = 2 ** 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def to_digits(code: int, p: int, a: int) -> list[int]:
    out = []
    for _ in range(a):
        code, r = divmod(code, p)
        out.append(r)
    return out


def from_digits(digits, p: int) -> int:
    code = 0
    for c in reversed(list(digits)):
        code = code * p + int(c)
    return code


# ---------------------------------------------------------------------------
# dense polynomials over GF(p), coefficient lists low degree first


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _trim(out)


def _pmod(f, g, p):
    f = _trim(f)
    g = _trim(g)
    inv = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        f = _trim(f)
    return f


def _pgcd(f, g, p):
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _psub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim([(x - y) % p for x, y in zip(f, g)])


def is_irreducible(f, p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    f = _trim(f)
    a = len(f) - 1
    if a < 1:
        return False
    if a == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p ** a, f, p), x, p):
        return False
    for ell in prime_factors(a):
        h = _psub(_ppowmod(x, p ** (a // ell), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def first_irreducible(p: int, a: int) -> list[int]:
    for c in range(p ** a):
        f = to_digits(c, p, a) + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------


class Field:
    """GF(p^a) with exp/log/Zech tables. Immutable once built."""

    def __init__(self, p: int, a: int, modulus, generator: int | None = None):
        self.p = p
        self.a = a
        self.q = p ** a
        self.order = self.q - 1
        self.modulus = tuple(int(c) for c in modulus)
        if len(self.modulus) != a + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree a")
        if not is_irreducible(list(self.modulus), p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({p})")
        if generator is None:
            generator = self._least_generator()
        elif not self._has_full_order(generator):
            raise ValueError(f"{generator} is not a multiplicative generator")
        self.generator = int(generator)

        N = self.order
        self.exp = kernels.exp_table(p, a, self.modulus, to_digits(self.generator, p, a))
        log = np.full(self.q, N, dtype=np.int64)
        log[self.exp] = np.arange(N, dtype=np.int64)
        if (log[1:] == N).any() or log[0] != N:
            raise AssertionError("exp table is not a bijection onto nonzero elements")
        self.log = log
        plus1 = np.where(self.exp % p == p - 1, self.exp - (p - 1), self.exp + 1)
        self.zech = log[plus1]
        for arr in (self.exp, self.log, self.zech):
            arr.setflags(write=False)
        # python lists for scalar work; list indexing beats numpy scalar access
        self._exp = self.exp.tolist()
        self._log = self.log.tolist()
        self._zech = self.zech.tolist()

    # -- construction helpers ------------------------------------------------

    def _polymul_code(self, x, y):
        f = _pmul(to_digits(x, self.p, self.a), to_digits(y, self.p, self.a), self.p)
        return from_digits(_pmod(f, list(self.modulus), self.p) if f else [], self.p)

    def _polypow_code(self, x, e):
        f = _ppowmod(to_digits(x, self.p, self.a), e, list(self.modulus), self.p)
        return from_digits(f, self.p)

    def _has_full_order(self, x):
        if x <= 0 or x >= self.q:
            return False
        N = self.q - 1
        if self._polypow_code(x, N) != 1:
            return False
        return all(self._polypow_code(x, N // ell) != 1 for ell in prime_factors(N))

    def _least_generator(self):
        if self.q == 2:
            return 1
        for x in range(2, self.q):
            if self._has_full_order(x):
                return x
        raise AssertionError("no generator")  # unreachable

    # -- identity ------------------------------------------------------------

    @property
    def key(self):
        return (self.p, self.a, self.modulus, self.generator)

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GF({self.p}^{self.a})"

    def descriptor(self) -> dict:
        return {"p": self.p, "a": self.a, "modulus": list(self.modulus), "generator": self.generator}

    def to_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)

    @classmethod
    def from_descriptor(cls, desc: dict, cap: int = DEFAULT_CAP) -> "Field":
        p, a = int(desc["p"]), int(desc["a"])
        std = make_field(p, a, cap)
        modulus = tuple(desc.get("modulus", std.modulus))
        generator = desc.get("generator", None)
        if modulus == std.modulus and generator in (None, std.generator):
            return std
        return cls(p, a, modulus, generator)

    # -- scalar arithmetic on codes ---------------------------------------------

    def elem(self, c: int) -> int:
        """Code of the prime-field constant ``c``."""
        return int(c) % self.p

    def add(self, x: int, y: int) -> int:
        if x == 0:
            return y
        if y == 0:
            return x
        N = self.order
        lx = self._log[x]
        z = self._zech[(self._log[y] - lx) % N]
        if z == N:
            return 0
        return self._exp[(lx + z) % N]

    def neg(self, x: int) -> int:
        if x == 0 or self.p == 2:
            return x
        return self._exp[(self._log[x] + self.order // 2) % self.order]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[(self._log[x] + self._log[y]) % self.order]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroArgument("inverse of zero")
        return self._exp[(-self._log[x]) % self.order]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroArgument("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[x] * e) % self.order]

    def dot(self, xs, ys) -> int:
        acc = 0
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def elements(self):
        return range(self.q)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace to GF(p) of every element, indexed by code."""
        N = self.order
        k = np.arange(N, dtype=np.int64)
        acc = np.full(N, N, dtype=np.int64)
        for i in range(self.a):
            term = (k * (self.p ** i % N if N > 1 else 0)) % max(N, 1)
            acc = kernels._zech_add_vec(acc, term, self.zech, N)
        codes = np.where(acc == N, 0, self.exp[np.minimum(acc, N - 1)])
        out = np.zeros(self.q, dtype=np.int64)
        out[self.exp] = codes
        if (out >= self.p).any():
            raise AssertionError("trace left the prime field")
        out.setflags(write=False)
        return out

    def trace(self, x: int) -> int:
        return int(self.trace_table[x])


@functools.lru_cache(maxsize=None)
def _standard_field(p: int, a: int) -> Field:
    return Field(p, a, first_irreducible(p, a))


def make_field(p: int, a: int = 1, cap: int = DEFAULT_CAP) -> Field:
    """The standard GF(p^a): first irreducible modulus, least generator."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if a < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** a > cap:
        raise CapExceeded(f"field order {p}^{a} exceeds cap {cap}")
    return _standard_field(p, a)


def dlog(f: Field, x: int) -> int:
    if x == 0:
        raise ZeroArgument("discrete log of zero")
    return f._log[x]


# ---------------------------------------------------------------------------
# embeddings


class FieldEmbedding:
    """Embedding GF(q) -> GF(q^r).

    ``image[c]`` is the ext code of base code ``c``. ``norm_log_factor`` is
    the unit ``u`` mod ``q - 1`` with ``N(h^j) = g^(j*u)`` for the two
    generators ``h`` (ext) and ``g`` (base).
    """

    def __init__(self, base: Field, ext: Field, r: int, image):
        self.base = base
        self.ext = ext
        self.r = r
        self.image = np.asarray(image, dtype=np.int64)
        self.image.setflags(write=False)
        self._image = self.image.tolist()
        self._preimage = {y: x for x, y in enumerate(self._image)}
        self.norm_exponent = (ext.q - 1) // (base.q - 1)
        N = base.order
        if N > 1:
            kprime = ext._log[self._image[base.generator]] // self.norm_exponent
            self.norm_log_factor = pow(kprime, -1, N)
        else:
            self.norm_log_factor = 0

    def image_map(self, x: int) -> int:
        return self._image[x]

    def preimage(self, y: int) -> int:
        try:
            return self._preimage[y]
        except KeyError:
            raise ValueError(f"{y} is not in the image of {self.base}") from None

    def norm(self, x: int) -> int:
        return norm(self, x)

    def __repr__(self):
        return f"FieldEmbedding({self.base} -> {self.ext})"


def _horner(f: Field, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), f.elem(c))
    return acc


def extend(base: Field, r: int, cap: int = DEFAULT_CAP) -> FieldEmbedding:
    """Embed ``base`` into its degree-``r`` extension.

    The image of the base polynomial variable is the first root of the base
    modulus found in the subfield ``{0} | {gamma^k}``, ``gamma = h^((Q-1)/(q-1))``.
    """
    if r < 1:
        raise ValueError("degree must be >= 1")
    if base.q ** r > cap:
        raise CapExceeded(f"extension order {base.q}^{r} exceeds cap {cap}")
    if r == 1:
        return FieldEmbedding(base, base, 1, np.arange(base.q))
    if base != make_field(base.p, base.a, cap):
        raise FieldMismatch("extensions are only built over standard fields")
    ext = make_field(base.p, base.a * r, cap)
    step = (ext.q - 1) // (base.q - 1)
    candidates = [0] + [ext._exp[(k * step) % ext.order] for k in range(base.order)]
    rho = next(c for c in candidates if _horner(ext, base.modulus, c) == 0)
    image = [_horner(ext, to_digits(c, base.p, base.a), rho) for c in range(base.q)]
    emb = FieldEmbedding(base, ext, r, image)
    if base.q <= 9:
        for x in range(base.q):
            for y in range(base.q):
                if emb._image[base.add(x, y)] != ext.add(emb._image[x], emb._image[y]):
                    raise AssertionError("embedding is not additive")
                if emb._image[base.mul(x, y)] != ext.mul(emb._image[x], emb._image[y]):
                    raise AssertionError("embedding is not multiplicative")
    return emb


def norm(emb: FieldEmbedding, x: int) -> int:
    """N(x) = x^((Q-1)/(q-1)) pulled back to the base field."""
    if x == 0:
        return 0
    return emb.preimage(emb.ext.pow(x, emb.norm_exponent))


# ---------------------------------------------------------------------------
# linear algebra


def row_reduce(f: Field, M):
    """Reduced row echelon form of ``M`` (list of rows of codes).

    Returns ``(R, rank, pivots)``; ``R`` is a new list of lists.
    """
    R = [list(row) for row in M]
    if not R:
        return R, 0, []
    rows, cols = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = f.inv(R[r][c])
        R[r] = [f.mul(inv, v) for v in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                factor = R[i][c]
                R[i] = [f.sub(v, f.mul(factor, w)) for v, w in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(f: Field, M) -> int:
    if not M or not M[0]:
        return 0
    return row_reduce(f, M)[1]


def det(f: Field, M) -> int:
    """Determinant of a square matrix by elimination."""
    R = [list(row) for row in M]
    n = len(R)
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if R[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            R[c], R[piv] = R[piv], R[c]
            result = f.neg(result)
        result = f.mul(result, R[c][c])
        inv = f.inv(R[c][c])
        for i in range(c + 1, n):
            if R[i][c] != 0:
                factor = f.mul(R[i][c], inv)
                R[i] = [f.sub(v, f.mul(factor, w)) for v, w in zip(R[i], R[c])]
    return result
