"""
Exact arithmetic in Q(zeta_m).

A :class:`Cyclotomic` stores ``m`` rational coefficients against the full
basis ``1, zeta, ..., zeta^(m-1)``. Sums never reduce; reduction modulo the
m-th cyclotomic polynomial happens in :func:`canonicalize`, and equality and
hashing always go through it.
"""

from __future__ import annotations

import cmath
import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import CapExceeded, NotDivisible

CAP = 10 ** 4
EPS = 1e-15


@functools.lru_cache(maxsize=None)
def _cyclo(m: int) -> tuple[int, ...]:
    # x^m - 1, low degree first
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, list(_cyclo(d)))
    return tuple(num)


def _exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c  # den is monic
        if c:
            for i, di in enumerate(den):
                num[k + i] -= c * di
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def cyclotomic_polynomial(m: int, cap: int = CAP) -> list[int]:
    """Coefficients of Phi_m, low degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > cap:
        raise CapExceeded(f"m = {m} exceeds cap {cap}")
    return list(_cyclo(m))


def euler_phi(m: int) -> int:
    return len(_cyclo(m)) - 1


@dataclass(frozen=True)
class ComplexApprox:
    re: float
    im: float
    err_bound: float = 0.0

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __add__(self, other):
        return ComplexApprox(self.re + other.re, self.im + other.im, self.err_bound + other.err_bound)

    def __mul__(self, other):
        z = complex(self) * complex(other)
        err = self.err_bound * abs(other) + other.err_bound * abs(self) + self.err_bound * other.err_bound
        return ComplexApprox(z.real, z.imag, err + EPS * abs(z))

    def close_to(self, other) -> bool:
        return abs(complex(self) - complex(other)) <= self.err_bound + other.err_bound


class Cyclotomic:
    __slots__ = ("m", "coeffs", "canonical", "_canon")

    def __init__(self, m: int, coeffs=None, canonical: bool = False):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        cs = [Fraction(0)] * m
        if coeffs is not None:
            for j, c in enumerate(coeffs):
                if c:
                    cs[j % m] += Fraction(c)
        self.coeffs = tuple(cs)
        self.canonical = canonical
        self._canon = self if canonical else None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, m=1):
        return cls(m, canonical=True)

    @classmethod
    def one(cls, m=1):
        return cls(m, [1])

    @classmethod
    def const(cls, c, m=1):
        return cls(m, [c])

    @classmethod
    def zeta(cls, m, j=1):
        cs = [0] * m
        cs[j % m] = 1
        return cls(m, cs)

    @classmethod
    def from_histogram(cls, m, hist):
        """``sum_j hist[j] * zeta_m^j``."""
        return cls(m, [int(h) for h in hist])

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            M = math.lcm(self.m, other.m)
            return change_order(self, M), change_order(other, M)
        if isinstance(other, (int, Rational)):
            return self, Cyclotomic(self.m, [other])
        return NotImplemented

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return Cyclotomic(x.m, [u + v for u, v in zip(x.coeffs, y.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-c for c in self.coeffs], self.canonical)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return Cyclotomic(x.m, [u - v for u, v in zip(x.coeffs, y.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return Cyclotomic(self.m, [c * other for c in self.coeffs])
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        m = x.m
        out = [Fraction(0)] * m
        ys = [(j, c) for j, c in enumerate(y.coeffs) if c]
        for i, ci in enumerate(x.coeffs):
            if ci:
                for j, cj in ys:
                    out[(i + j) % m] += ci * cj
        return Cyclotomic(m, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError
            return Cyclotomic(self.m, [c / other for c in self.coeffs])
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.one(self.m)
        base = self
        while e:
            if e & 1:
                result = canonicalize(result * base)
            base = canonicalize(base * base)
            e >>= 1
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """The automorphism zeta -> zeta^k (k a unit mod m)."""
        if math.gcd(k, self.m) != 1:
            raise ValueError("k must be a unit modulo m")
        out = [Fraction(0)] * self.m
        for j, c in enumerate(self.coeffs):
            if c:
                out[(j * k) % self.m] += c
        return Cyclotomic(self.m, out)

    def inverse(self) -> "Cyclotomic":
        """Inverse via the product of the non-identity Galois conjugates."""
        z = canonicalize(self)
        if z.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = Cyclotomic.one(self.m)
        for k in range(2, self.m):
            if math.gcd(k, self.m) == 1:
                others = canonicalize(others * z.galois(k))
        nrm = canonicalize(z * others)
        if any(nrm.coeffs[1:]):
            raise AssertionError("norm is not rational")
        return canonicalize(others / nrm.coeffs[0])

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(canonicalize(self).coeffs)

    def is_rational(self) -> bool:
        return not any(canonicalize(self).coeffs[1:])

    def is_integral(self) -> bool:
        """All canonical coefficients are integers, i.e. an algebraic integer."""
        return all(c.denominator == 1 for c in canonicalize(self).coeffs)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return canonicalize(x).coeffs == canonicalize(y).coeffs

    def __hash__(self):
        # normalized trace to Q: order independent, so equal values at different m collide
        return hash(normalized_trace(self))

    def __repr__(self):
        z = canonicalize(self)
        terms = [f"{c}*z{self.m}^{j}" if j else f"{c}" for j, c in enumerate(z.coeffs) if c]
        return f"Cyclotomic({self.m}: {' + '.join(terms) or '0'})"

    def __complex__(self):
        return complex(embed(self))

    def __abs__(self):
        return abs(embed(self))

    # -- serialization -------------------------------------------------------

    def to_dict(self, canonical=True) -> dict:
        z = canonicalize(self) if canonical else self
        return {"m": z.m, "coeffs": [[c.numerator, c.denominator] for c in z.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "Cyclotomic":
        return cls(int(d["m"]), [Fraction(n, den) for n, den in d["coeffs"]])


def canonicalize(z: Cyclotomic) -> Cyclotomic:
    """Reduce modulo Phi_m; degree drops below phi(m)."""
    if z.canonical:
        return z
    if z._canon is not None:
        return z._canon
    phi = _cyclo(z.m)
    deg = len(phi) - 1
    cs = list(z.coeffs)
    for k in range(z.m - 1, deg - 1, -1):
        c = cs[k]
        if c:
            cs[k] = Fraction(0)
            for i in range(deg):
                if phi[i]:
                    cs[k - deg + i] -= c * phi[i]
    out = Cyclotomic(z.m, cs, canonical=True)
    z._canon = out
    return out


def _mobius(n: int) -> int:
    result = 1
    f = 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            result = -result
        f += 1
    return -result if n > 1 else result


def normalized_trace(z: Cyclotomic) -> Fraction:
    """Tr_{Q(zeta_m)/Q}(z) / phi(m); independent of the order ``z`` is written at."""
    total = Fraction(0)
    for j, c in enumerate(z.coeffs):
        if c:
            k = z.m // math.gcd(j, z.m)
            total += c * Fraction(_mobius(k), euler_phi(k))
    return total


def conj(z: Cyclotomic) -> Cyclotomic:
    return Cyclotomic(z.m, [z.coeffs[(-j) % z.m] for j in range(z.m)])


@functools.lru_cache(maxsize=256)
def _roots(m: int):
    return [cmath.exp(2j * math.pi * j / m) for j in range(m)]


def embed(z: Cyclotomic) -> ComplexApprox:
    """Value at zeta_m = exp(2*pi*i/m) in double precision."""
    roots = _roots(z.m)
    acc = 0j
    biggest = 0.0
    for j, c in enumerate(z.coeffs):
        if c:
            fc = float(c)
            acc += fc * roots[j]
            biggest = max(biggest, abs(fc))
    # per term: rounding of the root, the product and the running sum
    return ComplexApprox(acc.real, acc.imag, 4 * z.m * biggest * EPS)


def change_order(z: Cyclotomic, M: int) -> Cyclotomic:
    """Re-express ``z`` in Q(zeta_M) for a multiple ``M`` of ``z.m``."""
    if M % z.m:
        raise NotDivisible(f"{z.m} does not divide {M}")
    if M == z.m:
        return z
    step = M // z.m
    out = [0] * M
    for j, c in enumerate(z.coeffs):
        if c:
            out[j * step] = c
    return Cyclotomic(M, out)
