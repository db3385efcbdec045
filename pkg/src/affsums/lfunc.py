"""
L-polynomials of character sums over subspaces.

``P(T) = sum_j c_j T^j`` (``c_0 = 1``) is pinned by its reciprocal roots
``alpha_i``: their power sums equal ``(-1)^d S_r``. With this normalization
``P = L^((-1)^(d+1))`` where ``L = exp(sum_r S_r T^r / r)``; the exponent is
recorded on every :class:`LPolynomial`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .characters import product_char
from .charsum import char_sum
from .cyclotomic import Cyclotomic, canonicalize, embed
from .errors import (
    AffsumsError,
    BoundViolated,
    CapExceeded,
    DegreeMismatch,
    NonConvergence,
    NotInPosition,
)
from .subspace import ENUM_CAP, GENERAL, AffineSubspace, classify_position

ROOT_TOL = 1e-6


class IntegralityViolated(AffsumsError, ArithmeticError):
    pass


def _as_cyc(x, m=1):
    return x if isinstance(x, Cyclotomic) else Cyclotomic.const(x, m)


def newton_to_coeffs(power_sums) -> list[Cyclotomic]:
    """Elementary symmetric functions ``e_1..e_D`` from power sums ``p_1..p_D``.

    ``r e_r = sum_{i=1}^{r} (-1)^(i-1) e_{r-i} p_i`` with ``e_0 = 1``; the
    division by ``r`` is exact over Q(zeta).
    """
    p = [_as_cyc(x) for x in power_sums]
    if not p:
        raise ValueError("need at least one power sum")
    e = [Cyclotomic.one(p[0].m)]
    for r in range(1, len(p) + 1):
        acc = Cyclotomic.zero(p[0].m)
        for i in range(1, r + 1):
            term = e[r - i] * p[i - 1]
            acc = acc + term if i % 2 else acc - term
        e.append(canonicalize(acc / r))
    return e[1:]


def power_sums_from_coeffs(e, count: int) -> list[Cyclotomic]:
    """Power sums ``p_1..p_count`` of the roots of ``prod (1 - alpha T)``."""
    e = [_as_cyc(x) for x in e]
    m = e[0].m if e else 1
    D = len(e)
    ee = [Cyclotomic.one(m)] + e
    p = []
    for r in range(1, count + 1):
        acc = Cyclotomic.zero(m)
        for i in range(1, min(r - 1, D) + 1):
            term = ee[i] * p[r - i - 1]
            acc = acc + term if i % 2 else acc - term
        if r <= D:
            term = ee[r] * r
            acc = acc + term if r % 2 else acc - term
        p.append(canonicalize(acc))
    return p


# ---------------------------------------------------------------------------
# root finding


def _polyval(c_high, z):
    acc = np.zeros_like(z)
    for c in c_high:
        acc = acc * z + c
    return acc


def poly_roots(coeffs, tol: float = 1e-10, maxiter: int = 500) -> np.ndarray:
    """All roots of ``sum_j coeffs[j] T^j`` by Aberth-Ehrlich iteration."""
    c = np.asarray(coeffs, dtype=complex)
    D = len(c) - 1
    if D <= 0:
        return np.empty(0, dtype=complex)
    if c[-1] == 0:
        raise ValueError("leading coefficient is zero")
    a = c[::-1] / c[-1]
    if D == 1:
        return np.array([-a[1]])
    da = a[:-1] * np.arange(D, 0, -1)
    tail = abs(a[-1])
    if tail > 0:
        radius = tail ** (1.0 / D)
    else:
        radius = 2 * max(abs(a[k]) ** (1.0 / k) for k in range(1, D + 1)) or 1.0
    center = -a[1] / D
    z = center + radius * np.exp(1j * (2 * np.pi * np.arange(D) / D + 0.4))
    for _ in range(maxiter):
        pz = _polyval(a, z)
        dpz = _polyval(da, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = (1.0 / diff).sum(axis=1) - 1.0
            corr = w / (1 - w * s)
        corr = np.where(np.isfinite(corr), corr, 1e-3 * (1 + abs(z)))
        z = z - corr
        if np.all(abs(corr) <= 4e-16 * np.maximum(1.0, abs(z))):
            break
    residual = abs(_polyval(c[::-1], z))
    scale = abs(c).max()
    if not np.all(residual <= tol * scale):
        raise NonConvergence("root finder did not reach the residual target", residuals=residual)
    return z


def reciprocal_roots(coeffs) -> np.ndarray:
    """Reciprocal roots ``alpha`` of ``sum_j c_j T^j`` (``c_0 != 0``)."""
    c = list(coeffs)
    if c[0] == 0:
        raise ValueError("constant term must be non-zero")
    return poly_roots(c[::-1])


# ---------------------------------------------------------------------------
# exact squarefree split over Q(zeta)


def _ptrim(f):
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def _pmonic(f):
    inv = f[-1].inverse()
    return [canonicalize(c * inv) for c in f]


def _pderiv(f):
    return [canonicalize(c * k) for k, c in enumerate(f)][1:]


def _psub(f, g):
    n = max(len(f), len(g))
    if n == 0:
        return []
    m = (f or g)[0].m
    z = Cyclotomic.zero(m)
    f = f + [z] * (n - len(f))
    g = g + [z] * (n - len(g))
    return _ptrim([canonicalize(x - y) for x, y in zip(f, g)])


def _pdivmod(f, g):
    f = list(f)
    g = _ptrim(g)
    inv = g[-1].inverse()
    m = g[0].m
    q = [Cyclotomic.zero(m)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = canonicalize(f[-1] * inv)
        k = len(f) - len(g)
        q[k] = c
        for i, gi in enumerate(g):
            f[k + i] = canonicalize(f[k + i] - c * gi)
        f = _ptrim(f)
    return q, f


def _pgcd(f, g):
    f, g = _ptrim(f), _ptrim(g)
    while g:
        f, g = g, _pdivmod(f, g)[1]
    return _pmonic(f)


def squarefree_factors(f) -> list[tuple[list[Cyclotomic], int]]:
    """Yun's decomposition of ``f`` (coefficients low degree first)."""
    f = _pmonic(_ptrim([canonicalize(c) for c in f]))
    if len(f) <= 1:
        return []
    fp = _pderiv(f)
    a = _pgcd(f, fp)
    b = _pdivmod(f, a)[0]
    c = _pdivmod(fp, a)[0]
    dd = _psub(c, _pderiv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = _pgcd(b, dd) if dd else b
        if len(a) > 1:
            out.append((a, i))
        b = _pdivmod(b, a)[0]
        c = _pdivmod(dd, a)[0] if dd else []
        dd = _psub(c, _pderiv(b))
        i += 1
    return out


def exact_reciprocal_roots(coeffs: list[Cyclotomic]) -> list[complex]:
    """Reciprocal roots with multiplicity; every root is found on a squarefree factor."""
    rev = list(reversed(coeffs))
    roots = []
    for factor, mult in squarefree_factors(rev):
        z = poly_roots([complex(embed(c)) for c in factor])
        for root in z:
            roots.extend([complex(root)] * mult)
    return roots


# ---------------------------------------------------------------------------


@dataclass
class WeightProfile:
    counts: dict
    unclassified: list

    def to_dict(self) -> dict:
        return {
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "unclassified": [[z.real, z.imag] for z in self.unclassified],
        }


@dataclass
class LPolynomial:
    degree: int
    coeffs: list
    power_sums: list
    roots: list
    d: int
    q: int
    integral: bool
    l_exponent: int
    max_root_error: float = 0.0
    elapsed: float = 0.0
    extra: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [c.to_dict() for c in self.coeffs],
            "power_sums": [s.to_dict() for s in self.power_sums],
            "roots": [[z.real, z.imag] for z in self.roots],
            "root_moduli": [abs(z) for z in self.roots],
            "integral": self.integral,
            "l_exponent": self.l_exponent,
            "max_root_error": self.max_root_error,
            "elapsed": self.elapsed,
        }


def l_polynomial(
    L: AffineSubspace,
    chis,
    extra: int = 2,
    cap: int = ENUM_CAP,
    threads: int = 1,
    backend: str | None = None,
    tol: float = ROOT_TOL,
) -> LPolynomial:
    t0 = time.perf_counter()
    rep = classify_position(L)
    if not rep.admissible:
        raise NotInPosition(f"{L} is {rep.classification} (witness {rep.witness})")
    D, d, q = rep.D_L, L.d, L.field.q
    if D < 0:
        raise DegreeMismatch(f"negative predicted degree {D}")
    R = D + max(extra, 0)
    if R >= 1 and q ** (R * d) > cap:
        raise CapExceeded(f"S_{R} needs {q}^{R * d} points, cap {cap}")
    S = [char_sum(L, chis, r, cap=cap, threads=threads, backend=backend).value for r in range(1, R + 1)]
    sign = -1 if d % 2 else 1
    p = [canonicalize(s * sign) for s in S]
    m = L.field.order

    if D == 0:
        nonzero = [r + 1 for r, v in enumerate(p) if not v.is_zero()]
        if nonzero:
            raise DegreeMismatch(f"predicted degree 0 but S_r != 0 for r in {nonzero}")
        return LPolynomial(0, [Cyclotomic.one(m)], S, [], d, q, True, -sign, 0.0, time.perf_counter() - t0)

    e = newton_to_coeffs(p[:D])
    if e[-1].is_zero():
        raise DegreeMismatch(f"e_{D} = 0: degree below predicted {D}")
    predicted = power_sums_from_coeffs(e, R)
    bad = [r + 1 for r in range(D, R) if predicted[r] != p[r]]
    if bad:
        raise DegreeMismatch(f"power sums S_r, r in {bad}, disagree with a degree-{D} polynomial")
    integral = all(c.is_integral() for c in e)
    if not integral:
        raise IntegralityViolated("L-polynomial coefficients are not algebraic integers")

    coeffs = [Cyclotomic.one(m)] + [canonicalize(c * (-1) ** (j + 1)) for j, c in enumerate(e)]
    roots = exact_reciprocal_roots(coeffs)
    if len(roots) != D:
        raise DegreeMismatch(f"found {len(roots)} roots for degree {D}")
    worst = 0.0
    for r in range(1, R + 1):
        got = sum(z ** r for z in roots)
        want = complex(embed(p[r - 1]))
        scale = max(1.0, sum(abs(z) ** r for z in roots))
        worst = max(worst, abs(got - want) / scale)
    if worst > tol:
        raise DegreeMismatch(f"recovered roots miss the power sums by {worst:.3g} (relative)")
    return LPolynomial(D, coeffs, S, roots, d, q, integral, -sign, worst, time.perf_counter() - t0)


def weight_profile(P: LPolynomial, q: int | None = None, tol: float = ROOT_TOL) -> WeightProfile:
    """Bucket each reciprocal root by the integer ``i`` with ``|alpha| ~ q^(i/2)``."""
    q = q or P.q
    counts: dict[int, int] = {}
    unclassified = []
    half_log = 0.5 * math.log(q)
    for z in P.roots:
        mod = abs(z)
        if mod == 0:
            unclassified.append(z)
            continue
        i = round(math.log(mod) / half_log)
        if abs(mod / q ** (i / 2) - 1) <= tol and i <= P.d:
            counts[i] = counts.get(i, 0) + 1
        else:
            unclassified.append(z)
    return WeightProfile(counts, unclassified)


def expected_general_weights(n: int, d: int, product_trivial: bool) -> dict:
    """Root counts per weight for a subspace in general position."""
    if not product_trivial:
        want = {d: comb(n - 1, d)}
    else:
        want = {d: comb(n - 2, d) if n >= 2 else 0}
        if d >= 1:
            want[d - 1] = comb(n - 2, d - 1)
    return {k: v for k, v in want.items() if v}


def _binom(n, k):
    return comb(n, k) if 0 <= k <= n else 0


@dataclass
class BoundReport:
    classification: str
    D_L: int
    modulus: float
    bound: float
    margin: float
    general_bound: float | None
    general_margin: float | None
    product_trivial: bool
    roots_sum_error: float | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_bounds(L: AffineSubspace, chis, lpoly: LPolynomial | None = None, tol: float = ROOT_TOL) -> BoundReport:
    """Check ``|S|`` against the degree bound and, in general position, the sharper one."""
    rep = classify_position(L)
    if not rep.admissible:
        raise NotInPosition(f"{L} is {rep.classification}")
    S = lpoly.power_sums[0] if lpoly and lpoly.power_sums else char_sum(L, chis, 1).value
    z = embed(S)
    mod = abs(z)
    q, d, n = L.field.q, L.d, L.n
    slack = lambda b: b * 1e-9 + z.err_bound  # noqa: E731
    instance = {"subspace": L.to_dict(), "chars": [c.e for c in chis]}

    bound = rep.D_L * q ** (d / 2)
    if mod > bound + slack(bound):
        raise BoundViolated(f"|S| = {mod} exceeds D_L q^(d/2) = {bound}", instance)
    trivial = product_char(chis).is_trivial
    gbound = gmargin = None
    if rep.classification == GENERAL:
        if trivial:
            gbound = _binom(n - 2, d) * q ** (d / 2) + _binom(n - 2, d - 1) * q ** ((d - 1) / 2)
        else:
            gbound = _binom(n - 1, d) * q ** (d / 2)
        if mod > gbound + slack(gbound):
            raise BoundViolated(f"|S| = {mod} exceeds general-position bound {gbound}", instance)
        gmargin = gbound - mod
    err = None
    if lpoly is not None:
        err = abs(abs(sum(lpoly.roots)) - mod) if lpoly.roots else mod
        if err > tol * max(1.0, mod):
            raise BoundViolated(f"|sum of roots| misses |S| by {err}", instance)
    return BoundReport(rep.classification, rep.D_L, mod, bound, bound - mod, gbound, gmargin, trivial, err)
