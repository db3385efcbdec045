"""Seeded instance streams for campaigns and acceptance runs."""

from __future__ import annotations

from dataclasses import dataclass

from .characters import MultChar
from .charsum import LinearFormSystem
from .errors import RankDeficient
from .ff import make_field
from .rng import SplitMix64
from .subspace import AffineSubspace, classify_position, random_subspace


@dataclass
class Instance:
    subspace: AffineSubspace
    chars: list

    def to_dict(self) -> dict:
        out = self.subspace.to_dict()
        out["chars"] = [c.e for c in self.chars]
        return out


def random_chars(f, n: int, rng: SplitMix64, force_trivial_product: bool = False) -> list[MultChar]:
    """``n`` non-trivial characters; optionally with trivial product when possible."""
    N = f.order
    es = [1 + rng.below(N - 1) for _ in range(n)]
    if force_trivial_product and n >= 2:
        last = (-sum(es[:-1])) % N
        if last:
            es[-1] = last
    return [MultChar(f, e) for e in es]


def admissible_stream(
    seed: int,
    qs=((3, 1), (5, 1)),
    ns=(2, 3, 4),
    max_d: int = 2,
    extra: int = 2,
    cost_cap: int = 10 ** 9,
):
    """Endless stream of instances in general position among translates.

    Each draw picks a field, ``n``, ``d <= min(max_d, n-1)``, a random ``(A, b)``
    and characters (half the time with trivial product); draws whose
    classification is ``Neither`` or whose L-polynomial would need more than
    ``cost_cap`` points are skipped.
    """
    rng = SplitMix64(seed)
    while True:
        p, a = qs[rng.below(len(qs))]
        f = make_field(p, a)
        n = ns[rng.below(len(ns))]
        d = rng.below(min(max_d, n - 1) + 1)
        L = random_subspace(f, n, n - d, rng)
        rep = classify_position(L)
        if not rep.admissible:
            continue
        if f.q ** ((rep.D_L + extra) * d) > cost_cap:
            continue
        chars = random_chars(f, n, rng, force_trivial_product=rng.below(2) == 0)
        yield Instance(L, chars)


def take(stream, count: int) -> list:
    out = []
    for item in stream:
        out.append(item)
        if len(out) == count:
            break
    return out


def random_form_system(f, n: int, d: int, rng: SplitMix64) -> LinearFormSystem:
    while True:
        coeffs = [[rng.below(f.q) for _ in range(d)] for _ in range(n)]
        consts = [rng.below(f.q) for _ in range(n)]
        try:
            return LinearFormSystem(f, coeffs, consts)
        except RankDeficient:
            continue


def param_stream(seed: int, qs=((3, 1), (5, 1), (7, 1)), ns=(2, 3, 4), max_d: int = 2):
    rng = SplitMix64(seed)
    while True:
        p, a = qs[rng.below(len(qs))]
        f = make_field(p, a)
        n = ns[rng.below(len(ns))]
        d = 1 + rng.below(min(max_d, n - 1))
        F = random_form_system(f, n, d, rng)
        yield F, random_chars(f, n, rng, force_trivial_product=rng.below(2) == 0)
