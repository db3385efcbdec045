"""
Compare the numba and numpy character-sum kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case computes S_r over all GF(q^r)-points of a subspace with both
backends, checks the exact values agree and reports the best wall time.
"""

import argparse
import time

from affsums import kernels
from affsums.characters import MultChar
from affsums.charsum import char_sum
from affsums.ff import make_field
from affsums.subspace import AffineSubspace

CASES = [
    # (p, A, b, chars, r)
    (3, [[1, 1, 1]], [1], (1, 1, 1), 6),
    (5, [[1, 2, 3]], [1], (1, 2, 3), 3),
    (3, [[1, 1, 1, 1], [1, 2, 0, 1]], [1, 2], (1, 1, 1, 1), 6),
    (7, [[1, 1, 1, 1]], [1], (1, 2, 3, 4), 2),
]


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    if "numba" in backends:
        # compile outside the timed region
        L = AffineSubspace(make_field(3), [[1, 1]], [1])
        char_sum(L, [MultChar(L.field, 1)] * 2, backend="numba")

    print(f"{'case':<28}{'points':>10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for p, A, b, es, r in CASES:
        f = make_field(p)
        L = AffineSubspace(f, A, b)
        chis = [MultChar(f, e) for e in es]
        times, values = {}, {}
        for be in backends:
            times[be], res = best_of(lambda: char_sum(L, chis, r, backend=be), args.repeat)
            values[be] = res.value.coeffs
            points = res.point_count
        if len(set(values.values())) != 1:
            raise SystemExit(f"backends disagree on q={p} r={r}")
        label = f"q={p} n={L.n} d={L.d} r={r}"
        speed = f"{times['numpy'] / times['numba']:.1f}x" if "numba" in times else "-"
        print(f"{label:<28}{points:>10}" + "".join(f"{times[b]:>11.3f}s" for b in backends) + f"{speed:>10}")


if __name__ == "__main__":
    main()
