"""
Portable seeded randomness.

SplitMix64 (Steele, Lea & Flood 2014): the state advances by the golden-ratio
increment ``0x9E3779B97F4A7C15`` and each output is the state passed through

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all modulo 2^64. ``below(n)`` draws uniformly from ``[0, n)`` by rejecting
outputs at or above the largest multiple of ``n`` that fits in 64 bits, then
reducing modulo ``n``. Any language with 64-bit unsigned arithmetic reproduces
the same streams from the same seed.
"""

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def choice(self, seq):
        return seq[self.below(len(seq))]
