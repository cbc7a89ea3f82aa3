"""SplitMix64, the pinned generator behind every seeded scan.

The algorithm (Steele, Lea and Flood; also the seeder of xoshiro) is::

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    return z ^ (z >> 31)

``randbelow(n)`` is ``next() % n``.  Instance ``i`` of a scan with seed
``s`` draws from ``SplitMix64(k_i)`` where ``k_i`` is the ``i``-th output
(0-based) of ``SplitMix64(s)``, so instances can be generated independently.
"""

from __future__ import annotations

__all__ = ["SplitMix64", "instance_seeds"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError(f"randbelow needs n >= 1, got {n}")
        return self.next() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.randbelow(hi - lo + 1)


def instance_seeds(seed: int, count: int) -> list[int]:
    g = SplitMix64(seed)
    return [g.next() for _ in range(count)]
