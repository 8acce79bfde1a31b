"""Seedable, portable random sampling for the verification suites.

The generator is splitmix64 (Steele, Lea, Flood 2014), chosen because it is
trivial to reimplement bit-for-bit in any language: given the same 64-bit
seed, every implementation draws the same sample stream.  Integer draws use
plain modular reduction of the next 64-bit output; see README for the exact
contract.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (modular reduction, documented)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def fraction(self, max_num: int = 5, max_den: int = 4) -> Fraction:
        """A small random rational with numerator in [-max_num, max_num]."""
        return Fraction(self.randint(-max_num, max_num), self.randint(1, max_den))

    def nonzero_fraction(self, max_num: int = 5, max_den: int = 4) -> Fraction:
        while True:
            f = self.fraction(max_num, max_den)
            if f:
                return f

    def degree(self, n: int, lo: int, hi: int) -> tuple:
        return tuple(self.randint(lo, hi) for _ in range(n))
