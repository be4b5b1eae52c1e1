"""Deterministic pseudo-randomness for seeded experiments.

SplitMix64 is used instead of the stdlib Mersenne Twister so that drawn
test data is reproducible byte for byte across Python versions and
platforms; random.Random makes no such guarantee for its float paths, and
the experiment records in this package are keyed by seed.  The constants
are the standard SplitMix64 increment and mixing multipliers.

Scalar draws are intentionally tame: rationals have small numerators and
denominators so that exact arithmetic stays cheap, and prime-field draws
are uniform residues.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator: a 64-bit counter plus a finalizing mix."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-enough integer in [0, n); n is tiny here, so modulo bias is negligible."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n


def draw_scalar(rng: SplitMix64, field):
    """A small random element of the scalar field."""
    if field.p is None:
        num = rng.below(9) - 4
        den = rng.below(4) + 1
        return Fraction(num, den)
    return rng.below(field.p)


def draw_series(rng: SplitMix64, ring, min_deg: int, max_deg: int):
    """A random series supported on degrees min_deg..max_deg inclusive."""
    if min_deg < 0 or max_deg < min_deg:
        raise ValueError("bad degree window")
    coeffs = [ring.field.zero] * (max_deg + 1)
    for k in range(min_deg, max_deg + 1):
        coeffs[k] = draw_scalar(rng, ring.field)
    return ring.series(coeffs)
