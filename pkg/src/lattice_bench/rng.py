"""Deterministic 64-bit PRNG: splitmix64-seeded xoshiro256**.

The generator is specified bit-exactly so that instances can be regenerated
from a seed by any implementation:

* seeding: four consecutive splitmix64 outputs of the 64-bit seed form the
  xoshiro256** state ``s[0..3]``;
* output: ``rotl(s[1] * 5, 7) * 9`` with the usual xoshiro256** state update,
  all arithmetic mod 2**64.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def _splitmix64_next(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** stream seeded via splitmix64 from a 64-bit seed."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        sm = seed & _MASK64
        s = []
        for _ in range(4):
            sm, out = _splitmix64_next(sm)
            s.append(out)
        # xoshiro256** must not be seeded with the all-zero state.
        if not any(s):  # pragma: no cover - splitmix64 never yields four zeros
            s[0] = 1
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # Largest multiple of `bound` that fits in 64 bits.
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            z = self.next_u64()
            if z < limit:
                return z % bound
