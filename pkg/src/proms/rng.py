"""Seedable 64-bit random source shared by the solver, generator, and tests.

The generator is SplitMix64: a single 64-bit counter advanced by the golden
ratio constant, finalized by a two-round xor/multiply mix. It is fast,
platform-independent, and trivially splittable (a child stream is seeded by
one output of the parent). The numba kernels carry the same algorithm on a
one-element uint64 array so that a stream started here can be handed to the
compiled solve loop and continued bit-exactly; `tests/test_rng.py` pins
that equivalence.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream. All draws are deterministic functions of the seed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    @property
    def state(self) -> int:
        """Raw 64-bit state, for handing the stream to a compiled kernel."""
        return self._state

    @state.setter
    def state(self, value: int) -> None:
        self._state = value & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n). Consumes exactly one draw."""
        i = int(self.next_double() * n)
        return n - 1 if i >= n else i

    def split(self) -> "SplitMix64":
        """Independent child stream seeded from one draw of this one."""
        return SplitMix64(self.next_u64())
