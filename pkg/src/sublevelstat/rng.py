"""Deterministic random streams.

All randomness that affects file output flows through the generator defined
here, so that a run is reproducible from its seed alone, independent of
platform, process count, or library versions.  The algorithm is fixed by
this module's contract:

* Integer stream: SplitMix64.  State ``s`` is a 64-bit unsigned integer.
  Each step: ``s += 0x9E3779B97F4A7C15`` (mod 2^64), then the output is
  ``z = s``; ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; ``z ^= (z >> 31)``
  (all mod 2^64).
* Uniform doubles on (0, 1]: ``((next_u64() >> 11) + 1) * 2**-53``.
* Gaussians: Box-Muller.  Two uniforms ``u1, u2`` give
  ``r = sqrt(-2 ln u1)``, and the pair ``r cos(2 pi u2)``, ``r sin(2 pi u2)``
  is emitted in that order.
* Substreams: ``derive_seed(base, *indices)`` folds each index into the
  state with one SplitMix64 output step per index (see below), so replicate
  streams are independent and reorderable.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_TWO_PI = 2.0 * math.pi
_INV_2_53 = 2.0 ** -53


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Derive a substream seed from a base seed and integer indices.

    Each index is xored into the running state, which is then advanced by
    one SplitMix64 step.  Distinct index tuples give (for all practical
    purposes) unrelated streams.
    """
    state = base & _MASK
    for idx in indices:
        state = (state ^ (idx & _MASK)) & _MASK
        state = (state + _GAMMA) & _MASK
        state = _mix(state)
    return state


class Stream:
    """SplitMix64-backed stream of integers, uniforms and Gaussians."""

    __slots__ = ("_state", "_spare")

    def __init__(self, seed: int):
        self._state = seed & _MASK
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def uniform(self) -> float:
        """Uniform double in (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * _INV_2_53

    def uniforms(self, count: int) -> list[float]:
        return [self.uniform() for _ in range(count)]

    def gaussian(self) -> float:
        """Standard normal draw (Box-Muller, pairs cached)."""
        if self._spare is not None:
            value = self._spare
            self._spare = None
            return value
        u1 = self.uniform()
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        self._spare = radius * math.sin(_TWO_PI * u2)
        return radius * math.cos(_TWO_PI * u2)

    def gaussians(self, count: int) -> list[float]:
        return [self.gaussian() for _ in range(count)]
