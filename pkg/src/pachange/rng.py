"""Counter-style 64-bit RNG used by every sampler in the package.

The generator is SplitMix64.  Replicate r of an experiment with master seed
``s`` runs on its own stream seeded with ``mix64(s ^ r)`` (the SplitMix64
finalizer applied to the xor), so replicates are reproducible independently
of how they are batched across threads.  The compiled kernels implement the
exact same arithmetic; streams are bit-identical across backends.
"""

from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a 64-bit avalanche permutation."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


def derive_seed(master_seed: int, replicate_index: int) -> int:
    """Stream seed for one replicate: mix64(master_seed XOR replicate_index)."""
    return mix64((master_seed ^ replicate_index) & _MASK)


class SplitMix64:
    """Sequential SplitMix64 stream with unbiased bounded draws."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        # 53 high bits -> [0, 1)
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def bounded(self, bound: int) -> int:
        """Uniform integer in [0, bound) via Lemire's multiply-shift rejection."""
        x = self.next_u64()
        m = x * bound
        low = m & _MASK
        if low < bound:
            threshold = (_MASK + 1 - bound) % bound
            while low < threshold:
                x = self.next_u64()
                m = x * bound
                low = m & _MASK
        return m >> 64
