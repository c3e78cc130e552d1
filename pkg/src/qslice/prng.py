"""Deterministic counter-based PRNG used by all generators.

SplitMix64: output k of stream ``key`` is a fixed 64-bit mix of
``key + (k+1)*GOLDEN``.  Counter-based (no hidden state beyond the
counter) and splittable (child streams derive their key by mixing a
label into the parent key), so independent cases can draw concurrently
and reports are reproducible bit-for-bit on any platform or Python
version.  The mixing constants are the standard SplitMix64 ones.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class Stream:
    """One SplitMix64 stream; immutable key, advancing counter."""

    __slots__ = ("key", "_counter")

    def __init__(self, key: int):
        self.key = key & _MASK
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return _mix(self.key + self._counter * _GOLDEN)

    def split(self, label: int) -> "Stream":
        """Derive an independent child stream; pure in (key, label)."""
        return Stream(_mix(self.key ^ _mix(label * _GOLDEN + 0x1F123BB5)))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], by rejection on 64-bit draws."""
        if lo > hi:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (_MASK + 1) - ((_MASK + 1) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + (x % span)


def stream(*labels: int) -> Stream:
    """Root stream for a tuple of integer labels (seed, case ids, ...)."""
    s = Stream(0x5EED5EED5EED5EED)
    for lab in labels:
        s = s.split(lab & _MASK)
    return s
