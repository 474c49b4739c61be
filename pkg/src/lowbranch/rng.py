"""Seeded random numbers with a pinned algorithm.

Stream ``pcg64-v1``: raw 64-bit words from NumPy's ``PCG64`` bit generator
seeded with the integer seed, consumed in order. Bounded integers use
rejection sampling (``raw % k`` after discarding ``raw >= 2**64 - 2**64 % k``);
floats use the top 53 bits. The bit generator's stream is stable across NumPy
releases, and the derived values are defined here rather than by NumPy's
``Generator`` methods, so identical seeds give identical instances.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

import numpy as np

ALGORITHM = "pcg64-v1"
_TWO64 = 1 << 64
_BATCH = 256

T = TypeVar("T")


class Rng:
    def __init__(self, seed: int):
        if not 0 <= seed < _TWO64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self._bits = np.random.PCG64(seed)
        self._buf: list[int] = []

    def raw(self) -> int:
        if not self._buf:
            self._buf = [int(x) for x in self._bits.random_raw(_BATCH)][::-1]
        return self._buf.pop()

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)``."""
        if k <= 0:
            raise ValueError("bound must be positive")
        limit = _TWO64 - _TWO64 % k
        while True:
            r = self.raw()
            if r < limit:
                return r % k

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.raw() >> 11) * (1.0 / (1 << 53))

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def shuffle(self, items: MutableSequence) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        pool = list(items)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def spawn(self, index: int) -> "Rng":
        """Independent child stream derived from this seed and ``index``."""
        return Rng((self.seed * 0x9E3779B97F4A7C15 + index + 1) % _TWO64)
