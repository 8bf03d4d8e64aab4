"""Seeded, splittable random streams.

Every stochastic operation in the package consumes a RandomStream explicitly;
there is no hidden global randomness. Substreams obtained through split() are
statistically independent and fully determined by (seed, path of indices), so
Monte Carlo trials can be keyed by trial index and reproduced bit-for-bit in
any execution order.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ProbabilityMismatch

_PROB_TOL = 1e-9


class RandomStream:
    """Deterministic random source backed by PCG64 with hierarchical keys."""

    def __init__(self, entropy: int, key: tuple[int, ...] = ()):
        self._entropy = int(entropy)
        self._key = tuple(key)
        seq = np.random.SeedSequence(self._entropy, spawn_key=self._key)
        self._gen = np.random.Generator(np.random.PCG64(seq))

    @classmethod
    def from_seed(cls, seed: int) -> "RandomStream":
        return cls(seed)

    def split(self, index: int) -> "RandomStream":
        """Independent child stream; deterministic in (seed, ..., index)."""
        return RandomStream(self._entropy, self._key + (int(index),))

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return float(self._gen.random())

    def bit(self) -> int:
        return int(self._gen.integers(0, 2))

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self._gen.integers(0, n))

    def bernoulli(self, p: float) -> bool:
        return self._gen.random() < p

    def sign(self) -> int:
        """Uniform +1 / -1."""
        return 1 if self._gen.integers(0, 2) else -1

    def choice(self, probs: Sequence[float]) -> int:
        """Sample an index from a probability vector (must sum to 1)."""
        total = 0.0
        for p in probs:
            if p < -_PROB_TOL:
                raise ProbabilityMismatch(f"negative probability {p}")
            total += max(p, 0.0)
        if abs(total - 1.0) > 1e-6:
            raise ProbabilityMismatch(f"probabilities sum to {total}")
        u = self._gen.random() * total
        acc = 0.0
        for i, p in enumerate(probs):
            acc += max(p, 0.0)
            if u < acc:
                return i
        return len(probs) - 1
