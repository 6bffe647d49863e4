"""Deterministic random-number streams.

Every stochastic component in the package draws from a `RngStream`, a
(seed, stream) pair mapped to an independent `numpy.random.Generator`.
Equal pairs yield bit-identical draw sequences on every platform, which
is what makes solver runs and generated benchmark instances exactly
reproducible.
"""

from dataclasses import dataclass

import numpy as np

# spawn_key entries must fit in an unsigned 32-bit word
_MAX_STREAM = 2**32 - 1


@dataclass(frozen=True)
class RngStream:
    """Named substream of a master seed.

    Parameters
    ----------
    seed : int
        Master seed, any non-negative integer.
    stream : int
        Substream index. Distinct indices give statistically independent
        generators derived from the same master seed.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.stream, int) or isinstance(self.stream, bool):
            raise ValueError(f"stream must be an integer, got {self.stream!r}")
        if not 0 <= self.stream <= _MAX_STREAM:
            raise ValueError(f"stream must be in [0, {_MAX_STREAM}], got {self.stream}")

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of the stream."""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.default_rng(seq)
