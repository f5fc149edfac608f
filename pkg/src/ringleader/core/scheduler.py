"""Seeded uniformly random interaction scheduler.

Each step one arc ``(u_i, u_{i+1 mod n})`` is chosen uniformly; the stream
yields the initiator index ``i``.  The generator is numpy's PCG64, so a seed
fully determines the interaction sequence on any platform.
"""
from __future__ import annotations

import numpy as np

_CHUNK = 8192


class SchedulerStream:
    """Deterministic stream of interaction indices, uniform over [0, n)."""

    def __init__(self, n: int, seed: int):
        if n < 2:
            raise ValueError(f"need at least 2 agents, got n={n}")
        self.n = n
        self.seed = seed
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self._buf: list[int] = []
        self._pos = 0

    def next_index(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._rng.integers(0, self.n, size=_CHUNK).tolist()
            self._pos = 0
        idx = self._buf[self._pos]
        self._pos += 1
        return idx

    def draw(self, count: int) -> list[int]:
        """Consume and return the next ``count`` indices."""
        out = self._buf[self._pos : self._pos + count]
        self._pos += len(out)
        while len(out) < count:
            take = min(_CHUNK, count - len(out))
            out.extend(self._rng.integers(0, self.n, size=take).tolist())
        return out

    def __iter__(self):
        while True:
            yield self.next_index()
