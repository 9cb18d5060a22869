"""Exact integer matrix helpers (Python ints, no overflow)."""
from __future__ import annotations

import threading
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


def identity(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


class PowerCache:
    """Lazily extended list of exact powers ``A^0, A^1, ...`` of a square matrix."""

    def __init__(self, adjacency: Sequence[Sequence[int]]):
        self.adjacency: IntMatrix = tuple(tuple(int(x) for x in row) for row in adjacency)
        self._powers: list[IntMatrix] = [identity(len(self.adjacency))]
        self._lock = threading.Lock()

    def __getitem__(self, s: int) -> IntMatrix:
        if s < 0:
            raise ValueError(f"matrix power must be >= 0, got {s}")
        if s >= len(self._powers):
            with self._lock:
                while len(self._powers) <= s:
                    self._powers.append(matmul(self._powers[-1], self.adjacency))
        return self._powers[s]
