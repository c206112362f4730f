"""Partitions with an explicit length.

Trailing zeros are significant here: ``(2, 1)`` and ``(2, 1, 0)`` are different
partitions, with lengths 2 and 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be nonnegative: {parts}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def is_strict(self) -> bool:
        """True if every part exceeds the next; the last part may be zero."""
        return all(a > b for a, b in zip(self.parts, self.parts[1:]))

    def without(self, j: int) -> "Partition":
        return Partition(self.parts[:j] + self.parts[j + 1:])

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def rho(k: int) -> Partition:
    """The staircase ``(k, k-1, ..., 1)``."""
    if k < 1:
        raise ValueError(f"rho requires k >= 1, got {k}")
    return Partition(range(k, 0, -1))


def rho0(k: int) -> Partition:
    """The staircase ``(k, k-1, ..., 1, 0)`` of length ``k + 1``."""
    if k < 0:
        raise ValueError(f"rho0 requires k >= 0, got {k}")
    return Partition(range(k, -1, -1))


def add(a: Partition, b: Partition) -> Partition:
    if len(a) != len(b):
        raise ValueError(f"cannot add partitions of lengths {len(a)} and {len(b)}")
    return Partition(x + y for x, y in zip(a, b))


def enumerate_partitions(length: int, max_weight: int) -> list[Partition]:
    """All partitions of the given length with weight at most ``max_weight``.

    Output is in lexicographically descending order of the parts.
    """
    if length < 1:
        raise ValueError("length must be positive")
    if max_weight < 0:
        return []
    out: list[Partition] = []

    def rec(prefix: list[int], slots: int, budget: int, cap: int) -> None:
        if slots == 0:
            out.append(Partition(prefix))
            return
        for p in range(min(cap, budget), -1, -1):
            prefix.append(p)
            rec(prefix, slots - 1, budget - p, p)
            prefix.pop()

    rec([], length, max_weight, max_weight)
    return out
