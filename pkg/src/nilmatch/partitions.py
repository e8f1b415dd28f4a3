"""Integer partitions as used by the Jordan-type orbit labels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator


@dataclass(frozen=True, order=False)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if not parts or any(x < 1 for x in parts):
            raise ValueError(f"invalid partition {self.parts!r}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> Partition:
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def to_json(self) -> list[int]:
        return list(self.parts)

    def gcd(self) -> int:
        return reduce(math.gcd, self.parts)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order, (n) first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def multiplicity(lam: Partition, j: int) -> int:
    return sum(1 for x in lam.parts if x == j)


def multiplicities(lam: Partition) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in lam.parts:
        out[x] = out.get(x, 0) + 1
    return out


def is_symplectic_admissible(lam: Partition) -> bool:
    """Odd parts occur with even multiplicity."""
    return all(m % 2 == 0 for j, m in multiplicities(lam).items() if j % 2)


def transpose(lam: Partition) -> Partition:
    return Partition(tuple(sum(1 for x in lam.parts if x > i) for i in range(lam.parts[0])))


def count_bound(n: int, partitions_subset: Iterable[Partition]) -> int:
    """Sum of gcd(lambda)^2 over the given partitions."""
    return sum(lam.gcd() ** 2 for lam in partitions_subset)
