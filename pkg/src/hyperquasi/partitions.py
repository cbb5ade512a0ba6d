"""Ordered and unordered proper partitions of k."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence, Union


class OrderedPartition(tuple):
    """An ordering ``(k_1, ..., k_t)`` of a proper partition of ``k`` (t >= 2, parts >= 1)."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(x) for x in parts)
        if len(parts) < 2:
            raise ValueError(f"a proper partition needs at least two parts, got {parts}")
        if any(x < 1 for x in parts):
            raise ValueError(f"parts must be positive, got {parts}")
        return super().__new__(cls, parts)

    @property
    def k(self) -> int:
        return sum(self)

    @property
    def t(self) -> int:
        return len(self)

    def canonical(self) -> "OrderedPartition":
        """Nondecreasing ordering of the same parts."""
        return OrderedPartition(sorted(self))

    def orderings(self) -> list["OrderedPartition"]:
        """Distinct orderings of these parts, in lexicographic order."""
        return [OrderedPartition(p) for p in sorted(set(itertools.permutations(self)))]

    def __str__(self) -> str:
        return "+".join(map(str, self))

    def __repr__(self) -> str:
        return f"OrderedPartition({tuple(self)})"


PartitionLike = Union[OrderedPartition, Sequence[int], str]


def as_partition(pi: PartitionLike) -> OrderedPartition:
    """Coerce ``"1+2"``, ``(1, 2)`` or an OrderedPartition; the given order is kept."""
    if isinstance(pi, OrderedPartition):
        return pi
    if isinstance(pi, str):
        try:
            return OrderedPartition(int(tok) for tok in pi.replace(",", "+").split("+"))
        except ValueError as exc:
            raise ValueError(f"cannot parse partition {pi!r}; expected e.g. '1+2'") from exc
    return OrderedPartition(pi)


def canonical(pi: PartitionLike) -> OrderedPartition:
    return as_partition(pi).canonical()


def proper_partitions(k: int) -> Iterator[OrderedPartition]:
    """All p(k) - 1 proper partitions of k, nondecreasing parts, lexicographic order."""

    def rec(remaining: int, smallest: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(smallest, remaining + 1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    for parts in rec(k, 1):
        if len(parts) >= 2:
            yield OrderedPartition(parts)


def is_refinement(finer: PartitionLike, coarser: PartitionLike) -> bool:
    """True if the parts of ``finer`` can be grouped to give the parts of ``coarser``."""
    finer = sorted(as_partition(finer))
    coarser = sorted(as_partition(coarser), reverse=True)
    if sum(finer) != sum(coarser):
        return False

    def place(i: int, bins: list[int]) -> bool:
        if i < 0:
            return all(b == 0 for b in bins)
        seen = set()
        for j, b in enumerate(bins):
            if b >= finer[i] and b not in seen:
                seen.add(b)
                bins[j] -= finer[i]
                if place(i - 1, bins):
                    bins[j] += finer[i]
                    return True
                bins[j] += finer[i]
        return False

    return place(len(finer) - 1, list(coarser))
