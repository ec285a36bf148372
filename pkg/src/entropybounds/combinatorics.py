"""Arbitrary-precision counting helpers for type classes."""
from __future__ import annotations

from math import comb
from typing import Iterator, Sequence

from .errors import CapacityError

MAX_CLASSES = 10_000_000


def multinomial(counts: Sequence[int]) -> int:
    """Number of sequences with the given symbol counts."""
    out = 1
    total = 0
    for c in counts:
        total += c
        out *= comb(total, c)
    return out


def num_classes(k: int, n: int) -> int:
    return comb(n + k - 1, k - 1)


def check_class_capacity(k: int, n: int, limit: int = MAX_CLASSES) -> None:
    m = num_classes(k, n)
    if m > limit:
        raise CapacityError(
            f"{m} type classes for K={k}, n={n} exceeds the limit of {limit}"
        )


def count_vectors(k: int, n: int) -> Iterator[tuple[int, ...]]:
    """All length-k nonnegative vectors summing to n, lexicographically ascending."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in count_vectors(k - 1, n - first):
            yield (first, *rest)
