"""Rank and unrank length-n sequences in order of decreasing probability.

The total order on X^n: higher probability first; equal probabilities are
broken by count vector (descending lexicographic, so classes heavier in low
symbols come first; for K=2 that is ascending number of ones), then by the
sequence itself (ascending lexicographic). Probabilities are compared as exact integers
``prod a_i^{c_i}`` over a shared denominator, so ties are real ties.

A sequence's rank is the number of sequences in strictly earlier classes plus
its lexicographic index inside its own class. The index is computed by the
usual enumerative-coding recurrence with incremental multinomials, so nothing
of size K^n is ever materialised.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ..combinatorics import check_class_capacity, count_vectors, multinomial
from ..errors import InputError
from ..source_models import IidSource, as_symbols
from ..typical_sets import class_weight


@dataclass(frozen=True, eq=False)
class ClassTable:
    """Type classes of X^n in rank order, with their first ranks."""

    n: int
    counts: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    weights: tuple[int, ...]
    offsets: tuple[int, ...]
    position: dict
    denominator: int  # p(x) = weight / denominator for x in a class

    @property
    def total(self) -> int:
        return self.offsets[-1] + self.sizes[-1]

    def class_of_rank(self, rank: int) -> int:
        return bisect_right(self.offsets, rank) - 1


@lru_cache(maxsize=128)
def class_table(source: IidSource, n: int) -> ClassTable:
    if n < 1:
        raise InputError("n must be at least 1")
    check_class_capacity(source.k, n)
    entries = [(class_weight(source, c), c) for c in count_vectors(source.k, n)]
    entries.sort(key=lambda e: (-e[0], [-c for c in e[1]]))
    counts = tuple(c for _, c in entries)
    sizes = tuple(multinomial(c) for c in counts)
    offsets = []
    acc = 0
    for s in sizes:
        offsets.append(acc)
        acc += s
    return ClassTable(
        n=n,
        counts=counts,
        sizes=sizes,
        weights=tuple(w for w, _ in entries),
        offsets=tuple(offsets),
        position={c: i for i, c in enumerate(counts)},
        denominator=source.denominator**n,
    )


def index_in_class(seq: Sequence[int], counts: Sequence[int]) -> int:
    """Lexicographic index of ``seq`` among all sequences with ``counts``."""
    remaining = list(counts)
    m = len(seq)
    completions = multinomial(remaining)
    index = 0
    for x in seq:
        # completions == multinomial(remaining) at the top of each step
        for s in range(x):
            if remaining[s]:
                index += completions * remaining[s] // m
        completions = completions * remaining[x] // m
        remaining[x] -= 1
        m -= 1
    return index


def sequence_in_class(index: int, counts: Sequence[int]) -> tuple[int, ...]:
    remaining = list(counts)
    m = sum(remaining)
    completions = multinomial(remaining)
    if not 0 <= index < completions:
        raise InputError("index outside the type class")
    out = []
    for _ in range(m):
        for s, c in enumerate(remaining):
            if not c:
                continue
            block = completions * c // m
            if index < block:
                out.append(s)
                completions = block
                remaining[s] -= 1
                m -= 1
                break
            index -= block
    return tuple(out)


def rank_of_sequence(source: IidSource, seq: Sequence[int]) -> int:
    seq = as_symbols(seq, source.k)
    table = class_table(source, len(seq))
    counts = source.counts(seq)
    i = table.position[counts]
    return table.offsets[i] + index_in_class(seq, counts)


def sequence_of_rank(source: IidSource, n: int, rank: int) -> tuple[int, ...]:
    table = class_table(source, n)
    if not 0 <= rank < table.total:
        raise InputError(f"rank {rank} outside 0..K^n-1 for n={n}")
    i = table.class_of_rank(rank)
    return sequence_in_class(rank - table.offsets[i], table.counts[i])
