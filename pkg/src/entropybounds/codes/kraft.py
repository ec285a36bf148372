"""Exact Kraft sums and prefix-freeness checks."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from ..errors import InputError


class KraftSum(NamedTuple):
    value: Fraction
    ok: bool


def kraft_sum(lengths: Iterable[int]) -> KraftSum:
    """``sum 2^-l`` as an exact dyadic rational, with the ``<= 1`` verdict."""
    lengths = list(lengths)
    if any(l < 0 for l in lengths):
        raise InputError("codeword lengths must be nonnegative")
    if not lengths:
        return KraftSum(Fraction(0), True)
    top = max(lengths)
    value = Fraction(sum(1 << (top - l) for l in lengths), 1 << top)
    return KraftSum(value, value <= 1)


def is_prefix_free(codewords: Iterable[str]) -> bool:
    """No codeword is a prefix of another (duplicates count as violations)."""
    words = sorted(codewords)
    # in sorted order a prefix sits immediately before some word it prefixes
    return all(not b.startswith(a) for a, b in zip(words, words[1:]))
