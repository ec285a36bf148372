"""Canonical enumeration of {0,1}*: "", 0, 1, 00, 01, 10, 11, 000, ...

Bit strings are plain ``str`` objects over ``"0"`` and ``"1"``; the empty
string is a valid codeword.
"""
from __future__ import annotations

from ..errors import InputError

BitString = str


def check_bits(bits: str) -> str:
    if not isinstance(bits, str) or bits.strip("01"):
        raise InputError(f"not a bit string: {bits!r}")
    return bits


def codeword_length(rank: int) -> int:
    """``floor(log2(rank + 1))`` without floating point."""
    return (rank + 1).bit_length() - 1


def canonical_bitstring(rank: int) -> BitString:
    """The rank-th string (0-based) in length-then-lexicographic order."""
    if rank < 0:
        raise InputError("rank must be nonnegative")
    length = codeword_length(rank)
    if length == 0:
        return ""
    return format(rank + 1 - (1 << length), f"0{length}b")


def canonical_rank(bits: BitString) -> int:
    check_bits(bits)
    return (1 << len(bits)) - 1 + (int(bits, 2) if bits else 0)


def _prefix_length_sum(m: int) -> int:
    # sum_{j=1}^{m} floor(log2 j)
    if m <= 0:
        return 0
    top = m.bit_length() - 1
    full = (top - 2) * (1 << top) + 2  # sum_{k<top} k * 2^k
    return full + top * (m - (1 << top) + 1)


def sum_codeword_lengths(first: int, last: int) -> int:
    """``sum_{r=first}^{last} floor(log2(r + 1))`` in O(1) big-integer steps."""
    if last < first:
        return 0
    return _prefix_length_sum(last + 1) - _prefix_length_sum(first)


def strings_up_to_length(t: int) -> int:
    """How many canonical strings have length <= t (always 2^{t+1} - 1)."""
    return (1 << (t + 1)) - 1 if t >= 0 else 0


def last_rank_within_length(t: int) -> int:
    """Largest rank whose codeword has length <= t; -1 if t < 0."""
    return strings_up_to_length(t) - 1
