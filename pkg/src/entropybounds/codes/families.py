"""Code sequences: one code per block length n, from X^n into {0,1}*."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Sequence

from ..errors import InputError
from ..source_models import IidSource, as_symbols
from .bitstrings import BitString, canonical_bitstring, canonical_rank, check_bits, codeword_length
from .elias import elias_delta, elias_delta_decode, elias_delta_length
from .enumerative import rank_of_sequence, sequence_of_rank

ONE_TO_ONE = "one-to-one"
PREFIX = "prefix"


class CodeFamily(ABC):
    """Per-n encoder/decoder.

    ``kind`` is ``"one-to-one"`` (injective on each X^n, needs n to decode) or
    ``"prefix"`` (additionally prefix-free on each X^n).
    """

    kind: str = ONE_TO_ONE
    name: str = "code"
    k: int

    @abstractmethod
    def encode(self, n: int, seq: Sequence[int]) -> BitString: ...

    @abstractmethod
    def decode(self, n: int, bits: BitString) -> tuple[int, ...]: ...

    def length(self, n: int, seq: Sequence[int]) -> int:
        return len(self.encode(n, seq))

    def _symbols(self, n: int, seq: Sequence[int]) -> tuple[int, ...]:
        seq = as_symbols(seq, self.k)
        if len(seq) != n:
            raise InputError(f"sequence has length {len(seq)}, expected {n}")
        return seq

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class OptimalOneToOneCode(CodeFamily):
    """The r-th most probable sequence gets the r-th canonical bit string.

    No one-to-one code on X^n has a smaller expected length. Lengths come
    from the rank's bit length; the string itself is only built by ``encode``.
    """

    kind = ONE_TO_ONE
    name = "optimal"

    def __init__(self, source: IidSource):
        if not isinstance(source, IidSource):
            raise InputError("the optimal one-to-one code needs an i.i.d. source")
        self.source = source
        self.k = source.k

    def rank(self, n: int, seq: Sequence[int]) -> int:
        return rank_of_sequence(self.source, self._symbols(n, seq))

    def encode(self, n, seq):
        return canonical_bitstring(self.rank(n, seq))

    def length(self, n, seq):
        return codeword_length(self.rank(n, seq))

    def length_of_rank(self, rank: int) -> int:
        return codeword_length(rank)

    def decode(self, n, bits):
        return sequence_of_rank(self.source, n, canonical_rank(bits))


class IdentityCode(CodeFamily):
    """Fixed-width binary spelling of each symbol."""

    kind = PREFIX
    name = "identity"

    def __init__(self, k: int):
        if k < 2:
            raise InputError("alphabet needs at least two symbols")
        self.k = k
        self.width = (k - 1).bit_length()

    def encode(self, n, seq):
        fmt = f"0{self.width}b"
        return "".join(format(s, fmt) for s in self._symbols(n, seq))

    def length(self, n, seq):
        self._symbols(n, seq)
        return n * self.width

    def decode(self, n, bits):
        check_bits(bits)
        if len(bits) != n * self.width:
            raise InputError("codeword length does not match n")
        w = self.width
        out = tuple(int(bits[i : i + w], 2) for i in range(0, len(bits), w))
        if any(s >= self.k for s in out):
            raise InputError("codeword decodes to a symbol outside the alphabet")
        return out


class PrefixConvertedCode(CodeFamily):
    """Prepend the Elias delta code of ``len(inner codeword) + 1``.

    The header lets the decoder find the end of the payload, so each X^n image
    is prefix-free; the overhead is O(log l) bits for an l-bit codeword.
    """

    kind = PREFIX

    def __init__(self, inner: CodeFamily):
        self.inner = inner
        self.k = inner.k
        self.name = f"prefix:{inner.name}"

    def encode(self, n, seq):
        payload = self.inner.encode(n, seq)
        return elias_delta(len(payload) + 1) + payload

    def length(self, n, seq):
        inner = self.inner.length(n, seq)
        return elias_delta_length(inner + 1) + inner

    def length_of_rank(self, rank: int) -> int:
        inner = self.inner.length_of_rank(rank)
        return elias_delta_length(inner + 1) + inner

    def decode_prefix(self, n: int, bits: BitString, pos: int = 0) -> tuple[tuple[int, ...], int]:
        """Decode the codeword starting at ``pos``; returns ``(seq, consumed)``."""
        check_bits(bits)
        header, used = elias_delta_decode(bits, pos)
        start = pos + used
        end = start + header - 1
        if end > len(bits):
            raise InputError("truncated payload")
        return self.inner.decode(n, bits[start:end]), end - pos

    def decode(self, n, bits):
        seq, consumed = self.decode_prefix(n, bits)
        if consumed != len(bits):
            raise InputError("trailing bits after codeword")
        return seq


def optimal_one_to_one(source: IidSource) -> OptimalOneToOneCode:
    return OptimalOneToOneCode(source)


def to_prefix(inner: CodeFamily) -> PrefixConvertedCode:
    return PrefixConvertedCode(inner)
