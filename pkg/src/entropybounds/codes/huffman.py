"""Huffman codes on blocks of B symbols, concatenated for longer inputs."""
from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CapacityError, InputError
from ..source_models import IidSource, MarkovSource, SourceModel
from .bitstrings import BitString, check_bits
from .families import PREFIX, CodeFamily
from .kraft import KraftSum, kraft_sum

MAX_BLOCKS = 1 << 20


def huffman_lengths(weights: Sequence) -> list[int]:
    """Optimal prefix-code lengths for nonnegative ``weights``.

    The two lightest nodes are merged first; equal weights are ordered by the
    smallest leaf index under each node, so the result is reproducible.
    """
    m = len(weights)
    if m == 1:
        return [1]
    parent = [0] * (2 * m - 1)
    heap = [(w, i, i) for i, w in enumerate(weights)]
    heapq.heapify(heap)
    node = m
    while len(heap) > 1:
        wa, la, a = heapq.heappop(heap)
        wb, lb, b = heapq.heappop(heap)
        parent[a] = parent[b] = node
        heapq.heappush(heap, (wa + wb, min(la, lb), node))
        node += 1
    depth = [0] * (2 * m - 1)
    # parents are created after their children, so walk ids downward
    for v in range(2 * m - 3, -1, -1):
        depth[v] = depth[parent[v]] + 1
    return depth[:m]


def canonical_codewords(lengths: Sequence[int]) -> list[BitString]:
    """Canonical prefix code for ``lengths`` (ordered by length, then index)."""
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    words = [""] * len(lengths)
    code = 0
    prev = lengths[order[0]]
    for j, i in enumerate(order):
        if j:
            code = (code + 1) << (lengths[i] - prev)
        prev = lengths[i]
        words[i] = format(code, f"0{lengths[i]}b") if lengths[i] else ""
    return words


def block_weights_iid(source: IidSource, block: int) -> list[int]:
    """Exact block probabilities times ``denominator**block``, lexicographic order."""
    out = [1]
    for _ in range(block):
        out = [w * a for w in out for a in source.weights]
    return out


def block_log2_probs_markov(source: MarkovSource, block: int) -> np.ndarray:
    k = source.k
    with np.errstate(divide="ignore"):
        log_t = np.log2(source.matrix)
        lp = np.log2(np.asarray(source.initial))
    last = np.arange(k)
    for _ in range(block - 1):
        lp = (lp[:, None] + log_t[last]).ravel()
        last = np.tile(np.arange(k), len(last))
    return lp


class HuffmanBlockCode(CodeFamily):
    """Huffman code on X^B; inputs of length m*B are coded block by block."""

    kind = PREFIX

    def __init__(self, source: SourceModel, block: int):
        if block < 1:
            raise InputError("block length must be at least 1")
        k = source.k
        if k**block > MAX_BLOCKS:
            raise CapacityError(f"K^B = {k}^{block} blocks exceeds the limit of {MAX_BLOCKS}")
        self.source = source
        self.k = k
        self.block = block
        self.name = f"huffman:{block}"
        if isinstance(source, IidSource):
            self.exact_weights: list[int] | None = block_weights_iid(source, block)
            den = source.denominator**block
            self.probs = [w / den for w in self.exact_weights]
            self.lengths = huffman_lengths(self.exact_weights)
        else:
            self.exact_weights = None
            self.probs = np.exp2(block_log2_probs_markov(source, block)).tolist()
            self.lengths = huffman_lengths(self.probs)
        self.codewords = canonical_codewords(self.lengths)
        self._lookup = {w: i for i, w in enumerate(self.codewords)}
        self._max_len = max(self.lengths)

    def block_index(self, block_seq: Sequence[int]) -> int:
        idx = 0
        for s in block_seq:
            idx = idx * self.k + s
        return idx

    def block_symbols(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.block):
            index, s = divmod(index, self.k)
            out.append(s)
        return tuple(reversed(out))

    def _check_multiple(self, n: int) -> None:
        if n % self.block:
            raise InputError(f"n={n} is not a multiple of the block length {self.block}")

    def _blocks(self, n, seq):
        self._check_multiple(n)
        seq = self._symbols(n, seq)
        b = self.block
        return [self.block_index(seq[i : i + b]) for i in range(0, n, b)]

    def encode(self, n, seq):
        return "".join(self.codewords[i] for i in self._blocks(n, seq))

    def length(self, n, seq):
        return sum(self.lengths[i] for i in self._blocks(n, seq))

    def decode(self, n, bits):
        self._check_multiple(n)
        check_bits(bits)
        out: list[int] = []
        pos = 0
        for _ in range(n // self.block):
            end = pos + 1
            while bits[pos:end] not in self._lookup:
                if end - pos >= self._max_len or end > len(bits):
                    raise InputError("bits do not decode to a block")
                end += 1
            out.extend(self.block_symbols(self._lookup[bits[pos:end]]))
            pos = end
        if pos != len(bits):
            raise InputError("trailing bits after the last block")
        return tuple(out)

    def expected_length(self) -> float:
        """Expected codeword length of one block, in bits."""
        if self.exact_weights is not None:
            return float(self.exact_expected_length())
        return math.fsum(l * p for l, p in zip(self.lengths, self.probs))

    def exact_expected_length(self) -> Fraction:
        if self.exact_weights is None:
            raise InputError("exact expectation needs an i.i.d. source")
        num = sum(l * w for l, w in zip(self.lengths, self.exact_weights))
        return Fraction(num, self.source.denominator**self.block)

    def block_entropy(self) -> float:
        return math.fsum(-p * math.log2(p) for p in self.probs if p > 0)

    def kraft(self) -> KraftSum:
        return kraft_sum(self.lengths)

    def table_rows(self) -> list[tuple[int, str]]:
        """``(block index, codeword)`` pairs in block-index order."""
        return list(enumerate(self.codewords))


def huffman_block(source: SourceModel, n: int) -> HuffmanBlockCode:
    return HuffmanBlockCode(source, n)
