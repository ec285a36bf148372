"""Code families over finite alphabets and the helpers they are built from."""
from __future__ import annotations

from ..errors import InputError
from ..source_models import IidSource, SourceModel
from .bitstrings import (
    BitString,
    canonical_bitstring,
    canonical_rank,
    codeword_length,
    sum_codeword_lengths,
)
from .elias import (
    elias_delta,
    elias_delta_decode,
    elias_delta_length,
    elias_gamma,
    elias_gamma_decode,
)
from .enumerative import class_table, rank_of_sequence, sequence_of_rank
from .families import (
    CodeFamily,
    IdentityCode,
    OptimalOneToOneCode,
    PrefixConvertedCode,
    optimal_one_to_one,
    to_prefix,
)
from .huffman import HuffmanBlockCode, huffman_block
from .kraft import KraftSum, is_prefix_free, kraft_sum


def build_code(spec: str, source: SourceModel) -> CodeFamily:
    """Code family from a short name.

    ``optimal`` (alias ``optimal-one-to-one``), ``identity``, ``huffman:B``,
    ``prefix`` (prefix conversion of ``optimal``) or ``prefix:<inner spec>``.
    """
    spec = spec.strip()
    if spec in ("optimal", "optimal-one-to-one"):
        if not isinstance(source, IidSource):
            raise InputError("the optimal one-to-one code needs an i.i.d. source")
        return OptimalOneToOneCode(source)
    if spec == "identity":
        return IdentityCode(source.k)
    if spec.startswith("huffman:"):
        try:
            block = int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad Huffman block length in {spec!r}") from None
        return HuffmanBlockCode(source, block)
    if spec == "prefix" or spec == "prefix-converted":
        return PrefixConvertedCode(build_code("optimal", source))
    if spec.startswith("prefix:"):
        return PrefixConvertedCode(build_code(spec.split(":", 1)[1], source))
    raise InputError(f"unknown code family {spec!r}")
