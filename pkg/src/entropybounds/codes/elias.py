"""Elias gamma and delta codes for positive integers."""
from __future__ import annotations

from ..errors import InputError
from .bitstrings import BitString


def _check_positive(value: int) -> None:
    if value < 1:
        raise InputError(f"Elias codes need an integer >= 1, got {value}")


def elias_gamma(value: int) -> BitString:
    _check_positive(value)
    body = format(value, "b")
    return "0" * (len(body) - 1) + body


def elias_delta(value: int) -> BitString:
    _check_positive(value)
    body = format(value, "b")
    return elias_gamma(len(body)) + body[1:]


def elias_delta_length(value: int) -> int:
    _check_positive(value)
    top = value.bit_length() - 1
    return top + 2 * (top + 1).bit_length() - 1


def elias_gamma_decode(bits: BitString, pos: int = 0) -> tuple[int, int]:
    """Decode one gamma codeword starting at ``pos``.

    Returns ``(value, consumed)``.
    """
    zeros = 0
    while pos + zeros < len(bits) and bits[pos + zeros] == "0":
        zeros += 1
    end = pos + 2 * zeros + 1
    if end > len(bits):
        raise InputError("truncated Elias gamma codeword")
    return int(bits[pos + zeros : end], 2), end - pos


def elias_delta_decode(bits: BitString, pos: int = 0) -> tuple[int, int]:
    width, used = elias_gamma_decode(bits, pos)
    start = pos + used
    end = start + width - 1
    if end > len(bits):
        raise InputError("truncated Elias delta codeword")
    return int("1" + bits[start:end], 2), end - pos
