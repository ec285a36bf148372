"""Exact typical-set membership, size and probability mass.

A length-n sequence is typical when ``H - eps <= -(1/n) log2 p <= H + eps``
(closed interval). For i.i.d. sources membership is a function of the count
vector alone, so the set is enumerated one type class at a time: cardinality is
an exact integer and the mass an exact rational, converted to float only at the
end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .combinatorics import check_class_capacity, count_vectors, multinomial
from .errors import InputError
from .source_models import IidSource, SourceModel, as_symbols


def _check_epsilon(epsilon: float) -> None:
    if not epsilon > 0:
        raise InputError(f"epsilon must be > 0, got {epsilon!r}")


def typicality_deviation(source: IidSource, counts: Sequence[int]) -> float:
    """``n * (-(1/n) log2 p(x) - H)`` for any x with these counts.

    Written as ``sum_i (c_i - n p_i) * (-log2 p_i)`` with the bracket computed
    exactly, so a sequence whose empirical distribution equals the source
    distribution lands on exactly 0.0. Returns inf for impossible classes.
    """
    n = sum(counts)
    terms = []
    for c, p, lp in zip(counts, source.exact_probs, source.log2_probs):
        if p == 0:
            if c:
                return math.inf
            continue
        terms.append(float(c - n * p) * -lp)
    return math.fsum(terms)


def class_is_typical(source: IidSource, counts: Sequence[int], epsilon: float) -> bool:
    dev = typicality_deviation(source, counts)
    slack = sum(counts) * epsilon
    return -slack <= dev <= slack


def is_typical(source: SourceModel, seq: Sequence[int], epsilon: float) -> bool:
    _check_epsilon(epsilon)
    if isinstance(source, IidSource):
        return class_is_typical(source, source.counts(seq), epsilon)
    seq = as_symbols(seq, source.k)
    n = len(seq)
    lp = source.log2_prob(seq)
    if lp == -math.inf:
        return False
    dev = -lp - n * source.entropy_rate()
    return -n * epsilon <= dev <= n * epsilon


def class_weight(source: IidSource, counts: Sequence[int]) -> int:
    """Numerator of p(x) over ``denominator ** n`` for x in the class."""
    w = 1
    for a, c in zip(source.weights, counts):
        if c:
            w *= a**c
    return w


def typical_classes(
    source: IidSource, n: int, epsilon: float
) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """Yield ``(counts, class size, class weight)`` for every typical class."""
    _check_epsilon(epsilon)
    if n < 1:
        raise InputError("n must be at least 1")
    check_class_capacity(source.k, n)
    for counts in count_vectors(source.k, n):
        if class_is_typical(source, counts, epsilon):
            yield counts, multinomial(counts), class_weight(source, counts)


@dataclass(frozen=True)
class TypicalReport:
    n: int
    epsilon: float
    cardinality: int
    mass: float
    log2_bound_upper: float
    log2_bound_lower: float
    mass_ok: bool
    upper_ok: bool
    lower_ok: bool
    exact_mass: Fraction = field(repr=False, compare=False, default=Fraction(0))

    csv_header = ("n", "epsilon", "cardinality", "mass", "mass_ok", "upper_ok", "lower_ok")

    @property
    def bound_upper_card(self) -> float:
        """``2^{n(H+eps)}``; inf when it overflows a double."""
        return _pow2(self.log2_bound_upper)

    @property
    def bound_lower_card(self) -> float:
        return _pow2(self.log2_bound_lower)

    def csv_row(self) -> tuple:
        return (
            self.n,
            repr(self.epsilon),
            str(self.cardinality),
            repr(self.mass),
            self.mass_ok,
            self.upper_ok,
            self.lower_ok,
        )


def _pow2(x: float) -> float:
    try:
        return 2.0**x
    except OverflowError:
        return math.inf


def typical_summary(source: IidSource, n: int, epsilon: float) -> TypicalReport:
    if not isinstance(source, IidSource):
        raise InputError("typical_summary needs an i.i.d. source")
    card = 0
    num = 0
    for _, size, weight in typical_classes(source, n, epsilon):
        card += size
        num += size * weight
    mass = Fraction(num, source.denominator**n)
    h = source.entropy_rate()
    log2_upper = n * (h + epsilon)
    log2_lower = math.log2(1 - epsilon) + n * (h - epsilon) if epsilon < 1 else -math.inf
    log2_card = math.log2(card) if card else -math.inf
    return TypicalReport(
        n=n,
        epsilon=epsilon,
        cardinality=card,
        mass=float(mass),
        log2_bound_upper=log2_upper,
        log2_bound_lower=log2_lower,
        mass_ok=mass > 1 - Fraction(epsilon),
        upper_ok=log2_card <= log2_upper,
        lower_ok=log2_card >= log2_lower,
        exact_mass=mass,
    )


def aep_curve(source: IidSource, n_values: Iterable[int], epsilon: float) -> list[TypicalReport]:
    return [typical_summary(source, n, epsilon) for n in n_values]


def sustained_from(reports: Sequence[TypicalReport], attr: str = "mass_ok") -> int | None:
    """First n after which ``attr`` holds on every remaining report, else None."""
    start = None
    for r in reports:
        if getattr(r, attr):
            if start is None:
                start = r.n
        else:
            start = None
    return start

