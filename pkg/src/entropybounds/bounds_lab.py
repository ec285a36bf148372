"""Experiments that measure code lengths against entropy.

* ``c_set_report``: probability of typical sequences whose codeword is at least
  ``3*eps*n + 1`` bits shorter than ``log2 |A|``, against ``2^{-eps n}``.
* ``average_curve``: exact expected length per symbol, and its shortfall from H.
* ``pointwise_trajectories``: ``l_n / n`` along sampled source paths.
* ``shannon_nq``: how many most-probable sequences are needed to reach mass q.

Everything that can be exact is: class sizes, ranks and masses are integers or
rationals, and floats only appear in the final columns.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .codes.bitstrings import codeword_length, sum_codeword_lengths
from .codes.enumerative import class_table
from .codes.families import CodeFamily, IdentityCode, OptimalOneToOneCode
from .codes.huffman import HuffmanBlockCode
from .errors import CapacityError, InputError
from .source_models import IidSource, SourceModel
from .typical_sets import class_is_typical, typical_summary

MAX_SEQUENCES = 1 << 20


def _need_iid(source: SourceModel) -> IidSource:
    if not isinstance(source, IidSource):
        raise InputError("this experiment needs an i.i.d. source")
    return source


def _all_sequences(k: int, n: int):
    if k**n > MAX_SEQUENCES:
        raise CapacityError(f"K^n = {k}^{n} sequences exceeds the limit of {MAX_SEQUENCES}")
    return itertools.product(range(k), repeat=n)


def _rank_ordered(code: CodeFamily) -> bool:
    # length is a nondecreasing function of the optimal-code rank
    return hasattr(code, "length_of_rank") and isinstance(
        getattr(code, "inner", code), OptimalOneToOneCode
    )


def _ranks_within_length(code: CodeFamily, t: int, n_max_bits: int) -> int:
    """Largest rank whose codeword has length <= t, or -1."""
    if isinstance(code, OptimalOneToOneCode):
        return (1 << (t + 1)) - 2 if t >= 0 else -1
    inner = -1
    for width in range(n_max_bits + 2):
        if code.length_of_rank((1 << width) - 1) > t:
            break
        inner = width
    return (1 << (inner + 1)) - 2 if inner >= 0 else -1


def _rank_range_length_sum(code: CodeFamily, first: int, last: int) -> int:
    if isinstance(code, OptimalOneToOneCode):
        return sum_codeword_lengths(first, last)
    total = 0
    for width in range(codeword_length(first), codeword_length(last) + 1):
        lo = max(first, (1 << width) - 1)
        hi = min(last, (1 << (width + 1)) - 2)
        total += (hi - lo + 1) * code.length_of_rank(lo)
    return total


# ---------------------------------------------------------------- C-set


@dataclass(frozen=True)
class CSetReport:
    n: int
    epsilon: float
    threshold: float
    c_mass: float
    bound: float
    holds: bool
    c_count: int = 0
    typical_cardinality: int = 0
    exact_c_mass: Fraction = field(repr=False, compare=False, default=Fraction(0))

    csv_header = ("n", "epsilon", "threshold", "c_count", "c_mass", "bound", "holds")

    def csv_row(self) -> tuple:
        return (
            self.n,
            repr(self.epsilon),
            repr(self.threshold),
            str(self.c_count),
            repr(self.c_mass),
            repr(self.bound),
            self.holds,
        )


def c_set_report(
    source: IidSource, code: CodeFamily, n: int, epsilon: float, method: str = "auto"
) -> CSetReport:
    """Exact mass of C = {x typical : len(code(x)) <= log2|A| - 3 eps n - 1}.

    ``method="classes"`` counts short codewords per type class from rank
    ranges (rank-ordered codes and the identity code only);
    ``method="sequences"`` encodes every sequence; ``"auto"`` picks the former
    when available.
    """
    source = _need_iid(source)
    typical = typical_summary(source, n, epsilon)
    card = typical.cardinality
    threshold = math.log2(card) - 3 * epsilon * n - 1 if card else -math.inf
    t = math.floor(threshold) if math.isfinite(threshold) else -1

    if method == "auto":
        method = "classes" if (_rank_ordered(code) or isinstance(code, IdentityCode)) else "sequences"

    table = class_table(source, n)
    count = 0
    num = 0
    if method == "classes":
        if isinstance(code, IdentityCode):
            cutoff = math.inf if n * code.width <= t else -1
        elif _rank_ordered(code):
            max_bits = (table.total - 1).bit_length()
            cutoff = _ranks_within_length(code, t, max_bits)
        else:
            raise InputError(f"no class-level length rule for {code!r}")
        for counts, size, weight, off in zip(table.counts, table.sizes, table.weights, table.offsets):
            if off > cutoff:
                break
            if not class_is_typical(source, counts, epsilon):
                continue
            inside = min(size, cutoff - off + 1)
            count += inside
            num += inside * weight
    elif method == "sequences":
        typical_cache: dict = {}
        weight_of = dict(zip(table.counts, table.weights))
        for seq in _all_sequences(source.k, n):
            counts = tuple(seq.count(s) for s in range(source.k))
            ok = typical_cache.get(counts)
            if ok is None:
                ok = typical_cache[counts] = class_is_typical(source, counts, epsilon)
            if ok and code.length(n, seq) <= t:
                count += 1
                num += weight_of[counts]
    else:
        raise InputError(f"unknown method {method!r}")

    mass = Fraction(num, table.denominator)
    bound = 2.0 ** (-epsilon * n)
    return CSetReport(
        n=n,
        epsilon=epsilon,
        threshold=threshold,
        c_mass=float(mass),
        bound=bound,
        holds=mass <= Fraction(bound),
        c_count=count,
        typical_cardinality=card,
        exact_c_mass=mass,
    )


# ---------------------------------------------------------- average case


def expected_length(source: IidSource, code: CodeFamily, n: int) -> Fraction:
    """Exact ``E[len(code(X^n))]`` as a rational number."""
    source = _need_iid(source)
    if isinstance(code, IdentityCode):
        return Fraction(n * code.width)
    if isinstance(code, HuffmanBlockCode):
        if n % code.block:
            raise InputError(f"n={n} is not a multiple of the block length {code.block}")
        return (n // code.block) * code.exact_expected_length()
    table = class_table(source, n)
    if _rank_ordered(code):
        num = 0
        for size, weight, off in zip(table.sizes, table.weights, table.offsets):
            num += weight * _rank_range_length_sum(code, off, off + size - 1)
        return Fraction(num, table.denominator)
    weight_of = dict(zip(table.counts, table.weights))
    num = 0
    for seq in _all_sequences(source.k, n):
        counts = tuple(seq.count(s) for s in range(source.k))
        num += code.length(n, seq) * weight_of[counts]
    return Fraction(num, table.denominator)


@dataclass(frozen=True)
class AverageRow:
    n: int
    expected_length_per_symbol: float
    entropy: float
    deficit: float
    exact_expected_length: Fraction = field(repr=False, compare=False, default=Fraction(0))

    csv_header = ("n", "expected_length_per_symbol", "entropy", "deficit")

    def csv_row(self) -> tuple:
        return (
            self.n,
            repr(self.expected_length_per_symbol),
            repr(self.entropy),
            repr(self.deficit),
        )


def average_curve(source: IidSource, code: CodeFamily, n_values: Iterable[int]) -> list[AverageRow]:
    h = source.entropy_rate()
    rows = []
    for n in n_values:
        e = expected_length(source, code, n)
        per = float(e / n)
        rows.append(AverageRow(n, per, h, h - per, e))
    return rows


# ------------------------------------------------------------ pointwise


@dataclass(frozen=True)
class TrajectoryRecord:
    seed: int
    trial: int
    checkpoints: tuple[tuple[int, float], ...]

    csv_header = ("seed", "trial", "n", "length_per_symbol")

    def csv_rows(self) -> list[tuple]:
        return [(self.seed, self.trial, n, repr(v)) for n, v in self.checkpoints]


def effective_checkpoints(code: CodeFamily, checkpoints: Sequence[int]) -> list[int]:
    """Sorted checkpoints, truncated down to a multiple of the block length."""
    block = getattr(code, "block", 1)
    out = sorted({n - n % block for n in checkpoints if n - n % block > 0})
    if not out:
        raise InputError("no usable checkpoints")
    return out


def _run_trials(args) -> list[TrajectoryRecord]:
    source, code, checkpoints, seed, trials = args
    top = checkpoints[-1]
    out = []
    for trial in trials:
        x = source.sample(top, seed, stream=trial).tolist()
        points = tuple((n, code.length(n, x[:n]) / n) for n in checkpoints)
        out.append(TrajectoryRecord(seed, trial, points))
    return out


def pointwise_trajectories(
    source: SourceModel,
    code: CodeFamily,
    checkpoints: Sequence[int],
    trials: int,
    seed: int,
    workers: int = 1,
) -> list[TrajectoryRecord]:
    """Per-trial ``l_n / n`` at each checkpoint.

    Trial ``i`` samples with ``(seed, stream=i)``, so the output is the same
    for every worker count.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if any(n < 1 for n in checkpoints):
        raise InputError("checkpoints must be positive")
    points = effective_checkpoints(code, checkpoints)
    if workers <= 1:
        return _run_trials((source, code, points, seed, range(trials)))
    chunk = max(1, math.ceil(trials / (4 * workers)))
    jobs = [
        (source, code, points, seed, range(lo, min(trials, lo + chunk)))
        for lo in range(0, trials, chunk)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [rec for part in pool.map(_run_trials, jobs) for rec in part]


def summarize_trajectories(
    records: Sequence[TrajectoryRecord],
    entropy: float,
    tolerance: float = 0.05,
    min_fraction: float = 0.99,
    mean_tolerance: float = 0.01,
    burn_in: int = 256,
) -> dict:
    """Per-checkpoint statistics plus the verdicts used by the CLI.

    The liminf is stood in for by each trial's minimum over checkpoints at or
    beyond ``burn_in``.
    """
    ns = [n for n, _ in records[0].checkpoints]
    values = np.array([[v for _, v in r.checkpoints] for r in records])
    floor_ = entropy - tolerance
    per_checkpoint = []
    for j, n in enumerate(ns):
        col = values[:, j]
        per_checkpoint.append(
            {
                "n": n,
                "min": float(col.min()),
                "p01": float(np.percentile(col, 1)),
                "mean": float(col.mean()),
                "max": float(col.max()),
                "fraction_above": float(np.mean(col >= floor_)),
            }
        )
    late = [j for j, n in enumerate(ns) if n >= burn_in] or [len(ns) - 1]
    liminf = values[:, late].min(axis=1)
    last = per_checkpoint[-1]
    return {
        "entropy_rate": entropy,
        "trials": len(records),
        "tolerance": tolerance,
        "burn_in": burn_in,
        "checkpoints": per_checkpoint,
        "liminf_surrogate": {
            "min": float(liminf.min()),
            "p01": float(np.percentile(liminf, 1)),
            "mean": float(liminf.mean()),
        },
        "verdicts": {
            "fraction_ok": last["fraction_above"] >= min_fraction,
            "mean_ok": last["mean"] >= entropy - mean_tolerance,
        },
    }


# --------------------------------------------------------------- n(q)


@dataclass(frozen=True)
class NqRow:
    n: int
    q: float
    n_of_q: int
    rate: float

    csv_header = ("n", "q", "n_of_q", "rate")

    def csv_row(self) -> tuple:
        return (self.n, repr(self.q), str(self.n_of_q), repr(self.rate))


def _exact_q(q) -> Fraction:
    if isinstance(q, float):
        return Fraction(repr(q))
    return Fraction(q)


def shannon_nq(source: IidSource, n: int, q: float) -> NqRow:
    """Smallest number of most-probable sequences with total mass >= q."""
    source = _need_iid(source)
    qx = _exact_q(q)
    if not 0 < qx < 1:
        raise InputError(f"q must lie in (0, 1), got {q!r}")
    table = class_table(source, n)
    target = qx * table.denominator
    cum = 0
    for size, weight, off in zip(table.sizes, table.weights, table.offsets):
        if cum + size * weight >= target:
            need = math.ceil((target - cum) / weight)
            count = off + need
            break
        cum += size * weight
    else:  # pragma: no cover - total mass is exactly 1 > q
        raise AssertionError("cumulative mass never reached q")
    return NqRow(n=n, q=float(q), n_of_q=count, rate=math.log2(count) / n)
