"""Finite-alphabet sources: i.i.d. and stationary Markov.

Symbols are the integers ``0..K-1``. Every probability evaluation is done in
base-2 log domain so sequences of several thousand symbols never underflow.

i.i.d. sources additionally carry an exact rational copy of their
probabilities. Float inputs are read through their shortest decimal repr
(``0.3`` becomes ``3/10``) and renormalised so the exact probabilities sum to
one; this is what the enumeration code uses to order and count sequences
without rounding.

Sampling uses numpy's Philox-4x64 counter-based generator keyed by
``SeedSequence(seed, spawn_key=(stream,))``, so ``(seed, stream)`` fixes the
output on every platform.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .errors import InputError, ModelError

LogProb = float
NEG_INF: LogProb = -math.inf

SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10
DENSE_SOLVE_MAX_K = 64


def _exact(p: Any) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, (float, np.floating)):
        return Fraction(repr(float(p)))
    return Fraction(p)


def _exact_log2(p: Fraction) -> float:
    if p == 0:
        return NEG_INF
    return math.log2(p.numerator) - math.log2(p.denominator)


def as_symbols(seq: Sequence[int], k: int) -> tuple[int, ...]:
    """Validate ``seq`` as a nonempty sequence over ``0..k-1``."""
    if isinstance(seq, np.ndarray):
        out = tuple(seq.tolist())
    else:
        out = tuple(int(s) for s in seq)
    if not out:
        raise InputError("sequence must be nonempty")
    for s in out:
        if not 0 <= s < k:
            raise InputError(f"symbol {s} outside alphabet 0..{k - 1}")
    return out


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    if seed < 0 or stream < 0:
        raise InputError("seed and stream must be nonnegative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class IidSource:
    """Memoryless source with symbol probabilities ``probs``."""

    probs: tuple[float, ...]
    exact_probs: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    weights: tuple[int, ...] = field(init=False, repr=False, compare=False)
    denominator: int = field(init=False, repr=False, compare=False)

    def __init__(self, probs: Sequence[Any]):
        if len(probs) < 2:
            raise ModelError("alphabet needs at least two symbols")
        exact = [_exact(p) for p in probs]
        if any(p < 0 for p in exact):
            raise ModelError("probabilities must be nonnegative")
        floats = tuple(float(p) for p in exact)
        if abs(math.fsum(floats) - 1.0) > SUM_TOL:
            raise ModelError(f"probabilities sum to {math.fsum(floats)!r}, not 1")
        if sum(1 for p in exact if p > 0) < 2:
            raise ModelError("at least two symbols need positive probability")
        total = sum(exact)
        exact = [p / total for p in exact]
        den = reduce(math.lcm, (p.denominator for p in exact), 1)
        object.__setattr__(self, "probs", floats)
        object.__setattr__(self, "exact_probs", tuple(exact))
        object.__setattr__(self, "denominator", den)
        object.__setattr__(self, "weights", tuple(int(p * den) for p in exact))

    @property
    def k(self) -> int:
        return len(self.probs)

    @property
    def log2_probs(self) -> tuple[float, ...]:
        return tuple(_exact_log2(p) for p in self.exact_probs)

    def entropy_rate(self) -> float:
        return math.fsum(
            -float(p) * lp for p, lp in zip(self.exact_probs, self.log2_probs) if p > 0
        )

    def counts(self, seq: Sequence[int]) -> tuple[int, ...]:
        seq = as_symbols(seq, self.k)
        return tuple(np.bincount(np.asarray(seq), minlength=self.k).tolist())

    def log2_prob_counts(self, counts: Sequence[int]) -> LogProb:
        terms = []
        for c, lp in zip(counts, self.log2_probs):
            if c == 0:
                continue
            if lp == NEG_INF:
                return NEG_INF
            terms.append(c * lp)
        return math.fsum(terms)

    def log2_prob(self, seq: Sequence[int]) -> LogProb:
        return self.log2_prob_counts(self.counts(seq))

    def sample(self, n: int, seed: int, stream: int = 0) -> np.ndarray:
        if n < 1:
            raise InputError("n must be at least 1")
        p = np.asarray(self.probs)
        cum = np.cumsum(p)
        last = int(np.flatnonzero(p > 0)[-1])
        cum[last:] = 1.0
        u = make_rng(seed, stream).random(n)
        return np.searchsorted(cum, u, side="right").astype(np.int64)


def _reachable(adj: np.ndarray, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(adj[i]).tolist():
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def _is_irreducible(t: np.ndarray) -> bool:
    # strongly connected iff state 0 reaches all and all reach state 0
    adj = t > 0
    k = len(t)
    return len(_reachable(adj, 0)) == k and len(_reachable(adj.T, 0)) == k


def _validate_transition(transition: Any) -> np.ndarray:
    t = np.asarray(transition, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 2:
        raise ModelError("transition must be a square matrix with K >= 2")
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ModelError("transition entries must be finite and nonnegative")
    sums = t.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > SUM_TOL):
        raise ModelError("every transition row must sum to 1")
    return t


def stationary_distribution(transition: Any) -> np.ndarray:
    """Stationary row vector of an irreducible row-stochastic matrix."""
    t = _validate_transition(transition)
    if not _is_irreducible(t):
        raise ModelError("transition matrix is reducible")
    k = len(t)
    if k <= DENSE_SOLVE_MAX_K:
        a = t.T - np.eye(k)
        a[-1, :] = 1.0
        b = np.zeros(k)
        b[-1] = 1.0
        pi = np.linalg.solve(a, b)
    else:
        # lazy chain so periodic chains still converge
        lazy = 0.5 * (t + np.eye(k))
        pi = np.full(k, 1.0 / k)
        for _ in range(1_000_000):
            nxt = pi @ lazy
            if np.max(np.abs(nxt - pi)) < 1e-14:
                pi = nxt
                break
            pi = nxt
    pi = pi / pi.sum()
    resid = np.max(np.abs(pi @ t - pi))
    if resid > STATIONARY_TOL or np.any(pi <= 0):
        raise ModelError(f"stationary solve failed (residual {resid:.3g})")
    return pi


@dataclass(frozen=True)
class MarkovSource:
    """First-order Markov chain started from its stationary distribution."""

    transition: tuple[tuple[float, ...], ...]
    initial: tuple[float, ...] = field(init=False, compare=False)

    def __init__(self, transition: Any):
        t = _validate_transition(transition)
        pi = stationary_distribution(t)
        object.__setattr__(self, "transition", tuple(tuple(r) for r in t.tolist()))
        object.__setattr__(self, "initial", tuple(pi.tolist()))

    @property
    def k(self) -> int:
        return len(self.transition)

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.transition)

    def entropy_rate(self) -> float:
        terms = []
        for pi_i, row in zip(self.initial, self.transition):
            terms.append(pi_i * math.fsum(-p * math.log2(p) for p in row if p > 0))
        return math.fsum(terms)

    def log2_prob(self, seq: Sequence[int]) -> LogProb:
        x = np.asarray(as_symbols(seq, self.k))
        with np.errstate(divide="ignore"):
            steps = np.log2(self.matrix[x[:-1], x[1:]])
            first = np.log2(self.initial[x[0]])
        if first == NEG_INF or np.any(steps == NEG_INF):
            return NEG_INF
        return math.fsum([float(first), *steps.tolist()])

    def sample(self, n: int, seed: int, stream: int = 0) -> np.ndarray:
        if n < 1:
            raise InputError("n must be at least 1")
        u = make_rng(seed, stream).random(n)
        cum = np.cumsum(self.matrix, axis=1)
        cum[:, -1] = 1.0
        init = np.cumsum(self.initial)
        init[-1] = 1.0
        out = [0] * n
        x = int(bisect_right(init.tolist(), u[0]))
        out[0] = x
        # next-state table per current state, then a cheap scalar walk
        nxt = [np.searchsorted(cum[s], u, side="right").tolist() for s in range(self.k)]
        for j in range(1, n):
            x = nxt[x][j]
            out[j] = x
        return np.asarray(out, dtype=np.int64)


SourceModel = Union[IidSource, MarkovSource]


def entropy_rate(source: SourceModel) -> float:
    """Entropy rate in bits per symbol."""
    return source.entropy_rate()


def log2_prob(source: SourceModel, seq: Sequence[int]) -> LogProb:
    return source.log2_prob(seq)


def sample(source: SourceModel, n: int, seed: int, stream: int = 0) -> np.ndarray:
    return source.sample(n, seed, stream)


def source_from_mapping(spec: Mapping[str, Any]) -> SourceModel:
    """Build a source from ``{"kind": "iid", "probs": [...]}`` or
    ``{"kind": "markov", "transition": [[...], ...]}``. Without ``kind`` the
    source type follows from whichever of the two keys is present."""
    kind = spec.get("kind")
    if kind is None:
        kind = "markov" if "transition" in spec else "iid" if "probs" in spec else None
    if kind == "iid":
        if "probs" not in spec:
            raise ModelError("iid source needs 'probs'")
        return IidSource(spec["probs"])
    if kind == "markov":
        if "transition" not in spec:
            raise ModelError("markov source needs 'transition'")
        return MarkovSource(spec["transition"])
    raise ModelError(f"unknown source kind {kind!r} (expected 'iid' or 'markov')")


def load_toml(path: Union[str, Path]) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def load_source(path: Union[str, Path]) -> SourceModel:
    """Load a source from a TOML file, either top-level keys or a ``[source]`` table."""
    data = load_toml(path)
    return source_from_mapping(data.get("source", data))
