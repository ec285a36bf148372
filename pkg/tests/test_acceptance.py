"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected in the terminal summary.
"""
import itertools
import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from entropybounds.bounds_lab import (
    average_curve,
    c_set_report,
    pointwise_trajectories,
    shannon_nq,
    summarize_trajectories,
)
from entropybounds.cli import main
from entropybounds.codes import (
    IdentityCode,
    canonical_bitstring,
    elias_delta,
    elias_delta_decode,
    elias_gamma,
    elias_gamma_decode,
    huffman_block,
    is_prefix_free,
    optimal_one_to_one,
    to_prefix,
)
from entropybounds.codes.bitstrings import strings_up_to_length, sum_codeword_lengths
from entropybounds.source_models import IidSource, MarkovSource
from entropybounds.typical_sets import aep_curve, sustained_from

from oracles import (
    bernoulli_entropy,
    canonical_strings,
    nq_bruteforce,
    sum_floor_log2_naive,
    typical_binary,
)

BERN03 = IidSource([0.7, 0.3])
H03 = float(bernoulli_entropy("0.3"))
FLIP_RATE = 0.4689956

# pinned by exact scans over n = 8, 16, ..., 1024 (mass > 1 - eps from here on)
AEP_N_STAR = 128
# pinned by exact scans: first grid point with deficit <= 0.1
DEFICIT_PINNED_N = 64


def _powers(lo, hi):
    return [2**j for j in range(lo.bit_length() - 1, hi.bit_length())]


def test_c1_aep_bounds(criterion):
    t0 = time.perf_counter()
    grid = _powers(8, 1024)
    eps = 0.1
    reps = aep_curve(BERN03, grid, eps)
    upper = all(r.upper_ok for r in reps)
    n_star = sustained_from(reps, "mass_ok")
    late = [r for r in reps if r.n >= AEP_N_STAR]
    lower = all(r.mass_ok and r.lower_ok for r in late)
    # exact values cross-checked against the independent sum over k at small n
    oracle_ok = True
    for r in reps[:5]:
        card, mass = typical_binary("0.3", r.n, eps)
        oracle_ok &= card == r.cardinality and abs(mpmath.mpf(r.mass) - mass) < 1e-12
    elapsed = time.perf_counter() - t0
    ok = upper and lower and n_star == AEP_N_STAR and oracle_ok and elapsed < 10
    criterion(
        "C1 AEP bounds",
        ok,
        f"upper_all={upper} n*={n_star} lower_from_n*={lower} oracle={oracle_ok} {elapsed:.1f}s",
    )
    assert ok


def test_c2_cset_bound(criterion):
    t0 = time.perf_counter()
    code = optimal_one_to_one(BERN03)
    holds, agree, worst = True, True, 0.0
    for eps in (0.05, 0.1, 0.2):
        for n in range(8, 21):
            r = c_set_report(BERN03, code, n, eps)
            holds &= r.exact_c_mass <= Fraction(2) ** Fraction(-round(eps * 100) * n, 100)
            if n <= 16:
                b = c_set_report(BERN03, code, n, eps, method="sequences")
                worst = max(worst, abs(r.c_mass - b.c_mass))
                agree &= abs(r.c_mass - b.c_mass) <= 1e-12
    elapsed = time.perf_counter() - t0
    ok = holds and agree and elapsed < 30
    criterion("C2 C-set bound", ok, f"holds={holds} classes_vs_brute_max_diff={worst:.1e} {elapsed:.1f}s")
    assert ok


def test_c3_average_length(criterion):
    t0 = time.perf_counter()
    code = optimal_one_to_one(BERN03)
    first = average_curve(BERN03, code, [1])[0]
    grid = _powers(16, 1024)
    rows = {r.n: r for r in average_curve(BERN03, code, grid + [256])}
    deficits = [rows[n].deficit for n in grid]
    anomaly = first.expected_length_per_symbol < H03
    by_256 = rows[256].deficit <= 0.1
    pinned = min(n for n in grid if rows[n].deficit <= 0.1) == DEFICIT_PINNED_N
    decreasing = all(a > b for a, b in zip(deficits, deficits[1:]))
    # every prefix sum over ranks of X^n for n <= 16, against a running naive total
    closed, running = True, 0
    for m in range(2**16):
        running += sum_floor_log2_naive(m, m)
        closed &= sum_codeword_lengths(0, m) == running
    elapsed = time.perf_counter() - t0
    ok = anomaly and by_256 and pinned and decreasing and closed and elapsed < 10
    criterion(
        "C3 average length",
        ok,
        f"E1={first.expected_length_per_symbol:.4f}<H={H03:.4f} deficit256={rows[256].deficit:.4f} "
        f"decreasing={decreasing} closed_form={closed} {elapsed:.1f}s",
    )
    assert ok


def test_c4_huffman(criterion):
    t0 = time.perf_counter()
    ok_bounds, ok_kraft = True, True
    for n in range(1, 13):
        code = huffman_block(BERN03, n)
        per = code.expected_length() / n
        ok_bounds &= H03 - 1e-9 <= per <= H03 + 1 / n + 1e-9
        ok_kraft &= code.kraft().value == 1
    elapsed = time.perf_counter() - t0
    ok = ok_bounds and ok_kraft and elapsed < 10
    criterion("C4 Huffman sanity", ok, f"bounds={ok_bounds} kraft_exactly_1={ok_kraft} {elapsed:.1f}s")
    assert ok


def _simple_optimal_length(n, ones):
    """Codeword length of a Bernoulli(p<1/2) sequence, using lexicographic order inside classes."""
    start = sum(math.comb(n, j) for j in range(len(ones)))
    # lexicographic index among sequences with the same number of ones
    index, left = 0, len(ones)
    for pos in sorted(ones):
        # sequences that agree so far but put a 0 here come first
        index += math.comb(n - pos - 1, left)
        left -= 1
    return (start + index + 1).bit_length() - 1


@pytest.mark.slow
def test_c5_pointwise_iid(criterion):
    t0 = time.perf_counter()
    code = optimal_one_to_one(BERN03)
    # oracle pre-run at n = 512 with an independent length computation
    pre_fraction, pre_match = 0, True
    for trial in range(1000):
        x = BERN03.sample(512, 2024, stream=trial).tolist()
        ones = {i for i, s in enumerate(x) if s}
        length = _simple_optimal_length(512, ones)
        pre_match &= length == code.length(512, x)
        pre_fraction += length / 512 >= H03 - 0.05
    pre_fraction /= 1000
    recs = pointwise_trajectories(BERN03, code, _powers(256, 4096), trials=1000, seed=2024)
    s = summarize_trajectories(recs, H03, tolerance=0.05, min_fraction=0.99)
    frac = s["checkpoints"][-1]["fraction_above"]
    elapsed = time.perf_counter() - t0
    ok = pre_match and frac >= 0.99 and elapsed < 300
    criterion(
        "C5 pointwise i.i.d.",
        ok,
        f"fraction(n=4096)={frac:.3f} pre-run(n=512)={pre_fraction:.3f} oracle_match={pre_match} {elapsed:.1f}s",
    )
    assert ok


@pytest.mark.slow
def test_c6_pointwise_markov(criterion):
    t0 = time.perf_counter()
    flip = MarkovSource([[0.9, 0.1], [0.1, 0.9]])
    code = huffman_block(flip, 8)
    recs = pointwise_trajectories(flip, code, [4096], trials=500, seed=2024)
    mean = float(np.mean([r.checkpoints[-1][1] for r in recs]))
    # expected value: exact per-block expectation times the number of blocks
    expected = code.expected_length() / 8
    elapsed = time.perf_counter() - t0
    ok = mean >= FLIP_RATE - 0.01 and abs(flip.entropy_rate() - FLIP_RATE) < 1e-7 and elapsed < 300
    criterion(
        "C6 pointwise Markov",
        ok,
        f"mean={mean:.4f} expected={expected:.4f} floor={FLIP_RATE - 0.01:.4f} {elapsed:.1f}s",
    )
    assert ok


def test_c7_nq_rate(criterion):
    t0 = time.perf_counter()
    rates = {q: shannon_nq(BERN03, 4096, q).rate for q in (0.1, 0.5, 0.9)}
    near = all(abs(r - H03) <= 0.05 for r in rates.values())
    spread = max(rates.values()) - min(rates.values())
    p = [Fraction(7, 10), Fraction(3, 10)]
    brute = all(shannon_nq(BERN03, 16, q).n_of_q == nq_bruteforce(p, 16, Fraction(repr(q))) for q in rates)
    elapsed = time.perf_counter() - t0
    ok = near and spread <= 0.02 and brute and elapsed < 60
    shown = " ".join(f"rate({q})={r:.6f}" for q, r in rates.items())
    criterion("C7 n(q) rate", ok, f"{shown} spread={spread:.5f} brute16={brute} {elapsed:.1f}s")
    assert ok


def test_c8_code_contracts(criterion):
    t0 = time.perf_counter()
    opt = optimal_one_to_one(BERN03)
    contracts = True
    for n in range(1, 13):
        huff = huffman_block(BERN03, n)
        for code in (opt, to_prefix(opt), IdentityCode(2), huff, to_prefix(huff)):
            words = set()
            for seq in itertools.product((0, 1), repeat=n):
                w = code.encode(n, seq)
                contracts &= code.decode(n, w) == seq
                words.add(w)
            contracts &= len(words) == 2**n
    prefix10 = is_prefix_free([to_prefix(opt).encode(10, s) for s in itertools.product((0, 1), repeat=10)])
    elias = True
    for v in range(1, 10**6 + 1):
        g, d = elias_gamma(v), elias_delta(v)
        elias &= elias_gamma_decode(g) == (v, len(g)) and elias_delta_decode(d) == (v, len(d))
    strings = canonical_strings(2**21 - 1)
    counts = all(strings_up_to_length(t) == 2 ** (t + 1) - 1 for t in range(21))
    enum = all(canonical_bitstring(r) == strings[r] for r in range(0, 2**21 - 1, 37))
    enum &= all(len(canonical_bitstring(2 ** (t + 1) - 2)) == t for t in range(21))
    enum &= all(len(canonical_bitstring(2 ** (t + 1) - 1)) == t + 1 for t in range(21))
    elapsed = time.perf_counter() - t0
    ok = contracts and prefix10 and elias and counts and enum and elapsed < 60
    criterion(
        "C8 code-family contracts",
        ok,
        f"exhaustive={contracts} prefix_free10={prefix10} elias1e6={elias} canonical={counts and enum} {elapsed:.1f}s",
    )
    assert ok


def test_c9_determinism(criterion, tmp_path):
    cfg = tmp_path / "pointwise.toml"
    cfg.write_text(
        'experiment = "pointwise"\ncode = "optimal"\n[source]\nkind = "iid"\nprobs = [0.7, 0.3]\n'
        "[grid]\ncheckpoints = [256, 512, 1024]\ntrials = 40\n[run]\nseed = 77\n"
    )
    mc = tmp_path / "markov.toml"
    mc.write_text(
        'experiment = "pointwise"\ncode = "huffman:8"\n[source]\nkind = "markov"\n'
        "transition = [[0.9, 0.1], [0.1, 0.9]]\n[grid]\ncheckpoints = [512, 1024]\ntrials = 40\n"
    )
    same = True
    for path in (cfg, mc):
        outs = []
        for workers in ("1", "3"):
            out = tmp_path / f"{path.stem}-{workers}"
            main(["run", "--config", str(path), "--workers", workers, "--out", str(out)])
            outs.append([(out / f).read_bytes() for f in ("pointwise.csv", "pointwise.summary.json")])
        same &= outs[0] == outs[1] and len(outs[0][0]) > 0
    criterion("C9 determinism", same, "workers 1 vs 3, i.i.d. and Markov pointwise")
    assert same
