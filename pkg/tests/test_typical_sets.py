import itertools
import math

import pytest
from hypothesis import given, strategies as st

from entropybounds.errors import CapacityError, InputError
from entropybounds.source_models import IidSource, MarkovSource
from entropybounds.typical_sets import aep_curve, is_typical, sustained_from, typical_summary

from oracles import typical_binary

BERN03 = IidSource([0.7, 0.3])
BERN05 = IidSource([0.5, 0.5])
BERN02 = IidSource([0.8, 0.2])


def test_uniform_everything_typical():
    assert all(is_typical(BERN05, s, 1e-9) for s in itertools.product(range(2), repeat=6))


@pytest.mark.parametrize("eps", [1e-15, 1e-9, 0.01, 0.5])
def test_empirical_equals_true_distribution_is_typical(eps):
    seq = [0, 1, 0, 0, 0, 0, 1, 0, 0, 0]
    assert is_typical(BERN02, seq, eps)


def test_all_ones_not_typical():
    assert not is_typical(BERN02, [1] * 10, 0.1)


def test_epsilon_must_be_positive():
    with pytest.raises(InputError):
        is_typical(BERN02, [0, 1], 0.0)
    with pytest.raises(InputError):
        typical_summary(BERN02, 4, -0.1)


def test_markov_pointwise_membership():
    m = MarkovSource([[0.9, 0.1], [0.1, 0.9]])
    assert is_typical(m, [0] * 20, 0.5)  # -(1/20) log2 p = (1 + 19*0.152)/20
    assert not is_typical(m, [0, 1] * 10, 0.5)


def test_summary_uniform():
    r = typical_summary(BERN05, 8, 0.1)
    assert (r.cardinality, r.mass) == (256, 1.0)
    assert r.mass_ok and r.upper_ok and r.lower_ok


def test_summary_bern03_n20_against_bruteforce():
    r = typical_summary(BERN03, 20, 0.1)
    h = BERN03.entropy_rate()
    card = 0
    mass = 0.0
    for k in range(21):
        p = 0.3**k * 0.7 ** (20 - k)
        if h - 0.1 <= -math.log2(p) / 20 <= h + 0.1:
            card += math.comb(20, k)
            mass += math.comb(20, k) * p
    assert (card, r.cardinality) == (131784, 131784)
    assert r.mass == pytest.approx(mass, abs=1e-12)
    assert 0 < r.mass < 1 and r.upper_ok


@pytest.mark.parametrize("n", range(1, 17))
@pytest.mark.parametrize("src", [BERN03, BERN05], ids=["0.3", "0.5"])
def test_class_computation_equals_sequence_enumeration(src, n):
    eps = 0.1
    h = src.entropy_rate()
    card = 0
    mass = 0.0
    for seq in itertools.product(range(2), repeat=n):
        p = math.prod(src.probs[s] for s in seq)
        if h - eps - 1e-12 <= -math.log2(p) / n <= h + eps + 1e-12:
            card += 1
            mass += p
    r = typical_summary(src, n, eps)
    assert r.cardinality == card
    assert r.mass == pytest.approx(mass, abs=1e-9)


def test_first_n_with_mass_above_one_minus_eps():
    # oracle scan (mpmath, per-k summation): first n is 82, held from n=90 on
    masses = {n: typical_summary(BERN03, n, 0.1).mass_ok for n in range(75, 121)}
    assert min(n for n, ok in masses.items() if ok) == 82
    assert all(masses[n] for n in range(90, 121))
    assert not masses[89]


@pytest.mark.parametrize("n", [32, 128, 512])
def test_summary_matches_mpmath_oracle(n):
    card, mass = typical_binary("0.3", n, 0.1)
    r = typical_summary(BERN03, n, 0.1)
    assert r.cardinality == card
    assert r.mass == pytest.approx(float(mass), abs=1e-12)


def test_aep_curve_uniform():
    assert [r.mass for r in aep_curve(BERN05, [3, 9, 40], 0.2)] == [1.0, 1.0, 1.0]


def test_aep_curve_grid():
    grid = [2**j for j in range(3, 11)]
    reps = aep_curve(BERN03, grid, 0.1)
    assert all(r.upper_ok for r in reps)
    assert sustained_from(reps, "mass_ok") == 128
    assert all(r.mass > 0.9 for r in reps if r.n >= 128)


def test_bound_properties_overflow_safely():
    r = typical_summary(BERN03, 1024, 0.2)
    assert math.isinf(r.bound_upper_card)
    assert typical_summary(BERN03, 8, 0.1).bound_upper_card == pytest.approx(2 ** (8 * (BERN03.entropy_rate() + 0.1)))


def test_capacity_error():
    with pytest.raises(CapacityError):
        typical_summary(IidSource([0.1] * 10), 200, 0.1)


@given(n=st.integers(1, 60), e1=st.floats(0.001, 1.5), e2=st.floats(0.001, 1.5),
       p=st.sampled_from(["0.3", "0.1", "0.45"]))
def test_mass_monotone_in_epsilon_and_bounds(n, e1, e2, p):
    src = IidSource([1 - float(p), float(p)])
    lo, hi = sorted((e1, e2))
    a, b = typical_summary(src, n, lo), typical_summary(src, n, hi)
    assert a.exact_mass <= b.exact_mass
    for r in (a, b):
        assert r.upper_ok
        assert 0 <= r.mass <= 1
        assert r.cardinality <= 2**n
        if r.mass_ok:
            assert r.lower_ok


@given(st.integers(1, 12), st.data())
def test_three_symbol_summary_matches_bruteforce(n, data):
    if 3**n > 20000:
        n = 9
    src = IidSource([0.5, 0.3, 0.2])
    eps = data.draw(st.floats(0.01, 0.6))
    card = sum(1 for s in itertools.product(range(3), repeat=n) if is_typical(src, s, eps))
    assert typical_summary(src, n, eps).cardinality == card
