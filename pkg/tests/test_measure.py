import random
from fractions import Fraction

import pytest

from bmgames.errors import MissingWeight, NonPositiveWeight
from bmgames.graph import FiniteGraph, PrefixFreeSet, parse_prefix
from bmgames.measure import (
    cond_prob,
    continuations_mass,
    cyl_prob,
    measure_from_weights,
    sample_path,
    union_prob,
    uniform,
)
from oracles import brute_open_prob, naive_cyl_prob

C01 = FiniteGraph.complete([0, 1])
C012 = FiniteGraph.complete([0, 1, 2])


def pfs(*texts):
    return PrefixFreeSet(parse_prefix(t) for t in texts)


def test_uniform_transitions():
    assert set(uniform(C01).transition.values()) == {Fraction(1, 2)}
    assert set(uniform(C012).transition.values()) == {Fraction(1, 3)}


def test_weighted_row():
    m = measure_from_weights(C01, {(0, 0): 3, (0, 1): 1, (1, 0): 1, (1, 1): 1})
    assert m.p(0, 0) == Fraction(3, 4)
    assert m.min_transition() == Fraction(1, 4)


def test_bad_weights():
    with pytest.raises(NonPositiveWeight):
        measure_from_weights(C01, {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})
    with pytest.raises(MissingWeight):
        measure_from_weights(C01, {(0, 0): 1, (0, 1): 1, (1, 0): 1})


def test_cylinder_probabilities():
    assert cyl_prob(uniform(C01), parse_prefix("0")) == 1
    assert cyl_prob(uniform(C01), parse_prefix("0·01")) == Fraction(1, 4)
    assert cyl_prob(uniform(C012), parse_prefix("2·01")) == Fraction(1, 9)


def test_union_probabilities():
    m = uniform(C01)
    assert union_prob(m, pfs("0·0")) == Fraction(1, 2)
    assert union_prob(m, PrefixFreeSet()) == 0
    # frozen against word enumeration over depth 3
    want = brute_open_prob({e: 1 for e in C01.edges}, 0, [(0,), (1, 1)], 3)
    assert want == Fraction(3, 4)
    assert union_prob(m, pfs("0·0", "0·11")) == want


def test_conditional_probabilities():
    m = uniform(C01)
    assert cond_prob(m, pfs("0·00"), parse_prefix("0·0")) == Fraction(1, 2)
    assert cond_prob(m, pfs("0·1"), parse_prefix("0·0")) == 0
    assert cond_prob(m, pfs("0·0"), parse_prefix("0·00")) == 1


def test_continuations_mass_reduces_overlaps():
    m = uniform(C01)
    conts = [C01.continuation(0, (0,)), C01.continuation(0, (0, 1))]
    assert continuations_mass(m, 0, conts) == Fraction(1, 2)


def test_weighted_cylinders_match_naive_product():
    w = {(0, 0): 3, (0, 1): 1, (1, 0): 2, (1, 1): 5}
    m = measure_from_weights(C01, w)
    rng = random.Random(5)
    for _ in range(50):
        steps = tuple(rng.choice((0, 1)) for _ in range(rng.randint(0, 9)))
        assert cyl_prob(m, C01.prefix(0, steps)) == naive_cyl_prob(w, 0, steps)


def test_sample_path():
    m = uniform(C012)
    assert sample_path(m, 2, 0, 1).steps == ()
    a = sample_path(m, 2, 30, seed=7)
    b = sample_path(m, 2, 30, seed=7)
    assert a == b and a.length == 30
    with pytest.raises(ValueError):
        sample_path(m, 2, -1, 1)


def test_measures_compare_by_transitions():
    assert uniform(C01) == measure_from_weights(C01, {e: 7 for e in C01.edges})
    assert hash(uniform(C01)) == hash(measure_from_weights(C01, {e: 2 for e in C01.edges}))
