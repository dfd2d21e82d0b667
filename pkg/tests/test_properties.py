from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bmgames.engine import MeasureRandomPlayer, play_classical
from bmgames.graph import (
    Continuation,
    FiniteGraph,
    PlayPrefix,
    PrefixFreeSet,
    concat,
    format_prefix,
    parse_prefix,
    path_distance,
)
from bmgames.measure import cond_prob, cyl_prob, measure_from_weights, union_prob
from bmgames.strategies import Positional
from oracles import brute_open_prob, naive_cyl_prob

V = (0, 1, 2)
C = FiniteGraph.complete(V)

weights = st.fixed_dictionaries({(u, v): st.integers(1, 9) for u in V for v in V})
steps = st.lists(st.sampled_from(V), max_size=8).map(tuple)
nonempty_steps = st.lists(st.sampled_from(V), min_size=1, max_size=5).map(tuple)
starts = st.sampled_from(V)


def prefix(start, s):
    return PlayPrefix(start, s)


@given(weights, starts, steps)
def test_cylinder_mass_matches_the_raw_product(w, start, s):
    m = measure_from_weights(C, w)
    assert cyl_prob(m, prefix(start, s)) == naive_cyl_prob(w, start, s)


@given(weights, starts, steps)
def test_cylinder_splits_over_one_step_extensions(w, start, s):
    m = measure_from_weights(C, w)
    p = prefix(start, s)
    assert sum(cyl_prob(m, p.extend((v,))) for v in V) == cyl_prob(m, p)


@given(weights, st.lists(nonempty_steps, max_size=6))
def test_union_mass_is_a_probability_and_matches_enumeration(w, gens):
    m = measure_from_weights(C, w)
    s = PrefixFreeSet(prefix(0, g) for g in gens)
    mass = union_prob(m, s)
    assert 0 <= mass <= 1
    assert mass == brute_open_prob(w, 0, gens, 5)


@given(st.lists(st.tuples(starts, nonempty_steps), max_size=10))
def test_prefix_free_set_invariants(items):
    ps = [prefix(0, s) for _, s in items]
    s = PrefixFreeSet(ps)
    assert s.is_prefix_free()
    assert all(s.covers(p) for p in ps)
    t = PrefixFreeSet()
    for p in ps:
        t = t.add(p)
    assert t == s


@given(weights, st.lists(nonempty_steps, max_size=5), steps)
def test_conditional_mass_is_a_probability(w, gens, given_steps):
    m = measure_from_weights(C, w)
    s = PrefixFreeSet(prefix(0, g) for g in gens)
    c = cond_prob(m, s, prefix(0, given_steps))
    assert 0 <= c <= 1
    if s.covers(prefix(0, given_steps)):
        assert c == 1


@given(starts, st.lists(nonempty_steps, max_size=4))
def test_concatenation_and_moves_round_trip(start, conts):
    p = PlayPrefix(start)
    for i, s in enumerate(conts):
        p = concat(p, Continuation(p.last, s), 1 - i % 2)
    moves = p.moves()
    assert [c.steps for _, c in moves] == [tuple(s) for s in conts]
    assert [pl for pl, _ in moves] == [1 - i % 2 for i in range(len(conts))]
    assert p.steps == sum((tuple(s) for s in conts), ())
    assert parse_prefix(format_prefix(p)).word == p.word


@given(starts, steps, starts, steps)
def test_path_distance_is_symmetric_and_bounded(a0, a, b0, b):
    pa, pb = prefix(a0, a), prefix(b0, b)
    d1, d2 = path_distance(pa, pb), path_distance(pb, pa)
    assert d1 == d2
    assert 0 <= d1.value <= d1.upper <= 1
    assert d1.exact == (d1.value > 0)
    assert path_distance(pa, pa).value == 0


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.fixed_dictionaries({v: nonempty_steps for v in V}))
def test_strategy_outputs_are_anchored_at_the_current_vertex(seed, table):
    m = measure_from_weights(C, {(u, v): 1 for u in V for v in V})
    f = Positional(table)
    t = play_classical(C, 0, MeasureRandomPlayer(m, 3, seed=seed), f, 4)
    prev = t.prefix.start
    for _, c in t.prefix.moves():
        assert c.anchor == prev
        prev = c.last
    assert all(c.steps == tuple(table[c.anchor]) for pl, c in t.prefix.moves() if pl == 0)


def test_uniform_three_step_example():
    m = measure_from_weights(C, {(u, v): 1 for u in V for v in V})
    assert cyl_prob(m, parse_prefix("0·012")) == Fraction(1, 27)
