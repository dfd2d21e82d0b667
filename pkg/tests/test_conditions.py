import random
from fractions import Fraction

import pytest

from bmgames.conditions import (
    GdCondition,
    OpenCondition,
    OracleCondition,
    ParityCondition,
    Verdict,
    lasso_membership,
    membership_at_depth,
    open_mass_reached,
)
from bmgames.corpus import ex_nobound, ex_omegas, ex_wwr
from bmgames.errors import LoopNotClosed, ValidationError
from bmgames.graph import Continuation, FiniteGraph, PlayPrefix, parse_prefix
from bmgames.corpus.witnesses import buchi_ones
from bmgames.measure import cond_prob, uniform
from oracles import brute_open_prob, even_palindrome_blocks

C01 = FiniteGraph.complete([0, 1])
C012 = FiniteGraph.complete([0, 1, 2])


def cyl(*texts):
    return OpenCondition.from_generators([parse_prefix(t) for t in texts])


def test_open_verdicts():
    W = cyl("0·0")
    assert W.verdict(parse_prefix("0·10")) is Verdict.OUT
    assert W.verdict(parse_prefix("0·01")) is Verdict.IN
    assert W.verdict(parse_prefix("0·00")) is Verdict.IN
    assert W.verdict(parse_prefix("0")) is Verdict.UNKNOWN


def test_long_one_run_condition():
    W = ex_nobound.condition()
    assert W.verdict(parse_prefix("0·0111")) is Verdict.IN
    assert W.verdict(parse_prefix("0·011")) is Verdict.UNKNOWN
    assert W.verdict(parse_prefix("1·0")) is Verdict.OUT


def test_lasso_buchi():
    W = buchi_ones()
    assert lasso_membership(W, PlayPrefix(0), Continuation(0, (1, 0)))
    assert lasso_membership(W, PlayPrefix(0, (1,)), Continuation(1, (1,)))
    assert not lasso_membership(W, PlayPrefix(0), Continuation(0, (0,)))


def test_lasso_block_palindromes():
    W1 = ex_wwr.block_palindrome_dpa(1)
    stem = PlayPrefix(2, (2,))
    assert lasso_membership(W1, stem, Continuation(2, (0, 0, 2, 2)))
    assert not lasso_membership(W1, stem, Continuation(2, (0, 1, 1, 2)))


def test_lasso_must_close():
    with pytest.raises(LoopNotClosed):
        lasso_membership(buchi_ones(), PlayPrefix(0), Continuation(0, (1,)))


def _partial_block(x, B):
    """Is ``x`` a prefix of some block ``w w^R`` with ``1 <= |w| <= B``?"""
    for k in range(1, B + 1):
        if len(x) <= k:
            return True
        if len(x) <= 2 * k and x[k:] == x[:k][::-1][: len(x) - k]:
            return True
    return False


def _live(word, B):
    """Complete blocks followed by a partial one, found exhaustively."""
    if _partial_block(word, B):
        return True
    return any(
        word[:k] == word[:k][::-1] and _live(word[k:], B) for k in range(2, min(len(word), 2 * B) + 1, 2)
    )


@pytest.mark.parametrize("B", [1, 2])
def test_block_automaton_matches_exhaustive_parse(B):
    W = ex_wwr.block_palindrome_dpa(B)
    rng = random.Random(B)
    for _ in range(400):
        word = tuple(rng.choice((0, 1, 2)) for _ in range(rng.randint(1, 9)))
        if rng.random() < 0.5:
            w = tuple(rng.choice((0, 1, 2)) for _ in range(rng.randint(1, B)))
            word = w + w[::-1] + word[: rng.randint(0, 3)]
        assert (W.priority[W.run(word)] == 0) == _live(word, B), word


def _splits_bounded(word, B):
    if not word:
        return True
    return any(
        word[:k] == word[:k][::-1] and _splits_bounded(word[k:], B) for k in range(2, min(len(word), 2 * B) + 1, 2)
    )


def test_exhaustive_splitter_agrees_with_bounded_one_for_short_words():
    for w in [(0, 0), (0, 1, 1, 0), (0, 1), (1, 1, 2, 2), (0, 1, 2, 2, 1, 0)]:
        assert even_palindrome_blocks(w) == _splits_bounded(w, 3)


def test_parity_needs_total_transitions():
    with pytest.raises(ValidationError):
        ParityCondition((0,), 0, {(0, 0): 0}, {0: 0}, graph=C01)


def test_parity_decide_on_prefix():
    W = buchi_ones()
    # every extension visits 1 infinitely often with some probability but not all of them
    assert membership_at_depth(W, parse_prefix("0·1"), C01) is Verdict.UNKNOWN
    always0 = ParityCondition((0, 1), 0, {(q, a): (1 if q == 1 or a == 1 else 0) for q in (0, 1) for a in (0, 1)}, {0: 0, 1: 1}, graph=C01)
    assert membership_at_depth(always0, parse_prefix("0·01"), C01) is Verdict.OUT


def test_open_mass_reached_full_space():
    m = uniform(C01)
    cs = open_mass_reached(m, cyl("0·0", "0·1"), PlayPrefix(0), Fraction(1), 5)
    assert sorted(c.steps for c in cs) == [(0,), (1,)]


def test_open_mass_reached_unreachable_target():
    assert open_mass_reached(uniform(C01), cyl("0·0"), PlayPrefix(0), Fraction(3, 4), 20) is None


def test_open_mass_reached_on_a_stream_level():
    m = uniform(C01)
    G2 = ex_omegas.level(2)
    cs = open_mass_reached(m, G2, PlayPrefix(0), Fraction(7, 8), 30)
    assert cs is not None and cs.mass() >= Fraction(7, 8)
    family = cs.to_prefix_free()
    assert cond_prob(m, family, PlayPrefix(0)) == cs.mass()
    # every member is certified by the level and no member extends another
    assert family.is_prefix_free()
    for p in family:
        assert G2.verdict(p) is Verdict.IN
    # frozen: generators of G_2 below depth cs.depth, enumerated without the package
    gens = [p.steps for p in family]
    assert brute_open_prob({e: 1 for e in C01.edges}, 0, gens, cs.depth) == cs.mass()


def test_cover_set_sampling_is_member():
    m = uniform(C01)
    cs = open_mass_reached(m, ex_omegas.level(3), PlayPrefix(0), Fraction(1, 2), 40)
    rng = random.Random(3)
    for _ in range(20):
        c = cs.sample(rng)
        assert c in cs


def test_gd_levels():
    W = ex_omegas.condition()
    assert W.certified_levels(parse_prefix("0·01001"), 10) == 2
    assert W.certified_levels(parse_prefix("0·1"), 10) == 1
    assert membership_at_depth(W, parse_prefix("0·1"), max_levels=5) is Verdict.UNKNOWN


def test_gd_from_levels_is_finite_intersection():
    W = GdCondition.from_levels([cyl("0·0"), cyl("0·00")])
    assert membership_at_depth(W, parse_prefix("0·00")) is Verdict.IN
    assert membership_at_depth(W, parse_prefix("0·01")) is Verdict.OUT
    with pytest.raises(IndexError):
        W.level(3)


def test_oracle_condition():
    W = OracleCondition(lambda p: Verdict.IN if p.length > 2 else Verdict.UNKNOWN)
    assert membership_at_depth(W, parse_prefix("0·000")) is Verdict.IN
