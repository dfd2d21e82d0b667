from fractions import Fraction

import pytest

from bmgames.conditions import GdCondition, OpenCondition, TrieMonitor, Verdict
from bmgames.corpus import ex_nobound, ex_omegas
from bmgames.engine import (
    AlphaStrategy,
    GeneralisedGameConfig,
    MeasureRandomPlayer,
    MeasureRandomSelector,
    alpha_for_gd_prob_one,
    alpha_from_bounded,
    alpha_from_move_counting,
    alpha_lift,
    check_gn_form,
    compute_IW,
    lift_singleton,
    phi_ball,
    play_alpha_game,
    play_classical,
    play_generalised,
    positional_lasso,
    random_bounded_strategy,
    spoiler_for_open,
    strategy_selector,
    validate_alpha_move,
)
from bmgames.errors import BudgetExceeded, IllegalSetMove, LevelStuck, NotSubProbOne, ValidationError
from bmgames.graph import Continuation, FiniteGraph, PlayPrefix, PrefixFreeSet, concat, parse_prefix
from bmgames.measure import cond_prob, measure_from_weights, uniform
from bmgames.strategies import General, MoveCounting, Positional

C01 = FiniteGraph.complete([0, 1])
C012 = FiniteGraph.complete([0, 1, 2])
M01 = uniform(C01)


def cyl(*texts):
    return OpenCondition.from_generators([parse_prefix(t) for t in texts])


def conts(*steps, anchor=0):
    return tuple(Continuation(anchor, tuple(int(ch) for ch in s)) for s in steps)


# -- classical games --------------------------------------------------------------


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_move_counting_winner_reaches_in(seed):
    t = play_classical(C01, 0, MeasureRandomPlayer(M01, 4, seed=seed), ex_nobound.winner(), 20, ex_nobound.condition())
    assert t.outcome == "In"
    assert t.reason == "certificate reached"


def test_block_counter_against_bounded_strategies():
    W = ex_nobound.condition()
    for i in range(3):
        pl0 = random_bounded_strategy(C01, 2, seed=i)
        t = play_classical(C01, 0, ex_nobound.block_counter(2), pl0, 50, W)
        assert ex_nobound.block_invariant(t.prefix.word, 2)
        assert t.verdict is Verdict.UNKNOWN


def test_one_round_has_two_moves():
    f = Positional({0: (0,), 1: (1,)})
    t = play_classical(C01, 0, f, f, 1)
    assert [r.player for r in t.records] == [1, 0]
    assert t.outcome == "Undecided"


def test_replays_are_identical():
    def run():
        t = play_classical(C012, 2, MeasureRandomPlayer(uniform(C012), 3, seed=8), MeasureRandomPlayer(uniform(C012), 2, seed=9), 10)
        return t.to_records()

    assert run() == run()


def test_illegal_classical_answer():
    bad = General(lambda p: Continuation(p.last, (7,)))
    with pytest.raises(Exception):
        play_classical(C01, 0, bad, bad, 1)


def test_positional_lasso():
    pl1 = Positional({0: (1,), 1: (1,)})
    pl0 = Positional({0: (0,), 1: (0,)})
    stem, loop = positional_lasso(0, pl1, pl0)
    assert stem.word == (0,)
    assert loop.steps == (1, 0)


# -- set-valued games --------------------------------------------------------------


def test_alpha_legality():
    p = PlayPrefix(0)
    assert validate_alpha_move(M01, p, conts("0", "1"), 1)
    assert not validate_alpha_move(M01, p, conts("0"), Fraction(3, 4))
    assert validate_alpha_move(M01, p, conts("0", "01"), Fraction(1, 2))
    assert not validate_alpha_move(M01, p, conts("0", "01"), Fraction(3, 4))
    assert not validate_alpha_move(M01, p, (), Fraction(1, 4))
    assert not validate_alpha_move(M01, p, conts("0", anchor=1), Fraction(1, 4))


def test_phi_ball_needs_singletons():
    p = PlayPrefix(0)
    assert phi_ball(M01, p, conts("01"))
    assert not phi_ball(M01, p, conts("0", "1"))


def test_undersized_offer_is_illegal_at_turn_two():
    s = AlphaStrategy(lambda p: (Continuation(p.last, (0,)),), Fraction(3, 4), M01)
    sel = strategy_selector(Positional({0: (1,), 1: (1,)}))
    with pytest.raises(IllegalSetMove) as err:
        play_alpha_game(C01, 0, M01, s, sel, 3)
    assert err.value.player == 0


def test_player_one_proposing_two_members_is_rejected():
    def sel(prefix, offered):
        chosen = None if offered is None else sorted(offered, key=lambda c: c.steps)[0]
        base = prefix if chosen is None else concat(prefix, chosen, 0)
        return chosen, (Continuation(base.last, (0,)), Continuation(base.last, (1,)))

    s = lift_singleton(Positional({0: (1,), 1: (1,)}), M01)
    with pytest.raises(IllegalSetMove) as err:
        play_alpha_game(C01, 0, M01, s, sel, 2)
    assert err.value.player == 1


def test_singleton_games_reduce_to_classical_play():
    pl0 = Positional({0: (1, 1), 1: (0,)})
    pl1 = MeasureRandomPlayer(M01, 3, seed=4)
    classical = play_classical(C01, 0, pl1, pl0, 6)
    cfg = GeneralisedGameConfig(C01, 0, M01)
    t = play_generalised(cfg, lift_singleton(pl0, M01), strategy_selector(pl1), 6)
    assert t.prefix.word == classical.prefix.word


def test_alpha_from_bounded():
    assert alpha_from_bounded(Positional({0: (0,), 1: (0,)}), 2, M01)[1] == Fraction(1, 4)
    assert alpha_from_bounded(Positional({v: (0,) for v in (0, 1, 2)}), 1, uniform(C012))[1] == Fraction(1, 3)
    m = measure_from_weights(C01, {(0, 0): 3, (0, 1): 1, (1, 0): 1, (1, 1): 3})
    assert alpha_from_bounded(Positional({0: (0,), 1: (0,)}), 3, m)[1] == Fraction(1, 64)


def test_alpha_lift_contains_the_source_answer():
    f = random_bounded_strategy(C01, 2, seed=3)
    s = alpha_lift(f, M01, Fraction(1, 2))
    for p in (PlayPrefix(0), parse_prefix("0·10"), parse_prefix("0·111")):
        offered = s.offer(p)
        assert f.respond(p, None) in offered
        assert validate_alpha_move(M01, p, offered, Fraction(1, 2))


def test_move_counting_alpha_first_offer():
    h = MoveCounting(lambda v, n: (1,) * n)
    s = alpha_from_move_counting(h, M01, Fraction(1, 2), budget=50)
    offered = s.offer(PlayPrefix(0))
    assert offered.mass() >= Fraction(1, 2)
    family = offered.to_prefix_free()
    assert cond_prob(M01, family, PlayPrefix(0)) == offered.mass()
    # every member ends with g_1 = "1" read from its own last-but-one vertex
    assert all(c.steps[-1] == 1 for c in offered)


def test_move_counting_alpha_plays_have_chained_form():
    h = MoveCounting(lambda v, n: (1,))
    s = alpha_from_move_counting(h, M01, Fraction(1, 2), budget=4000)
    for i in range(10):
        t = play_alpha_game(C01, 0, M01, s, MeasureRandomSelector(M01, 2, seed=i), 2)
        assert check_gn_form(t, s)


def test_move_counting_alpha_budget():
    h = MoveCounting(lambda v, n: (1,) * n)
    s = alpha_from_move_counting(h, M01, Fraction(99, 100), budget=3)
    with pytest.raises(BudgetExceeded):
        s.offer(PlayPrefix(0))


def test_gd_alpha_full_space_levels():
    full = OpenCondition.from_generators([parse_prefix("0·0"), parse_prefix("0·1"), parse_prefix("1·0"), parse_prefix("1·1")])
    W = GdCondition(lambda n: full, name="everything")
    s = alpha_for_gd_prob_one(W, M01, Fraction(1, 2), 10)
    t = play_alpha_game(C01, 0, M01, s, MeasureRandomSelector(M01, 2, seed=0), 5, W)
    assert t.meta["levels"] >= 5


@pytest.mark.parametrize("seed", range(10))
def test_gd_alpha_certifies_a_level_per_move(seed):
    W = ex_omegas.condition()
    s = alpha_for_gd_prob_one(W, M01, Fraction(1, 2), 10_000)
    # deeper levels need covers far beyond the depth budget, so stop at level 5
    t = play_alpha_game(C01, 0, M01, s, MeasureRandomSelector(M01, 3, seed=seed), 5, W, stop=lambda t: t.meta["levels"] >= 5)
    k = 0
    for i, (off, player) in enumerate(t.prefix.boundaries):
        if player != 0:
            continue
        k += 1
        end = t.prefix.boundaries[i + 1][0] if i + 1 < len(t.prefix.boundaries) else t.prefix.length
        assert W.certified_levels(t.prefix.truncate(end), 64) >= k


def test_gd_alpha_stuck_level():
    W = GdCondition.from_levels([cyl("0·0")])
    s = alpha_for_gd_prob_one(W, M01, Fraction(3, 4), 50)
    with pytest.raises(LevelStuck) as err:
        s.offer(PlayPrefix(0))
    assert err.value.level == 1


def test_alpha_range_checked():
    with pytest.raises(ValueError):
        alpha_for_gd_prob_one(ex_omegas.condition(), M01, 1, 10)


# -- the spoiler ------------------------------------------------------------------


def test_infimum_of_conditional_probability():
    assert compute_IW(M01, cyl("0·0"))[0] == 0
    assert str(compute_IW(M01, cyl("0·0"))[1]) == "0·1"
    assert compute_IW(M01, cyl("0·0", "0·1"))[0] == 1
    val, witness = compute_IW(M01, cyl("0·0", "0·11"))
    assert val == 0 and str(witness) == "0·10"


def test_infimum_against_exhaustive_scan():
    W = cyl("0·00", "0·101", "0·11")
    gens = PrefixFreeSet(parse_prefix(t) for t in ("0·00", "0·101", "0·11"))
    best = min(cond_prob(M01, gens, C01.prefix(0, s)) for n in range(0, 4) for s in _words(n))
    assert compute_IW(M01, W)[0] == best


def _words(n):
    if n == 0:
        yield ()
        return
    for w in _words(n - 1):
        yield w + (0,)
        yield w + (1,)


def test_spoiler_needs_probability_below_one():
    with pytest.raises(NotSubProbOne):
        spoiler_for_open(cyl("0·0", "0·1"), M01, Fraction(1, 2), 0)


def test_spoiler_needs_finite_generators():
    with pytest.raises(ValidationError):
        spoiler_for_open(ex_nobound.condition(), M01, Fraction(1, 2), 0)


def test_spoiler_beats_lifted_bounded_strategies():
    W = cyl("0·00")
    sp = spoiler_for_open(W, M01, Fraction(1, 2), 0)
    assert sp.P == Fraction(1, 4)
    assert sp.satisfies_cond(PlayPrefix(0, sp.opening.steps), PlayPrefix(0), sp.P)
    for k in range(4):
        s = alpha_lift(random_bounded_strategy(C01, 2, seed=k), M01, Fraction(1, 2))
        t = play_alpha_game(C01, 0, M01, s, sp, 8, W, stop_early=False, track=lambda p: cond_prob(M01, W.generators, p))
        assert t.outcome == "Out"
        assert all(r.cond_prob <= sp.P for r in t.records if r.player == 0)


def test_spoiler_on_a_three_generator_set():
    W = cyl("0·0", "0·11")
    sp = spoiler_for_open(W, M01, Fraction(1, 2), 0)
    assert sp.P == Fraction(3, 4)
    s = alpha_lift(Positional({0: (0,), 1: (1,)}), M01, Fraction(1, 2))
    t = play_alpha_game(C01, 0, M01, s, sp, 4, W, stop_early=False, track=lambda p: cond_prob(M01, W.generators, p))
    assert t.outcome == "Out"


def test_trie_monitor_directly():
    mon = TrieMonitor(PrefixFreeSet([parse_prefix("0·01")]))
    assert mon.verdict(mon.run((0, 0, 1))) is Verdict.IN
    assert mon.verdict(mon.run((0, 1))) is Verdict.OUT
