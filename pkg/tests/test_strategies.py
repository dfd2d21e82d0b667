import random
from collections import Counter

import pytest

from bmgames.corpus import ex_pos, ex_wwr
from bmgames.engine import MeasureRandomPlayer, play_classical
from bmgames.errors import (
    AnchorMismatch,
    ExplosionGuard,
    MissingTableEntry,
    OutputEscapesBSCC,
    TableIncomplete,
    ValidationError,
)
from bmgames.graph import Continuation, FiniteGraph, PlayPrefix, concat, parse_prefix
from bmgames.measure import uniform
from bmgames.strategies import (
    BoundWitness,
    FiniteMemory,
    General,
    LastMove,
    LengthCounting,
    MoveCounting,
    Positional,
    bounded_move_counting_to_positional,
    diagonal_phi,
    fold_replay,
    gn_from_move_counting,
    is_consistent,
    last_move_word,
    length_counting_from_general,
    move_counting_from_positional_family,
    reverse_rule,
)
from oracles import even_palindrome_blocks

C01 = FiniteGraph.complete([0, 1])
C012 = FiniteGraph.complete([0, 1, 2])


def test_move_counting_answer():
    h = MoveCounting(lambda v, n: (1,) * n)
    assert h.respond(PlayPrefix(0), 3).steps == (1, 1, 1)


def test_positional_ignores_history():
    f = Positional({0: (0, 1), 1: (1,)})
    assert f.respond(parse_prefix("0·1100"), 7).steps == (0, 1)
    assert f.respond(parse_prefix("0"), 1).steps == (0, 1)


def test_positional_missing_entry():
    with pytest.raises(MissingTableEntry):
        Positional({0: (1,)}).respond(parse_prefix("0·1"), 1)


def test_rule_with_wrong_anchor():
    s = General(lambda p: Continuation(5, (1,)))
    with pytest.raises(AnchorMismatch):
        s.respond(PlayPrefix(0), 1)


def test_length_counting_reads_length():
    s = LengthCounting(lambda v, n: (1,) * (n + 1))
    assert s.respond(parse_prefix("0·00"), 9).steps == (1, 1, 1)


def test_finite_memory_counts_ones():
    # answer 0 after an odd number of 1s, else 1
    s = FiniteMemory(0, lambda mem, v: mem ^ (v == 1), lambda mem, v: (0,) if mem else (1,))
    assert s.respond(parse_prefix("0·1"), 1).steps == (0,)
    assert s.respond(parse_prefix("0·11"), 1).steps == (1,)


def test_last_move_word_includes_start_on_the_opening_move():
    p = concat(PlayPrefix(2), Continuation(2, (0, 1)), 1)
    assert last_move_word(p) == (2, 0, 1)
    p = concat(p, Continuation(1, (0, 2)), 0)
    p = concat(p, Continuation(2, (1,)), 1)
    assert last_move_word(p) == (1,)


def test_reverse_strategy_completes_palindromic_blocks():
    s = LastMove(reverse_rule)
    p = concat(PlayPrefix(2), Continuation(2, (0, 1)), 1)
    out = s.respond(p, 1)
    assert out.steps == (1, 0, 2)
    assert even_palindrome_blocks(concat(p, out, 0).word)
    rng = random.Random(4)
    for _ in range(50):
        q = PlayPrefix(2)
        for _ in range(4):
            q = concat(q, C012.continuation(q.last, [rng.choice((0, 1, 2)) for _ in range(rng.randint(1, 4))]), 1)
            q = concat(q, s.respond(q, None), 0)
            assert even_palindrome_blocks(q.word)
            assert ex_wwr.decomposable_at_boundaries(q)


def test_consistency_and_its_failure():
    f = Positional({0: (1,), 1: (0, 0)})
    t = play_classical(C01, 0, MeasureRandomPlayer(uniform(C01), 3, seed=1), f, 6)
    assert is_consistent(t, f, 0)
    off, _ = t.prefix.boundaries[3]
    steps = list(t.prefix.steps)
    steps[off] = 1 - steps[off]
    tampered = PlayPrefix(0, tuple(steps), t.prefix.boundaries)
    assert not is_consistent(tampered, f, 0)


def test_fold_first_length():
    f = General(lambda p: (p.last, 1 - p.last), name="echo-flip")
    h = length_counting_from_general(f, C01, 0)
    assert h.respond(parse_prefix("0·0"), None).steps == f.respond(parse_prefix("0·0"), None).steps
    assert h.respond(parse_prefix("0·1"), None).steps == f.respond(parse_prefix("0·1"), None).steps


def test_fold_second_length_concatenates():
    # f depends on the whole prefix: answer 1 when the prefix has an even number of steps, else 00
    f = General(lambda p: (1,) if p.length % 2 == 0 else (0, 0))
    h = length_counting_from_general(f, C01, 0)
    pi1, pi2 = parse_prefix("0·00"), parse_prefix("0·10")
    t1 = f.respond(pi1, None)
    t2 = f.respond(pi2.extend(t1.steps), None)
    assert h.respond(parse_prefix("0·10"), None).steps == t1.steps + t2.steps


def test_fold_guard():
    h = length_counting_from_general(General(lambda p: (0,)), C01, 0, cap=2**4)
    with pytest.raises(ExplosionGuard):
        h.respond(PlayPrefix(0, (0,) * 5), None)


def test_fold_rejects_move_counting_sources():
    with pytest.raises(ValidationError):
        length_counting_from_general(MoveCounting(lambda v, n: (1,)), C01, 0)


def test_fold_replay_on_played_games():
    f = ex_pos.winner()
    h = length_counting_from_general(f, C01, 0)
    m = uniform(C01)
    for seed in range(5):
        t = play_classical(C01, 0, MeasureRandomPlayer(m, 3, seed=seed), h, 3, ex_pos.condition())
        cuts = fold_replay(t.prefix, f, C01)
        assert len(cuts) == len(t.moves(0))


def test_fold_replay_detects_foreign_moves():
    f = ex_pos.winner()
    other = Positional({0: (1,), 1: (1,)})
    t = play_classical(C01, 0, MeasureRandomPlayer(uniform(C01), 3, seed=0), other, 3)
    with pytest.raises(AssertionError):
        fold_replay(t.prefix, f, C01)


def test_diagonal_phi():
    assert [diagonal_phi(n) for n in range(1, 11)] == [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]
    assert [n for n in range(1, 11) if diagonal_phi(n) == 1] == [1, 2, 4, 7]
    with pytest.raises(ValueError):
        diagonal_phi(0)


def test_family_with_alternating_index():
    a = Positional({0: (0,), 1: (0,)})
    b = Positional({0: (1,), 1: (1,)})
    h = move_counting_from_positional_family([a, b], phi=lambda n: 1 + (n + 1) % 2)
    assert [h.answer(0, n).steps for n in range(1, 5)] == [(0,), (1,), (0,), (1,)]


def test_family_fibers_cover_each_index():
    fams = {k: Positional({0: (1,) * k, 1: (0,) * k}) for k in range(1, 10)}
    h = move_counting_from_positional_family(lambda k: fams[k])
    uses = Counter(len(h.answer(0, n)) for n in range(1, 46))
    assert uses == Counter({k: 10 - k for k in range(1, 10)})


def test_gn_chain():
    h = MoveCounting(lambda v, n: (1,) * n)
    assert gn_from_move_counting(h, 2, C01)(0).steps == (1, 1, 1)
    g1 = gn_from_move_counting(h, 1, C01)
    assert all(g1(v).steps == h.answer(v, 1).steps for v in (0, 1))


def test_gn_length_bookkeeping():
    rng = random.Random(9)
    for _ in range(20):
        table = {(v, n): tuple(rng.choice((0, 1, 2)) for _ in range(rng.randint(1, 3))) for v in (0, 1, 2) for n in range(1, 7)}
        h = MoveCounting(lambda v, n, t=table: t[(v, n)])
        n = rng.randint(1, 6)
        g = gn_from_move_counting(h, n, C012)
        for v in (0, 1, 2):
            total, cur = 0, v
            for k in range(1, n + 1):
                total += len(table[(cur, k)])
                cur = table[(cur, k)][-1]
            assert len(g(v)) == total


def test_bscc_threading_single_component():
    h = MoveCounting(lambda v, n: (1,))
    f = bounded_move_counting_to_positional(h, C01, {0: [(0, 1), (1, 1)]}, bound=1)
    for v in (0, 1):
        assert 1 in f(v).steps


def test_bscc_threading_two_components():
    g = FiniteGraph(("s", "a", "b"), frozenset({("s", "a"), ("s", "b"), ("a", "a"), ("b", "b")}))
    h = MoveCounting(lambda v, n: (v,))
    f = bounded_move_counting_to_positional(h, g, {frozenset({"a"}): [("a", "a")], frozenset({"b"}): [("b", "b")]})
    assert f("s").steps in (("a",), ("b",))
    assert f("a").steps == ("a",)


def test_bscc_threading_contains_every_word_in_order():
    h = MoveCounting(lambda v, n: (1, 0) if n % 2 else (0, 0))
    f = bounded_move_counting_to_positional(h, C01, {0: [(0, 1, 0), (1, 1, 0), (0, 0, 0), (1, 0, 0)]})
    for v in (0, 1):
        word = (v,) + f(v).steps
        text = "".join(map(str, word))
        pos = 0
        for w in ("010", "110", "000", "100"):
            pos = text.find(w, pos)
            assert pos >= 0
            pos += len(w) - 1


def test_bscc_table_errors():
    h = MoveCounting(lambda v, n: (1,))
    with pytest.raises(TableIncomplete):
        bounded_move_counting_to_positional(h, C01, {0: [(0, 1)]})
    g = FiniteGraph(("s", "a"), frozenset({("s", "a"), ("s", "s"), ("a", "a")}))
    with pytest.raises(OutputEscapesBSCC):
        bounded_move_counting_to_positional(MoveCounting(lambda v, n: ("s",)), g, {0: [("a", "s")]})


def test_bound_witness():
    f = Positional({0: (0, 1), 1: (1,)})
    assert BoundWitness(f, 2).check_table()
    assert not BoundWitness(f, 1).check_table()
    assert BoundWitness(f, 1).check_output(Continuation(0, (1,)))
