"""A 1 at some triangular position: probability one, no positional/bounded/move-counting winner."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..analyzer import is_prob_one, prob_open_exact
from ..conditions import IN_STATE, OUT_STATE, Monitor, OpenCondition
from ..engine import MeasureRandomPlayer, play_classical, random_bounded_strategy
from ..graph import Continuation, FiniteGraph, PlayPrefix
from ..measure import uniform
from ..strategies import LengthCounting, MoveCounting, Positional, Strategy
from .base import Fact, GameBundle
from .words import is_triangular_index, next_triangular, triangular


class TriangularMonitor(Monitor):
    """State = current position; ``IN`` at the first triangular position ``a_n`` (n > 1) holding 1.

    With ``only`` set, the monitor describes the single set ``A_only``:
    positions ``a_m`` for ``m < only`` must hold 0 and ``a_only`` must hold 1.
    """

    def __init__(self, only: int | None = None):
        self.only = only

    def start(self, v0):
        return 1 if v0 == 0 else OUT_STATE

    def step(self, pos, v):
        pos += 1
        n = is_triangular_index(pos)
        if n is None or n < 2:
            return pos
        if self.only is None:
            return IN_STATE if v == 1 else pos
        if n < self.only:
            return OUT_STATE if v == 1 else pos
        return IN_STATE if v == 1 else OUT_STATE


def _certificate(m, depth: int) -> Fraction:
    # with uniform weights the triangular positions are independent fair coins
    p = m.min_transition()
    k = 1
    while triangular(k + 1) <= depth + 1:
        k += 1
    return (1 - p) ** (k - 1)


def condition() -> OpenCondition:
    return OpenCondition(TriangularMonitor(), name="one-at-triangular", mass_certificate=_certificate)


def level_set(n: int) -> OpenCondition:
    """``A_n`` through its monitor (no explicit generators)."""
    return OpenCondition(TriangularMonitor(only=n), name=f"A_{n}")


def level_generators(n: int) -> list[PlayPrefix]:
    """Explicit cylinders generating ``A_n``: all words of length ``a_n`` with the right triangular letters."""
    a = triangular(n)
    fixed = {triangular(k): 0 for k in range(1, n)}
    fixed[a] = 1
    free = [i for i in range(2, a + 1) if i not in fixed]
    out = []
    for bits in product((0, 1), repeat=len(free)):
        word = dict(fixed)
        word.update(zip(free, bits))
        out.append(PlayPrefix(0, tuple(word[i] for i in range(2, a + 1))))
    return out


def truncated_union(K: int) -> OpenCondition:
    gens = [p for n in range(2, K + 1) for p in level_generators(n)]
    return OpenCondition.from_generators(gens, name=f"A_2..A_{K}")


def winner() -> LengthCounting:
    """Pad with zeros and write 1 at the next triangular position."""

    def rule(v, length):
        pos = length + 2  # first position this move writes
        _, a = next_triangular(pos)
        return (0,) * (a - pos) + (1,)

    return LengthCounting(rule, name="one-at-next-triangular")


class ZeroPadCounter(Strategy):
    """Write zeros through a triangular position ``a_k`` whose gap to ``a_{k+1}`` exceeds the opponent's reach.

    ``reach(prefix, k)`` bounds the length of the opponent's answer to the
    ``k``-th move; for bounded and positional opponents it is a constant,
    for move-counting ones it is read off the strategy (white-box).
    """

    kind = "general"

    def __init__(self, reach, name="zero-pad"):
        self.reach = reach
        self.name = name

    def respond(self, prefix, move_index):
        pos = prefix.length + 2
        b = self.reach(prefix, move_index)
        n, a = next_triangular(pos)
        while n + 1 <= b:
            n += 1
            a = triangular(n)
        return Continuation(prefix.last, (0,) * (a - pos + 1))


def counter_for_bound(b: int) -> ZeroPadCounter:
    return ZeroPadCounter(lambda p, k: b, name=f"zero-pad-{b}")


def counter_for_move_counting(h: MoveCounting) -> ZeroPadCounter:
    def reach(prefix, k):
        return max(len(h.answer(v, k)) for v in (0, 1))

    return ZeroPadCounter(reach, name=f"zero-pad({h.name})")


def triangular_zeros(word) -> bool:
    """Every triangular position ``a_n`` (n > 1) inside the word holds 0."""
    n = 2
    while triangular(n) <= len(word):
        if word[triangular(n) - 1] != 0:
            return False
        n += 1
    return True


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1])
    m = uniform(g)
    W = condition()
    b = GameBundle(
        "ex_pos",
        g,
        0,
        m,
        W,
        "C01 from 0; a 1 at some triangular position a_n, n > 1",
        strategies={"winner": winner(), "counter": ZeroPadCounter},
    )

    def p_levels(bundle, seed):
        got = [level_set(n).curve(m, 0, 1).mass(triangular(n) - 1) for n in range(2, 11)]
        want = [Fraction(1, 2 ** (n - 1)) for n in range(2, 11)]
        return got == want, " ".join(map(str, got))

    def truncated(bundle, seed):
        got = [prob_open_exact(m, truncated_union(K)) for K in range(2, 7)]
        return got == [1 - Fraction(2) ** (1 - K) for K in range(2, 7)], " ".join(map(str, got))

    def winner_in(bundle, seed):
        for i in range(20):
            t = play_classical(g, 0, MeasureRandomPlayer(m, 6, seed=f"{seed}/{i}"), winner(), 5, W)
            if t.outcome != "In":
                return False, str(t.prefix)
        return True

    def counters(bundle, seed):
        cases = []
        for b_ in (1, 2, 3):
            table = {0: (0,) * b_, 1: (1,) * b_}
            cases.append((counter_for_bound(b_), Positional(table, name=f"positional-{b_}")))
            cases.append((counter_for_bound(b_), random_bounded_strategy(g, b_, seed=f"{seed}/{b_}")))
        for h in (
            MoveCounting(lambda v, n: (1,) * n, name="ones(n)"),
            MoveCounting(lambda v, n: (0,) * (n % 3) + (1,), name="0^(n mod 3)1"),
        ):
            cases.append((counter_for_move_counting(h), h))
        for pl1, pl0 in cases:
            t = play_classical(g, 0, pl1, pl0, 30, W)
            if not triangular_zeros(t.prefix.word) or t.outcome != "Undecided":
                return False, f"{pl0.name}: {t.prefix}"
        return True

    def prob_one(bundle, seed):
        return is_prob_one(m, W, 0, budget=64).kind

    b.facts = [
        Fact("P(A_n)=2^(1-n)", True, p_levels, seeded=False),
        Fact("truncated_union_1-2^(1-K)", True, truncated, seeded=False),
        Fact("winner_in_on_all_seeds", True, winner_in),
        Fact("counters_keep_triangular_positions_zero", True, counters),
        Fact("probability_one", "one", prob_one, seeded=False),
    ]
    return b
