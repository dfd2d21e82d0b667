"""A 1-run longer than the initial 0-run: move-counting winner, no bounded winner."""

from __future__ import annotations

from fractions import Fraction

from ..analyzer import is_prob_one
from ..conditions import IN_STATE, OUT_STATE, Monitor, OpenCondition, Verdict
from ..engine import MeasureRandomPlayer, play_classical, random_bounded_strategy
from ..graph import FiniteGraph
from ..measure import uniform
from ..strategies import General, MoveCounting
from .base import Fact, GameBundle
from .words import runs


class LongOneRunMonitor(Monitor):
    """State ``(z, r)``: initial 0-run length ``z`` (``None`` while still in it), current 1-run ``r``."""

    def start(self, v0):
        return (None, 1) if v0 == 0 else OUT_STATE

    def step(self, state, v):
        z, r = state
        if z is None:
            if v == 0:
                return (None, r + 1)
            z, r = r, 0
        r = r + 1 if v == 1 else 0
        return IN_STATE if r > z else (z, r)


def _certificate(m, depth: int) -> Fraction:
    # P(initial 0-run > k) + P(no block 1^(k+1) among the following aligned blocks), minimised over k
    p = float(m.min_transition())
    best = 1.0
    for k in range(1, max(2, depth)):
        blocks = (depth - k) // (k + 1)
        if blocks < 1:
            break
        eps = (1 - p) ** k + (1 - p ** (k + 1)) ** blocks
        best = min(best, eps)
    return Fraction(min(1.0, best * (1 + 1e-9))).limit_denominator(10**12) + Fraction(1, 10**12)


def condition() -> OpenCondition:
    return OpenCondition(LongOneRunMonitor(), name="long-one-run", mass_certificate=_certificate)


def winner() -> MoveCounting:
    return MoveCounting(lambda v, n: (1,) * n, name="ones(n)")


def block_counter(bound: int) -> General:
    """Against a ``bound``-bounded opponent: open with ``0^bound``, then always ``0``."""

    def rule(prefix):
        return (0,) * bound if not prefix.steps else (0,)

    return General(rule, name=f"zeros-after-0^{bound}")


def block_invariant(word, bound: int) -> bool:
    z = runs(word, 0)[0] if word and word[0] == 0 else 0
    ones = runs(word, 1)
    return z >= bound + 1 and all(r <= bound for r in ones)


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1])
    m = uniform(g)
    W = condition()
    b = GameBundle(
        "ex_nobound",
        g,
        0,
        m,
        W,
        "C01 from 0; win by a 1-run strictly longer than the initial 0-run",
        strategies={"winner": winner(), "counter": block_counter},
    )

    def winner_in(bundle, seed):
        outcomes = set()
        for i in range(20):
            pl1 = MeasureRandomPlayer(m, 4, seed=f"{seed}/{i}")
            t = play_classical(g, 0, pl1, winner(), 40, W)
            outcomes.add(t.outcome)
        return "In" if outcomes == {"In"} else ",".join(sorted(outcomes))

    def counter_blocks(bundle, seed):
        for bound in (1, 2, 3):
            for i in range(3):
                pl0 = random_bounded_strategy(g, bound, seed=f"{seed}/{bound}/{i}")
                t = play_classical(g, 0, block_counter(bound), pl0, 50, W)
                if not block_invariant(t.prefix.word, bound) or t.verdict is not Verdict.UNKNOWN:
                    return False, f"bound {bound}, opponent {i}: {t.prefix}"
        return True

    def prob_one(bundle, seed):
        return is_prob_one(m, W, 0, budget=64).kind

    b.facts = [
        Fact("winner_in_on_all_seeds", "In", winner_in),
        Fact("counter_keeps_ones_below_initial_zeros", True, counter_blocks),
        Fact("probability_one", "one", prob_one, seeded=False),
        Fact(
            "no_bounded_winner",
            None,
            citation="no b-bounded strategy of Player 0 wins: the opening 0^b keeps every later 1-run too short",
        ),
    ]
    return b
