"""Unboundedly long 0-runs, as an intersection of open levels."""

from __future__ import annotations

from fractions import Fraction

from ..analyzer import is_prob_one, monte_carlo
from ..conditions import IN_STATE, GdCondition, Monitor, OpenCondition
from ..engine import MeasureRandomPlayer, play_classical, random_bounded_strategy
from ..graph import FiniteGraph
from ..measure import uniform
from ..strategies import General, MoveCounting, Positional
from .base import Fact, GameBundle
from .words import runs


class ZeroRunThenOne(Monitor):
    """``IN`` once a 0-run of length at least ``n`` is followed by a 1.  State: current 0-run, capped at ``n``."""

    def __init__(self, n: int):
        self.n = n

    def start(self, v0):
        return 1 if v0 == 0 else 0

    def step(self, r, v):
        if v == 0:
            return min(r + 1, self.n)
        return IN_STATE if r >= self.n else 0


def level(n: int) -> OpenCondition:
    return OpenCondition(ZeroRunThenOne(n), name=f"G_{n}")


def _certificate(n: int, m, depth: int) -> Fraction:
    # aligned blocks 0^n 1, each present with probability at least p_min^(n+1)
    p = m.min_transition()
    blocks = depth // (n + 1)
    if blocks > 200:
        # float bound, rounded up, to keep the numbers small
        eps = (1 - float(p) ** (n + 1)) ** blocks
        return Fraction(eps * (1 + 1e-9)).limit_denominator(10**12) + Fraction(1, 10**12)
    return (1 - p ** (n + 1)) ** blocks


def condition() -> GdCondition:
    return GdCondition(level, name="unbounded-zero-runs", certificate=_certificate)


def winner() -> MoveCounting:
    return MoveCounting(lambda v, n: (0,) * n + (1,), name="0^n 1")


def one_after_each_move() -> General:
    """Against a bounded opponent: always answer with a single 1."""
    return General(lambda p: (1,), name="always-1")


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1])
    m = uniform(g)
    W = condition()
    b = GameBundle(
        "ex_omegaS",
        g,
        0,
        m,
        W,
        "C01 from 0; 0-runs of unbounded length (levels: a 0-run of length >= n then 1)",
        strategies={"winner": winner(), "counter": one_after_each_move()},
    )

    def certifies_levels(bundle, seed):
        K = 8
        for i in range(10):
            t = play_classical(g, 0, MeasureRandomPlayer(m, 4, seed=f"{seed}/{i}"), winner(), K, W)
            if W.certified_levels(t.prefix, 64) < K:
                return False, str(t.prefix)
        return True

    def counter(bundle, seed):
        for b_ in (1, 2, 3):
            for pl0 in (
                random_bounded_strategy(g, b_, seed=f"{seed}/{b_}"),
                Positional({0: (0,) * b_, 1: (0,) * b_}, name=f"zeros-{b_}"),
            ):
                t = play_classical(g, 0, one_after_each_move(), pl0, 50, W)
                zero_runs = runs(t.prefix.word, 0)
                if max(zero_runs, default=0) > b_ or W.certified_levels(t.prefix, 64) > b_:
                    return False, f"{pl0.name}: {t.prefix}"
        return True

    def prob_one(bundle, seed):
        return is_prob_one(m, W, 0, budget=400).kind

    def mc(bundle, seed):
        r = monte_carlo(m, W, 0, 30, 2000, seed)
        ok = r.unknown_count == r.samples and r.level_counts[0] >= 0.95 * r.samples
        return ok, f"unknown {r.unknown_count}/{r.samples}, level-1 {r.level_counts[0]}"

    b.facts = [
        Fact("winner_certifies_levels_1..8", True, certifies_levels),
        Fact("counter_caps_zero_runs", True, counter),
        Fact("probability_one", "one", prob_one, seeded=False),
        Fact("monte_carlo_depth_30", True, mc),
        Fact("no_positional_or_bounded_winner", None, citation="a bounded opponent's 0-runs stay short when every reply is 1"),
    ]
    return b
