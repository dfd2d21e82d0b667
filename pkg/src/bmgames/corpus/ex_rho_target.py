"""Infinitely many agreements with a target word: bounded length-counting winner, no positional winner."""

from __future__ import annotations

from ..conditions import OracleCondition, Verdict
from ..engine import MeasureRandomPlayer, play_classical
from ..graph import Continuation, FiniteGraph
from ..measure import uniform
from ..strategies import LengthCounting, Positional, Strategy
from .base import Fact, GameBundle
from .words import EnumerationWord

# target = 0 · 0 · 1 · 00 · 01 · ...   (a leading 0, then every word in length-lex order)
TARGET = EnumerationWord(head=(0,))


def condition() -> OracleCondition:
    # a finite prefix never settles an "infinitely often" requirement
    return OracleCondition(lambda p: Verdict.UNKNOWN, name="agree-with-target-infinitely-often")


def matches(word) -> list[int]:
    """1-based positions where the word agrees with the target."""
    return [i for i, a in enumerate(word, 1) if TARGET.at(i) == a]


def winner() -> LengthCounting:
    return LengthCounting(lambda v, length: (TARGET.at(length + 2),), name="copy-target")


class SkipCounter(Strategy):
    """Against a positional ``f``: disagree with the target up to a point ``N`` then play 0.

    ``N`` is chosen so that position ``N+1`` of the target is 1 and the
    opponent's fixed reply ``f(0)``, written at positions ``N+2..``,
    disagrees with the target letter by letter.
    """

    kind = "general"

    def __init__(self, f: Positional, horizon: int = 100_000):
        self.reply = f(0).steps
        self.horizon = horizon
        self.name = f"skip({f.name})"

    def respond(self, prefix, move_index):
        n = len(prefix.word)
        pattern = (1,) + tuple(1 - a for a in self.reply)
        p = TARGET.find(pattern, n + 1, self.horizon)
        if p is None:
            raise RuntimeError("no skip point within the horizon")
        N = p - 1
        steps = tuple(1 - TARGET.at(i) for i in range(n + 1, N + 1)) + (0,)
        return Continuation(prefix.last, steps)


def sample_positional() -> list[Positional]:
    return [
        Positional({0: (1,), 1: (0,)}, name="flip"),
        Positional({0: (0, 1, 1), 1: (1,)}, name="011"),
        Positional({0: (1, 1, 0, 1), 1: (0, 0)}, name="1101"),
    ]


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1])
    m = uniform(g)
    b = GameBundle(
        "ex_rho_target",
        g,
        0,
        m,
        condition(),
        "C01 from 0; agree with 0·(all words in length-lex order) infinitely often",
        strategies={"winner": winner(), "counter": SkipCounter},
    )

    def winner_matches(bundle, seed):
        for i in range(10):
            t = play_classical(g, 0, MeasureRandomPlayer(m, 5, seed=f"{seed}/{i}"), winner(), 30)
            hit = set(matches(t.prefix.word))
            for off, pl in t.prefix.boundaries:
                if pl == 0 and off + 2 not in hit:
                    return False, f"miss at position {off + 2}"
        return True

    def counter_no_matches(bundle, seed):
        for f in sample_positional():
            t = play_classical(g, 0, SkipCounter(f), f, 10_000, stop=lambda t: t.prefix.length >= 1000)
            if matches(t.prefix.word) != [1]:
                return False, f"{f.name}: {matches(t.prefix.word)[:5]}"
        return True

    b.facts = [
        Fact("winner_matches_every_own_position", True, winner_matches),
        Fact("counter_leaves_only_the_opening_match", True, counter_no_matches, seeded=False),
    ]
    return b
