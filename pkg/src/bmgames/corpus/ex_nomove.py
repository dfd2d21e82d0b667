"""Everything except one enumeration path: bounded winner, no move-counting winner."""

from __future__ import annotations

from ..conditions import IN_STATE, OUT_STATE, Monitor, OpenCondition, Verdict
from ..engine import MeasureRandomPlayer, play_classical
from ..graph import Continuation, FiniteGraph
from ..measure import uniform
from ..strategies import General, MoveCounting, Strategy
from .base import Fact, GameBundle
from .words import EnumerationWord

# rho = 0 · 1 · 00 · 01 · 10 · 11 · 000 · ...   (position 1 is the start vertex)
RHO = EnumerationWord()


class BranchOffMonitor(Monitor):
    """State ``k``: the word read so far equals ``rho(1..k)``; any deviation is ``IN``."""

    def __init__(self, rho: EnumerationWord = RHO):
        self.rho = rho

    def start(self, v0):
        return 1 if v0 == self.rho.at(1) else OUT_STATE

    def step(self, k, v):
        return k + 1 if v == self.rho.at(k + 1) else IN_STATE


def condition() -> OpenCondition:
    return OpenCondition(BranchOffMonitor(), name="all-but-rho")


def winner() -> General:
    """Leave rho at the very next position (or anywhere once already off it)."""

    def rule(prefix):
        pos = len(prefix.word) + 1
        if prefix.word == RHO.slice(1, len(prefix.word)):
            return (1 - RHO.at(pos),)
        return (0,)

    return General(rule, name="deviate-now")


class RhoCounter(Strategy):
    """Against a move-counting ``h``: walk along rho to a point where ``v · h(v, k)`` continues rho.

    White-box: the answer ``h(v, k)`` of the opponent's next move is queried.
    When no such point exists within ``horizon`` letters
    :class:`HorizonExceeded` is raised and the play counts as undecided.
    """

    kind = "general"

    def __init__(self, h: MoveCounting, horizon: int = 200_000):
        self.h = h
        self.horizon = horizon
        self.name = f"rho-walk({h.name})"

    def respond(self, prefix, move_index):
        L = len(prefix.word)
        # choose the end position e > L of our move with rho(e+1..) = h(rho(e), k)
        for e in range(L + 1, L + 1 + self.horizon):
            v = RHO.at(e)
            ans = self.h.answer(v, move_index).steps
            if RHO.slice(e + 1, e + len(ans)) == ans:
                return Continuation(prefix.last, RHO.slice(L + 1, e))
        raise HorizonExceeded(f"no factor for move {move_index} within {self.horizon} letters")


class HorizonExceeded(RuntimeError):
    pass


def sample_move_counting() -> list[MoveCounting]:
    return [
        MoveCounting(lambda v, n: (1,), name="always-1"),
        MoveCounting(lambda v, n: (1 - v, v) * (1 + n % 2), name="flip-back"),
        MoveCounting(lambda v, n: (1,) * n, name="ones(n)"),
    ]


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1])
    m = uniform(g)
    W = condition()
    b = GameBundle(
        "ex_nomove",
        g,
        0,
        m,
        W,
        "C01 from 0; every path except the concatenation of all words in length-lex order",
        strategies={"winner": winner(), "counter": RhoCounter},
        extras={"rho": RHO},
    )

    def winner_first_move(bundle, seed):
        for i in range(10):
            pl1 = MeasureRandomPlayer(m, 5, seed=f"{seed}/{i}")
            t = play_classical(g, 0, pl1, winner(), 1, W)
            if t.outcome != "In":
                return False, str(t.prefix)
        # a Player 1 who follows rho exactly is still left behind at once
        follow = General(lambda p: RHO.slice(len(p.word) + 1, len(p.word) + 3), name="follow-rho")
        return play_classical(g, 0, follow, winner(), 1, W).outcome == "In"

    def counter_stays_on_rho(bundle, seed):
        details = []
        for h in sample_move_counting():
            t = play_classical(g, 0, RhoCounter(h), h, 10_000, W, stop=lambda t: t.prefix.length >= 1000)
            word = t.prefix.word
            if word != RHO.slice(1, len(word)) or t.verdict is not Verdict.UNKNOWN:
                return False, f"{h.name} left rho"
            details.append(f"{h.name}:{len(word)}")
        return True, " ".join(details)

    b.facts = [
        Fact("winner_in_at_first_move", True, winner_first_move),
        Fact("counter_keeps_play_on_rho", True, counter_stays_on_rho, seeded=False),
        Fact("no_move_counting_winner", None, citation="every move-counting strategy can be steered along rho"),
    ]
    return b
