"""Concatenations of words and their reverses: large but of probability zero."""

from __future__ import annotations

from ..analyzer import is_prob_one, prob_parity_exact
from ..conditions import OracleCondition, ParityCondition, Verdict
from ..engine import MeasureRandomPlayer, play_classical
from ..graph import FiniteGraph
from ..measure import uniform
from ..strategies import LastMove, reverse_rule
from .base import Fact, GameBundle
from .words import even_palindrome_split

BOUNDARY = "|"


def _nfa_step(state, a, B: int):
    if state == BOUNDARY:
        return [("f", (a,))]
    out = []
    if state[0] == "f":
        w = state[1]
        if len(w) < B:
            out.append(("f", w + (a,)))
        if a == w[-1]:
            out.append(BOUNDARY if len(w) == 1 else ("b", w, 1))
    else:
        _, w, i = state
        if a == w[-(i + 1)]:
            out.append(BOUNDARY if i + 1 == len(w) else ("b", w, i + 1))
    return out


def block_palindrome_dpa(B: int, alphabet=(0, 1, 2)) -> ParityCondition:
    """Paths splitting into blocks ``w w^R`` with ``1 <= |w| <= B``, as a deterministic automaton.

    Subset construction over the block-parsing automaton; the empty subset
    is the only rejecting state (priority 1), every other state has
    priority 0.  The start vertex is the first letter read.
    """
    init = frozenset({BOUNDARY})
    states = {init}
    trans = {}
    todo = [init]
    while todo:
        S = todo.pop()
        for a in alphabet:
            T = frozenset(t for s in S for t in _nfa_step(s, a, B))
            trans[(S, a)] = T
            if T not in states:
                states.add(T)
                todo.append(T)
    order = sorted(states, key=lambda S: (len(S), sorted(map(str, S))))
    names = {S: i for i, S in enumerate(order)}
    return ParityCondition(
        states=range(len(order)),
        initial=names[init],
        transition={(names[S], a): names[T] for (S, a), T in trans.items()},
        priority={names[S]: (0 if S else 1) for S in order},
        name=f"W_{B}",
    )


def condition() -> OracleCondition:
    # every prefix extends both into and out of the set
    return OracleCondition(lambda p: Verdict.UNKNOWN, name="w-wR-blocks")


def winner() -> LastMove:
    return LastMove(reverse_rule, name="reverse-last-move")


def decomposable_at_boundaries(prefix) -> bool:
    """Every prefix ending a Player 0 move splits into blocks ``w w^R``."""
    word = prefix.word
    ends = [off for off, pl in prefix.boundaries[1:] if pl == 1] + [prefix.length]
    for end in ends:
        if even_palindrome_split(word[: end + 1]) is None:
            return False
    return True


def build() -> GameBundle:
    g = FiniteGraph.complete([0, 1, 2])
    m = uniform(g)
    b = GameBundle(
        "ex_wwR",
        g,
        2,
        m,
        condition(),
        "C012 from 2; paths cut into blocks w w^R",
        strategies={"winner": winner()},
        extras={"W_1": block_palindrome_dpa(1), "W_2": block_palindrome_dpa(2)},
    )

    def decomposition(bundle, seed):
        for i in range(30):
            pl1 = MeasureRandomPlayer(m, 4, seed=f"{seed}/{i}")
            t = play_classical(g, 2, pl1, winner(), 12)
            if not decomposable_at_boundaries(t.prefix):
                return False, str(t.prefix)
        return True

    def p_wb(B):
        def check(bundle, seed):
            return prob_parity_exact(m, bundle.extras[f"W_{B}"], 2)

        return check

    def oracle_verdict(bundle, seed):
        return is_prob_one(m, bundle.condition, 2).kind

    b.facts = [
        Fact("winner_blocks_decompose", True, decomposition),
        Fact("P(W_1)=0", 0, p_wb(1), seeded=False),
        Fact("P(W_2)=0", 0, p_wb(2), seeded=False),
        Fact("full_set_probability_unknown_to_analyzer", "unknown", oracle_verdict, seeded=False),
        Fact(
            "no_winning_alpha_strategy",
            None,
            citation="a last-move winner exists, yet P(W)=0 leaves no room for a winning α-strategy",
        ),
    ]
    return b
