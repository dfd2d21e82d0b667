"""Moves answered by a letter function of the mover's word: 1-bounded last-move winner, no positional winner."""

from __future__ import annotations

import random
from itertools import product

from ..conditions import OracleCondition, Verdict
from ..engine import MeasureRandomPlayer, play_classical
from ..graph import Continuation, FiniteGraph
from ..measure import uniform
from ..strategies import LastMove, Positional, Strategy, last_move_word
from .base import Fact, GameBundle

ALPHABET = (0, 1, 2)


class AvoidingLetterMap:
    """A map ``{0,1,2}* -> {0,1}`` built by greedy search.

    For every head ``π`` with ``|π| <= head_len`` and every reply ``σ`` with
    ``1 <= |σ| <= reply_len`` it records some ``k`` such that
    ``φ(π 2^k) != σ(1)`` and ``φ(π 2^k σ(1..i)) != σ(i+1)`` for ``i < |σ|``.
    Words never assigned map to 0.
    """

    def __init__(self, head_len: int = 2, reply_len: int = 3):
        self.head_len = head_len
        self.reply_len = reply_len
        self.table: dict[tuple, int] = {}
        self.skip: dict[tuple, int] = {}
        heads = [h for n in range(head_len + 1) for h in product(ALPHABET, repeat=n)]
        replies = [s for n in range(1, reply_len + 1) for s in product(ALPHABET, repeat=n)]
        for head in heads:
            for sigma in replies:
                self.skip[(head, sigma)] = self._place(head, sigma)

    def _needs(self, head, sigma, k):
        base = head + (2,) * k
        return [(base + sigma[:i], sigma[i]) for i in range(len(sigma))]

    def _place(self, head, sigma) -> int:
        k = 1
        while True:
            needs = self._needs(head, sigma, k)
            if all(self.table.get(w, None) != bad for w, bad in needs if w in self.table):
                for w, bad in needs:
                    if w not in self.table:
                        self.table[w] = 1 if bad == 0 else 0
                return k
            k += 1

    def __call__(self, word) -> int:
        return self.table.get(tuple(word), 0)

    def avoids(self, head, k, sigma) -> bool:
        base = tuple(head) + (2,) * k
        return all(self(base + tuple(sigma[:i])) != sigma[i] for i in range(len(sigma)))


PHI = AvoidingLetterMap()


def condition() -> OracleCondition:
    return OracleCondition(lambda p: Verdict.UNKNOWN, name="blocks-pi-phi(pi)")


def winner(phi=PHI) -> LastMove:
    return LastMove(lambda word: (phi(word),), name="phi-of-last-move")


class TwoPowerCounter(Strategy):
    """Against a positional ``f``: play ``π 2^k`` so ``φ`` misses each letter of ``f(2)``.

    Every move ends in 2, so the opponent always answers ``f(2)``.  The head
    ``π`` of each move is drawn from the bounded words the map was built
    for; the opening move's head is the start vertex itself.
    """

    kind = "general"

    def __init__(self, f: Positional, phi: AvoidingLetterMap = PHI, seed=0):
        self.sigma = f(2).steps
        self.phi = phi
        self.seed = seed
        self.name = f"two-power({f.name})"
        if not 1 <= len(self.sigma) <= phi.reply_len:
            raise ValueError("reply longer than the map was built for")

    def head(self, prefix, move_index) -> tuple:
        if not prefix.steps:
            return (prefix.start,)
        rng = random.Random(f"{self.seed}:{move_index}")
        n = rng.randint(0, self.phi.head_len)
        return tuple(rng.choice(ALPHABET) for _ in range(n))

    def respond(self, prefix, move_index):
        head = self.head(prefix, move_index)
        k = self.phi.skip[(head, self.sigma)]
        word = head + (2,) * k
        steps = word[1:] if not prefix.steps else word
        return Continuation(prefix.last, steps)


def checkpoints_avoided(prefix, phi: AvoidingLetterMap) -> bool:
    """At each Player 1 move, ``φ`` of the move extended by part of the reply misses the next reply letter."""
    moves = prefix.moves()
    for j in range(0, len(moves) - 1, 2):
        word = last_move_word(prefix.truncate(prefix.boundaries[j + 1][0]))
        reply = moves[j + 1][1].steps
        for i in range(len(reply)):
            if phi(word + reply[:i]) == reply[i]:
                return False
    return True


def alternation_ok(prefix, phi: AvoidingLetterMap) -> bool:
    """Each Player 0 move is the single letter ``φ`` assigns to the preceding Player 1 move."""
    moves = prefix.moves()
    for j in range(0, len(moves) - 1, 2):
        word = last_move_word(prefix.truncate(prefix.boundaries[j + 1][0]))
        if moves[j + 1][1].steps != (phi(word),):
            return False
    return True


def sample_positional() -> list[Positional]:
    return [
        Positional({0: (0,), 1: (1,), 2: (0,)}, name="0"),
        Positional({0: (0,), 1: (1,), 2: (1, 0)}, name="10"),
        Positional({0: (2,), 1: (2,), 2: (0, 1, 2)}, name="012"),
    ]


def build() -> GameBundle:
    g = FiniteGraph.complete(ALPHABET)
    m = uniform(g)
    b = GameBundle(
        "ex_phi_lastmove",
        g,
        2,
        m,
        condition(),
        "C012 from 2; plays cut into blocks π φ(π)",
        strategies={"winner": winner(), "counter": TwoPowerCounter},
        extras={"phi": PHI},
    )

    def winner_alternation(bundle, seed):
        for i in range(10):
            t = play_classical(g, 2, MeasureRandomPlayer(m, 4, seed=f"{seed}/{i}"), winner(), 20)
            if not alternation_ok(t.prefix, PHI):
                return False, str(t.prefix)
        return True

    def counter_avoids(bundle, seed):
        for f in sample_positional():
            t = play_classical(g, 2, TwoPowerCounter(f, seed=seed), f, 40)
            if not checkpoints_avoided(t.prefix, PHI):
                return False, f"{f.name}: {t.prefix}"
        return True

    def map_property(bundle, seed):
        return all(PHI.avoids(h, k, s) for (h, s), k in PHI.skip.items())

    b.facts = [
        Fact("winner_alternation", True, winner_alternation),
        Fact("counter_avoids_reply_letters", True, counter_avoids),
        Fact("letter_map_avoidance_property", True, map_property, seeded=False),
    ]
    return b
