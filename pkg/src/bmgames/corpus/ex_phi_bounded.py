"""Predicting the next letter infinitely often: 1-bounded winner, no bounded length-counting winner."""

from __future__ import annotations

import random
from itertools import product

from ..conditions import OracleCondition, Verdict
from ..engine import MeasureRandomPlayer, hash_steps, play_classical
from ..graph import Continuation, FiniteGraph
from ..measure import uniform
from ..strategies import General, LengthCounting, Strategy
from .base import Fact, GameBundle

ALPHABET = (0, 1, 2, 3)


def checkpoint(k: int) -> int:
    """``n_k = 3 + 6 + ... + 3k``."""
    return 3 * k * (k + 1) // 2


def _segment(length: int):
    """``(k, i)`` with ``length = n_k + 2k + 1 + i`` and ``0 <= i < k``, else ``None``."""
    k = 1
    while checkpoint(k) + 2 * k + 1 <= length:
        start = checkpoint(k) + 2 * k + 1
        if length < start + k:
            return k, length - start
        k += 1
    return None


def decode(tau) -> tuple:
    """Pairs of letters in {2,3} read as base-2 digits of a letter in {0,1,2,3}."""
    return tuple(2 * (tau[2 * j] - 2) + (tau[2 * j + 1] - 2) for j in range(len(tau) // 2))


def phi(word) -> int:
    """Letter predicted after ``word``.

    On words ``π τ 2 s`` with ``|π| = n_k``, ``τ`` in ``{2,3}^{2k}`` and
    ``|s| < k`` the prediction differs from the ``|s|+1``-th letter that
    ``τ`` encodes; everywhere else it is 0.
    """
    seg = _segment(len(word))
    if seg is None:
        return 0
    k, i = seg
    n = checkpoint(k)
    tau = tuple(word[n : n + 2 * k])
    if word[n + 2 * k] != 2 or any(a not in (2, 3) for a in tau):
        return 0
    return 1 if decode(tau)[i] == 0 else 0


def condition() -> OracleCondition:
    return OracleCondition(lambda p: Verdict.UNKNOWN, name="phi-predicts-infinitely-often")


def matches(word) -> list[int]:
    """1-based positions ``n+1`` with ``φ(ρ(1..n)) = ρ(n+1)``."""
    return [n + 1 for n in range(1, len(word)) if phi(word[:n]) == word[n]]


def winner() -> General:
    return General(lambda p: (phi(p.word),), name="play-phi")


def find_tau(prefix_word, sigma, k: int):
    """Exhaustive search for ``τ`` in ``{2,3}^{2k}`` so that ``φ`` misses every letter of ``σ``."""
    for tau in product((2, 3), repeat=2 * k):
        base = tuple(prefix_word) + tau + (2,)
        if all(phi(base + tuple(sigma[:i])) != sigma[i] for i in range(len(sigma))):
            return tau
    return None


class CheckpointCounter(Strategy):
    """Against a ``bound``-bounded length-counting ``f``: pad with 2s to ``n_j``, then ``τ 2``.

    ``j`` starts at ``bound`` and grows by one each move, so the reply
    always fits before the next checkpoint.  ``f``'s reply is read by
    querying ``f`` on the play the move would produce.
    """

    kind = "general"

    def __init__(self, f: LengthCounting, bound: int):
        self.f = f
        self.bound = max(1, bound)
        self.name = f"checkpoint({f.name})"

    def respond(self, prefix, move_index):
        j = self.bound + move_index - 1
        L = len(prefix.word)
        pad = checkpoint(j) - L
        if pad < 0:
            raise RuntimeError("play already past the checkpoint")
        head = prefix.word + (2,) * pad
        sigma = self.f.rule(2, checkpoint(j) + 2 * j)
        sigma = tuple(getattr(sigma, "steps", sigma))
        if len(sigma) > j:
            raise ValueError("opponent exceeds its bound")
        tau = find_tau(head, sigma, j)
        if tau is None:
            raise RuntimeError(f"no τ at checkpoint {j}")
        return Continuation(prefix.last, (2,) * pad + tau + (2,))


def sample_bounded(seed, bound: int = 2) -> list[LengthCounting]:
    def hashed(v, n):
        rng = random.Random(f"{seed}:{v}:{n}")
        return tuple(rng.choice(ALPHABET) for _ in range(rng.randint(1, bound)))

    return [
        LengthCounting(lambda v, n: (n % 4,), name="n mod 4"),
        LengthCounting(lambda v, n: (0, 1)[: 1 + n % bound], name="01"),
        LengthCounting(hashed, name=f"hashed-{seed}"),
    ]


def build() -> GameBundle:
    g = FiniteGraph.complete(ALPHABET)
    m = uniform(g)
    b = GameBundle(
        "ex_phi_bounded",
        g,
        2,
        m,
        condition(),
        "K4 from 2; φ(prefix) equals the next letter infinitely often",
        strategies={"winner": winner(), "counter": CheckpointCounter},
    )

    def winner_matches(bundle, seed):
        for i in range(10):
            t = play_classical(g, 2, MeasureRandomPlayer(m, 5, seed=f"{seed}/{i}"), winner(), 20)
            hit = set(matches(t.prefix.word))
            for off, pl in t.prefix.boundaries:
                if pl == 0 and off + 2 not in hit:
                    return False, f"miss at position {off + 2} ({hash_steps(t.prefix.steps)})"
        return True

    def counter_zero(bundle, seed):
        for f in sample_bounded(seed):
            t = play_classical(g, 2, CheckpointCounter(f, 2), f, 3)
            if matches(t.prefix.word):
                return False, f"{f.name}: {matches(t.prefix.word)}"
        return True

    b.facts = [
        Fact("winner_scores_every_move", True, winner_matches),
        Fact("counter_zero_matches_over_3_checkpoints", True, counter_zero),
    ]
    return b
