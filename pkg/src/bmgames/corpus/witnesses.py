"""Implication witnesses: the strategy conversions run on small games.

Each fact exercises one conversion between strategy kinds and checks the
converted strategy through an independent replay, lasso or validation.
The module also lists the finite open sets used for the α-game
determinacy check.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product

from ..analyzer import is_prob_one
from ..conditions import OpenCondition, ParityCondition, lasso_membership
from ..engine import (
    MeasureRandomPlayer,
    MeasureRandomSelector,
    alpha_for_gd_prob_one,
    alpha_from_bounded,
    alpha_from_move_counting,
    check_gn_form,
    play_alpha_game,
    play_classical,
    positional_lasso,
    probe_alpha_strategy,
    random_bounded_strategy,
    spoiler_for_open,
    strategy_selector,
)
from ..errors import BMError
from ..graph import FiniteGraph, iter_continuations, parse_prefix
from ..measure import uniform
from ..strategies import (
    MoveCounting,
    Positional,
    bounded_move_counting_to_positional,
    diagonal_phi,
    fold_replay,
    is_consistent,
    length_counting_from_general,
    move_counting_from_positional_family,
)
from . import ex_pos
from .base import Fact, GameBundle

C01 = FiniteGraph.complete([0, 1])


def buchi_ones() -> ParityCondition:
    """``1`` infinitely often: the state is the last vertex read, priority 0 on 1."""
    return ParityCondition(
        states=(0, 1),
        initial=0,
        transition={(q, a): a for q in (0, 1) for a in (0, 1)},
        priority={0: 1, 1: 0},
        name="inf-often-1",
        graph=C01,
    )


def constant_one() -> MoveCounting:
    return MoveCounting(lambda v, n: (1,), name="always-1")


def threaded_strategy() -> Positional:
    h = constant_one()
    return bounded_move_counting_to_positional(h, C01, {0: [(0, 1), (1, 1)]}, bound=1)


def short_positional(g: FiniteGraph, max_len: int = 2):
    """Every positional strategy whose answers have at most ``max_len`` steps."""
    options = [[c for n in range(1, max_len + 1) for c in iter_continuations(g, v, n)] for v in g.vertices]
    for choice in product(*options):
        yield Positional({c.anchor: c.steps for c in choice}, name="/".join(str(c) for c in choice))


def threaded_lassos(f: Positional, W: ParityCondition, g: FiniteGraph = C01, max_len: int = 2) -> tuple[int, int]:
    """``(accepting, total)`` over all lassos of ``f`` against short positional Player 1 strategies."""
    ok = total = 0
    for v0 in g.vertices:
        for s in short_positional(g, max_len):
            stem, loop = positional_lasso(v0, s, f)
            total += 1
            ok += lasso_membership(W, stem, loop)
    return ok, total


def family(k: int) -> Positional:
    """The ``k``-th positional strategy of the sample family: ``1^k`` from 0, ``0^k`` from 1."""
    return Positional({0: (1,) * k, 1: (0,) * k}, name=f"f_{k}")


def fiber_check(t, family=family) -> tuple[bool, Counter]:
    """Player 0's ``n``-th move equals ``family[φ(n)]`` at its anchor; returns fiber counts."""
    fibers: Counter = Counter()
    n = 0
    for player, c in t.prefix.moves():
        if player != 0:
            continue
        n += 1
        k = diagonal_phi(n)
        if family(k)(c.anchor).steps != c.steps:
            return False, fibers
        fibers[k] += 1
    return True, fibers


FINITE_OPEN_CONDITIONS = {
    "Cyl(0·0)": ["0·0"],
    "Cyl(0·00)": ["0·00"],
    "{0·0, 0·11}": ["0·0", "0·11"],
    "{0·0, 0·1}": ["0·0", "0·1"],
    "{0·00, 0·01, 0·1}": ["0·00", "0·01", "0·1"],
    "{0·1, 0·01, 0·001}": ["0·1", "0·01", "0·001"],
}


def finite_open(name: str) -> OpenCondition:
    return OpenCondition.from_generators([parse_prefix(s) for s in FINITE_OPEN_CONDITIONS[name]], name=name)


def classify_open(W: OpenCondition, m, alpha=Fraction(1, 2), v0=0, depth: int = 4) -> dict:
    """Try both α-game constructions and the analyzer on one finite open set."""
    out = {"analyzer": None, "gd_alpha": False, "spoiler": False, "detail": ""}
    verdict = is_prob_one(m, W, v0)
    out["analyzer"] = "one" if verdict.kind == "one" or verdict.value == 1 else "below-one"
    try:
        ok, reason = probe_alpha_strategy(alpha_for_gd_prob_one(W, m, alpha, budget=64), v0, depth)
        out["gd_alpha"] = ok
        out["detail"] = reason
    except BMError as exc:
        out["detail"] = str(exc)
    try:
        spoiler_for_open(W, m, alpha, v0)
        out["spoiler"] = True
    except BMError as exc:
        out["detail"] += f" / {exc}"
    return out


def build() -> GameBundle:
    m = uniform(C01)
    b = GameBundle(
        "witnesses",
        C01,
        0,
        m,
        buchi_ones(),
        "strategy conversions on C01 (fold, positional families, bottom-SCC threading, α lifts)",
        strategies={"threaded": threaded_strategy()},
        extras={"finite_open": FINITE_OPEN_CONDITIONS},
    )

    def fold(bundle, seed):
        f = ex_pos.winner()
        h = length_counting_from_general(f, C01, 0)
        W = ex_pos.condition()
        for i in range(10):
            t = play_classical(C01, 0, MeasureRandomPlayer(m, 3, seed=f"{seed}/{i}"), h, 3, W)
            if t.outcome != "In":
                return False, f"play {i}: {t.outcome}"
            fold_replay(t.prefix, f, C01)
        return True

    def fibers(bundle, seed):
        h = move_counting_from_positional_family(family)
        N = 15
        t = play_classical(C01, 0, MeasureRandomPlayer(m, 3, seed=seed), h, N)
        ok, fibers = fiber_check(t)
        want = Counter(diagonal_phi(n) for n in range(1, N + 1))
        return ok and fibers == want, str(dict(fibers))

    def lassos(bundle, seed):
        ok, total = threaded_lassos(threaded_strategy(), buchi_ones())
        return ok == total, f"{ok}/{total} accepting"

    def bounded_alpha(bundle, seed):
        f = random_bounded_strategy(C01, 2, seed=seed)
        s, alpha = alpha_from_bounded(f, 2, m)
        if alpha != Fraction(1, 4):
            return False, f"alpha {alpha}"
        pl1 = strategy_selector(MeasureRandomPlayer(m, 3, seed=seed))
        t = play_alpha_game(C01, 0, m, s, pl1, 10)
        return is_consistent(t, f, 0)

    def movalpha(bundle, seed):
        s = alpha_from_move_counting(constant_one(), m, Fraction(1, 2), budget=4000)
        for i in range(5):
            t = play_alpha_game(C01, 0, m, s, MeasureRandomSelector(m, 2, seed=f"{seed}/{i}"), 2)
            if not check_gn_form(t, s):
                return False, str(t.prefix)
        return True

    def determinacy(bundle, seed):
        rows = []
        for name in FINITE_OPEN_CONDITIONS:
            r = classify_open(finite_open(name), m)
            exclusive = r["gd_alpha"] != r["spoiler"]
            agrees = r["gd_alpha"] == (r["analyzer"] == "one")
            if not (exclusive and agrees):
                return False, f"{name}: {r}"
            rows.append(f"{name}:{'gd_alpha' if r['gd_alpha'] else 'spoiler'}")
        return True, " ".join(rows)

    b.facts = [
        Fact("fold_replay_and_in", True, fold),
        Fact("family_fibers_match_phi", True, fibers),
        Fact("threaded_lassos_accepting", True, lassos, seeded=False),
        Fact("bounded_to_alpha_singletons", True, bounded_alpha),
        Fact("movalpha_plays_in_gn_form", True, movalpha),
        Fact("open_alpha_game_determinacy", True, determinacy, seeded=False),
    ]
    return b
