"""Referees for classical and set-valued games, and the α-strategy constructions.

In a set-valued game each player offers a set of continuations; the
opponent selects one of them, which becomes the next move of the play.
Moves are attributed to the player who offered the set, so the classical
game is the special case where every offer is a singleton.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .conditions import (
    CoverSet,
    GdCondition,
    Monitor,
    OpenCondition,
    ParityCondition,
    OracleCondition,
    Verdict,
    open_mass_reached,
)
from .errors import (
    BudgetExceeded,
    IllegalSetMove,
    LevelStuck,
    NotSubProbOne,
    SearchExhausted,
    SelectionFailure,
    ValidationError,
)
from .graph import (
    Continuation,
    FiniteGraph,
    PlayPrefix,
    PrefixFreeSet,
    concat,
    format_steps,
    iter_continuations,
    iter_prefixes,
)
from .measure import ReasonableMeasure, cond_prob, continuations_mass, sample_step
from .strategies import MoveCounting, Strategy, gn_from_move_counting, move_index_at


def _short(p: PlayPrefix, limit: int = 40) -> str:
    """A prefix for error messages; long ones are abbreviated to their length and tail."""
    if p.length <= limit:
        return str(p)
    return f"a {p.length}-step prefix ending …{format_steps(p.steps[-10:])}"


# -- transcripts ------------------------------------------------------------


@dataclass
class MoveRecord:
    index: int
    player: int
    move: Continuation
    offered: int = 1
    cond_prob: Fraction | None = None

    def to_dict(self) -> dict:
        d = {
            "move": self.index,
            "player": self.player,
            "anchor": str(self.move.anchor),
            "steps": format_steps(self.move.steps),
            "offered": self.offered,
        }
        if self.cond_prob is not None:
            d["cond_prob"] = str(self.cond_prob)
        return d


@dataclass
class PlayTranscript:
    prefix: PlayPrefix
    records: list = field(default_factory=list)
    verdict: Verdict = Verdict.UNKNOWN
    reason: str = "round cap"
    meta: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return "Undecided" if self.verdict is Verdict.UNKNOWN else self.verdict.value

    def moves(self, player: int | None = None) -> list[Continuation]:
        return [r.move for r in self.records if player is None or r.player == player]

    def to_records(self) -> list[dict]:
        out = [r.to_dict() for r in self.records]
        out.append({"verdict": self.outcome, "reason": self.reason, "steps_total": self.prefix.length})
        return out


class Tracker:
    """Incremental tri-state verdict along a growing play.

    Open conditions and parity automata are tracked exactly.  For Gδ
    conditions the levels are certified in order and only the first
    uncertified level is watched for an ``OUT`` verdict.
    """

    def __init__(self, condition, graph: FiniteGraph, v0, max_levels: int = 64):
        self.W = condition
        self.graph = graph
        self.max_levels = max_levels
        self.word = [v0]
        self.levels = 0
        self.verdict = Verdict.UNKNOWN
        if isinstance(condition, OpenCondition):
            self._state = condition.monitor.start(v0)
        elif isinstance(condition, GdCondition):
            self._state = None
            self._reseat()
        elif isinstance(condition, ParityCondition):
            self._state = condition.run([v0])
        self._update()

    def _top(self) -> int:
        W = self.W
        return self.max_levels if W.n_levels is None else min(self.max_levels, W.n_levels)

    def _reseat(self):
        """Advance past every level already certified by the current word."""
        W = self.W
        while self.levels < self._top():
            lvl = W.level(self.levels + 1)
            s = lvl.monitor.run(self.word)
            if lvl.monitor.verdict(s) is Verdict.IN:
                self.levels += 1
                continue
            self._state = s
            return
        self._state = None

    def _update(self):
        W = self.W
        if self.verdict is not Verdict.UNKNOWN:
            return
        if isinstance(W, OpenCondition):
            self.verdict = W.monitor.verdict(self._state)
        elif isinstance(W, GdCondition):
            if self._state is None:
                if W.n_levels is not None and self.levels == W.n_levels:
                    self.verdict = Verdict.IN
                return
            v = W.level(self.levels + 1).monitor.verdict(self._state)
            if v is Verdict.OUT:
                self.verdict = Verdict.OUT
        elif isinstance(W, ParityCondition):
            self.verdict = W.decide(self.graph, self.word[-1], self._state)
        elif isinstance(W, OracleCondition):
            self.verdict = Verdict(W.prefix_oracle(PlayPrefix(self.word[0], tuple(self.word[1:]))))

    def extend(self, steps: Iterable):
        steps = tuple(steps)
        W = self.W
        if isinstance(W, GdCondition):
            for v in steps:
                self.word.append(v)
                if self._state is None:
                    continue
                mon = W.level(self.levels + 1).monitor
                if mon.verdict(self._state) is Verdict.UNKNOWN:
                    self._state = mon.step(self._state, v)
                if mon.verdict(self._state) is Verdict.IN:
                    self.levels += 1
                    self._reseat()
        else:
            self.word.extend(steps)
            if isinstance(W, OpenCondition):
                self._state = W.monitor.advance(self._state, steps)
            elif isinstance(W, ParityCondition):
                self._state = W.run(steps, self._state)
        self._update()


# -- classical games ----------------------------------------------------------


def play_classical(
    g: FiniteGraph,
    v0,
    pl1: Strategy,
    pl0: Strategy,
    rounds: int,
    condition=None,
    stop_early: bool = True,
    stop: Callable[[PlayTranscript], bool] | None = None,
) -> PlayTranscript:
    """Alternate ``pl1`` and ``pl0`` for ``rounds`` rounds (Player 1 first)."""
    if rounds < 1:
        raise ValueError("rounds >= 1")
    prefix = PlayPrefix(v0)
    t = PlayTranscript(prefix)
    tracker = Tracker(condition, g, v0) if condition is not None else None
    counts = {0: 0, 1: 0}
    for _ in range(rounds):
        for player, s in ((1, pl1), (0, pl0)):
            counts[player] += 1
            c = s.respond(prefix, counts[player])
            if c.anchor != prefix.last:
                raise ValidationError(f"player {player} answered from {c.anchor!r}")
            g.check_walk(c.anchor, c.steps)
            prefix = concat(prefix, c, player)
            t.records.append(MoveRecord(len(t.records) + 1, player, c))
            if tracker is not None:
                tracker.extend(c.steps)
        t.prefix = prefix
        if tracker is not None:
            t.verdict = tracker.verdict
            t.meta["levels"] = tracker.levels
            if stop_early and tracker.verdict is not Verdict.UNKNOWN:
                t.reason = "certificate reached"
                break
        if stop is not None and stop(t):
            t.reason = "stop condition"
            break
    t.prefix = prefix
    return t


def positional_lasso(v0, pl1, pl0) -> tuple[PlayPrefix, Continuation]:
    """The ultimately periodic play of two positional strategies, as ``(stem, loop)``.

    The play is determined by the vertex where Player 1 is to move; the
    first repeated such vertex closes the loop.
    """
    prefix = PlayPrefix(v0)
    seen: dict = {}
    while prefix.last not in seen:
        seen[prefix.last] = (prefix.length, len(prefix.boundaries))
        prefix = concat(prefix, pl1.respond(prefix, None), 1)
        prefix = concat(prefix, pl0.respond(prefix, None), 0)
    length, nb = seen[prefix.last]
    stem = PlayPrefix(prefix.start, prefix.steps[:length], prefix.boundaries[:nb])
    return stem, Continuation(stem.last, prefix.steps[length:])


# -- set-valued games ----------------------------------------------------------


def _offer_members(offered) -> list[Continuation]:
    if isinstance(offered, CoverSet):
        return list(offered)
    return list(offered)


def offered_size(offered) -> int:
    if isinstance(offered, CoverSet):
        return offered.size()
    return len(offered)


def offered_mass(m: ReasonableMeasure, anchor, offered) -> Fraction:
    """Conditional mass of the union of the offered cylinders (overlaps reduced)."""
    if isinstance(offered, CoverSet):
        if offered.anchor != anchor:
            return Fraction(0)
        return offered.mass()
    return continuations_mass(m, anchor, offered)


def offer_contains(offered, c: Continuation) -> bool:
    if isinstance(offered, CoverSet):
        return c in offered
    return c in set(offered)


def validate_alpha_move(m: ReasonableMeasure, prefix: PlayPrefix, offered, alpha) -> bool:
    """Is ``offered`` a legal set move at ``prefix`` under the α constraint?"""
    alpha = Fraction(alpha)
    if offered is None:
        return False
    if isinstance(offered, CoverSet):
        if offered.anchor != prefix.last or offered.size() == 0:
            return False
    else:
        offered = tuple(offered)
        if not offered:
            return False
        for c in offered:
            if not isinstance(c, Continuation) or c.anchor != prefix.last:
                return False
            if not m.graph.is_walk(c.anchor, c.steps):
                return False
    return offered_mass(m, prefix.last, offered) >= alpha


def phi_ball(m, prefix, offered) -> bool:
    """The classical constraint: exactly one continuation of the current prefix."""
    if isinstance(offered, CoverSet):
        return False
    offered = tuple(offered)
    return (
        len(offered) == 1
        and offered[0].anchor == prefix.last
        and m.graph.is_walk(offered[0].anchor, offered[0].steps)
    )


def phi_alpha(alpha) -> Callable:
    alpha = Fraction(alpha)

    def legal(m, prefix, offered):
        return validate_alpha_move(m, prefix, offered, alpha)

    legal.alpha = alpha
    return legal


@dataclass(eq=False)
class AlphaStrategy:
    """Set-valued strategy for Player 0: ``rule(prefix)`` returns the offered set."""

    rule: Callable[[PlayPrefix], object]
    alpha: Fraction
    measure: ReasonableMeasure
    name: str = ""
    select: Callable | None = None

    def offer(self, prefix: PlayPrefix):
        return self.rule(prefix)

    def choose(self, prefix: PlayPrefix, offered) -> Continuation:
        if self.select is not None:
            return self.select(prefix, offered)
        members = _offer_members(offered)
        g = self.measure.graph
        return min(members, key=lambda c: g.sort_key(c.steps))


@dataclass
class GeneralisedGameConfig:
    graph: FiniteGraph
    v0: object
    measure: ReasonableMeasure
    phi0: Callable = phi_ball
    phi1: Callable = phi_ball
    condition: object = None


def play_generalised(
    cfg: GeneralisedGameConfig,
    pl0: AlphaStrategy,
    pl1: Callable,
    rounds: int,
    stop_early: bool = True,
    stop: Callable[[PlayTranscript], bool] | None = None,
    track: Callable[[PlayPrefix], Fraction] | None = None,
) -> PlayTranscript:
    """Run a set-valued game.

    ``pl1(prefix, offered)`` returns ``(chosen, proposal)``: ``chosen`` is
    picked from Player 0's ``offered`` set (``None`` on the opening turn)
    and ``proposal`` is Player 1's own set for the prefix extended by
    ``chosen``.  Illegal offers raise :class:`IllegalSetMove`.
    """
    if rounds < 1:
        raise ValueError("rounds >= 1")
    m = cfg.measure
    prefix = PlayPrefix(cfg.v0)
    t = PlayTranscript(prefix)
    tracker = Tracker(cfg.condition, cfg.graph, cfg.v0) if cfg.condition is not None else None
    _, proposal = pl1(prefix, None)
    turn = 0

    def apply(player, c, offered):
        nonlocal prefix
        prefix = concat(prefix, c, player)
        cp = track(prefix) if track is not None else None
        t.records.append(MoveRecord(len(t.records) + 1, player, c, offered_size(offered), cp))
        if tracker is not None:
            tracker.extend(c.steps)

    for _ in range(rounds):
        turn += 1
        proposal = _as_offer(proposal)
        if not cfg.phi1(m, prefix, proposal):
            raise IllegalSetMove(turn, 1, "offer rejected by Player 1's constraint")
        c = pl0.choose(prefix, proposal)
        if not offer_contains(proposal, c):
            raise IllegalSetMove(turn, 0, "selection is not a member of the offered set")
        apply(1, c, proposal)
        turn += 1
        offered = pl0.offer(prefix)
        if not isinstance(offered, CoverSet):
            offered = _as_offer(offered)
        if not cfg.phi0(m, prefix, offered):
            raise IllegalSetMove(turn, 0, "offer rejected by Player 0's constraint")
        chosen, proposal = pl1(prefix, offered)
        if not offer_contains(offered, chosen):
            raise IllegalSetMove(turn, 1, "selection is not a member of the offered set")
        apply(0, chosen, offered)
        t.prefix = prefix
        if tracker is not None:
            t.verdict = tracker.verdict
            t.meta["levels"] = tracker.levels
            if stop_early and tracker.verdict is not Verdict.UNKNOWN:
                t.reason = "certificate reached"
                break
        if stop is not None and stop(t):
            t.reason = "stop condition"
            break
    t.prefix = prefix
    return t


def _as_offer(x):
    if isinstance(x, CoverSet):
        return x
    if isinstance(x, Continuation):
        return (x,)
    return tuple(x)


def play_alpha_game(
    g: FiniteGraph,
    v0,
    m: ReasonableMeasure,
    pl0: AlphaStrategy,
    pl1: Callable,
    rounds: int,
    condition=None,
    alpha=None,
    **kw,
) -> PlayTranscript:
    """Player 0 under the α constraint, Player 1 under the singleton constraint."""
    alpha = pl0.alpha if alpha is None else Fraction(alpha)
    cfg = GeneralisedGameConfig(g, v0, m, phi_alpha(alpha), phi_ball, condition)
    return play_generalised(cfg, pl0, pl1, rounds, **kw)


def lift_singleton(s: Strategy, m: ReasonableMeasure, alpha=Fraction(0)) -> AlphaStrategy:
    """A classical Player 0 strategy offering ``{s(prefix)}``."""

    def rule(prefix):
        return (s.respond(prefix, move_index_at(prefix, 0)),)

    return AlphaStrategy(rule, Fraction(alpha), m, name=f"singleton({s.name})")


def strategy_selector(s: Strategy) -> Callable:
    """Player 1 selector that accepts singleton offers and answers with ``s``."""

    def selector(prefix, offered):
        chosen = None
        if offered is not None:
            members = _offer_members(offered)
            chosen = members[0]
            prefix = concat(prefix, chosen, 0)
        return chosen, (s.respond(prefix, move_index_at(prefix, 1)),)

    return selector


def alpha_from_bounded(f: Strategy, bound: int, m: ReasonableMeasure) -> tuple[AlphaStrategy, Fraction]:
    """Singleton offers; every answer of length ≤ ``bound`` has mass ≥ p_min^bound."""
    alpha = m.min_transition() ** bound
    s = lift_singleton(f, m, alpha)
    s.name = f"bounded({f.name})"
    return s, alpha


def alpha_lift(f: Strategy, m: ReasonableMeasure, alpha) -> AlphaStrategy:
    """Offer ``f``'s answer plus same-length continuations until the mass reaches ``alpha``.

    Plays where Player 1 always selects ``f``'s answer are exactly the
    plays consistent with ``f``; the extra members only enlarge the set so
    it becomes legal for the requested ``alpha``.
    """
    alpha = Fraction(alpha)

    def rule(prefix):
        c = f.respond(prefix, move_index_at(prefix, 0))
        out = [c]
        mass = m.walk_prob(c.anchor, c.steps)
        if mass < alpha:
            for d in iter_continuations(m.graph, c.anchor, len(c)):
                if d == c:
                    continue
                out.append(d)
                mass += m.walk_prob(d.anchor, d.steps)
                if mass >= alpha:
                    break
        return tuple(out)

    return AlphaStrategy(rule, alpha, m, name=f"lifted({f.name})")


# -- the move-counting construction --------------------------------------------


class OccurrenceMonitor(Monitor):
    """``IN`` once some vertex ``v`` of the play is followed by ``table[v]``.

    The state is the set of partial matches in flight, as ``(v, matched)``
    pairs; a fresh match starts at every vertex read, including the first.
    """

    def __init__(self, table):
        self.table = {v: tuple(w) for v, w in table.items()}

    def start(self, v0):
        return frozenset({(v0, 0)})

    def step(self, state, v):
        nxt = set()
        for u, j in state:
            w = self.table[u]
            if w[j] == v:
                if j + 1 == len(w):
                    return ("<in>",)
                nxt.add((u, j + 1))
        nxt.add((v, 0))
        return frozenset(nxt)


def _occurrence_condition(gn) -> OpenCondition:
    return OpenCondition(OccurrenceMonitor(gn.table), name="occurrence")


class MoveCountingAlpha(AlphaStrategy):
    """Offer the minimal continuations ``π·g_n(last π)`` of the current prefix.

    ``n`` is the number of steps already played; ``π`` may be empty, so
    ``g_n`` itself is always offered when it fits in the search depth.
    """

    def __init__(self, h: MoveCounting, m: ReasonableMeasure, alpha, budget: int):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        super().__init__(self._rule, alpha, m, name=f"movalpha({h.name})")
        self.h = h
        self.budget = budget
        self._gn: dict = {}
        self._conds: dict = {}

    def g_n(self, n: int):
        if n not in self._gn:
            self._gn[n] = gn_from_move_counting(self.h, n, self.measure.graph)
        return self._gn[n]

    def condition_for(self, n: int) -> OpenCondition:
        if n not in self._conds:
            self._conds[n] = _occurrence_condition(self.g_n(n))
        return self._conds[n]

    def _rule(self, prefix: PlayPrefix):
        n = max(1, prefix.length)
        W = self.condition_for(n)
        cs = open_mass_reached(self.measure, W, PlayPrefix(prefix.last), self.alpha, self.budget)
        if cs is None:
            raise BudgetExceeded(f"mass {self.alpha} not reached within depth {self.budget} (n={n})")
        return cs


def alpha_from_move_counting(h: MoveCounting, m: ReasonableMeasure, alpha, budget: int = 200) -> MoveCountingAlpha:
    return MoveCountingAlpha(h, m, alpha, budget)


def check_gn_form(t: PlayTranscript, strat: MoveCountingAlpha) -> bool:
    """Every Player 0 move ends with ``g_n`` of the vertex where its ``g_n`` part starts."""
    prefix = t.prefix
    for i, (off, player) in enumerate(prefix.boundaries):
        if player != 0:
            continue
        end = prefix.boundaries[i + 1][0] if i + 1 < len(prefix.boundaries) else prefix.length
        move = prefix.steps[off:end]
        word = prefix.word[off : end + 1]  # anchor followed by the move
        n = max(1, off)
        gn = strat.g_n(n).table
        ok = False
        for split in range(len(move)):
            v = word[split]
            w = gn[v]
            if len(w) == len(move) - split and move[split:] == w:
                ok = True
                break
        if not ok:
            return False
    return True


# -- Gδ sets of probability one ---------------------------------------------------


class GdAlpha(AlphaStrategy):
    """Offer a cover set of the least level not yet certified at the prefix."""

    def __init__(self, W: GdCondition, m: ReasonableMeasure, alpha, budget: int, max_levels: int = 64):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        super().__init__(self._rule, alpha, m, name=f"gd-alpha({W.name})")
        self.W = W
        self.budget = budget
        self.max_levels = max_levels

    def level_to_serve(self, prefix: PlayPrefix) -> int | None:
        k = self.W.certified_levels(prefix, self.max_levels)
        if self.W.n_levels is not None and k >= self.W.n_levels:
            return None
        return k + 1

    def _rule(self, prefix: PlayPrefix):
        n = self.level_to_serve(prefix)
        if n is None:
            return tuple(Continuation(prefix.last, (v,)) for v in self.measure.graph.successors(prefix.last))
        cs = open_mass_reached(self.measure, self.W.level(n), prefix, self.alpha, self.budget)
        if cs is None:
            raise LevelStuck(n, f"level {n} cannot reach mass {self.alpha} below {_short(prefix)} within depth {self.budget}")
        return cs


def alpha_for_gd_prob_one(W, m: ReasonableMeasure, alpha, budget: int = 10_000) -> GdAlpha:
    if isinstance(W, OpenCondition):
        W = GdCondition.from_levels([W], name=W.name)
    return GdAlpha(W, m, alpha, budget)


def probe_alpha_strategy(strategy: AlphaStrategy, v0, depth: int) -> tuple[bool, str]:
    """Query the strategy at every prefix with at most ``depth`` steps.

    Returns ``(True, "")`` when every answer is a legal α move, otherwise
    ``(False, reason)`` for the first failure in length-lex order.
    """
    m = strategy.measure
    for n in range(depth + 1):
        for p in iter_prefixes(m.graph, v0, n):
            try:
                offered = strategy.offer(p)
            except (LevelStuck, BudgetExceeded) as exc:
                return False, str(exc)
            if not validate_alpha_move(m, p, offered, strategy.alpha):
                return False, f"illegal offer at {p}"
    return True, ""


# -- open sets of probability below one: the spoiler ------------------------------


def _finite_generators(W: OpenCondition) -> PrefixFreeSet:
    if not W.is_finite:
        raise ValidationError("the construction needs a finite list of generating cylinders")
    return W.generators


def compute_IW(m: ReasonableMeasure, W: OpenCondition, given: PlayPrefix | None = None) -> tuple[Fraction, PlayPrefix]:
    """Least conditional probability of ``W`` over extensions of ``given``.

    Beyond the deepest generator every conditional probability is 0 or 1,
    so the search stops there.  Returns the value and the first prefix in
    length-lex order attaining it.
    """
    gens = _finite_generators(W)
    if given is None:
        (start,) = {p.start for p in gens} or {None}
        given = PlayPrefix(start if start is not None else m.graph.vertices[0])
    d = max(gens.max_steps(), given.length)
    best = cond_prob(m, gens, given)
    witness = given
    for extra in range(1, d - given.length + 1):
        for c in iter_continuations(m.graph, given.last, extra):
            p = PlayPrefix(given.start, given.steps + c.steps)
            val = cond_prob(m, gens, p)
            if val < best:
                best, witness = val, p
    return best, witness


class OpenSpoiler:
    """Player 1 selector defeating every α-strategy on an open set with P(W) < 1.

    The opening move reaches a prefix whose conditional probability is so
    low that every α-legal offer must contain a continuation keeping the
    conditional probability at or below the running threshold.  After each
    selection the same argument is replayed below the new prefix, with the
    current conditional probability as threshold.
    """

    def __init__(self, W: OpenCondition, m: ReasonableMeasure, alpha, v0, search_depth: int = 12):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.gens = _finite_generators(W)
        self.W = W
        self.m = m
        self.alpha = alpha
        self.v0 = v0
        self.search_depth = search_depth
        root = PlayPrefix(v0)
        self.P = cond_prob(m, self.gens, root)
        if self.P == 1:
            raise NotSubProbOne("the open set has probability one")
        self.I_W, self.I_witness = compute_IW(m, W, root)
        self.opening = self.find_move(root, self.P)

    def cp(self, prefix: PlayPrefix) -> Fraction:
        return cond_prob(self.m, self.gens, prefix)

    def satisfies_cond(self, p: PlayPrefix, base: PlayPrefix, threshold: Fraction) -> bool:
        """The strict inequality making every α offer below ``p`` selectable."""
        inf, _ = compute_IW(self.m, self.W, base)
        if threshold == inf:
            return True
        return inf + (self.cp(p) - inf) / self.alpha < threshold

    def find_move(self, base: PlayPrefix, threshold: Fraction) -> Continuation:
        inf, _ = compute_IW(self.m, self.W, base)
        if threshold == inf:
            # every extension already sits at the threshold
            return Continuation(base.last, (self.m.graph.successors(base.last)[0],))
        bound = inf + self.alpha * (threshold - inf)
        for n in range(1, self.search_depth + 1):
            for c in iter_continuations(self.m.graph, base.last, n):
                if self.cp(PlayPrefix(base.start, base.steps + c.steps)) < bound:
                    return c
        raise SearchExhausted(f"no move below {_short(base)} within depth {self.search_depth}")

    def select(self, prefix: PlayPrefix, offered, threshold: Fraction) -> Continuation:
        for c in _iter_offer(offered, self.m.graph):
            if self.cp(PlayPrefix(prefix.start, prefix.steps + c.steps)) <= threshold:
                return c
        raise SelectionFailure(f"no offered continuation keeps P(W|·) ≤ {threshold} at {_short(prefix)}")

    def __call__(self, prefix: PlayPrefix, offered):
        if offered is None:
            return None, (self.opening,)
        # the threshold is the conditional probability before Player 1's last move
        if prefix.boundaries:
            off = prefix.boundaries[-1][0]
            base = PlayPrefix(prefix.start, prefix.steps[:off])
        else:
            base = prefix
        threshold = self.P if not base.steps else self.cp(base)
        threshold = min(threshold, self.P)
        chosen = self.select(prefix, offered, threshold)
        after = concat(prefix, chosen, 0)
        return chosen, (self.find_move(after, self.cp(after)),)


def _iter_offer(offered, g: FiniteGraph):
    if isinstance(offered, CoverSet):
        yield from offered
    else:
        yield from sorted(offered, key=lambda c: g.sort_key(c.steps))


def spoiler_for_open(W: OpenCondition, m: ReasonableMeasure, alpha, v0=None, search_depth: int = 12) -> OpenSpoiler:
    if v0 is None:
        starts = {p.start for p in _finite_generators(W)}
        v0 = next(iter(starts)) if len(starts) == 1 else m.graph.vertices[0]
    return OpenSpoiler(W, m, alpha, v0, search_depth)


# -- randomised players -----------------------------------------------------------


def _rng(seed, *parts) -> random.Random:
    return random.Random(":".join(str(p) for p in (seed,) + parts))


class MeasureRandomPlayer(Strategy):
    """Answers of uniform length in ``1..max_len`` drawn along the measure.

    The answer is a deterministic function of the seed, the move index and
    the full prefix, so replays are exact.
    """

    kind = "general"

    def __init__(self, m: ReasonableMeasure, max_len: int = 3, seed=0, name: str = "random"):
        self.m = m
        self.max_len = max_len
        self.seed = seed
        self.name = name

    def respond(self, prefix, move_index=None):
        rng = _rng(self.seed, move_index, prefix.length, prefix.last, hash_steps(prefix.steps))
        n = rng.randint(1, self.max_len)
        steps = []
        u = prefix.last
        for _ in range(n):
            u = sample_step(self.m, u, rng)
            steps.append(u)
        return Continuation(prefix.last, tuple(steps))


def hash_steps(steps) -> int:
    """Stable (process-independent) fingerprint of a step sequence."""
    h = 1469598103934665603
    for v in steps:
        for ch in str(v):
            h = ((h ^ ord(ch)) * 1099511628211) & 0xFFFFFFFFFFFFFFFF
        h = ((h ^ 0x1F) * 1099511628211) & 0xFFFFFFFFFFFFFFFF
    return h


def random_bounded_strategy(g: FiniteGraph, bound: int, seed=0) -> Strategy:
    """A general strategy whose answers have length ≤ ``bound``, chosen pseudo-randomly per prefix."""
    from .strategies import General

    def rule(prefix):
        rng = _rng(seed, "bounded", prefix.length, hash_steps(prefix.steps))
        n = rng.randint(1, bound)
        u = prefix.last
        steps = []
        for _ in range(n):
            u = rng.choice(g.successors(u))
            steps.append(u)
        return tuple(steps)

    return General(rule, name=f"random-{bound}-bounded#{seed}")


class MeasureRandomSelector:
    """Player 1 for set-valued games: picks from offers along the measure and proposes at random."""

    def __init__(self, m: ReasonableMeasure, max_len: int = 3, seed=0):
        self.m = m
        self.player = MeasureRandomPlayer(m, max_len, seed)
        self.seed = seed

    def __call__(self, prefix, offered):
        chosen = None
        if offered is not None:
            rng = _rng(self.seed, "select", prefix.length, hash_steps(prefix.steps))
            if isinstance(offered, CoverSet):
                chosen = offered.sample(rng)
            else:
                members = list(offered)
                weights = [float(self.m.walk_prob(c.anchor, c.steps)) for c in members]
                chosen = rng.choices(members, weights=weights)[0]
            prefix = concat(prefix, chosen, 0)
        return chosen, (self.player.respond(prefix, move_index_at(prefix, 1)),)
