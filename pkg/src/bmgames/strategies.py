"""Strategy taxonomy and the constructive conversions between kinds.

Every strategy answers ``respond(prefix, move_index)`` with a continuation
anchored at ``prefix.last``.  ``move_index`` counts the responding player's
own moves, starting at 1.  Rules return either a step sequence or a
:class:`Continuation`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import (
    AnchorMismatch,
    ExplosionGuard,
    MissingTableEntry,
    NoBSCCPath,
    OutputEscapesBSCC,
    TableIncomplete,
    ValidationError,
)
from .graph import Continuation, FiniteGraph, PlayPrefix, iter_prefixes


def _as_continuation(anchor, out) -> Continuation:
    if isinstance(out, Continuation):
        if out.anchor != anchor:
            raise AnchorMismatch(f"rule answered from {out.anchor!r}, expected {anchor!r}")
        return out
    return Continuation(anchor, tuple(out))


class Strategy:
    kind = "abstract"
    name = ""

    def respond(self, prefix: PlayPrefix, move_index: int) -> Continuation:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class General(Strategy):
    rule: Callable[[PlayPrefix], object]
    name: str = ""
    kind = "general"

    def respond(self, prefix, move_index=None):
        return _as_continuation(prefix.last, self.rule(prefix))


@dataclass(frozen=True, eq=False)
class Positional(Strategy):
    table: Mapping
    name: str = ""
    kind = "positional"

    def respond(self, prefix, move_index=None):
        try:
            out = self.table[prefix.last]
        except KeyError:
            raise MissingTableEntry(f"no entry for vertex {prefix.last!r}") from None
        return _as_continuation(prefix.last, out)

    def __call__(self, v) -> Continuation:
        return _as_continuation(v, self.table[v])


@dataclass(frozen=True, eq=False)
class FiniteMemory(Strategy):
    """Memory automaton read along every vertex of the play."""

    initial: object
    update: Callable
    output: Callable
    name: str = ""
    kind = "finite-memory"

    def respond(self, prefix, move_index=None):
        mem = self.initial
        for v in prefix.word:
            mem = self.update(mem, v)
        return _as_continuation(prefix.last, self.output(mem, prefix.last))


@dataclass(frozen=True, eq=False)
class MoveCounting(Strategy):
    rule: Callable
    name: str = ""
    kind = "move-counting"

    def respond(self, prefix, move_index):
        return _as_continuation(prefix.last, self.rule(prefix.last, move_index))

    def answer(self, v, n) -> Continuation:
        return _as_continuation(v, self.rule(v, n))


@dataclass(frozen=True, eq=False)
class LengthCounting(Strategy):
    """Depends on the current vertex and the number of steps played so far."""

    rule: Callable
    name: str = ""
    kind = "length-counting"

    def respond(self, prefix, move_index=None):
        return _as_continuation(prefix.last, self.rule(prefix.last, prefix.length))


def last_move_word(prefix: PlayPrefix) -> tuple:
    """Player 1's most recent move as a vertex word.

    The opening move includes the start vertex, so on a play
    ``v0 u1..uk`` the word is ``v0 u1..uk``; later moves contribute only
    their own steps.  Without recorded boundaries the whole word is used.
    """
    moves = [(i, b) for i, b in enumerate(prefix.boundaries) if b[1] == 1]
    if not moves:
        return prefix.word
    i, (off, _) = moves[-1]
    end = prefix.boundaries[i + 1][0] if i + 1 < len(prefix.boundaries) else prefix.length
    if off == 0:
        return (prefix.start,) + prefix.steps[:end]
    return prefix.steps[off:end]


@dataclass(frozen=True, eq=False)
class LastMove(Strategy):
    """Depends only on Player 1's last move (see :func:`last_move_word`)."""

    rule: Callable[[tuple], object]
    name: str = ""
    kind = "last-move"

    def respond(self, prefix, move_index=None):
        return _as_continuation(prefix.last, self.rule(last_move_word(prefix)))


def reverse_rule(word: tuple) -> tuple:
    """Answer a move ``w`` with ``w`` reversed, completing the block ``w w^R``."""
    return tuple(reversed(word))


@dataclass(frozen=True)
class BoundWitness:
    strategy: Strategy
    bound: int

    def check_output(self, c: Continuation) -> bool:
        return 1 <= len(c) <= self.bound

    def check_table(self) -> bool:
        s = self.strategy
        if isinstance(s, Positional):
            return all(1 <= len(tuple(_as_continuation(v, o).steps)) <= self.bound for v, o in s.table.items())
        raise TypeError("exhaustive bound check needs a table strategy")


def move_index_at(prefix: PlayPrefix, player: int) -> int:
    """Index the next move of ``player`` would carry."""
    return sum(1 for _, pl in prefix.boundaries if pl == player) + 1


def is_consistent(t, s: Strategy, role: int) -> bool:
    """Every move of ``role`` in ``t`` equals what ``s`` answers there."""
    prefix = getattr(t, "prefix", t)
    count = 0
    for i, (off, player) in enumerate(prefix.boundaries):
        if player != role:
            continue
        count += 1
        end = prefix.boundaries[i + 1][0] if i + 1 < len(prefix.boundaries) else prefix.length
        before = PlayPrefix(prefix.start, prefix.steps[:off], prefix.boundaries[:i])
        try:
            answer = s.respond(before, count)
        except Exception:
            return False
        if answer.steps != prefix.steps[off:end]:
            return False
    return True


# -- general -> length-counting -------------------------------------------------


class LengthCountingFromGeneral(LengthCounting):
    """The fold construction: replay ``f`` on every same-length prefix.

    For the prefixes ``π_1 … π_m`` with ``n`` steps ending at ``v`` (in
    length-lex order) the answer is ``τ_1 … τ_m`` where
    ``τ_j = f(π_j τ_1 … τ_{j-1})``.
    """

    kind = "length-counting"

    def __init__(self, f: Strategy, g: FiniteGraph, v0, cap: int = 2**20, name: str = ""):
        if getattr(f, "kind", "") == "move-counting":
            raise ValidationError("the fold replays f on bare prefixes; a move-counting f needs move boundaries")
        object.__setattr__(self, "rule", self._rule)
        object.__setattr__(self, "name", name or f"fold({getattr(f, 'name', '')})")
        self.f = f
        self.g = g
        self.v0 = v0
        self.cap = cap
        self._memo: dict = {}

    def components(self, v, n: int) -> list[Continuation]:
        key = (v, n)
        if key in self._memo:
            return self._memo[key]
        if len(self.g.vertices) ** n > self.cap:
            raise ExplosionGuard(f"{len(self.g.vertices)}^{n} prefixes exceed cap {self.cap}")
        taus: list[Continuation] = []
        tail: tuple = ()
        for pi in iter_prefixes(self.g, self.v0, n):
            if pi.last != v:
                continue
            tau = self.f.respond(PlayPrefix(pi.start, pi.steps + tail), None)
            taus.append(tau)
            tail += tau.steps
        self._memo[key] = taus
        return taus

    def _rule(self, v, n):
        steps = tuple(s for tau in self.components(v, n) for s in tau.steps)
        if not steps:
            raise MissingTableEntry(f"no prefix of length {n} ends at {v!r}")
        return steps


def length_counting_from_general(f: Strategy, g: FiniteGraph, v0, cap: int = 2**20) -> LengthCountingFromGeneral:
    return LengthCountingFromGeneral(f, g, v0, cap)


def fold_replay(prefix: PlayPrefix, f: Strategy, g: FiniteGraph, role: int = 0) -> list[int]:
    """Check that every ``role`` move of a fold-consistent play embeds an ``f`` answer.

    Returns the step offsets where ``f``'s answer starts; raises
    ``AssertionError`` when the decomposition fails.  Independent of the
    memoised construction: the prefixes are re-enumerated here.
    """
    cuts = []
    for i, (off, player) in enumerate(prefix.boundaries):
        if player != role:
            continue
        end = prefix.boundaries[i + 1][0] if i + 1 < len(prefix.boundaries) else prefix.length
        before = prefix.steps[:off]
        v = prefix.steps[off - 1] if off else prefix.start
        move = prefix.steps[off:end]
        cursor = 0
        found = None
        for pi in iter_prefixes(g, prefix.start, off):
            if pi.last != v:
                continue
            tau = f.respond(PlayPrefix(pi.start, pi.steps + move[:cursor]), None).steps
            if pi.steps == before:
                # the f-view: the play up to here, plus earlier fold pieces, answered by tau
                actual = move[cursor : cursor + len(tau)]
                assert actual == tau, f"move at offset {off} does not embed f's answer"
                found = off + cursor
            cursor += len(tau)
        assert found is not None, f"prefix at offset {off} missing from enumeration"
        assert cursor == len(move), f"move at offset {off} is not the full fold"
        cuts.append(found)
    return cuts


# -- positional families -> move-counting ------------------------------------------


def diagonal_phi(n: int) -> int:
    """First coordinate of the diagonal unpairing: 1,1,2,1,2,3,1,2,3,4,..."""
    if n < 1:
        raise ValueError("n >= 1")
    d = 1
    while d * (d + 1) // 2 < n:
        d += 1
    return n - d * (d - 1) // 2


def move_counting_from_positional_family(
    family: Callable[[int], Positional] | Sequence[Positional], phi: Callable[[int], int] = diagonal_phi
) -> MoveCounting:
    get = family.__getitem__ if isinstance(family, Sequence) else family
    offset = 1 if isinstance(family, Sequence) else 0

    def rule(v, n):
        return get(phi(n) - offset)(v)

    return MoveCounting(rule, name="diagonal-family")


def gn_from_move_counting(h: MoveCounting, n: int, g: FiniteGraph) -> Positional:
    """``g_n(v) = h(v,1) h(last,2) … h(last,n)``, chained."""
    if n < 1:
        raise ValueError("n >= 1")
    table = {}
    for v in g.vertices:
        steps: tuple = ()
        cur = v
        for k in range(1, n + 1):
            c = h.answer(cur, k)
            steps += c.steps
            cur = c.last
        table[v] = steps
    return Positional(table, name=f"g_{n}")


# -- bounded move-counting -> positional ------------------------------------------


def _bfs_path(g: FiniteGraph, src, targets, allowed=None) -> tuple | None:
    """Shortest step sequence from ``src`` into ``targets`` (empty if already there)."""
    if src in targets:
        return ()
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if v in parent or (allowed is not None and v not in allowed):
                continue
            parent[v] = u
            if v in targets:
                path = [v]
                while parent[path[-1]] != src:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            queue.append(v)
    return None


def bounded_move_counting_to_positional(
    h: MoveCounting,
    g: FiniteGraph,
    tables: Mapping,
    bound: int | None = None,
    sample_moves: int = 8,
) -> Positional:
    """Thread every answer word of ``h`` inside each bottom SCC.

    ``tables`` maps each bottom SCC (by its index in ``bsccs(g)`` or by the
    frozenset of its vertices) to the finite list of words ``h`` uses there.
    The list is checked against ``h`` on moves ``1..sample_moves``.
    """
    from .analyzer import bsccs

    comps = bsccs(g)
    f: dict = {}
    for i, comp in enumerate(comps):
        key = frozenset(comp)
        words = tables.get(i, tables.get(key))
        if words is None:
            raise TableIncomplete(f"no word table for bottom SCC {sorted(comp, key=str)}")
        words = [w if isinstance(w, Continuation) else Continuation(w[0], tuple(w[1:])) for w in words]
        for w in words:
            if w.anchor not in comp or any(s not in comp for s in w.steps) or not g.is_walk(w.anchor, w.steps):
                raise OutputEscapesBSCC(f"word {w} leaves its component")
            if bound is not None and len(w) > bound:
                raise TableIncomplete(f"word {w} exceeds bound {bound}")
        listed = {(w.anchor, w.steps) for w in words}
        for v in sorted(comp, key=g.index):
            for n in range(1, sample_moves + 1):
                a = h.answer(v, n)
                if (a.anchor, a.steps) not in listed:
                    raise TableIncomplete(f"h({v!r},{n}) = {a} is missing from the table")
        for v in comp:
            steps: tuple = ()
            cur = v
            for w in words:
                conn = _bfs_path(g, cur, {w.anchor}, allowed=comp)
                if conn is None:
                    raise NoBSCCPath(f"{cur!r} cannot reach {w.anchor!r} inside its component")
                steps += conn + w.steps
                cur = w.last
            f[v] = steps
    inside = set().union(*comps) if comps else set()
    for v in g.vertices:
        if v in inside:
            continue
        path = _bfs_path(g, v, inside)
        if not path:
            raise NoBSCCPath(f"{v!r} reaches no bottom SCC")
        f[v] = path
    return Positional(f, name="bscc-threaded")
