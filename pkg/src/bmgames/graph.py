"""Finite arenas, anchored continuations, play prefixes and cylinder sets.

A play is written ``start · steps``: the start vertex followed by the
vertices visited afterwards.  A move (a *continuation*) is anchored at the
vertex where the play currently stands; the anchor is not repeated in its
steps.  Positions in a word are 1-based with the start vertex at position 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import AnchorMismatch, DanglingEdge, EdgeViolation, SinkVertex

Vertex = Hashable
Word = tuple


@dataclass(frozen=True)
class FiniteGraph:
    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex ids must be unique")
        edges = frozenset((u, v) for u, v in self.edges)
        index = {v: i for i, v in enumerate(vertices)}
        for e in sorted(edges, key=lambda e: (str(e[0]), str(e[1]))):
            if e[0] not in index or e[1] not in index:
                raise DanglingEdge(e)
        succ = {v: [] for v in vertices}
        for u, v in edges:
            succ[u].append(v)
        for v in vertices:
            if not succ[v]:
                raise SinkVertex(v)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_index", index)
        object.__setattr__(
            self, "_succ", {u: tuple(sorted(vs, key=index.__getitem__)) for u, vs in succ.items()}
        )

    @classmethod
    def complete(cls, vertices: Iterable) -> FiniteGraph:
        vs = tuple(vertices)
        return cls(vs, frozenset((u, v) for u in vs for v in vs))

    def __contains__(self, v) -> bool:
        return v in self._index

    def index(self, v) -> int:
        return self._index[v]

    def successors(self, v) -> tuple:
        return self._succ[v]

    def has_edge(self, u, v) -> bool:
        return (u, v) in self.edges

    def is_walk(self, anchor, steps: Sequence) -> bool:
        prev = anchor
        for v in steps:
            if (prev, v) not in self.edges:
                return False
            prev = v
        return True

    def check_walk(self, anchor, steps: Sequence):
        prev = anchor
        for i, v in enumerate(steps):
            if (prev, v) not in self.edges:
                raise EdgeViolation(f"no edge {prev!r}->{v!r} at step {i + 1}")
            prev = v

    def continuation(self, anchor, steps: Iterable) -> Continuation:
        c = Continuation(anchor, tuple(steps))
        self.check_walk(c.anchor, c.steps)
        return c

    def prefix(self, start, steps: Iterable = ()) -> PlayPrefix:
        p = PlayPrefix(start, tuple(steps))
        if start not in self:
            raise EdgeViolation(f"unknown start vertex {start!r}")
        self.check_walk(p.start, p.steps)
        return p

    def sort_key(self, word: Sequence) -> tuple:
        """Length-lexicographic key in the graph's vertex order."""
        return (len(word), tuple(self._index[v] for v in word))


@dataclass(frozen=True)
class Continuation:
    """A nonempty finite path hanging off ``anchor``."""

    anchor: Vertex
    steps: tuple

    def __post_init__(self):
        steps = tuple(self.steps)
        if not steps:
            raise ValueError("a continuation has at least one step")
        object.__setattr__(self, "steps", steps)

    @property
    def last(self):
        return self.steps[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return f"{self.anchor}→{format_steps(self.steps)}"


@dataclass(frozen=True)
class PlayPrefix:
    """``start · steps`` plus the move boundaries recorded by :func:`concat`.

    ``boundaries`` holds ``(offset, player)`` pairs, offset being the index
    in ``steps`` where that move begins.  Boundaries do not take part in
    equality or hashing: two prefixes are equal when they are the same path.
    """

    start: Vertex
    steps: tuple = ()
    boundaries: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))

    @property
    def last(self):
        return self.steps[-1] if self.steps else self.start

    @property
    def word(self) -> Word:
        return (self.start,) + self.steps

    @property
    def length(self) -> int:
        """Number of steps after the start vertex."""
        return len(self.steps)

    def position(self, i: int):
        """The vertex at 1-based position ``i`` (position 1 is the start)."""
        return self.word[i - 1]

    def extend(self, steps: Iterable) -> PlayPrefix:
        return PlayPrefix(self.start, self.steps + tuple(steps), self.boundaries)

    def truncate(self, n_steps: int) -> PlayPrefix:
        bounds = tuple(b for b in self.boundaries if b[0] < n_steps)
        return PlayPrefix(self.start, self.steps[:n_steps], bounds)

    def is_prefix_of(self, other: PlayPrefix) -> bool:
        return (
            self.start == other.start
            and len(self.steps) <= len(other.steps)
            and other.steps[: len(self.steps)] == self.steps
        )

    def comparable(self, other: PlayPrefix) -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def next_player(self) -> int:
        return 1 if len(self.boundaries) % 2 == 0 else 0

    def moves(self) -> list[tuple[int, Continuation]]:
        """The recorded moves as ``(player, continuation)`` pairs."""
        out = []
        for i, (off, player) in enumerate(self.boundaries):
            end = self.boundaries[i + 1][0] if i + 1 < len(self.boundaries) else len(self.steps)
            anchor = self.steps[off - 1] if off > 0 else self.start
            out.append((player, Continuation(anchor, self.steps[off:end])))
        return out

    def __str__(self) -> str:
        return format_prefix(self)


def concat(p: PlayPrefix, c: Continuation, player: int | None = None) -> PlayPrefix:
    """Append a move to a play prefix, recording its boundary."""
    if c.anchor != p.last:
        raise AnchorMismatch(f"continuation anchored at {c.anchor!r} but prefix ends at {p.last!r}")
    if player is None:
        player = p.next_player()
    return PlayPrefix(p.start, p.steps + c.steps, p.boundaries + ((len(p.steps), player),))


def iter_continuations(g: FiniteGraph, v, length: int) -> Iterator[Continuation]:
    """Continuations of exactly ``length`` steps from ``v``, lexicographically."""
    if length < 1:
        return
    path = []
    iters = [iter(g.successors(v))]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            if path:
                path.pop()
            continue
        path.append(nxt)
        if len(path) == length:
            yield Continuation(v, tuple(path))
            path.pop()
        else:
            iters.append(iter(g.successors(nxt)))


def enumerate_continuations(g: FiniteGraph, v, exact_length: int) -> list[Continuation]:
    if v not in g:
        raise ValueError(f"unknown vertex {v!r}")
    return list(iter_continuations(g, v, exact_length))


def iter_prefixes(g: FiniteGraph, start, n_steps: int) -> Iterator[PlayPrefix]:
    if n_steps == 0:
        yield PlayPrefix(start)
        return
    for c in iter_continuations(g, start, n_steps):
        yield PlayPrefix(start, c.steps)


def reverse(g: FiniteGraph, c: Continuation, new_anchor) -> Continuation:
    """``c`` with its steps reversed, re-anchored at ``new_anchor``."""
    steps = tuple(reversed(c.steps))
    g.check_walk(new_anchor, steps)
    return Continuation(new_anchor, steps)


@dataclass(frozen=True)
class Distance:
    """Result of :func:`path_distance`.

    When the compared prefixes agree everywhere, ``exact`` is False and the
    true distance of any two extensions lies in ``[0, upper]``.
    """

    value: Fraction
    exact: bool
    upper: Fraction


def path_distance(a: PlayPrefix | Sequence, b: PlayPrefix | Sequence) -> Distance:
    wa = a.word if isinstance(a, PlayPrefix) else tuple(a)
    wb = b.word if isinstance(b, PlayPrefix) else tuple(b)
    n = min(len(wa), len(wb))
    for k in range(n):
        if wa[k] != wb[k]:
            d = Fraction(1, 2**k)
            return Distance(d, True, d)
    return Distance(Fraction(0), False, Fraction(1, 2**n))


class PrefixFreeSet:
    """A finite union of cylinders kept as pairwise incomparable prefixes.

    Adding a prefix already covered by a member is a no-op; adding a prefix
    that covers members replaces them.  Instances are immutable: ``add``
    returns a new set.
    """

    __slots__ = ("_items",)

    def __init__(self, prefixes: Iterable[PlayPrefix] = ()):
        items: dict[Word, PlayPrefix] = {}
        ordered = sorted(enumerate(prefixes), key=lambda t: (len(t[1].word), t[0]))
        for _, p in ordered:
            if not _covered(items, p.word):
                items[p.word] = p
        self._items = items

    @staticmethod
    def _from_items(items):
        s = PrefixFreeSet()
        s._items = items
        return s

    def add(self, p: PlayPrefix) -> PrefixFreeSet:
        w = p.word
        if _covered(self._items, w):
            return self
        n = len(w)
        items = {k: v for k, v in self._items.items() if not (len(k) > n and k[:n] == w)}
        items[w] = p
        return PrefixFreeSet._from_items(items)

    def covers(self, p: PlayPrefix) -> bool:
        """True when ``Cyl(p)`` lies inside the union."""
        return _covered(self._items, p.word)

    def intersect_cylinder(self, given: PlayPrefix) -> PrefixFreeSet:
        gw = given.word
        n = len(gw)
        if _covered(self._items, gw):
            return PrefixFreeSet([PlayPrefix(given.start, given.steps)])
        items = {k: v for k, v in self._items.items() if len(k) > n and k[:n] == gw}
        return PrefixFreeSet._from_items(items)

    def __iter__(self) -> Iterator[PlayPrefix]:
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, p) -> bool:
        return isinstance(p, PlayPrefix) and p.word in self._items

    def __eq__(self, other) -> bool:
        return isinstance(other, PrefixFreeSet) and set(self._items) == set(other._items)

    def __hash__(self):
        return hash(frozenset(self._items))

    def __repr__(self) -> str:
        return "PrefixFreeSet({" + ", ".join(format_prefix(p) for p in self) + "})"

    def max_steps(self) -> int:
        return max((len(w) - 1 for w in self._items), default=0)

    def is_prefix_free(self) -> bool:
        words = list(self._items)
        return not any(
            a != b and len(a) <= len(b) and b[: len(a)] == a for a in words for b in words
        )


def _covered(items, w) -> bool:
    return any(w[:i] in items for i in range(1, len(w) + 1))


# -- text notation ---------------------------------------------------------
#
# "0·011" is the prefix with start 0 and steps 0,1,1.  When vertex ids are
# not single characters the steps are space separated: "10·3 12".  A plain
# "." is accepted in place of the middle dot.


def _atom(tok: str):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def parse_steps(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    if " " in text or "," in text:
        return tuple(_atom(t) for t in text.replace(",", " ").split())
    return tuple(_atom(ch) for ch in text)


def parse_prefix(text: str) -> PlayPrefix:
    text = text.strip()
    for sep in ("·", "."):
        if sep in text:
            head, tail = text.split(sep, 1)
            return PlayPrefix(_atom(head.strip()), parse_steps(tail))
    return PlayPrefix(_atom(text))


def format_steps(steps: Sequence) -> str:
    toks = [str(v) for v in steps]
    if all(len(t) == 1 for t in toks):
        return "".join(toks)
    return " ".join(toks)


def format_prefix(p: PlayPrefix) -> str:
    if not p.steps:
        return str(p.start)
    return f"{p.start}·{format_steps(p.steps)}"
