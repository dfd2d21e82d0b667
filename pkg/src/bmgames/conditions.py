"""Winning conditions and tri-state membership.

Open sets are represented by a deterministic *monitor*: a state machine read
along the play that reports ``IN`` once the prefix read so far lies inside a
generating cylinder and ``OUT`` once no extension can enter the set.  Both
verdicts are absorbing.  A finite list of generating cylinders compiles to
a trie monitor; infinite unions (most corpus sets) provide a hand-written
monitor whose states stay hashable so probability mass can be propagated
over ``(vertex, state)`` pairs instead of over explicit paths.
"""

from __future__ import annotations

import enum
import random
from collections import deque
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import networkx as nx

from .errors import ExplosionGuard, LoopNotClosed, ValidationError
from .graph import Continuation, FiniteGraph, PlayPrefix, PrefixFreeSet
from .measure import ReasonableMeasure, sample_step


class Verdict(str, enum.Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


IN_STATE = ("<in>",)
OUT_STATE = ("<out>",)


class Monitor:
    """Deterministic reader of a play word.

    Subclasses implement :meth:`start`, :meth:`step` and optionally
    :meth:`verdict`.  Returning ``IN_STATE``/``OUT_STATE`` marks a decided
    prefix; the caller stops stepping afterwards.
    """

    def start(self, v0):
        raise NotImplementedError

    def step(self, state, v):
        raise NotImplementedError

    def verdict(self, state) -> Verdict:
        if state == IN_STATE:
            return Verdict.IN
        if state == OUT_STATE:
            return Verdict.OUT
        return Verdict.UNKNOWN

    def run(self, word) -> object:
        it = iter(word)
        state = self.start(next(it))
        for v in it:
            if self.verdict(state) is not Verdict.UNKNOWN:
                break
            state = self.step(state, v)
        return state

    def advance(self, state, steps) -> object:
        for v in steps:
            if self.verdict(state) is not Verdict.UNKNOWN:
                break
            state = self.step(state, v)
        return state


class TrieMonitor(Monitor):
    """Monitor for a finite union of cylinders."""

    def __init__(self, generators: PrefixFreeSet):
        self.words = frozenset(p.word for p in generators)
        self.proper = frozenset(w[:i] for w in self.words for i in range(1, len(w)))

    def _classify(self, w):
        if w in self.words:
            return IN_STATE
        if w in self.proper:
            return w
        return OUT_STATE

    def start(self, v0):
        return self._classify((v0,))

    def step(self, state, v):
        return self._classify(state + (v,))


class OpenCondition:
    """A countable union of cylinders, read through a monitor.

    ``generators`` is set for finite unions.  ``mass_certificate``, when
    given, is a callable ``(measure, depth) -> eps`` asserting that the
    monitor certifies ``IN`` within ``depth`` steps with probability at least
    ``1 - eps`` and that ``eps -> 0``; the analyzer relies on it before
    reporting probability one for an infinite union.
    """

    def __init__(
        self,
        monitor: Monitor,
        *,
        generators: PrefixFreeSet | None = None,
        name: str = "",
        mass_certificate: Callable | None = None,
    ):
        self.monitor = monitor
        self.generators = generators
        self.name = name
        self.mass_certificate = mass_certificate
        self._curves: dict = {}

    @classmethod
    def from_generators(cls, prefixes: Iterable[PlayPrefix], name: str = "") -> OpenCondition:
        gens = PrefixFreeSet(prefixes)
        return cls(TrieMonitor(gens), generators=gens, name=name)

    @property
    def is_finite(self) -> bool:
        return self.generators is not None

    def max_generator_steps(self) -> int:
        if self.generators is None:
            raise ValueError("unbounded open condition")
        return self.generators.max_steps()

    def state_after(self, word) -> object:
        return self.monitor.run(word)

    def verdict(self, p: PlayPrefix) -> Verdict:
        return self.monitor.verdict(self.state_after(p.word))

    def curve(self, m: ReasonableMeasure, vertex, state) -> CoverCurve:
        key = (m.key, vertex, state)
        c = self._curves.get(key)
        if c is None:
            c = self._curves[key] = CoverCurve(m, self.monitor, vertex, state)
        return c

    def iter_generators(self, g: FiniteGraph, v0, budget: int) -> Iterator[PlayPrefix]:
        """Minimal certified prefixes in breadth-first (length-lex) order.

        At most ``budget`` prefixes are expanded; the stream simply stops when
        the budget is spent.
        """
        if self.generators is not None:
            yield from sorted(self.generators, key=lambda p: g.sort_key(p.word))
            return
        queue = deque([((v0,), self.monitor.start(v0))])
        seen = 0
        while queue and seen < budget:
            word, state = queue.popleft()
            seen += 1
            verdict = self.monitor.verdict(state)
            if verdict is Verdict.IN:
                yield PlayPrefix(word[0], word[1:])
                continue
            if verdict is Verdict.OUT:
                continue
            for v in g.successors(word[-1]):
                queue.append((word + (v,), self.monitor.step(state, v)))

    def __repr__(self):
        return f"OpenCondition({self.name or 'anonymous'})"


class CoverCurve:
    """Mass certified ``IN`` within ``d`` further steps from ``(vertex, state)``.

    Probability mass is pushed forward over ``(vertex, monitor state)``
    pairs in exact arithmetic.  A state that is already ``IN`` counts as
    covered after one step (a move is never empty).
    """

    def __init__(self, m: ReasonableMeasure, monitor: Monitor, vertex, state):
        self.m = m
        self.monitor = monitor
        verdict = monitor.verdict(state)
        self.in_mass = [Fraction(0)]
        self.out_mass = [Fraction(1) if verdict is Verdict.OUT else Fraction(0)]
        if verdict is Verdict.UNKNOWN:
            self._pending = {(vertex, state): Fraction(1)}
            self._all_in = False
        else:
            self._pending = {}
            self._all_in = verdict is Verdict.IN

    @property
    def depth(self) -> int:
        return len(self.in_mass) - 1

    @property
    def exhausted(self) -> bool:
        return not self._pending

    def extend_to(self, d: int):
        mon = self.monitor
        while self.depth < d:
            if self._all_in:
                self.in_mass.append(Fraction(1))
                self.out_mass.append(Fraction(0))
                continue
            gained_in = Fraction(0)
            gained_out = Fraction(0)
            nxt: dict = {}
            for (u, s), pr in self._pending.items():
                for v, p in self.m.row(u):
                    s2 = mon.step(s, v)
                    verdict = mon.verdict(s2)
                    q = pr * p
                    if verdict is Verdict.IN:
                        gained_in += q
                    elif verdict is Verdict.OUT:
                        gained_out += q
                    else:
                        key = (v, s2)
                        nxt[key] = nxt.get(key, 0) + q
            self._pending = nxt
            self.in_mass.append(self.in_mass[-1] + gained_in)
            self.out_mass.append(self.out_mass[-1] + gained_out)

    def mass(self, d: int) -> Fraction:
        self.extend_to(d)
        return self.in_mass[d]

    def first_depth_reaching(self, target: Fraction, max_depth: int) -> int | None:
        d = 1
        while d <= max_depth:
            self.extend_to(d)
            if self.in_mass[d] >= target:
                return d
            if self.exhausted and not self._all_in:
                return None
            d += 1
        return None


class CoverSet:
    """The finite set of minimal continuations of ``given`` certified ``IN``
    by an open condition within ``depth`` steps.

    Members are pairwise incomparable, so their cylinders are disjoint.  The
    set may be astronomically large; it is held symbolically and supports
    exact mass, membership, lazy enumeration and measure-weighted sampling.
    """

    def __init__(self, m: ReasonableMeasure, condition: OpenCondition, given: PlayPrefix, depth: int):
        self.m = m
        self.condition = condition
        self.given = given
        self.depth = depth
        self._state = condition.state_after(given.word)
        self._mon = condition.monitor

    @property
    def anchor(self):
        return self.given.last

    def mass(self) -> Fraction:
        return self.condition.curve(self.m, self.anchor, self._state).mass(self.depth)

    def _given_in(self) -> bool:
        return self._mon.verdict(self._state) is Verdict.IN

    def __contains__(self, c) -> bool:
        if not isinstance(c, Continuation) or c.anchor != self.anchor or len(c) > self.depth:
            return False
        if not self.m.graph.is_walk(c.anchor, c.steps):
            return False
        if self._given_in():
            return len(c) == 1
        s = self._state
        for i, v in enumerate(c.steps):
            s = self._mon.step(s, v)
            verdict = self._mon.verdict(s)
            if verdict is not Verdict.UNKNOWN:
                return verdict is Verdict.IN and i == len(c) - 1
        return False

    def __iter__(self) -> Iterator[Continuation]:
        g = self.m.graph
        if self._given_in():
            for v in g.successors(self.anchor):
                yield Continuation(self.anchor, (v,))
            return
        stack = [((), self.anchor, self._state, False)]
        while stack:
            path, u, s, done = stack.pop()
            if done:
                yield Continuation(self.anchor, path)
                continue
            children = []
            for v in g.successors(u):
                s2 = self._mon.step(s, v)
                verdict = self._mon.verdict(s2)
                if verdict is Verdict.IN:
                    children.append((path + (v,), v, None, True))
                elif verdict is Verdict.UNKNOWN and len(path) + 1 < self.depth:
                    children.append((path + (v,), v, s2, False))
            stack.extend(reversed(children))

    def size(self) -> int:
        if self._given_in():
            return len(self.m.graph.successors(self.anchor))
        g = self.m.graph
        pending = {(self.anchor, self._state): 1}
        total = 0
        for _ in range(self.depth):
            nxt: dict = {}
            for (u, s), k in pending.items():
                for v in g.successors(u):
                    s2 = self._mon.step(s, v)
                    verdict = self._mon.verdict(s2)
                    if verdict is Verdict.IN:
                        total += k
                    elif verdict is Verdict.UNKNOWN:
                        nxt[(v, s2)] = nxt.get((v, s2), 0) + k
            pending = nxt
            if not pending:
                break
        return total

    def sample(self, rng: random.Random, max_tries: int = 100_000) -> Continuation:
        """A member drawn with probability proportional to its cylinder mass."""
        if self._given_in():
            return Continuation(self.anchor, (sample_step(self.m, self.anchor, rng),))
        for _ in range(max_tries):
            u, s, path = self.anchor, self._state, []
            while len(path) < self.depth:
                u = sample_step(self.m, u, rng)
                path.append(u)
                s = self._mon.step(s, u)
                verdict = self._mon.verdict(s)
                if verdict is Verdict.IN:
                    return Continuation(self.anchor, tuple(path))
                if verdict is Verdict.OUT:
                    break
        raise RuntimeError("rejection sampling did not hit the cover set")

    def to_prefix_free(self, limit: int = 100_000) -> PrefixFreeSet:
        out = []
        for i, c in enumerate(self):
            if i >= limit:
                raise ExplosionGuard(f"cover set has more than {limit} members")
            out.append(PlayPrefix(self.given.start, self.given.steps + c.steps))
        return PrefixFreeSet(out)

    def __repr__(self):
        return f"CoverSet({self.condition.name}, given={self.given}, depth={self.depth})"


class GdCondition:
    """A countable intersection of open levels ``W_1, W_2, ...``.

    ``level_fn(n)`` builds level ``n`` (1-based) on demand.  ``certificate``,
    when present, is ``(n, measure, depth) -> eps`` bounding the mass of
    level ``n`` left uncertified after ``depth`` steps; providing it declares
    the family exhaustively checkable.
    """

    def __init__(
        self,
        level_fn: Callable[[int], OpenCondition],
        *,
        n_levels: int | None = None,
        name: str = "",
        certificate: Callable | None = None,
    ):
        self._level_fn = level_fn
        self.n_levels = n_levels
        self.name = name
        self.certificate = certificate
        self._levels: dict[int, OpenCondition] = {}

    @classmethod
    def from_levels(cls, levels: Iterable[OpenCondition], name: str = "") -> GdCondition:
        lv = list(levels)
        return cls(lambda n: lv[n - 1], n_levels=len(lv), name=name)

    def level(self, n: int) -> OpenCondition:
        if n < 1 or (self.n_levels is not None and n > self.n_levels):
            raise IndexError(f"level {n} out of range")
        if n not in self._levels:
            self._levels[n] = self._level_fn(n)
        return self._levels[n]

    def certified_levels(self, p: PlayPrefix, max_levels: int) -> int:
        """How many leading levels ``1..k`` certify ``IN`` at ``p``."""
        top = max_levels if self.n_levels is None else min(max_levels, self.n_levels)
        k = 0
        while k < top and self.level(k + 1).verdict(p) is Verdict.IN:
            k += 1
        return k

    def __repr__(self):
        return f"GdCondition({self.name or 'anonymous'})"


class ParityCondition:
    """Deterministic parity automaton over the vertex alphabet (min-even).

    The automaton reads every vertex of the play including the start.  A run
    is accepting when the least priority seen infinitely often is even.
    """

    def __init__(self, states, initial, transition, priority, name: str = "", graph: FiniteGraph | None = None):
        self.states = tuple(states)
        self.initial = initial
        self.transition = dict(transition)
        self.priority = dict(priority)
        self.name = name
        self.graph = graph
        alphabet = graph.vertices if graph is not None else sorted({a for _, a in self.transition}, key=str)
        self.alphabet = tuple(alphabet)
        for q in self.states:
            if q not in self.priority:
                raise ValidationError(f"state {q!r} has no priority")
            for a in self.alphabet:
                if (q, a) not in self.transition:
                    raise ValidationError(f"transition missing for ({q!r}, {a!r})")
        if initial not in self.priority:
            raise ValidationError("unknown initial state")
        self._decided: dict = {}

    def delta(self, q, v):
        return self.transition[(q, v)]

    def run(self, word, q=None) -> object:
        q = self.initial if q is None else q
        for v in word:
            q = self.transition[(q, v)]
        return q

    def product_successors(self, g: FiniteGraph, node):
        v, q = node
        return [(w, self.transition[(q, w)]) for w in g.successors(v)]

    def decide(self, g: FiniteGraph, v, q) -> Verdict:
        """Verdict for every infinite continuation from product node ``(v, q)``."""
        key = (g, v, q)
        if key in self._decided:
            return self._decided[key]
        graph = nx.DiGraph()
        todo, seen = [(v, q)], {(v, q)}
        graph.add_node((v, q))
        while todo:
            node = todo.pop()
            for nb in self.product_successors(g, node):
                graph.add_edge(node, nb)
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        pris = sorted({self.priority[n[1]] for n in graph.nodes})
        good = any(_cycle_with_min(graph, self.priority, k) for k in pris if k % 2 == 0)
        bad = any(_cycle_with_min(graph, self.priority, k) for k in pris if k % 2 == 1)
        verdict = Verdict.UNKNOWN
        if not bad:
            verdict = Verdict.IN
        elif not good:
            verdict = Verdict.OUT
        self._decided[key] = verdict
        return verdict

    def __repr__(self):
        return f"ParityCondition({self.name or 'anonymous'})"


def _cycle_with_min(graph: nx.DiGraph, priority, k) -> bool:
    """Is there a cycle whose least priority is exactly ``k``?"""
    sub = graph.subgraph([n for n in graph.nodes if priority[n[1]] >= k])
    for comp in nx.strongly_connected_components(sub):
        if not any(priority[n[1]] == k for n in comp):
            continue
        if len(comp) > 1:
            return True
        (n,) = comp
        if sub.has_edge(n, n):
            return True
    return False


class OracleCondition:
    """A set known only through a prefix oracle (and optionally a lasso oracle).

    The prefix oracle must be monotone: once it answers ``IN`` or ``OUT`` for
    a prefix, every extension gets the same answer.
    """

    def __init__(self, prefix_oracle: Callable, lasso_oracle: Callable | None = None, name: str = ""):
        self.prefix_oracle = prefix_oracle
        self.lasso_oracle = lasso_oracle
        self.name = name

    def __repr__(self):
        return f"OracleCondition({self.name or 'anonymous'})"


Condition = OpenCondition | GdCondition | ParityCondition | OracleCondition


def membership_at_depth(W, p: PlayPrefix, graph: FiniteGraph | None = None, max_levels: int = 64) -> Verdict:
    """Tri-state membership of all infinite extensions of ``p``.

    ``IN``: every extension is in ``W``; ``OUT``: none is; ``UNKNOWN``
    otherwise.  For Gδ sets only ``max_levels`` levels are inspected.
    """
    if isinstance(W, OpenCondition):
        return W.verdict(p)
    if isinstance(W, GdCondition):
        top = max_levels if W.n_levels is None else min(max_levels, W.n_levels)
        all_in = True
        for n in range(1, top + 1):
            v = W.level(n).verdict(p)
            if v is Verdict.OUT:
                return Verdict.OUT
            all_in = all_in and v is Verdict.IN
        if all_in and W.n_levels is not None and top == W.n_levels:
            return Verdict.IN
        return Verdict.UNKNOWN
    if isinstance(W, ParityCondition):
        g = graph or W.graph
        if g is None:
            return Verdict.UNKNOWN
        return W.decide(g, p.last, W.run(p.word))
    if isinstance(W, OracleCondition):
        return Verdict(W.prefix_oracle(p))
    raise TypeError(f"not a condition: {W!r}")


def lasso_membership(W: ParityCondition, stem: PlayPrefix, loop: Continuation) -> bool:
    """Acceptance of the ultimately periodic path ``stem · loop^ω``."""
    if loop.anchor != stem.last or loop.last != loop.anchor:
        raise LoopNotClosed(f"loop {loop} does not return to {stem.last!r}")
    q = W.run(stem.word)
    seen: dict = {}
    visited: list[list[int]] = []
    while q not in seen:
        seen[q] = len(visited)
        pris = []
        for v in loop.steps:
            q = W.delta(q, v)
            pris.append(W.priority[q])
        visited.append(pris)
    cycle = [k for pr in visited[seen[q]:] for k in pr]
    return min(cycle) % 2 == 0


def open_mass_reached(
    m: ReasonableMeasure, W: OpenCondition, given: PlayPrefix, target: Fraction, budget: int
) -> CoverSet | None:
    """Smallest-depth cover set under ``given`` whose conditional mass reaches ``target``.

    ``budget`` caps the depth explored.  ``None`` means the budget ran out
    (or no further mass can ever be certified).
    """
    target = Fraction(target)
    if not 0 < target <= 1:
        raise ValueError("target must lie in (0, 1]")
    curve = W.curve(m, given.last, W.state_after(given.word))
    d = curve.first_depth_reaching(target, budget)
    if d is None:
        return None
    return CoverSet(m, W, given, d)
