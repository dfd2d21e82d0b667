"""Weight-induced probability measures on infinite paths.

Every edge ``e`` carries a positive weight; leaving ``v`` along ``(v, v')``
has probability ``w(v, v') / sum of weights enabled at v``.  A cylinder's
probability is the product of the transition probabilities along its steps;
the start vertex contributes no factor.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MissingWeight, NonPositiveWeight
from .graph import Continuation, FiniteGraph, PlayPrefix, PrefixFreeSet


@dataclass(frozen=True, eq=False)
class ReasonableMeasure:
    graph: FiniteGraph
    weights: Mapping
    transition: Mapping = field(init=False)

    def __post_init__(self):
        g = self.graph
        weights = {}
        for e in sorted(g.edges, key=lambda e: (g.index(e[0]), g.index(e[1]))):
            if e not in self.weights:
                raise MissingWeight(f"edge {e!r} has no weight")
            w = Fraction(self.weights[e])
            if w <= 0:
                raise NonPositiveWeight(f"edge {e!r} has weight {w}")
            weights[e] = w
        extra = set(self.weights) - set(g.edges)
        if extra:
            raise MissingWeight(f"weights given for non-edges {sorted(map(str, extra))}")
        trans = {}
        rows = {}
        cum = {}
        for u in g.vertices:
            succ = g.successors(u)
            total = sum(weights[(u, v)] for v in succ)
            row = tuple((v, weights[(u, v)] / total) for v in succ)
            rows[u] = row
            for v, p in row:
                trans[(u, v)] = p
            acc, c = 0.0, []
            for _, p in row:
                acc += float(p)
                c.append(acc)
            c[-1] = 1.0
            cum[u] = c
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "transition", trans)
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_cum", cum)
        object.__setattr__(
            self, "key", (g, tuple(sorted(((str(k), v) for k, v in trans.items()))))
        )

    def p(self, u, v) -> Fraction:
        return self.transition.get((u, v), Fraction(0))

    def row(self, u) -> tuple:
        """``((successor, probability), ...)`` in the graph's vertex order."""
        return self._rows[u]

    def min_transition(self) -> Fraction:
        return min(self.transition.values())

    def walk_prob(self, anchor, steps) -> Fraction:
        prob = Fraction(1)
        prev = anchor
        for v in steps:
            prob *= self.transition.get((prev, v), 0)
            prev = v
        return prob

    def __eq__(self, other):
        return isinstance(other, ReasonableMeasure) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def measure_from_weights(g: FiniteGraph, w: Mapping) -> ReasonableMeasure:
    return ReasonableMeasure(g, dict(w))


def uniform(g: FiniteGraph) -> ReasonableMeasure:
    return ReasonableMeasure(g, {e: 1 for e in g.edges})


def cyl_prob(m: ReasonableMeasure, p: PlayPrefix) -> Fraction:
    return m.walk_prob(p.start, p.steps)


def union_prob(m: ReasonableMeasure, s: PrefixFreeSet) -> Fraction:
    return sum((cyl_prob(m, p) for p in s), Fraction(0))


def cond_prob(m: ReasonableMeasure, event: PrefixFreeSet, given: PlayPrefix) -> Fraction:
    inter = event.intersect_cylinder(given)
    return union_prob(m, inter) / cyl_prob(m, given)


def continuations_mass(m: ReasonableMeasure, anchor, conts: Iterable[Continuation]) -> Fraction:
    """Conditional mass of ``∪ Cyl(π·c)`` given ``Cyl(π)`` for ``last(π) = anchor``.

    Overlapping continuations are reduced to a prefix-free family first.
    """
    family = PrefixFreeSet(PlayPrefix(anchor, c.steps) for c in conts)
    return union_prob(m, family)


def sample_step(m: ReasonableMeasure, u, rng: random.Random):
    row = m._rows[u]
    i = bisect.bisect_left(m._cum[u], rng.random())
    return row[min(i, len(row) - 1)][0]


def sample_walk(m: ReasonableMeasure, anchor, n_steps: int, rng: random.Random) -> tuple:
    steps = []
    v = anchor
    for _ in range(n_steps):
        v = sample_step(m, v, rng)
        steps.append(v)
    return tuple(steps)


def sample_path(m: ReasonableMeasure, v0, depth: int, seed: int | random.Random) -> PlayPrefix:
    """A random prefix with ``depth`` steps drawn from the transition rows."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return PlayPrefix(v0, sample_walk(m, v0, depth, rng))
