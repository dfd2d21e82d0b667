"""Exact and statistical probabilities of winning conditions.

Parity conditions are solved on the product of the Markov chain with the
automaton: bottom SCCs are classified by their least priority and the
reachability probabilities of accepting ones come from an exact linear
solve over the rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
from scipy.stats import binomtest

from .conditions import GdCondition, OpenCondition, OracleCondition, ParityCondition, Verdict
from .graph import FiniteGraph
from .linalg import solve_exact
from .measure import ReasonableMeasure, measure_from_weights, sample_step, union_prob, uniform


@dataclass(frozen=True)
class ProbVerdict:
    kind: str  # exact | one | zero | interval | unknown
    value: Fraction | None = None
    lower: Fraction | None = None
    upper: Fraction | None = None
    reason: str = ""

    def __post_init__(self):
        if self.kind == "interval" and self.lower > self.upper:
            raise ValueError("interval lower bound exceeds upper bound")

    @classmethod
    def exact(cls, v) -> ProbVerdict:
        return cls("exact", Fraction(v))

    @classmethod
    def one(cls, reason="") -> ProbVerdict:
        return cls("one", Fraction(1), reason=reason)

    @classmethod
    def zero(cls, reason="") -> ProbVerdict:
        return cls("zero", Fraction(0), reason=reason)

    @classmethod
    def interval(cls, lo, hi, reason="") -> ProbVerdict:
        return cls("interval", lower=lo, upper=hi, reason=reason)

    @classmethod
    def unknown(cls, reason) -> ProbVerdict:
        return cls("unknown", reason=reason)

    def to_dict(self) -> dict:
        d: dict = {"verdict": self.kind}
        if self.value is not None:
            d["value"] = str(self.value)
        if self.lower is not None:
            d["lower"] = str(self.lower)
            d["upper"] = str(self.upper)
        if self.reason:
            d["reason"] = self.reason
        return d


# -- bottom SCCs ------------------------------------------------------------------


def _digraph(g: FiniteGraph) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertices)
    dg.add_edges_from(sorted(g.edges, key=lambda e: (g.index(e[0]), g.index(e[1]))))
    return dg


def _bottom(dg: nx.DiGraph, order) -> list[frozenset]:
    cond = nx.condensation(dg)
    out = []
    for c in cond.nodes:
        if cond.out_degree(c) == 0:
            out.append(frozenset(cond.nodes[c]["members"]))
    return sorted(out, key=lambda s: min(order(v) for v in s))


def bsccs(g) -> list[frozenset]:
    """Bottom strongly connected components, ordered by their least member."""
    if isinstance(g, ProductChain):
        return g.bsccs()
    return _bottom(_digraph(g), g.index)


@dataclass
class ProductChain:
    """Reachable part of the chain × automaton product from ``(v0, δ(q0, v0))``."""

    m: ReasonableMeasure
    W: ParityCondition
    v0: object
    states: list = field(init=False)
    succ: dict = field(init=False)

    def __post_init__(self):
        start = (self.v0, self.W.run([self.v0]))
        self.start = start
        order = {start: 0}
        succ = {}
        todo = [start]
        while todo:
            s = todo.pop()
            v, q = s
            row = []
            for w, p in self.m.row(v):
                t = (w, self.W.delta(q, w))
                row.append((t, p))
                if t not in order:
                    order[t] = len(order)
                    todo.append(t)
            succ[s] = row
        self.states = sorted(order, key=order.__getitem__)
        self.succ = succ
        self._order = order

    def priority(self, s) -> int:
        return self.W.priority[s[1]]

    def row_sums_ok(self) -> bool:
        return all(sum(p for _, p in row) == 1 for row in self.succ.values())

    def digraph(self) -> nx.DiGraph:
        dg = nx.DiGraph()
        dg.add_nodes_from(self.states)
        for s, row in self.succ.items():
            for t, _ in row:
                dg.add_edge(s, t)
        return dg

    def bsccs(self) -> list[frozenset]:
        return _bottom(self.digraph(), self._order.__getitem__)

    def accepting(self, comp) -> bool:
        return min(self.priority(s) for s in comp) % 2 == 0


def prob_parity_exact(m: ReasonableMeasure, W: ParityCondition, v0) -> Fraction:
    """Probability that the run of the automaton on a random path is accepting."""
    chain = ProductChain(m, W, v0)
    return _reach_accepting(chain)[chain.start]


def _reach_accepting(chain: ProductChain) -> dict:
    comps = chain.bsccs()
    good = set()
    bad = set()
    for c in comps:
        (good if chain.accepting(c) else bad).update(c)
    dg = chain.digraph()
    can_reach = set(good)
    rev = dg.reverse(copy=False)
    for s in good:
        can_reach |= nx.descendants(rev, s)
    values = {s: Fraction(1) for s in good}
    for s in chain.states:
        if s not in can_reach:
            values[s] = Fraction(0)
    unknown = [s for s in chain.states if s not in values]
    if unknown:
        idx = {s: i for i, s in enumerate(unknown)}
        n = len(unknown)
        A = [[Fraction(0)] * n for _ in range(n)]
        b = [Fraction(0)] * n
        for s in unknown:
            i = idx[s]
            A[i][i] += 1
            for t, p in chain.succ[s]:
                if t in idx:
                    A[i][idx[t]] -= p
                else:
                    b[i] += p * values[t]
        x = solve_exact(A, b)
        for s in unknown:
            values[s] = x[idx[s]]
    return values


def qualitative_parity(m: ReasonableMeasure, W: ParityCondition, v0) -> str:
    """``one``/``zero``/``between`` from graph reachability alone (no linear solve)."""
    chain = ProductChain(m, W, v0)
    comps = chain.bsccs()
    dg = chain.digraph()
    reach = nx.descendants(dg, chain.start) | {chain.start}
    hit = [c for c in comps if c & reach]
    acc = [chain.accepting(c) for c in hit]
    if all(acc):
        return "one"
    if not any(acc):
        return "zero"
    return "between"


# -- open sets -----------------------------------------------------------------------


def prob_open_exact(m: ReasonableMeasure, W: OpenCondition) -> Fraction:
    if not W.is_finite:
        raise ValueError("exact mass needs a finite generator list")
    return union_prob(m, W.generators)


def prob_open_truncated(m: ReasonableMeasure, W: OpenCondition, v0, depth: int) -> Fraction:
    """Mass certified ``IN`` within ``depth`` steps from ``v0``."""
    state = W.monitor.start(v0)
    if W.monitor.verdict(state) is Verdict.IN:
        return Fraction(1)
    return W.curve(m, v0, state).mass(depth)


def is_prob_one(m: ReasonableMeasure, W, v0, budget: int = 64) -> ProbVerdict:
    if isinstance(W, OpenCondition):
        if W.is_finite:
            return ProbVerdict.exact(prob_open_exact(m, W))
        return _open_stream_verdict(m, W, v0, budget)
    if isinstance(W, ParityCondition):
        v = prob_parity_exact(m, W, v0)
        if v == 1:
            return ProbVerdict.one("accepting bottom components absorb all mass")
        if v == 0:
            return ProbVerdict.zero("no accepting bottom component is reached")
        return ProbVerdict.exact(v)
    if isinstance(W, GdCondition):
        return _gd_verdict(m, W, v0, budget)
    if isinstance(W, OracleCondition):
        return ProbVerdict.unknown("only a prefix oracle is available")
    raise TypeError(f"not a condition: {W!r}")


def _open_stream_verdict(m, W: OpenCondition, v0, depth: int) -> ProbVerdict:
    state = W.monitor.start(v0)
    curve = W.curve(m, v0, state)
    lo = prob_open_truncated(m, W, v0, depth)
    curve.extend_to(depth)
    hi = 1 - curve.out_mass[depth]
    if W.mass_certificate is not None and hi == 1:
        eps = Fraction(W.mass_certificate(m, depth))
        if lo >= 1 - eps:
            return ProbVerdict.one(f"certified mass {lo} at depth {depth}; remainder vanishes")
    if lo == hi:
        return ProbVerdict.exact(lo)
    return ProbVerdict.interval(lo, hi, f"open stream truncated at depth {depth}")


def _gd_verdict(m, W: GdCondition, v0, depth: int, max_levels: int = 8) -> ProbVerdict:
    top = max_levels if W.n_levels is None else min(max_levels, W.n_levels)
    lo_missing = Fraction(0)
    hi = Fraction(1)
    certified = W.certificate is not None
    for n in range(1, top + 1):
        lvl = W.level(n)
        if lvl.is_finite:
            mass = prob_open_exact(m, lvl)
            lo_missing += 1 - mass
            hi = min(hi, mass)
            certified = certified and mass == 1
            continue
        state = lvl.monitor.start(v0)
        curve = lvl.curve(m, v0, state)
        lo_n = prob_open_truncated(m, lvl, v0, depth)
        curve.extend_to(depth)
        hi = min(hi, 1 - curve.out_mass[depth])
        lo_missing += 1 - lo_n
        if certified:
            eps = Fraction(W.certificate(n, m, depth))
            certified = lo_n >= 1 - eps and curve.out_mass[depth] == 0
    if certified and (W.n_levels is not None or W.certificate is not None):
        return ProbVerdict.one(f"levels 1..{top} certified; every level carries a vanishing-remainder certificate")
    return ProbVerdict.interval(max(Fraction(0), 1 - lo_missing), hi, f"levels 1..{top} at depth {depth}")


def is_large_omega_regular(W: ParityCondition, g: FiniteGraph, v0) -> bool:
    return prob_parity_exact(uniform(g), W, v0) == 1


def random_weighting(g: FiniteGraph, seed) -> ReasonableMeasure:
    rng = random.Random(f"weights:{seed}")
    return measure_from_weights(g, {e: rng.randint(1, 9) for e in sorted(g.edges, key=lambda e: (g.index(e[0]), g.index(e[1])))})


def cross_measure_check(W: ParityCondition, g: FiniteGraph, v0, seeds=(1, 2, 3)) -> bool:
    """Same one/zero classification under several random positive weightings."""

    def cls(m):
        v = prob_parity_exact(m, W, v0)
        return "one" if v == 1 else "zero" if v == 0 else "between"

    ref = cls(uniform(g))
    return all(cls(random_weighting(g, s)) == ref for s in seeds)


# -- Monte Carlo --------------------------------------------------------------------


@dataclass
class MonteCarloResult:
    in_count: int
    out_count: int
    unknown_count: int
    interval: ProbVerdict
    level_counts: list = field(default_factory=list)
    seed: object = None

    @property
    def samples(self) -> int:
        return self.in_count + self.out_count + self.unknown_count

    def to_dict(self) -> dict:
        d = {
            "in": self.in_count,
            "out": self.out_count,
            "unknown": self.unknown_count,
            "samples": self.samples,
            "seed": self.seed,
        }
        d.update({k: v for k, v in self.interval.to_dict().items() if k != "verdict"})
        if self.level_counts:
            d["level_counts"] = list(self.level_counts)
        return d


def wilson(k: int, n: int, confidence: float = 0.99) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return ci.low, ci.high


def monte_carlo(m: ReasonableMeasure, W, v0, depth: int, samples: int, seed, confidence: float = 0.99, max_levels: int = 16) -> MonteCarloResult:
    """Sample paths of ``depth`` steps and classify each prefix.

    The interval brackets P(W): its lower end is the Wilson lower bound on
    the ``IN`` frequency, its upper end the Wilson upper bound on the
    frequency of not ``OUT``.
    """
    from .engine import Tracker

    if samples < 1:
        raise ValueError("samples >= 1")
    counts = {Verdict.IN: 0, Verdict.OUT: 0, Verdict.UNKNOWN: 0}
    levels = [0] * max_levels if isinstance(W, GdCondition) else []
    for i in range(samples):
        rng = random.Random(f"{seed}:{i}")
        tr = Tracker(W, m.graph, v0, max_levels=max_levels)
        u = v0
        for _ in range(depth):
            if tr.verdict is not Verdict.UNKNOWN and not levels:
                break
            u = sample_step(m, u, rng)
            tr.extend((u,))
        counts[tr.verdict] += 1
        for k in range(min(tr.levels, max_levels)):
            levels[k] += 1
    lo, _ = wilson(counts[Verdict.IN], samples, confidence)
    _, hi = wilson(samples - counts[Verdict.OUT], samples, confidence)
    lo_f = Fraction(lo).limit_denominator(10**9)
    hi_f = Fraction(hi).limit_denominator(10**9)
    interval = ProbVerdict.interval(min(lo_f, hi_f), hi_f, f"Wilson {confidence}")
    return MonteCarloResult(counts[Verdict.IN], counts[Verdict.OUT], counts[Verdict.UNKNOWN], interval, levels, seed)
