"""Turn game files and artifacts into graphs, measures, conditions and strategies."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import corpus
from .conditions import OpenCondition, ParityCondition
from .engine import (
    AlphaStrategy,
    MeasureRandomPlayer,
    MeasureRandomSelector,
    alpha_for_gd_prob_one,
    alpha_from_bounded,
    alpha_from_move_counting,
    alpha_lift,
    lift_singleton,
    random_bounded_strategy,
    spoiler_for_open,
    strategy_selector,
)
from .errors import ValidationError
from .fileformat import Artifact, GameFile, parse_rational, read_artifact
from .graph import FiniteGraph, format_steps, parse_prefix, parse_steps
from .measure import ReasonableMeasure, uniform
from .strategies import (
    MoveCounting,
    Positional,
    Strategy,
    length_counting_from_general,
    move_counting_from_positional_family,
)

DEFAULT_BUDGET = 200


@dataclass
class Game:
    graph: FiniteGraph
    v0: object
    measure: ReasonableMeasure
    condition: object
    bundle: object = None
    file: GameFile | None = None


def _bundle(name):
    return corpus.get(name) if name else None


def _variants():
    from .corpus import ex_pos, witnesses

    return {
        ("ex_pos", "truncated_union"): lambda a: ex_pos.truncated_union(int(a)),
        ("ex_pos", "level"): lambda a: ex_pos.level_set(int(a)),
        ("witnesses", "finite_open"): witnesses.finite_open,
    }


def build_condition(spec: dict, graph: FiniteGraph, bundle=None):
    kind = spec.get("kind")
    if kind == "corpus":
        b = _bundle(spec.get("bundle")) if spec.get("bundle") else bundle
        if b is None:
            raise ValidationError("corpus condition needs a bundle")
        variant = spec.get("variant")
        if variant is None:
            return b.condition
        if variant in b.extras and not isinstance(b.extras[variant], dict):
            return b.extras[variant]
        name, _, arg = str(variant).partition(":")
        maker = _variants().get((b.name, name))
        if maker is None:
            raise ValidationError(f"bundle {b.name} has no condition variant {variant!r}")
        return maker(arg)
    if kind == "open":
        gens = spec.get("generators")
        if not gens:
            raise ValidationError("open condition needs generators")
        prefixes = [parse_prefix(str(s)) for s in gens]
        for p in prefixes:
            graph.check_walk(p.start, p.steps)
        return OpenCondition.from_generators(prefixes, name=spec.get("name", "open"))
    if kind == "parity":
        try:
            trans = {(q, a): r for q, a, r in spec["transitions"]}
            prio = spec["priority"]
            prio = dict(prio) if isinstance(prio, dict) else {q: k for q, k in prio}
            return ParityCondition(spec["states"], spec["initial"], trans, prio, spec.get("name", "parity"), graph)
        except KeyError as exc:
            raise ValidationError(f"parity condition misses {exc}") from exc
    if kind == "buchi":
        accept = set(spec.get("accept") or [])
        if not accept <= set(graph.vertices):
            raise ValidationError("buchi accept set must contain vertices")
        states = ("init",) + tuple(graph.vertices)
        trans = {(q, a): a for q in states for a in graph.vertices}
        prio = {q: (0 if q in accept else 1) for q in states}
        return ParityCondition(states, "init", trans, prio, spec.get("name", "buchi"), graph)
    raise ValidationError(f"unknown condition kind {kind!r}")


def build_game(gf: GameFile) -> Game:
    b = _bundle(gf.corpus)
    if gf.vertices is not None:
        if gf.edges == "complete" or gf.edges is None:
            g = FiniteGraph.complete(gf.vertices)
        else:
            g = FiniteGraph(tuple(gf.vertices), frozenset(gf.edges))
    else:
        g = b.graph
    v0 = gf.v0 if gf.v0 is not None else b.v0
    if v0 not in g:
        raise ValidationError(f"v0 {v0!r} is not a vertex")
    if isinstance(gf.weights, list):
        m = ReasonableMeasure(g, {(u, v): w for u, v, w in gf.weights})
    elif gf.weights == "uniform" or b is None or gf.vertices is not None:
        m = uniform(g)
    else:
        m = b.measure
    W = build_condition(gf.condition, g, b) if gf.condition is not None else b.condition
    return Game(g, v0, m, W, b, gf)


def budget_of(gf: GameFile, env_default: int | None) -> int:
    if gf.budget is not None:
        return gf.budget
    return env_default if env_default is not None else DEFAULT_BUDGET


# -- strategies ---------------------------------------------------------------


def positional_from_table(table: dict, name="positional") -> Positional:
    if not isinstance(table, dict) or not table:
        raise ValidationError("positional strategy needs a table")
    return Positional({k: parse_steps(str(v)) for k, v in table.items()}, name=name)


def table_of(f: Positional, g: FiniteGraph) -> dict:
    return {v: format_steps(f(v).steps) for v in g.vertices}


def _move_counting(spec) -> MoveCounting:
    word = parse_steps(str(spec.get("word", "")))
    if not word:
        raise ValidationError("move-counting strategy needs a word")
    if spec.get("power"):
        return MoveCounting(lambda v, n: word * n, name=f"({format_steps(word)})^n")
    return MoveCounting(lambda v, n: word, name=f"always-{format_steps(word)}")


def build_strategy(spec, game: Game, seed=0) -> Strategy:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError(f"strategy needs a kind: {spec!r}")
    kind = spec["kind"]
    if kind == "corpus":
        b = _bundle(spec.get("bundle")) if spec.get("bundle") else game.bundle
        if b is None:
            raise ValidationError("corpus strategy needs a bundle")
        s = b.strategies.get(spec.get("role", "winner"))
        if not isinstance(s, Strategy):
            raise ValidationError(f"bundle {b.name} has no ready strategy for role {spec.get('role', 'winner')!r}")
        return s
    if kind == "positional":
        return positional_from_table(spec.get("table"))
    if kind == "move-counting":
        return _move_counting(spec)
    if kind == "random":
        return MeasureRandomPlayer(game.measure, int(spec.get("max_len", 3)), seed=seed)
    if kind == "bounded-random":
        return random_bounded_strategy(game.graph, int(spec.get("bound", 2)), seed=seed)
    if kind == "artifact":
        made = realize_artifact(read_artifact(spec["path"]), game, seed)
        if not isinstance(made, Strategy):
            raise ValidationError("artifact does not hold a classical strategy")
        return made
    raise ValidationError(f"unknown strategy kind {kind!r}")


def build_alpha_strategy(spec, game: Game, alpha: Fraction, budget: int, seed=0) -> AlphaStrategy:
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "gd-alpha":
        return alpha_for_gd_prob_one(game.condition, game.measure, alpha, int(spec.get("budget", budget)))
    if kind == "lift":
        return alpha_lift(build_strategy(spec.get("of"), game, seed), game.measure, alpha)
    if kind == "bounded":
        s, _ = alpha_from_bounded(build_strategy(spec.get("of"), game, seed), int(spec["bound"]), game.measure)
        return s
    if kind == "movalpha":
        h = build_strategy(spec.get("of"), game, seed)
        if not isinstance(h, MoveCounting):
            raise ValidationError("movalpha needs a move-counting strategy")
        return alpha_from_move_counting(h, game.measure, alpha, int(spec.get("budget", budget)))
    if kind == "artifact":
        made = realize_artifact(read_artifact(spec["path"]), game, seed)
        if isinstance(made, AlphaStrategy):
            return made
        return lift_singleton(made, game.measure, alpha)
    return lift_singleton(build_strategy(spec, game, seed), game.measure, alpha)


def build_selector(spec, game: Game, alpha: Fraction, seed=0):
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "random-selector":
        return MeasureRandomSelector(game.measure, int(spec.get("max_len", 3)), seed=seed)
    if kind == "spoiler":
        return spoiler_for_open(game.condition, game.measure, alpha, game.v0, int(spec.get("search_depth", 12)))
    if kind == "artifact":
        made = realize_artifact(read_artifact(spec["path"]), game, seed)
        if isinstance(made, Strategy):
            return strategy_selector(made)
        return made
    return strategy_selector(build_strategy(spec, game, seed))


def realize_artifact(a: Artifact, game: Game, seed=0):
    p = a.params
    c = a.construction
    if c in ("prop5", "positional"):
        return positional_from_table(a.table, name=c)
    if c == "prop2":
        return length_counting_from_general(build_strategy(p["source"], game, seed), game.graph, game.v0)
    if c == "prop4":
        return move_counting_from_positional_family([positional_from_table(t) for t in p["family"]])
    if c == "movalpha":
        h = build_strategy(p["h"], game, seed)
        return alpha_from_move_counting(h, game.measure, parse_rational(p["alpha"]), int(p["budget"]))
    if c == "thm4":
        return alpha_for_gd_prob_one(game.condition, game.measure, parse_rational(p["alpha"]), int(p["budget"]))
    if c == "thm5":
        return spoiler_for_open(
            game.condition, game.measure, parse_rational(p["alpha"]), game.v0, int(p.get("search_depth", 12))
        )
    raise ValidationError(f"unknown construction {c!r}")
