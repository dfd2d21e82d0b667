"""YAML game files and strategy artifacts.

Rationals are written as ``"p/q"`` strings, prefixes in the ``"0·01"``
notation and move words as step strings (``"01"``).  :func:`dump_game`
writes a canonical form, so ``dump(load(dump(x))) == dump(x)`` byte for
byte.

A game file looks like::

    graph: {vertices: [0, 1], edges: complete}
    v0: 0
    weights: uniform            # or a list of [u, v, "p/q"]
    condition: {kind: open, generators: ["0·00"]}
    strategies:
      pl0: {kind: positional, table: {0: "1", 1: "1"}}
      pl1: {kind: random, max_len: 3}
    seeds: [11]
    budget: 200
    alpha: "1/2"                # set-valued game when present

``corpus: <bundle>`` may replace ``graph``, ``v0``, ``weights`` and
``condition``; explicit sections still override the bundle's.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from .errors import ValidationError

VERSION = 1
_TOP_KEYS = ("corpus", "graph", "v0", "weights", "condition", "strategies", "inputs", "seeds", "budget", "alpha")


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ValidationError(f"not a rational: {text!r}")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational: {text!r}") from exc


def _vertex(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ValidationError(f"vertex ids must be integers or strings, got {v!r}")
    return v


@dataclass
class GameFile:
    corpus: str | None = None
    vertices: list | None = None
    edges: list | str | None = None  # "complete" or a list of pairs
    v0: object = None
    weights: list | str | None = None  # "uniform" or [u, v, Fraction]
    condition: dict | None = None
    strategies: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    seeds: list = field(default_factory=list)
    budget: int | None = None
    alpha: Fraction | None = None

    def validate(self):
        if self.corpus is None and (self.vertices is None or self.v0 is None or self.condition is None):
            raise ValidationError("a game file needs graph, v0 and condition (or a corpus bundle)")
        if self.vertices is not None:
            if self.v0 is not None and self.v0 not in self.vertices:
                raise ValidationError(f"v0 {self.v0!r} is not a vertex")
            if isinstance(self.edges, list):
                for u, v in self.edges:
                    if u not in self.vertices or v not in self.vertices:
                        raise ValidationError(f"edge ({u!r}, {v!r}) has an unknown end")
        if isinstance(self.weights, list):
            for u, v, w in self.weights:
                if w <= 0:
                    raise ValidationError(f"weight of ({u!r}, {v!r}) must be positive")
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise ValidationError("alpha must lie strictly between 0 and 1")
        if self.budget is not None and self.budget < 1:
            raise ValidationError("budget must be positive")
        for role in self.strategies:
            if role not in ("pl0", "pl1"):
                raise ValidationError(f"unknown strategy role {role!r} (use pl0 / pl1)")
        return self

    def to_dict(self) -> dict:
        d: dict = {}
        if self.corpus is not None:
            d["corpus"] = self.corpus
        if self.vertices is not None:
            order = {v: i for i, v in enumerate(self.vertices)}
            edges = self.edges
            if isinstance(edges, list):
                edges = [list(e) for e in sorted(edges, key=lambda e: (order[e[0]], order[e[1]]))]
            d["graph"] = {"vertices": list(self.vertices), "edges": edges}
        if self.v0 is not None:
            d["v0"] = self.v0
        if self.weights is not None:
            if isinstance(self.weights, str):
                d["weights"] = self.weights
            else:
                d["weights"] = [[u, v, fmt_rational(w)] for u, v, w in self.weights]
        if self.condition is not None:
            d["condition"] = _canon(self.condition)
        if self.strategies:
            d["strategies"] = {k: _canon(self.strategies[k]) for k in sorted(self.strategies)}
        if self.inputs:
            d["inputs"] = _canon(self.inputs)
        if self.seeds:
            d["seeds"] = list(self.seeds)
        if self.budget is not None:
            d["budget"] = self.budget
        if self.alpha is not None:
            d["alpha"] = fmt_rational(self.alpha)
        return d


def _canon(x):
    """Recursively sort mapping keys (by string form) and render rationals."""
    if isinstance(x, dict):
        return {k: _canon(x[k]) for k in sorted(x, key=str)}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    if isinstance(x, Fraction):
        return fmt_rational(x)
    return x


def game_from_dict(d: dict) -> GameFile:
    if not isinstance(d, dict):
        raise ValidationError("a game file must be a mapping")
    unknown = set(d) - set(_TOP_KEYS)
    if unknown:
        raise ValidationError(f"unknown keys: {', '.join(sorted(map(str, unknown)))}")
    gf = GameFile(corpus=d.get("corpus"))
    if "graph" in d:
        graph = d["graph"]
        if not isinstance(graph, dict) or "vertices" not in graph:
            raise ValidationError("graph needs a vertex list")
        gf.vertices = [_vertex(v) for v in graph["vertices"]]
        edges = graph.get("edges", "complete")
        if edges != "complete":
            if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
                raise ValidationError("edges must be 'complete' or a list of [u, v] pairs")
            edges = [(_vertex(u), _vertex(v)) for u, v in edges]
        gf.edges = edges
    if "v0" in d:
        gf.v0 = _vertex(d["v0"])
    if "weights" in d:
        w = d["weights"]
        if w == "uniform":
            gf.weights = w
        elif isinstance(w, list) and all(isinstance(r, list) and len(r) == 3 for r in w):
            gf.weights = [(_vertex(u), _vertex(v), parse_rational(x)) for u, v, x in w]
        else:
            raise ValidationError("weights must be 'uniform' or a list of [u, v, 'p/q']")
    if "condition" in d:
        if not isinstance(d["condition"], dict) or "kind" not in d["condition"]:
            raise ValidationError("condition needs a kind")
        gf.condition = dict(d["condition"])
    strategies = d.get("strategies") or {}
    if not isinstance(strategies, dict):
        raise ValidationError("strategies must be a mapping")
    gf.strategies = {k: dict(v) if isinstance(v, dict) else v for k, v in strategies.items()}
    gf.inputs = dict(d.get("inputs") or {})
    seeds = d.get("seeds") or []
    if not isinstance(seeds, list) or any(isinstance(s, bool) or not isinstance(s, int) for s in seeds):
        raise ValidationError("seeds must be a list of integers")
    gf.seeds = seeds
    if d.get("budget") is not None:
        if isinstance(d["budget"], bool) or not isinstance(d["budget"], int):
            raise ValidationError("budget must be an integer")
        gf.budget = d["budget"]
    if d.get("alpha") is not None:
        gf.alpha = parse_rational(d["alpha"])
    return gf.validate()


def dump_yaml(d: dict) -> str:
    return yaml.safe_dump(d, sort_keys=False, allow_unicode=True, default_flow_style=None, width=100)


def load_yaml(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"malformed YAML: {exc}") from exc


def dump_game(gf: GameFile) -> str:
    return dump_yaml(gf.to_dict())


def load_game(text: str) -> GameFile:
    return game_from_dict(load_yaml(text))


def read_game(path: str) -> GameFile:
    try:
        with open(path, encoding="utf-8") as fh:
            return load_game(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


# -- strategy artifacts ------------------------------------------------------------


@dataclass
class Artifact:
    """A synthesized strategy: the construction, its inputs and any finite table it produced."""

    construction: str
    params: dict = field(default_factory=dict)
    table: dict | None = None
    game: dict | None = None

    def to_dict(self) -> dict:
        d = {"artifact": VERSION, "construction": self.construction, "params": _canon(self.params)}
        if self.table is not None:
            d["table"] = _canon(self.table)
        if self.game is not None:
            d["game"] = self.game
        return d


def artifact_from_dict(d) -> Artifact:
    if not isinstance(d, dict) or d.get("artifact") != VERSION or "construction" not in d:
        raise ValidationError("not a strategy artifact")
    return Artifact(d["construction"], dict(d.get("params") or {}), d.get("table"), d.get("game"))


def dump_artifact(a: Artifact) -> str:
    return dump_yaml(a.to_dict())


def load_artifact(text: str) -> Artifact:
    return artifact_from_dict(load_yaml(text))


def read_artifact(path: str) -> Artifact:
    try:
        with open(path, encoding="utf-8") as fh:
            return load_artifact(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
