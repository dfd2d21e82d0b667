"""Game bundles and their fact checks."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from ..graph import FiniteGraph
from ..measure import ReasonableMeasure

SEEDS = (11, 23, 47)

ASSERTED = "asserted (cited)"


@dataclass(frozen=True)
class Fact:
    """One expected outcome.

    ``check(bundle, seed)`` returns the observed value, or an
    ``(observed, detail)`` pair; the fact passes when the observed value
    equals ``expected``.  A fact without a check is a citation record.
    """

    name: str
    expected: object
    check: Callable | None = None
    citation: str = ""
    seeded: bool = True

    @property
    def runnable(self) -> bool:
        return self.check is not None


@dataclass
class GameBundle:
    name: str
    graph: FiniteGraph
    v0: object
    measure: ReasonableMeasure
    condition: object
    description: str = ""
    strategies: dict = field(default_factory=dict)
    facts: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def fact(self, name: str) -> Fact:
        for f in self.facts:
            if f.name == name:
                return f
        raise KeyError(name)


@dataclass
class FactResult:
    bundle: str
    fact: str
    seed: object
    status: str  # pass | fail | asserted (cited)
    observed: object = None
    expected: object = None
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        d = {"bundle": self.bundle, "fact": self.fact, "seed": self.seed, "status": self.status}
        if self.status != ASSERTED:
            d["observed"] = _show(self.observed)
            d["expected"] = _show(self.expected)
        if self.detail:
            d["detail"] = self.detail
        d["seconds"] = round(self.seconds, 3)
        return d


def _show(x):
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    results: list

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if r.status == "fail"]


def run_facts(bundle: GameBundle, seeds=SEEDS) -> Report:
    results = []
    for fact in bundle.facts:
        if not fact.runnable:
            results.append(FactResult(bundle.name, fact.name, None, ASSERTED, detail=fact.citation))
            continue
        for seed in seeds if fact.seeded else (None,):
            t0 = time.perf_counter()
            try:
                out = fact.check(bundle, seed)
                detail = ""
                if isinstance(out, tuple) and len(out) == 2 and isinstance(out[1], str):
                    out, detail = out
                status = "pass" if out == fact.expected else "fail"
            except Exception as exc:  # a crashing check is a failed fact
                out, detail, status = None, f"{type(exc).__name__}: {exc}", "fail"
            results.append(
                FactResult(bundle.name, fact.name, seed, status, out, fact.expected, detail, time.perf_counter() - t0)
            )
    return Report(results)
