"""Banach-Mazur games on finite graphs: strategies, set-valued games and probabilities."""

__version__ = "0.1.0"

from .graph import (
    Continuation,
    FiniteGraph,
    PlayPrefix,
    PrefixFreeSet,
    concat,
    enumerate_continuations,
    parse_prefix,
    path_distance,
)
from .measure import ReasonableMeasure, cond_prob, cyl_prob, measure_from_weights, uniform, union_prob
from .conditions import GdCondition, OpenCondition, OracleCondition, ParityCondition, Verdict

__all__ = [
    "Continuation",
    "FiniteGraph",
    "GdCondition",
    "OpenCondition",
    "OracleCondition",
    "ParityCondition",
    "PlayPrefix",
    "PrefixFreeSet",
    "ReasonableMeasure",
    "Verdict",
    "concat",
    "cond_prob",
    "cyl_prob",
    "enumerate_continuations",
    "measure_from_weights",
    "parse_prefix",
    "path_distance",
    "uniform",
    "union_prob",
]
