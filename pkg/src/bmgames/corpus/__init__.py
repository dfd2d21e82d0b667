"""Registry of example games with their strategies and expected facts."""

from __future__ import annotations

from importlib import import_module

from ..errors import UnknownBundle
from .base import ASSERTED, SEEDS, Fact, FactResult, GameBundle, Report, run_facts

_MODULES = {
    "ex_nobound": "ex_nobound",
    "ex_nomove": "ex_nomove",
    "ex_wwR": "ex_wwr",
    "ex_pos": "ex_pos",
    "ex_omegaS": "ex_omegas",
    "ex_rho_target": "ex_rho_target",
    "ex_phi_lastmove": "ex_phi_lastmove",
    "ex_phi_bounded": "ex_phi_bounded",
    "witnesses": "witnesses",
}

_REJECTED = {
    "ex_infinite": "the complete graph on the naturals is infinite; only finite graphs are supported",
    "ex_GN": "the complete graph on the naturals is infinite; only finite graphs are supported",
}

# (stronger kind, weaker kind) -> (bundle, fact).  "implies" edges are
# conversions that run; "separates" edges are games won by the first
# kind where a counter-strategy beats every sampled strategy of the second.
TAXONOMY = {
    ("implies", "general", "length-counting"): ("witnesses", "fold_replay_and_in"),
    ("implies", "positional family", "move-counting"): ("witnesses", "family_fibers_match_phi"),
    ("implies", "bounded move-counting", "positional"): ("witnesses", "threaded_lassos_accepting"),
    ("implies", "bounded", "alpha"): ("witnesses", "bounded_to_alpha_singletons"),
    ("implies", "move-counting", "alpha"): ("witnesses", "movalpha_plays_in_gn_form"),
    ("separates", "move-counting", "bounded"): ("ex_nobound", "counter_keeps_ones_below_initial_zeros"),
    ("separates", "bounded", "move-counting"): ("ex_nomove", "counter_keeps_play_on_rho"),
    ("separates", "last-move", "alpha"): ("ex_wwR", "P(W_2)=0"),
    ("separates", "length-counting", "move-counting"): ("ex_pos", "counters_keep_triangular_positions_zero"),
    ("separates", "move-counting", "positional"): ("ex_omegaS", "counter_caps_zero_runs"),
    ("separates", "bounded length-counting", "positional"): ("ex_rho_target", "counter_leaves_only_the_opening_match"),
    ("separates", "bounded last-move", "positional"): ("ex_phi_lastmove", "counter_avoids_reply_letters"),
    ("separates", "bounded", "bounded length-counting"): ("ex_phi_bounded", "counter_zero_matches_over_3_checkpoints"),
}


def names() -> list[str]:
    return list(_MODULES)


def get(name: str) -> GameBundle:
    if name in _REJECTED:
        raise UnknownBundle(f"{name}: {_REJECTED[name]}")
    if name not in _MODULES:
        raise UnknownBundle(f"unknown bundle {name!r}; known: {', '.join(_MODULES)}")
    return import_module(f".{_MODULES[name]}", __name__).build()


__all__ = [
    "ASSERTED",
    "SEEDS",
    "TAXONOMY",
    "Fact",
    "FactResult",
    "GameBundle",
    "Report",
    "get",
    "names",
    "run_facts",
]
