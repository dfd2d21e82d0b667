"""Command-line front end.

Every command writes line-delimited JSON records to stdout, starting with a
header record.  Exit codes: 0 success, 1 a corpus fact failed, 2 invalid
input, 3 a strategy or construction failed at run time.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from fractions import Fraction

from . import __version__, corpus
from .analyzer import (
    ProductChain,
    is_prob_one,
    monte_carlo,
    prob_open_exact,
    prob_parity_exact,
    qualitative_parity,
)
from .conditions import OpenCondition, ParityCondition
from .engine import (
    MeasureRandomPlayer,
    MeasureRandomSelector,
    alpha_for_gd_prob_one,
    alpha_from_move_counting,
    alpha_lift,
    check_gn_form,
    play_alpha_game,
    play_classical,
    random_bounded_strategy,
    spoiler_for_open,
)
from .errors import StrategyError, ValidationError
from .fileformat import Artifact, dump_artifact, fmt_rational, parse_rational, read_game
from .graph import Continuation, format_prefix, format_steps, parse_prefix, parse_steps
from .measure import cond_prob
from .resolve import (
    budget_of,
    build_alpha_strategy,
    build_game,
    build_selector,
    build_strategy,
    table_of,
)
from .strategies import (
    MoveCounting,
    Positional,
    bounded_move_counting_to_positional,
    diagonal_phi,
    fold_replay,
    length_counting_from_general,
    move_counting_from_positional_family,
)

BUDGET_ENV = "BMGAMES_BUDGET"


class Output:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def emit(self, **record):
        self.stream.write(json.dumps(record, ensure_ascii=False, default=str) + "\n")


def _env_budget() -> int | None:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValidationError(f"{BUDGET_ENV} must be positive")
    return value


def _seed(args, gf) -> int:
    if args.seed is not None:
        return args.seed
    return gf.seeds[0] if gf.seeds else 0


def _header(out: Output, command: str, seed, budget, **extra):
    out.emit(type="header", version=__version__, command=command, seed=seed, budget=budget, **extra)


def _show(x):
    return fmt_rational(x) if isinstance(x, Fraction) else x


# -- play ---------------------------------------------------------------------------


def cmd_play(args, out: Output) -> int:
    gf = read_game(args.file)
    game = build_game(gf)
    seed = _seed(args, gf)
    budget = budget_of(gf, _env_budget())
    _header(out, "play", seed, budget, alpha=_show(gf.alpha))
    specs = gf.strategies
    if "pl0" not in specs:
        raise ValidationError("strategies.pl0 is required")
    pl1_spec = specs.get("pl1", {"kind": "random"})
    if gf.alpha is None:
        pl0 = build_strategy(specs["pl0"], game, seed)
        pl1 = build_strategy(pl1_spec, game, seed)
        t = play_classical(game.graph, game.v0, pl1, pl0, args.rounds, game.condition)
    else:
        if isinstance(pl1_spec, dict) and pl1_spec.get("kind") == "random":
            pl1_spec = dict(pl1_spec, kind="random-selector")
        pl0 = build_alpha_strategy(specs["pl0"], game, gf.alpha, budget, seed)
        pl1 = build_selector(pl1_spec, game, gf.alpha, seed)
        track = None
        if isinstance(game.condition, OpenCondition) and game.condition.is_finite:
            gens = game.condition.generators
            track = lambda p: cond_prob(game.measure, gens, p)  # noqa: E731
        t = play_alpha_game(game.graph, game.v0, game.measure, pl0, pl1, args.rounds, game.condition, gf.alpha, track=track)
    for r in t.records:
        rec = {"index": r.index, "player": r.player, "anchor": r.move.anchor, "steps": format_steps(r.move.steps)}
        if gf.alpha is not None:
            rec["offered"] = r.offered
        if r.cond_prob is not None:
            rec["cond_prob"] = fmt_rational(r.cond_prob)
        out.emit(type="move", **rec)
    out.emit(
        type="result",
        outcome=t.outcome,
        reason=t.reason or "rounds exhausted",
        length=t.prefix.length,
        levels=t.meta.get("levels"),
        prefix=format_prefix(t.prefix) if t.prefix.length <= 200 else None,
    )
    return 0


# -- analyze ------------------------------------------------------------------------


def _bscc_summary(m, W: ParityCondition, v0) -> dict:
    chain = ProductChain(m, W, v0)
    comps = chain.bsccs()
    acc = [c for c in comps if chain.accepting(c)]
    return {"bsccs": len(comps), "accepting_bsccs": len(acc), "product_states": len(chain.states)}


def cmd_analyze(args, out: Output) -> int:
    gf = read_game(args.file)
    game = build_game(gf)
    seed = _seed(args, gf)
    budget = budget_of(gf, _env_budget())
    _header(out, "analyze", seed, budget, mode=args.mode)
    m, W, v0 = game.measure, game.condition, game.v0
    if args.mode == "montecarlo":
        if args.samples < 1:
            raise ValidationError("samples must be at least 1")
        r = monte_carlo(m, W, v0, args.depth, args.samples, seed)
        lo, hi = r.interval.lower, r.interval.upper
        out.emit(
            type="montecarlo",
            samples=r.samples,
            in_count=r.in_count,
            out_count=r.out_count,
            unknown_count=r.unknown_count,
            interval=[round(float(lo), 6), round(float(hi), 6)],
            level_counts=list(r.level_counts),
        )
        return 0
    rec: dict = {}
    if args.mode == "exact" and isinstance(W, ParityCondition):
        value = prob_parity_exact(m, W, v0)
        rec = {"kind": "exact", "value": fmt_rational(value), **_bscc_summary(m, W, v0)}
    elif args.mode == "exact" and isinstance(W, OpenCondition) and W.is_finite:
        rec = {"kind": "exact", "value": fmt_rational(prob_open_exact(m, W))}
    elif args.mode == "qualitative" and isinstance(W, ParityCondition):
        rec = {"kind": qualitative_parity(m, W, v0), **_bscc_summary(m, W, v0)}
    else:
        rec = is_prob_one(m, W, v0, budget=min(budget, 400)).to_dict()
    out.emit(type="verdict", **rec)
    return 0


# -- synthesize -------------------------------------------------------------------------


def _need(gf, key: str, construction: str):
    if key not in gf.inputs:
        raise ValidationError(f"{construction} needs inputs.{key}")
    return gf.inputs[key]


def _alpha(args, gf, construction: str) -> Fraction:
    alpha = parse_rational(args.alpha) if args.alpha is not None else gf.alpha
    if alpha is None:
        raise ValidationError(f"{construction} needs alpha (file key or --alpha)")
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie strictly between 0 and 1")
    return alpha


def _h_spec(gf, construction):
    spec = gf.inputs.get("h") or gf.strategies.get("pl0")
    if spec is None:
        raise ValidationError(f"{construction} needs inputs.h (a move-counting strategy)")
    return spec


def _synth_prop2(args, gf, game, seed, budget):
    source = gf.strategies.get("pl0")
    if source is None:
        raise ValidationError("prop2 needs strategies.pl0 (the strategy to fold)")
    f = build_strategy(source, game, seed)
    h = length_counting_from_general(f, game.graph, game.v0)
    outcomes = Counter()
    for i in range(args.games):
        pl1 = MeasureRandomPlayer(game.measure, 3, seed=f"{seed}/{i}")
        t = play_classical(game.graph, game.v0, pl1, h, args.rounds, game.condition)
        fold_replay(t.prefix, f, game.graph)
        outcomes[t.outcome] += 1
    sample = {v: {n: format_steps(h.rule(v, n)) for n in (1, 2)} for v in game.graph.vertices}
    return Artifact("prop2", {"source": source}, sample), {"replays": args.games, "outcomes": dict(outcomes)}


def _synth_prop4(args, gf, game, seed, budget):
    family = _need(gf, "family", "prop4")
    fam = [Positional({k: parse_steps(str(v)) for k, v in t.items()}, name=f"f_{i + 1}") for i, t in enumerate(family)]
    h = move_counting_from_positional_family(fam)
    N = sum(range(1, len(fam) + 1))
    t = play_classical(game.graph, game.v0, MeasureRandomPlayer(game.measure, 3, seed=seed), h, N)
    counts = Counter()
    n = 0
    for player, c in t.prefix.moves():
        if player != 0:
            continue
        n += 1
        k = diagonal_phi(n)
        if fam[k - 1](c.anchor).steps != c.steps:
            raise StrategyError(f"move {n} does not follow table {k}")
        counts[k] += 1
    return Artifact("prop4", {"family": family}), {"moves": N, "fibers": {str(k): v for k, v in sorted(counts.items())}}


def _synth_prop5(args, gf, game, seed, budget):
    raw = gf.inputs.get("tables")
    if raw is None:
        raise ValidationError("prop5 needs inputs.tables: the word table of each bottom SCC")
    h = build_strategy(_h_spec(gf, "prop5"), game, seed)
    if not isinstance(h, MoveCounting):
        raise ValidationError("prop5 needs a move-counting strategy")
    tables = {}
    for key, words in raw.items():
        conts = []
        for w in words:
            p = parse_prefix(str(w))
            conts.append(Continuation(p.start, p.steps))
        tables[int(key) if str(key).isdigit() else key] = conts
    f = bounded_move_counting_to_positional(h, game.graph, tables, gf.inputs.get("bound"))
    report = {}
    if isinstance(game.condition, ParityCondition):
        from .corpus.witnesses import threaded_lassos

        ok, total = threaded_lassos(f, game.condition, game.graph)
        report = {"lassos": total, "accepting": ok}
        if ok != total:
            raise StrategyError(f"only {ok}/{total} lassos accepting")
    return Artifact("prop5", {"h": _h_spec(gf, "prop5")}, table_of(f, game.graph)), report


def _synth_movalpha(args, gf, game, seed, budget):
    alpha = _alpha(args, gf, "movalpha")
    spec = _h_spec(gf, "movalpha")
    h = build_strategy(spec, game, seed)
    if not isinstance(h, MoveCounting):
        raise ValidationError("movalpha needs a move-counting strategy")
    s = alpha_from_move_counting(h, game.measure, alpha, budget)
    for i in range(args.games):
        t = play_alpha_game(game.graph, game.v0, game.measure, s, MeasureRandomSelector(game.measure, 2, seed=f"{seed}/{i}"), 2)
        if not check_gn_form(t, s):
            raise StrategyError(f"play {i} is not of the g_n form")
    return Artifact("movalpha", {"h": spec, "alpha": alpha, "budget": budget}), {"games": args.games, "gn_form": True}


def _synth_thm4(args, gf, game, seed, budget):
    alpha = _alpha(args, gf, "thm4")
    s = alpha_for_gd_prob_one(game.condition, game.measure, alpha, budget)
    levels = []
    outcomes = Counter()
    for i in range(args.games):
        sel = MeasureRandomSelector(game.measure, 3, seed=f"{seed}/{i}")
        stop = lambda t: t.meta.get("levels", 0) >= args.levels  # noqa: E731
        t = play_alpha_game(game.graph, game.v0, game.measure, s, sel, args.rounds, game.condition, stop=stop)
        levels.append(t.meta.get("levels", 0))
        outcomes[t.outcome] += 1
    return Artifact("thm4", {"alpha": alpha, "budget": budget}), {
        "games": args.games,
        "outcomes": dict(outcomes),
        "min_levels": min(levels) if levels else 0,
    }


def _synth_thm5(args, gf, game, seed, budget):
    alpha = _alpha(args, gf, "thm5")
    sp = spoiler_for_open(game.condition, game.measure, alpha, game.v0)
    outcomes = Counter()
    for i in range(args.games):
        f = random_bounded_strategy(game.graph, 2, seed=f"{seed}/{i % 10}")
        pl0 = alpha_lift(f, game.measure, alpha)
        t = play_alpha_game(game.graph, game.v0, game.measure, pl0, sp, args.rounds, game.condition)
        outcomes[t.outcome] += 1
    art = Artifact(
        "thm5",
        {"alpha": alpha, "search_depth": sp.search_depth, "opening": format_steps(sp.opening.steps), "P": sp.P, "I_W": sp.I_W},
    )
    return art, {"games": args.games, "outcomes": dict(outcomes)}


SYNTH = {
    "prop2": _synth_prop2,
    "prop4": _synth_prop4,
    "prop5": _synth_prop5,
    "movalpha": _synth_movalpha,
    "thm4": _synth_thm4,
    "thm5": _synth_thm5,
}


def cmd_synthesize(args, out: Output) -> int:
    gf = read_game(args.file)
    game = build_game(gf)
    seed = _seed(args, gf)
    budget = budget_of(gf, _env_budget())
    _header(out, "synthesize", seed, budget, construction=args.construction)
    art, report = SYNTH[args.construction](args, gf, game, seed, budget)
    art.game = gf.to_dict()
    text = dump_artifact(art)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.emit(type="artifact", construction=art.construction, path=args.out, params={k: _show(v) for k, v in art.params.items()})
    out.emit(type="validation", **{k: _show(v) for k, v in report.items()})
    return 0


# -- corpus ---------------------------------------------------------------------------


def cmd_corpus(args, out: Output) -> int:
    if args.action == "list":
        _header(out, "corpus list", None, None)
        for name in corpus.names():
            b = corpus.get(name)
            out.emit(type="bundle", name=name, description=b.description, facts=len(b.facts))
        return 0
    names = corpus.names() if args.name in (None, "all") else [args.name]
    bundles = [corpus.get(n) for n in names]
    seeds = tuple(args.seed) if args.seed else corpus.SEEDS
    _header(out, "corpus run", list(seeds), None, bundles=names)
    failed = 0
    for b in bundles:
        report = corpus.run_facts(b, seeds)
        for r in report.results:
            d = r.to_dict()
            if not args.timings:
                d.pop("seconds", None)
            out.emit(type="fact", **d)
        failed += len(report.failures())
    out.emit(type="summary", bundles=len(bundles), failed=failed)
    return 1 if failed else 0


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bmgames", description="Banach-Mazur game workbench")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="run one play of a game file")
    play.add_argument("file")
    play.add_argument("--rounds", type=int, default=20)
    play.add_argument("--seed", type=int)

    an = sub.add_parser("analyze", help="probability of the winning set")
    an.add_argument("file")
    an.add_argument("--mode", choices=("exact", "qualitative", "montecarlo"), default="exact")
    an.add_argument("--depth", type=int, default=30)
    an.add_argument("--samples", type=int, default=1000)
    an.add_argument("--seed", type=int)

    sy = sub.add_parser("synthesize", help="build a strategy by one of the constructions")
    sy.add_argument("file")
    sy.add_argument("--construction", choices=sorted(SYNTH), required=True)
    sy.add_argument("--alpha")
    sy.add_argument("--out", "-o")
    sy.add_argument("--games", type=int, default=10)
    sy.add_argument("--rounds", type=int, default=8)
    sy.add_argument("--levels", type=int, default=5, help="thm4: stop a validation game once this many levels hold")
    sy.add_argument("--seed", type=int)

    co = sub.add_parser("corpus", help="list or run the example bundles")
    co.add_argument("action", choices=("list", "run"))
    co.add_argument("name", nargs="?")
    co.add_argument("--seed", type=int, action="append")
    co.add_argument("--timings", action="store_true")
    return p


COMMANDS = {"play": cmd_play, "analyze": cmd_analyze, "synthesize": cmd_synthesize, "corpus": cmd_corpus}


def main(argv=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(stdout)
    try:
        return COMMANDS[args.command](args, out)
    except (ValidationError, ValueError, KeyError) as exc:
        out.emit(type="error", error=type(exc).__name__, message=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # any other failure happened while running a strategy
        out.emit(type="error", error=type(exc).__name__, message=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
