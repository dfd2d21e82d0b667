import io
import json
from pathlib import Path

import pytest

from bmgames.cli import main

GAMES = Path(__file__).parent.parent / "games"


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], stdout=buf)
    text = buf.getvalue()
    return code, [json.loads(line) for line in text.splitlines()], text


def last(records, kind):
    return [r for r in records if r["type"] == kind][-1]


def test_header_comes_first():
    code, recs, _ = run("corpus", "list")
    assert code == 0
    assert recs[0]["type"] == "header" and recs[0]["command"] == "corpus list"
    assert {r["name"] for r in recs[1:]} >= {"ex_pos", "ex_nobound", "witnesses"}


def test_play_unbounded_winner_wins():
    code, recs, _ = run("play", GAMES / "nobound.yaml", "--rounds", 20)
    assert code == 0
    assert last(recs, "result")["outcome"] == "In"


def test_play_is_reproducible_under_a_seed():
    a = run("play", GAMES / "nobound.yaml", "--seed", 5)[2]
    b = run("play", GAMES / "nobound.yaml", "--seed", 5)[2]
    assert a == b


def test_play_singleton_violation_exits_3():
    code, recs, _ = run("play", GAMES / "singleton_violation.yaml")
    assert code == 3
    err = last(recs, "error")
    assert err["error"] == "IllegalSetMove"


def test_play_alpha_game_against_open_cylinder_tracks_probability():
    code, recs, _ = run("play", GAMES / "cyl000.yaml", "--rounds", 10)
    assert code == 0
    moves = [r for r in recs if r["type"] == "move"]
    assert all("cond_prob" in r and "offered" in r for r in moves)
    assert last(recs, "result")["outcome"] == "Out"


def test_analyze_truncated_union_exact():
    code, recs, _ = run("analyze", GAMES / "pos_truncated.yaml", "--mode", "exact")
    assert code == 0
    assert last(recs, "verdict")["value"] == "31/32"


def test_analyze_buchi_exact_and_qualitative():
    code, recs, _ = run("analyze", GAMES / "buchi.yaml")
    v = last(recs, "verdict")
    assert code == 0 and v["value"] == "1" and v["accepting_bsccs"] >= 1
    code, recs, _ = run("analyze", GAMES / "buchi.yaml", "--mode", "qualitative")
    assert last(recs, "verdict")["kind"] == "one"


def test_analyze_montecarlo():
    code, recs, _ = run("analyze", GAMES / "pos_truncated.yaml", "--mode", "montecarlo", "--samples", 500, "--depth", 21)
    assert code == 0
    lo, hi = last(recs, "montecarlo")["interval"]
    assert lo <= 31 / 32 <= hi
    code, recs, _ = run("analyze", GAMES / "pos_truncated.yaml", "--mode", "montecarlo", "--samples", 0)
    assert code == 2


def test_synthesize_thm4_then_play_the_artifact(tmp_path):
    art = tmp_path / "gd.yaml"
    code, recs, _ = run("synthesize", GAMES / "omegas_alpha.yaml", "--construction", "thm4", "--games", 5, "--rounds", 2000, "--out", art)
    assert code == 0
    assert last(recs, "validation")["min_levels"] >= 5
    assert "construction: thm4" in art.read_text()
    game = tmp_path / "replay.yaml"
    game.write_text(
        "corpus: ex_omegaS\n"
        f"strategies:\n  pl0: {{kind: artifact, path: {art}}}\n  pl1: {{kind: random-selector, max_len: 3}}\n"
        "alpha: '1/2'\nbudget: 10000\n"
    )
    code, recs, _ = run("play", game, "--rounds", 2)
    assert code == 0
    assert last(recs, "result")["levels"] >= 1


def test_synthesize_thm5_spoils_every_lifted_strategy():
    code, recs, _ = run("synthesize", GAMES / "cyl000.yaml", "--construction", "thm5", "--games", 20, "--rounds", 12)
    assert code == 0
    assert last(recs, "artifact")["params"]["P"] == "1/4"
    assert last(recs, "validation")["outcomes"] == {"Out": 20}


def test_synthesize_prop5_without_tables_names_the_input():
    code, recs, _ = run("synthesize", GAMES / "nobound.yaml", "--construction", "prop5")
    assert code == 2
    assert "inputs.tables" in last(recs, "error")["message"]


def test_synthesize_prop5_with_tables():
    code, recs, _ = run("synthesize", GAMES / "buchi.yaml", "--construction", "prop5")
    assert code == 0


def test_synthesize_bad_alpha():
    code, recs, _ = run("synthesize", GAMES / "cyl000.yaml", "--construction", "thm5", "--alpha", "2")
    assert code == 2


def test_corpus_run_single_bundle():
    code, recs, _ = run("corpus", "run", "ex_pos", "--seed", 11)
    assert code == 0
    assert last(recs, "summary") == {"type": "summary", "bundles": 1, "failed": 0}
    assert all("seconds" not in r for r in recs if r["type"] == "fact")


def test_corpus_run_unknown_bundle():
    code, recs, _ = run("corpus", "run", "ex_missing")
    assert code == 2


def test_missing_file_exits_2():
    code, _, _ = run("play", "/nonexistent.yaml")
    assert code == 2


def test_bad_budget_environment(monkeypatch):
    monkeypatch.setenv("BMGAMES_BUDGET", "lots")
    code, recs, _ = run("play", GAMES / "nobound.yaml")
    assert code == 2
    assert "BMGAMES_BUDGET" in last(recs, "error")["message"]


def test_budget_environment_reaches_the_header(monkeypatch):
    monkeypatch.setenv("BMGAMES_BUDGET", "77")
    _, recs, _ = run("analyze", GAMES / "pos_truncated.yaml")
    assert recs[0]["budget"] == 77


@pytest.mark.parametrize("argv", [[], ["play"], ["analyze", "x", "--mode", "fast"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv, stdout=io.StringIO())
    assert exc.value.code == 2
