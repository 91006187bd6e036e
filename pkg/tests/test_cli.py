"""Command-line front end: output shapes, exit codes, cache behaviour."""

import json

import pytest

from votekit import certified
from votekit.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from votekit.games import evaluate, parse_game


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse-level usage errors
        code = exc.code
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK, err
    return json.loads(out)


def test_index_worked_example(capsys):
    code, out, _ = run(capsys, "index", "[3;3,2,1,1]", "--ssi", "--pbi")
    assert code == EXIT_OK
    for cell in ("7/12", "1/4", "1/12", "1/2", "3/10", "1/10"):
        assert cell in out
    assert "0.5833333" in out  # 7/12 to seven places


def test_index_reports_cross_index_disagreement(capsys):
    data = run_json(capsys, "index", "[3;3,2,1,1]", "--ssi", "--pbi")
    game = data["results"]["games"][0]
    assert game["disagreement"]["l1"]["distance"] == "1/6"
    assert game["disagreement"]["linf"]["distance"] == "1/12"


def test_index_parse_error_exits_one(capsys):
    code, _, err = run(capsys, "index", "[3;3,2,1,1", "--ssi")
    assert code == EXIT_USAGE
    assert err.startswith("votekit:")


def test_eval_outcomes(capsys):
    code, out, _ = run(capsys, "eval", "[3;3,2,1,1]", "{1,2}", "{3,4}")
    assert code == EXIT_OK
    assert "win" in out and "lose" in out
    code, _, err = run(capsys, "eval", "[3;3,2,1,1]", "{1,9}")
    assert code == EXIT_USAGE


def test_tables_match_certified_counts(capsys):
    data = run_json(capsys, "tables", "--class", "wg", "--n", "3..6", "--index", "ssi")
    counts = {row["n"]: row["ssi"] for row in data["results"]["rows"]}
    assert counts == {3: 4, 4: 11, 5: 53, 6: 536}


def test_tables_json_is_stable_across_warm_runs(capsys):
    a = run_json(capsys, "tables", "--class", "cg", "--n", "4..5")
    b = run_json(capsys, "tables", "--class", "cg", "--n", "4..5")
    a.pop("timing")
    b.pop("timing")
    assert a == b


def test_tables_mismatch_exits_two(capsys, monkeypatch):
    monkeypatch.setitem(certified.DISTINCT_VECTOR_COUNTS[("wg", "ssi")], 4, 10)
    code, _, err = run(capsys, "tables", "--class", "wg", "--n", "4", "--index", "ssi")
    assert code == EXIT_MISMATCH
    assert "mismatch" in err


def test_enumerate_weighted_list(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "wg", "--n", "3", "--list")
    assert code == EXIT_OK
    for rep in certified.WEIGHTED_3_REPRESENTATIONS:
        assert rep in out


def test_enumerate_simple4(capsys):
    data = run_json(capsys, "enumerate", "--class", "sg4")
    assert data["results"]["count"] == 28
    assert data["results"]["weighted"] == 25


def test_enumerate_eight_needs_opt_in(capsys):
    code, _, err = run(capsys, "enumerate", "--class", "cg", "--n", "8")
    assert code == EXIT_USAGE
    assert "long-running" in err


def test_enumerate_nine_is_out_of_range(capsys):
    code, _, err = run(capsys, "enumerate", "--class", "cg", "--n", "9")
    assert code == EXIT_USAGE
    assert "284432730174" in err  # documented count, not enumerable here


def test_omega_zero_gap(capsys):
    code, out, _ = run(capsys, "omega", "--n", "5", "--index", "ssi", "--metric", "l1")
    assert code == EXIT_OK
    assert "0.0000000" in out


def test_omega_json_games_round_trip(capsys):
    data = run_json(capsys, "omega", "--n", "7", "--index", "pbi", "--metric", "linf")
    gaps = data["results"]["reports"]
    assert len(gaps) == 1
    assert gaps[0]["decimal"] == "0.0173913"
    texts = [a["game"] for a in gaps[0]["attaining"]]
    assert len(texts) == 2
    witness = "n=7; shiftminwin={2,3,5,6},{1,3,7},{3,4,5,6,7}"
    assert witness in texts
    for t in texts:
        g = parse_game(t)  # the grammar round-trips
        assert g.n == 7
    nearest = parse_game(gaps[0]["nearest"]["game"])
    assert evaluate(nearest, {1, 2}) in (0, 1)


def test_inverse_file_target_exact(capsys, tmp_path):
    f = tmp_path / "target.txt"
    f.write_text("n=4 index=ssi\n7/12 1/4 1/12 1/12\n")
    data = run_json(capsys, "inverse", "--target", str(f), "--metric", "l1")
    assert data["results"]["mode"] == "exact-min"
    assert data["results"]["distance"] == "0"
    game = parse_game(data["results"]["game"])
    assert game.n == 4


def test_inverse_rounded_target_needs_normalize(capsys, tmp_path):
    f = tmp_path / "target.txt"
    f.write_text("n=3 index=ssi\n0.333 0.333 0.333\n")
    code, _, err = run(capsys, "inverse", "--target", str(f))
    assert code == EXIT_USAGE
    assert "sum" in err
    code, _, _ = run(capsys, "inverse", "--target", str(f), "--normalize")
    assert code == EXIT_OK


def test_inverse_beta_heuristic_flagged(capsys):
    data = run_json(
        capsys, "inverse", "--target", "beta", "--n", "9", "--index", "ssi",
        "--budget", "60", "--seed", "0",
    )
    assert data["results"]["mode"] == "heuristic-upper-bound"
    assert data["config"]["seed"] == 0


def test_eu_subcommand(capsys, tmp_path):
    f = tmp_path / "pops.csv"
    f.write_text("A,5000\nB,3000\nC,1500\nD,400\nE,100\n")
    data = run_json(capsys, "eu", str(f), "--quantize", "1000")
    members = data["results"]["members"]
    assert [m["name"] for m in members] == ["A", "B", "C", "D", "E"]
    assert members[0]["share"] == "1/2"
    code, _, _ = run(capsys, "eu", str(tmp_path / "missing.csv"))
    assert code == EXIT_USAGE


def test_csv_format(capsys):
    code, out, _ = run(capsys, "tables", "--class", "wg", "--n", "3", "--format", "csv")
    assert code == EXIT_OK
    head = out.splitlines()[0]
    assert "," in head and "n" in head


def test_corrupt_cache_is_rebuilt(capsys, tmp_path):
    cache = tmp_path / "cache"
    code, _, _ = run(capsys, "tables", "--class", "cg", "--n", "3", "--cache-dir", str(cache))
    assert code == EXIT_OK
    victim = next(cache.glob("cg3*.cat"))
    victim.write_bytes(b"garbage")
    code, out, _ = run(capsys, "tables", "--class", "cg", "--n", "3", "--cache-dir", str(cache))
    assert code == EXIT_OK
    assert victim.read_bytes()[:2] != b"ga"  # rebuilt on disk


def test_config_echo_includes_run_fields(capsys):
    data = run_json(capsys, "omega", "--n", "4", "--index", "pbi", "--metric", "linf")
    cfg = data["config"]
    assert cfg["subcommand"] == "omega"
    assert cfg["n"] == 4
    assert "cache_dir" in cfg and "threads" in cfg
    assert isinstance(data["timing"]["seconds"], float)


def test_unknown_arguments_exit_one(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys, "tables", "--class", "wg", "--n", "3", "--frobnicate")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
