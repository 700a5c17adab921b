import json
from fractions import Fraction as Fr

import pytest

from outerspace.cli import main, run_experiment
from outerspace.words import FreeGroup
from outerspace.marked_graph import rose


F3 = FreeGroup(3)


@pytest.fixture
def graph_files(tmp_path):
    g1 = tmp_path / "g1.json"
    g2 = tmp_path / "g2.json"
    g1.write_text(json.dumps(rose(F3, [Fr(1, 3)] * 3).to_json()))
    g2.write_text(json.dumps(rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)]).to_json()))
    return str(g1), str(g2)


def test_dist_command(graph_files, capsys):
    g1, g2 = graph_files
    assert main(["dist", g1, g2, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["lambda"] == "3/2"


def test_optimal_map_command(graph_files, tmp_path, capsys):
    g1, g2 = graph_files
    dot = tmp_path / "map.dot"
    assert main(["optimal-map", g1, g2, "--emit-dot", str(dot), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["sigma"] == "3/2"
    assert out["tension_graph"] == [1]
    assert "digraph" in dot.read_text()


def test_fold_command(graph_files, tmp_path, capsys):
    g1, g2 = graph_files
    events = tmp_path / "events.jsonl"
    stats = tmp_path / "stats.csv"
    rc = main(["fold", "--from", g1, "--to", g2,
               "--emit-events", str(events), "--stats", str(stats),
               "--probe", "ab"])
    assert rc == 0
    lines = events.read_text().splitlines()
    assert lines
    first = json.loads(lines[0])
    assert "snapshot" in first and first["time"] == "0/1"
    assert stats.read_text().startswith("time,volume")


def test_simple_and_reduce_commands(capsys):
    assert main(["simple", "abc"]) == 0
    assert "simple" in capsys.readouterr().out
    assert main(["simple", "aabbcc"]) == 0
    assert "not simple" in capsys.readouterr().out
    assert main(["reduce", "abc", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["minimal_length"] == 1


def test_whitehead_graph_command(capsys):
    assert main(["whitehead-graph", "aabbcc"]) == 0
    assert "two-connected" in capsys.readouterr().out
    assert main(["whitehead-graph", "abc", "--dot"]) == 0
    assert "graph" in capsys.readouterr().out


def test_project_command(graph_files, capsys):
    g1, _ = graph_files
    assert main(["project", g1, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out) == 6


def test_ball_and_ffdist(tmp_path, capsys):
    ball = tmp_path / "ball.json"
    assert main(["ball", "--bound", "4", "--products", "2",
                 "--out", str(ball)]) == 0
    capsys.readouterr()
    assert main(["ffdist", "a", "a,b", "--ball", str(ball)]) == 0
    assert "1" in capsys.readouterr().out


def test_qg_check_command(graph_files, tmp_path, capsys):
    g1, g2 = graph_files
    events = tmp_path / "events.jsonl"
    main(["fold", "--from", g1, "--to", g2, "--emit-events", str(events)])
    capsys.readouterr()
    assert main(["qg-check", "--path", str(events), "--K", "6"]) == 0
    assert "certificate" in capsys.readouterr().out


def test_usage_error_exit_code():
    assert main(["dist", "/nonexistent-1", "/nonexistent-2"]) == 2


def test_experiment_determinism_across_workers(tmp_path):
    reports = {}
    for workers in (1, 4, 8):
        _, rep = run_experiment("distance-oracle", seed=99, instances=6,
                                workers=workers)
        reports[workers] = rep
    assert reports[1] == reports[4] == reports[8]


def test_experiment_rerun_identical(tmp_path):
    _, rep1 = run_experiment("whitehead-oracle", seed=5, instances=8)
    _, rep2 = run_experiment("whitehead-oracle", seed=5, instances=8)
    assert rep1 == rep2


def test_experiment_exit_codes(tmp_path, capsys):
    rc = main(["experiment", "--suite", "distance-oracle",
               "--instances", "3", "--seed", "1"])
    assert rc == 0
