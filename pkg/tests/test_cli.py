import json
import subprocess
import sys

import pytest

from modelacq.cli import main

ROVER_GOALS = [
    "communicated_soil_data waypoint2;communicated_rock_data waypoint3;communicated_image_data objective1 high_res",
    "communicated_soil_data waypoint3;communicated_rock_data waypoint2;communicated_image_data objective1 high_res",
]


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def walks(tmp_path):
    out = tmp_path / "tr.json"
    assert run("--seed", 4, "generate", "--task", "blocksworld-4", "--length", 12, "--count", 3, "--out", out) == 0
    return out


def test_full_pipeline_observer(tmp_path, walks):
    obs = tmp_path / "obs.json"
    assert run("tokenize", "--in", walks, "--type", "identity", "--out", obs) == 0
    assert run("extract", "--in", obs, "--method", "observer", "--out-dir", tmp_path / "m") == 0
    for f in ("model.json", "domain.pddl", "details.txt"):
        assert (tmp_path / "m" / f).read_text()
    assert "(define (domain learned)" in (tmp_path / "m" / "domain.pddl").read_text()


def test_arms_pipeline_on_rover(tmp_path, capsys):
    tr, obs = tmp_path / "tr.json", tmp_path / "obs.json"
    args = ["generate", "--task", "rover-1", "--out", tr]
    for g in ROVER_GOALS:
        args += ["--goal", g]
    assert run(*args) == 0
    assert run("--seed", 1, "tokenize", "--in", tr, "--type", "partial", "--percent-missing", 0.6, "--out", obs) == 0
    data = json.loads(obs.read_text())
    assert data[0]["provenance"]["casts"][-1]["percent_missing"] == 0.6
    assert run("extract", "--in", obs, "--method", "arms", "--task", "rover-1", "--out-dir", tmp_path / "m",
               "--dump-wcnf", tmp_path / "enc.wcnf") == 0
    assert (tmp_path / "enc.wcnf").read_text().startswith("p wcnf")
    assert "communicate_soil_data" in capsys.readouterr().out


def test_same_seed_same_bytes(tmp_path):
    outs = []
    for i in range(2):
        tr, obs = tmp_path / f"tr{i}.json", tmp_path / f"obs{i}.json"
        run("--seed", 9, "generate", "--task", "gripper-2", "--method", "heuristic", "--count", 3, "--out", tr)
        run("--seed", 9, "tokenize", "--in", tr, "--type", "noisy", "--flip-prob", 0.1, "--out", obs)
        outs.append((tr.read_bytes(), obs.read_bytes()))
    assert outs[0] == outs[1]


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MACQ_SEED", "9")
    run("generate", "--task", "gripper-2", "--count", 2, "--out", tmp_path / "a.json")
    monkeypatch.delenv("MACQ_SEED")
    run("--seed", 9, "generate", "--task", "gripper-2", "--count", 2, "--out", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    monkeypatch.setenv("MACQ_SEED", "nope")
    assert run("generate", "--task", "gripper-2", "--out", tmp_path / "c.json") == 2


def test_goal_sampling_and_csv(tmp_path):
    tr = tmp_path / "tr.json"
    assert run("generate", "--task", "blocksworld-4", "--method", "goals", "--k", 6, "--g", 2, "--num-goals", 5,
               "--csv-dir", tmp_path / "csv", "--out", tr) == 0
    files = sorted((tmp_path / "csv").glob("*.csv"))
    assert files
    back = tmp_path / "back.json"
    assert run("generate", "--from-csv", *files, "--out", back) == 0
    a, b = json.loads(tr.read_text()), json.loads(back.read_text())
    assert [t["steps"] for t in a["traces"]] == [t["steps"] for t in b["traces"]]


def test_incompatible_tokens_exit_1(tmp_path, walks, capsys):
    obs = tmp_path / "sid.json"
    run("tokenize", "--in", walks, "--type", "stateid", "--out", obs)
    assert run("extract", "--in", obs, "--method", "observer", "--out-dir", tmp_path / "m") == 1
    assert "StateID" in capsys.readouterr().err


def test_usage_errors_exit_2(tmp_path, walks):
    assert run("generate", "--bogus") == 2
    assert run("tokenize", "--in", tmp_path / "missing.json", "--type", "identity", "--out", tmp_path / "x") == 2
    assert run("tokenize", "--in", walks, "--type", "identity", "--percent-missing", 0.2, "--out", tmp_path / "x") == 2
    assert run("tokenize", "--in", walks, "--type", "partial", "--out", tmp_path / "x") == 2
    assert run("generate", "--task", "nope", "--out", tmp_path / "x") == 2
    assert run("extract", "--in", walks, "--method", "arms", "--out-dir", tmp_path / "m") != 0


def test_bad_probability_exit_1(tmp_path, walks):
    assert run("tokenize", "--in", walks, "--type", "partial", "--percent-missing", 1.5, "--out", tmp_path / "x") == 1


def test_recommend_and_validate(tmp_path, capsys):
    assert run("validate") == 0
    assert run("recommend", "--json", tmp_path / "r.json", "--dimacs", tmp_path / "t.cnf", "-k", 3) == 0
    out = capsys.readouterr().out
    assert "Neighbor 3" in out and "Neighbor 4" not in out
    assert len(json.loads((tmp_path / "r.json").read_text())["neighbors"]) == 3
    assert (tmp_path / "t.cnf").read_text().startswith("p cnf 23")
    assert run("recommend", "--reverse") == 0


def test_validate_reports_invalid_entry(tmp_path, capsys):
    p = tmp_path / "tax.yaml"
    p.write_text("features: [a, b]\nconstraints: [{name: ab, clause: [-a, b]}]\n"
                 "entries: [{id: x, cube: [a, -b]}]\n")
    assert run("validate", "--taxonomy", p) == 1
    assert "x: violates ab" in capsys.readouterr().out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "modelacq", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "generate" in r.stdout


def test_wrong_file_kind_exit_1(tmp_path, walks):
    assert run("extract", "--in", walks, "--method", "observer", "--out-dir", tmp_path / "m") == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("tokenize", "--in", bad, "--type", "identity", "--out", tmp_path / "x") == 1
