import csv
import functools
import json

import numpy as np
import pytest

from fdlab import cli, construction, lemma, measures


def _rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def small_spec(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"s": 0.8, "b": 0.3, "l": [2, 5, 10], "depth": 13}))
    return path


def test_construct_small_spec(tmp_path, small_spec):
    out = tmp_path / "out"
    assert cli.main(["--out", str(out), "construct", "--spec", str(small_spec), "--oracle"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["lambda_sum"] == "1"
    assert summary["header"]["params"]["spec"]["m"] == [1, 2, 3]
    assert all(o["passed"] for o in summary["oracles"])
    assert any(o["name"] == "stage-mass enumeration" and "skipped" not in o["detail"]
               for o in summary["oracles"])
    bounds = {b["k"]: b["bound"] for b in summary["mass_of_f_infinite_bound"]}
    assert bounds == {1: "7/8", 2: "3/8", 3: "1/8"}
    rows = _rows(out / "stages.csv")
    assert {(r["k"], r["j"]) for r in rows} == {("1", "2")}
    sets = json.loads((out / "sets.json").read_text())["sets"]
    assert sets["block-1-zero"]["lebesgue"] == "1/2"
    assert (out / "stages.csv").read_text().startswith("# {")


def test_construct_is_deterministic(tmp_path, small_spec):
    for name in ("a", "b"):
        assert cli.main(["--out", str(tmp_path / name), "construct", "--spec", str(small_spec)]) == 0
    for f in ("stages.csv", "sets.json", "summary.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_construct_inconclusive_exit(tmp_path, small_spec, monkeypatch):
    weak = functools.partial(construction.witness_frequency_bound, slack=-10.0)
    monkeypatch.setattr(construction, "witness_frequency_bound", weak)
    assert cli.main(["--out", str(tmp_path), "construct", "--spec", str(small_spec)]) == 2


def test_construct_candidate_on_b(tmp_path, small_spec):
    code = cli.main(["--out", str(tmp_path), "construct", "--spec", str(small_spec),
                     "--candidate", "lebesgue-B"])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert [st["k"] for st in summary["stages"]] == [2]


@pytest.mark.parametrize("cfg", [
    {"s": 0.7, "b": 0.3, "l": [2, 5]},
    {"s": 0.8, "l": [2, 5]},
    {"s": 0.8, "b": 0.3, "l": [2, 5], "depth": 29},
])
def test_construct_invalid_spec(tmp_path, cfg, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert cli.main(["--out", str(tmp_path), "construct", "--spec", str(path)]) == 1
    assert "invalid spec" in capsys.readouterr().err


def test_construct_missing_file(tmp_path):
    assert cli.main(["--out", str(tmp_path), "construct", "--spec", str(tmp_path / "none.json")]) == 1


def test_lemma_small_grid(tmp_path):
    assert cli.main(["--out", str(tmp_path), "lemma", "--eps", "0.5,1", "--grid", "32", "--jmax", "32"]) == 0
    rows = _rows(tmp_path / "lemma.csv")
    assert [r["epsilon"] for r in rows] == ["0.5", "1.0"]
    assert list(rows[0])[:7] == ["epsilon", "paper_bound", "eps_over_5", "minimax_value", "slack",
                                 "pulse_sum", "pulse_bound"]
    assert abs(float(rows[1]["paper_bound"]) - 0.21995) < 1e-5
    assert float(rows[1]["eps_over_5"]) == 0.2


def test_lemma_empty_list_is_noop(tmp_path):
    assert cli.main(["--out", str(tmp_path / "x"), "lemma", "--eps", ""]) == 0
    assert not (tmp_path / "x").exists()


def test_lemma_violation_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(lemma, "infsup_bound", lambda eps: 5.0)
    assert cli.main(["--out", str(tmp_path), "lemma", "--eps", "1", "--grid", "16", "--jmax", "8"]) == 1


def test_decay_measure_file(tmp_path, rng):
    path = tmp_path / "m.json"
    measures.dump_json(measures.DyadicMeasure(10, rng.random(1024)), path)
    assert cli.main(["--out", str(tmp_path), "decay", "--measure", str(path), "--jmax", "1024"]) == 0
    data = json.loads((tmp_path / "decay.json").read_text())
    assert 0 <= data["fourier_dim_estimate"] <= 1
    assert _rows(tmp_path / "decay.csv")[0].keys() == {"band_lo", "band_hi", "sup_abs", "j_star"}


def test_decay_unreadable_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("not json")
    assert cli.main(["--out", str(tmp_path), "decay", "--measure", str(path)]) == 1


@pytest.mark.parametrize("builtin, check", [
    ("cantor", lambda d: d < 0.05),
    ("lebesgue", lambda d: d > 0.9),
])
def test_decay_builtins(tmp_path, builtin, check):
    assert cli.main(["--out", str(tmp_path), "decay", "--builtin", builtin, "--jmax", "4096"]) == 0
    assert check(json.loads((tmp_path / "decay.json").read_text())["fourier_dim_estimate"])


def test_oracle_command(tmp_path, capsys):
    assert cli.main(["--out", str(tmp_path), "oracle"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == len(json.loads((tmp_path / "oracle.json").read_text())["results"])


def test_header_contains_versions(tmp_path):
    cli.main(["--out", str(tmp_path), "decay", "--builtin", "cantor", "--jmax", "64"])
    head = json.loads((tmp_path / "decay.json").read_text())["header"]
    assert {"fdlab", "numpy", "scipy"} <= set(head["versions"])
    assert head["params"]["jmax"] == 64
