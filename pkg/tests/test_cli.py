import csv
import json

import pytest

from bipoisson.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_kernel_birth_example(capsys):
    code, doc = run_json(capsys, "kernel", "--theta", "1", "--s", "0", "--t", "0.5", "--z", "0")
    assert code == EXIT_OK
    assert doc["case"] == "birth" and doc["law"] == {"tag": "NegativeBinomial", "r": 1.0, "p": 0.5}


def test_kernel_entrance_example(capsys):
    code, doc = run_json(capsys, "kernel", "--theta", "1", "--s", "1", "--t", "2", "--z", "3.0")
    assert code == EXIT_OK and doc["law"]["tag"] == "Poisson" and doc["law"]["lam"] == 3.0


def test_kernel_death_example(capsys):
    code, doc = run_json(capsys, "kernel", "--theta", "1", "--s", "2", "--t", "3", "--z", "4")
    assert code == EXIT_OK and doc["law"] == {"tag": "Binomial", "n": 4, "p": 0.5}


def test_kernel_mass_table_and_bridge(capsys):
    code, doc = run_json(capsys, "kernel", "--theta", "1", "--s", "0.2", "--t", "0.4", "--z", "0",
                         "--u", "0.6", "--zu", "2", "--mass-table", "3")
    assert code == EXIT_OK and doc["kind"] == "bridge" and doc["case"] == "case1"
    assert len(doc["mass_table"]) == 3


def test_phase_error_is_usage_error(capsys):
    assert main(["kernel", "--theta", "1", "--s", "0.5", "--t", "0.7", "--z", "2.5"]) == EXIT_USAGE
    assert main(["kernel", "--theta", "1", "--s", "0.5", "--t", "0.4", "--z", "2"]) == EXIT_USAGE
    assert main(["verify", "--suite", "nope"]) == EXIT_USAGE
    assert main(["simulate", "--theta", "0"]) == EXIT_USAGE


def test_reduced_parameters_recorded(capsys):
    code, doc = run_json(capsys, "kernel", "--eta", "4", "--theta", "1", "--s", "0", "--t", "0.5", "--z", "0")
    assert code == EXIT_OK and doc["reduction"]["time_scale"] == 0.25


def test_simulate_files_and_determinism(tmp_path):
    paths = []
    for i in range(2):
        out = tmp_path / f"run{i}.csv"
        grid = tmp_path / f"grid{i}.csv"
        assert main(["simulate", "--seed", "42", "--delta", "1e-4", "--out", str(out), "--grid-out", str(grid)]) == 0
        paths.append((out, grid))
    for a, b in zip(*paths):
        assert a.read_bytes() == b.read_bytes()
    metas = [json.loads((tmp_path / f"run{i}.csv.meta.json").read_text()) for i in range(2)]
    for m in metas:  # output paths are the only difference
        m["config"].pop("out"), m["config"].pop("grid_out")
    assert metas[0] == metas[1]

    rows = list(csv.DictReader(paths[0][0].open()))
    assert list(rows[0]) == ["phase", "time", "level"]
    births = [int(r["level"]) for r in rows if r["phase"] == "birth"]
    deaths = [int(r["level"]) for r in rows if r["phase"] == "death"]
    assert all(b > a for a, b in zip(births, births[1:]))
    assert all(b < a for a, b in zip(deaths, deaths[1:]))
    assert [r["phase"] for r in rows].count("one") == 1

    meta = json.loads((tmp_path / "run0.csv.meta.json").read_text())
    assert meta["config"]["seed"] == 42 and meta["theta"] == 1.0 and meta["config"]["delta"] == 1e-4
    assert "truncated" in meta["trajectory"]


def test_grid_matches_levels(tmp_path):
    out, grid = tmp_path / "ev.csv", tmp_path / "grid.csv"
    assert main(["simulate", "--theta", "2", "--seed", "5", "--delta", "1e-3",
                 "--out", str(out), "--grid-out", str(grid), "--grid-points", "301"]) == 0
    births = [float(r["time"]) for r in csv.DictReader(out.open()) if r["phase"] == "birth"]
    for r in csv.DictReader(grid.open()):
        t, x = float(r["t"]), float(r["x"])
        if t < 1:
            level = sum(b <= t for b in births)
            assert x == pytest.approx(2.0 * (1 - t) * level - t / 2.0, abs=1e-12)


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "kernel", "theta": 1.0, "s": 2.0, "t": 3.0, "z": 4}))
    code, doc = run_json(capsys, "kernel", "--config", str(cfg), "--t", "4")
    assert code == EXIT_OK and doc["law"]["p"] == pytest.approx(1.0 / 3.0)
    cfg.write_text(json.dumps({"thetaa": 1.0}))
    assert main(["kernel", "--config", str(cfg)]) == EXIT_USAGE


def test_runconfig_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(UsageError):
        RunConfig.from_json(cfg)


def test_verify_exit_codes_and_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"rep{i}.json"
        assert main(["verify", "--suite", "ck", "--theta", "1", "--seed", "7", "--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    reports = json.loads(outs[0])
    assert {tuple(sorted(r)) for r in reports} == {
        ("claim_id", "computed", "diagnostics", "method", "pass", "reference", "seed", "tolerance")}
    # an impossible tolerance makes the same suite fail with exit code 1
    assert main(["verify", "--suite", "ck", "--eps-check", "1e-30", "--out", str(tmp_path / "bad.json")]) == EXIT_FAIL
