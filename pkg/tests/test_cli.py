import csv
import io
import json
import subprocess
import sys

import pytest

from momentlab.cli import LADDER_Q, config_from_args, main
from momentlab.report import (ConfigError, Report, RunConfig, THREADS_ENV, emit, finalize,
                              threads_from_env)


def _run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_identities_deterministic():
    cmd = [sys.executable, "-m", "momentlab.cli", "identities", "--seed", "1"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_constants_table(capsys):
    code, out, _ = _run(["constants"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"version", "config_echo", "results", "failures", "timing"}
    rows = {(r["kind"], r["index"]): r for r in doc["results"]}
    assert rows[("frakS", "0,0,0,0")]["exact"] == "1/12"
    assert rows[("gamma4", "0,0,0,0")]["value"] == pytest.approx(-1 / 24)
    assert doc["timing"] == {}


def test_timing_only_on_request(capsys):
    _, out, _ = _run(["constants", "--timing"], capsys)
    assert "wall_ms" in json.loads(out)["timing"]


def test_empty_results_valid_json():
    text = emit(Report(config_echo={}), "json")
    assert json.loads(text)["results"] == []
    assert emit(Report(config_echo={}), "csv") == "\n"


def test_nan_guard():
    rep = finalize(Report(config_echo={}, results=[{"x": float("nan"), "y": [1.0, float("inf")]}]))
    assert rep.results == [{"x": None, "y": [1.0, None]}]
    assert [f["where"] for f in rep.failures] == ["results[0].x", "results[0].y[1]"]
    assert rep.exit_status == 1
    json.loads(emit(rep, "json"))


def test_json_round_trip(capsys):
    _, out, _ = _run(["voronoi"], capsys)
    doc = json.loads(out)
    again = Report.from_dict(doc)
    assert json.loads(emit(again, "json")) == doc


def test_moment_ladder_csv(capsys):
    code, out, _ = _run(["moment-ladder", "--q", "101", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["q", "ell1", "ell2", "brute", "predicted", "rel_error", "ms"]
    assert rows[0]["q"] == "101"
    assert code in (0, 1)


def test_pretty_format(capsys):
    code, out, _ = _run(["constants", "--format", "pretty"], capsys)
    assert code == 0 and out.splitlines()[0].split()[:2] == ["kind", "index"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    code, _, err = _run(["main-terms", "--q", "100,7", "--ell", "2,4", "--pmax", "5"], capsys)
    assert code == 2
    # all problems are reported together
    for piece in ("q=100", "(2,4) is not coprime", "pmax"):
        assert piece in err
    assert _run(["identities", "--suite", "nope"], capsys)[0] == 2
    assert _run(["constants", "--precision", "extended"], capsys)[0] == 2


def test_failure_exit_code(monkeypatch, capsys):
    from momentlab import experiments

    def broken(cfg, out):
        out.check("demo", "forced", 1.0, 2.0, 1.0, 1e-9)

    monkeypatch.setitem(experiments.COMMAND_FUNCS, "constants", broken)
    code, out, _ = _run(["constants"], capsys)
    assert code == 1
    assert json.loads(out)["failures"]


def test_threads_fallback(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert threads_from_env(None) == 1
    monkeypatch.setenv(THREADS_ENV, "4")
    assert threads_from_env(None) == 4
    assert threads_from_env(2) == 2
    assert config_from_args(["constants"]).threads == 4
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        threads_from_env(None)


def test_defaults():
    assert config_from_args(["moment-ladder"]).q_list == LADDER_Q
    assert config_from_args(["main-terms"]).q_list == (101,)
    assert config_from_args(["main-terms", "--ell", "1,1;2,3"]).ell_pairs == ((1, 1), (2, 3))
    cfg = RunConfig(command="constants")
    assert cfg.validate() is cfg
    assert cfg.echo()["ell_pairs"] == [[1, 1]]
