import json
import math

import pytest

from freqbeat import cli
from freqbeat.errors import QuadratureError

C0 = 1.0 / math.sqrt(math.pi)


def _read_csv(path):
    lines = path.read_text().split("\n")
    assert lines[-1] == ""
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:-1]]
    return header, rows


def test_beat_curve_csv(tmp_path):
    out = tmp_path / "beat.csv"
    code = cli.main([
        "beat-curve", "--delta-t", "8", "--nu", "1", "--points", "11",
        "--omega-max", "6", "--out", str(out),
    ])
    assert code == 0
    header, rows = _read_csv(out)
    assert header == ["delta_omega_over_sigma_omega", "p_coincidence", "p_bunching"]
    assert len(rows) == 11
    center = rows[5]
    assert float(center[0]) == 0.0
    assert float(center[1]) == 0.0          # perfect HOM dip
    assert float(center[2]) == pytest.approx(C0, rel=1e-15)


def test_beat_curve_partial_dip(tmp_path):
    out = tmp_path / "beat.csv"
    assert cli.main([
        "beat-curve", "--delta-t", "8", "--nu", "0.9", "--points", "5",
        "--out", str(out),
    ]) == 0
    _, rows = _read_csv(out)
    assert float(rows[2][1]) == pytest.approx(0.05 * C0, rel=1e-12)


def test_beat_curve_json_roundtrip(tmp_path):
    out = tmp_path / "beat.json"
    assert cli.main([
        "beat-curve", "--points", "5", "--format", "json", "--out", str(out),
    ]) == 0
    records = json.loads(out.read_text())
    assert len(records) == 5
    assert set(records[0]) == {
        "delta_omega_over_sigma_omega", "p_coincidence", "p_bunching"
    }


def test_fisher_scan_series(tmp_path):
    out = tmp_path / "scan.csv"
    code = cli.main([
        "fisher-scan", "--delta-t-max", "6", "--points", "7",
        "--nu-values", "1,0.95", "--trd-resolutions", "10", "--out", str(out),
    ])
    assert code == 0
    header, rows = _read_csv(out)
    assert header == ["delta_t_over_sigma_t", "series", "label", "f_over_q"]
    by_key = {(r[0], r[1], r[2]): float(r[3]) for r in rows}
    # nu = 1 series pinned at 1/2 for every delay
    for dt in ("0", "1", "2", "3", "4", "5", "6"):
        assert by_key[(dt, "fr", "nu=1")] == pytest.approx(0.5, rel=1e-12)
    # nu = 0.95 near the plateau (F/Q = (1 - sqrt(1 - nu^2))/2) by 5 sigma_t
    plateau = 1.0 - math.sqrt(1.0 - 0.95**2)
    assert by_key[("5", "fr", "nu=0.95")] == pytest.approx(plateau / 2.0, rel=0.02)
    # direct detection: no information at zero delay, useless at T = 10
    assert by_key[("0", "trd_unbinned", "T=0")] == pytest.approx(0.0, abs=1e-12)
    assert all(by_key[(dt, "trd_binned", "T=10sigma_t")] < 0.05
               for dt in ("0", "1", "2", "3", "4", "5", "6"))


def test_simulate_json_deterministic(tmp_path):
    args = [
        "simulate", "--delta-t", "0.8", "--nu", "1", "--n-list", "200,400",
        "--trials", "40", "--seed", "13", "--format", "json",
    ]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["schema_version"] == 1
    assert doc["truth"] == 0.8
    assert [r["n"] for r in doc["per_n"]] == [200, 400]
    assert "fit" in doc and "a" in doc["fit"]


def test_simulate_csv_table(tmp_path):
    out = tmp_path / "sim.csv"
    assert cli.main([
        "simulate", "--delta-t", "0.8", "--n-list", "200,400", "--trials", "30",
        "--out", str(out),
    ]) == 0
    header, rows = _read_csv(out)
    assert header[:3] == ["n", "trials", "mean_estimate"]
    assert len(rows) == 2


def test_budget_matches_library(tmp_path, capsys):
    assert cli.main([
        "budget", "--rate-hz", "1e6", "--duration-s", "14400",
        "--sigma-t-fs", "60", "--format", "json",
    ]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["std_attoseconds"] == pytest.approx(1.414, rel=1e-3)
    assert doc["pairs"] == 1.44e10


def test_invalid_args_exit_two(capsys):
    assert cli.main(["beat-curve", "--nu", "2.0"]) == 2
    assert cli.main(["simulate", "--delta-t", "0.8", "--trials", "1"]) == 2
    assert cli.main(["no-such-command"]) == 2
    assert cli.main(["budget", "--rate-hz", "1e6"]) == 2  # missing required
    capsys.readouterr()


def test_numerical_failure_exit_one(monkeypatch, capsys):
    def boom(args):
        raise QuadratureError("synthetic")

    monkeypatch.setitem(cli._COMMANDS, "budget", boom)
    code = cli.main([
        "budget", "--rate-hz", "1", "--duration-s", "1", "--sigma-t-fs", "1",
    ])
    assert code == 1
    assert "numerical failure" in capsys.readouterr().err


def test_config_file_supplies_defaults(tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"delta_t": 8.0, "nu": 0.9, "points": 5}))
    out = tmp_path / "beat.csv"
    assert cli.main([
        "beat-curve", "--config", str(cfg_file), "--out", str(out),
    ]) == 0
    _, rows = _read_csv(out)
    assert len(rows) == 5
    assert float(rows[2][1]) == pytest.approx(0.05 * C0, rel=1e-12)
    # explicit flag beats the file
    assert cli.main([
        "beat-curve", "--config", str(cfg_file), "--nu", "1", "--out", str(out),
    ]) == 0
    _, rows = _read_csv(out)
    assert float(rows[2][1]) == 0.0


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg_file = tmp_path / "bad.json"
    cfg_file.write_text(json.dumps({"no_such_flag": 1}))
    assert cli.main(["beat-curve", "--config", str(cfg_file)]) == 2
    assert "unknown config key" in capsys.readouterr().err
