import csv
import io
import json
import subprocess
import sys

import pytest

from hpcfabric.cli import main
from hpcfabric.config import bundled, read_json

COMMANDS = [
    ["topology"],
    ["plan"],
    ["budget", "--path", "dwdm"],
    ["budget", "--path", "multimode"],
    ["sweep", "--path", "multimode"],
    ["scale"],
    ["metrics"],
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a))
def test_bundled_commands_succeed(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    assert out.startswith(f"command: hpcfabric {' '.join(argv)}")


def test_topology_csv(capsys):
    code, out, _ = run(capsys, "topology", "--format", "csv")
    rows = csv_rows(out)
    assert {r["length_cm"]: int(r["count"]) for r in rows}["100"] == 4
    assert sum(int(r["count"]) for r in rows) == 1260


def test_topology_discrepancy_note(capsys):
    _, out, _ = run(capsys, "topology")
    assert "20 Gbps: discrepancy: computed 74.92% vs quoted 83%" in out


def test_plan_tables(tmp_path, capsys):
    code, _, _ = run(capsys, "plan", "--out", str(tmp_path))
    assert code == 0
    free = csv_rows((tmp_path / "plan_free_channels.csv").read_text())
    assert free == [{"node": "N3", "tuning_range": "30 31 32 33 34 35 36 37", "free_channels": "35 36"}]
    reach = {r["receiver"]: r["hears"] for r in csv_rows((tmp_path / "plan_reachability.csv").read_text())}
    assert reach["N4"] == "N2 N3 N4"


def test_plan_collision_exit_code(tmp_path, capsys):
    doc = read_json(bundled("testbed_network.json"))[0]
    doc["nodes"][2]["transmitters"][0]["channel"] = 33
    p = tmp_path / "clash.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "plan", "--network", str(p))
    assert code == 3
    assert "collision on channel 33 between N1, N3" in err


def test_budget_quoted_column(capsys):
    _, out, _ = run(capsys, "budget", "--path", "dwdm_32x32", "--format", "csv")
    assert out.splitlines()[0] == "stage,loss_db,power_dbm"
    _, text, _ = run(capsys, "budget", "--path", "dwdm_32x32")
    line = next(l for l in text.splitlines() if l.startswith("margin_db"))
    assert line.split() == ["margin_db", "4.80", "4.80"]


def test_sweep_columns_and_crossing(capsys):
    _, out, _ = run(capsys, "sweep", "--path", "multimode", "--atten", "0:10:1", "--format", "csv")
    rows = csv_rows(out)
    assert list(rows[0]) == ["attenuation_db", "received_dbm", "ber"]
    assert len(rows) == 11
    _, text, _ = run(capsys, "sweep", "--path", "multimode", "--atten", "0:10:1")
    assert "BER first exceeds 1e-12 at 8.00 dB attenuation (margin 7.80 dB)" in text


@pytest.mark.parametrize("atten", ["0:1:0", "0:1:-1", "5:1:1", "a:b:c", "0:1"])
def test_bad_attenuation_range(capsys, atten):
    code, _, err = run(capsys, "sweep", "--path", "multimode", "--atten", atten)
    assert code == 2
    assert err


def test_unknown_path_exit_code(capsys):
    code, _, err = run(capsys, "budget", "--path", "nope")
    assert code == 4
    assert "nope" in err


def test_scale_rows(capsys):
    code, out, _ = run(capsys, "scale", "--format", "csv")
    rows = csv_rows(out)
    got = {(r["ledger"], r["ports"]): r["predicted_margin_db"] for r in rows}
    assert got[("extrapolated from 4x4", "32")] == "5.07"
    assert got[("measured 32x32", "64")] == "1.79"
    assert code == 0


def test_scale_infeasible_exit_code(capsys):
    code, _, _ = run(capsys, "scale", "--min-margin", "20")
    assert code == 5


def test_missing_required_field(tmp_path, capsys):
    doc = read_json(bundled("system_6x6.json"))[0]
    del doc["grid"]["pitch_cm"]
    p = tmp_path / "sys.json"
    p.write_text(json.dumps(doc))
    code, out, err = run(capsys, "topology", "--config", str(p))
    assert code == 2
    assert "pitch_cm" in err
    assert out == ""


def test_missing_file(capsys):
    code, _, err = run(capsys, "metrics", "--catalog", "/nonexistent/catalog.json")
    assert code == 2
    assert "catalog.json" in err


def test_metrics_flags_appear(capsys):
    _, out, _ = run(capsys, "metrics")
    assert "Single-Mode LC: derived 12.024 Gbps/mm2 vs printed 12.034 (rounding)" in out
    assert "Reflex Photonics optical engines: derived 43.06 pJ/bit vs printed 44 (rounding)" in out


def test_out_dir_files(tmp_path, capsys):
    main(["metrics", "--out", str(tmp_path)])
    capsys.readouterr()
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "metrics_report.txt" in names and "metrics_transceivers.csv" in names
    assert not [n for n in names if n.endswith(".tmp")]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a))
def test_repeat_runs_identical(tmp_path, capsys, argv):
    outputs = []
    for i in range(2):
        d = tmp_path / str(i)
        main([*argv, "--out", str(d)])
        stdout = capsys.readouterr().out
        files = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
        outputs.append((stdout, files))
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hpcfabric", "budget", "--path", "multimode"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "margin_db" in res.stdout
