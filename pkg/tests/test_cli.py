import csv
import json
import math
import subprocess
import sys

import pytest

from trinecap.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(body))


def meta(text):
    return dict(line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))


def test_superadd(capsys):
    code, out, _ = run(capsys, "superadd")
    assert code == 0
    values = {r["quantity"]: float(r["bits"]) for r in rows(out)}
    assert values["i2"] == pytest.approx(1.3690, abs=1e-4)
    assert values["gain"] == pytest.approx(0.0391, abs=2e-4)
    assert meta(out)["seed"] == "0"


def test_capacity_json(capsys):
    code, out, _ = run(capsys, "capacity", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert {"c1_bits", "priors", "povm_angles", "iterations", "config"} <= data.keys()
    assert data["c1_bits"] == pytest.approx(0.6454, abs=1e-3)


def test_capacity_orthogonal_pair(capsys):
    code, out, _ = run(capsys, "capacity", "--letters", "orthogonal-pair", "--format", "json")
    assert code == 0 and json.loads(out)["c1_bits"] == pytest.approx(1.0, abs=1e-8)


def test_sweep_ideal_row_count(capsys):
    code, out, _ = run(capsys, "sweep", "--ideal", "--from", "-60", "--to", "60", "--step", "7")
    assert code == 0
    table = rows(out)
    assert len(table) == math.floor(120 / 7) + 1
    assert table[0]["mi_sim_bits"] == "" and table[0]["mi_sim_stderr"] == ""
    assert list(table[0]) == ["offset_deg", "mi_ideal_bits", "mi_sim_bits", "mi_sim_stderr"]


def test_sweep_single_point(capsys):
    code, out, _ = run(capsys, "sweep", "--from", "0", "--to", "0", "--step", "1", "--duration", "1",
                       "--replicas", "4", "--seed", "2")
    assert code == 0
    (row,) = rows(out)
    assert float(row["mi_sim_bits"]) == pytest.approx(1.3155, abs=5e-3)
    assert float(row["mi_sim_stderr"]) > 0


@pytest.mark.parametrize("args", [("--from", "10", "--to", "0"), ("--step", "0"), ("--step", "-1")])
def test_sweep_bad_range(capsys, args):
    code, _, err = run(capsys, "sweep", "--ideal", *args)
    assert code == 2 and err


def test_simulate_deterministic(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    hist = tmp_path / "h.csv"
    assert main(["simulate", "--seed", "5", "--duration", "0.5", "-o", str(a), "--histogram", str(hist)]) == 0
    assert main(["simulate", "--seed", "5", "--duration", "0.5", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert {"counts", "duration_s", "rate_cps", "seed", "config"} <= data.keys()
    assert len(data["counts"]) == 3 and all(len(r) == 3 for r in data["counts"])
    table = rows(hist.read_text())
    assert len(table) == 9 and list(table[0]) == ["sent", "detected", "count"]
    assert sum(int(r["count"]) for r in table) == sum(map(sum, data["counts"]))


def test_simulate_zero_duration(capsys):
    code, out, _ = run(capsys, "simulate", "--duration", "0")
    assert code == 0 and json.loads(out)["counts"] == [[0, 0, 0]] * 3


def test_simulate_unknown_codeword(capsys):
    code, _, err = run(capsys, "simulate", "--codeword", "01")
    assert code == 2 and "codeword" in err


def test_exponent_and_blocklength(capsys):
    code, out, _ = run(capsys, "exponent", "--scheme", "qchc", "--rate", "0.62")
    (row,) = rows(out)
    assert code == 0 and float(row["exponent"]) == pytest.approx(9.753e-2, rel=5e-3)
    code, out, _ = run(capsys, "blocklength", "--scheme", "qchc", "--rate", "0.62", "--pe", "1e-9")
    assert rows(out)[0]["blocklength_n"] == "614"
    code, out, _ = run(capsys, "blocklength", "--scheme", "acc", "--rate", "0.7", "--pe", "1e-9")
    assert code == 0 and rows(out)[0]["blocklength_n"] == "unattainable"


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# coding run\nscheme = acc\nrate = 0.1\npe = 1e-9\n")
    code, out, _ = run(capsys, "blocklength", "--config", str(cfg))
    assert code == 0 and rows(out)[0]["scheme"] == "ACC"
    assert float(rows(out)[0]["exponent"]) == pytest.approx(0.315, rel=5e-3)
    code, out, _ = run(capsys, "blocklength", "--config", str(cfg), "--rate", "0.62")
    assert meta(out)["rate"] == "0.62"


def test_config_rejects_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "superadd", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["exponent", "--scheme", "zzz"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "trinecap", "exponent", "--scheme", "acc", "--rate", "0.62"],
                          capture_output=True, text=True, check=True)
    assert "ACC,0.62,0.0005218" in proc.stdout


def test_invalid_physical_parameter_is_usage_error(capsys):
    code, _, err = run(capsys, "sweep", "--from", "0", "--to", "0", "--visibility", "1.5")
    assert code == 2 and "visibility" in err
