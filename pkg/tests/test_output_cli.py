from __future__ import annotations

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from loewner_lab import cli, closed_forms, output, verify
from loewner_lab.scalars import parse


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_csv_round_trip():
    rows = [{"n": 2, "v": 0.1 + 0.2, "c": 1 - 2j}, {"n": 3, "v": float("nan"), "c": None}]
    text = output.to_csv(rows, ["n", "v", "c"], {"seed": 1, "kappa": 6.0})
    config, back = output.read_csv(text)
    assert config == {"seed": 1, "kappa": 6.0}
    assert float(back[0]["v"]) == 0.1 + 0.2
    assert complex(back[0]["c"]) == 1 - 2j
    assert back[1]["c"] == ""


def test_json_round_trip():
    data = [{"mean": 1 + 1j, "x": float("inf")}]
    config, back = output.read_json(output.to_json(data, {"a": 1}))
    assert config == {"a": 1}
    assert back == [{"mean": [1.0, 1.0], "x": "inf"}]
    with pytest.raises(ValueError):
        output.read_json(json.dumps({"schema": 99, "config": {}, "data": []}))


def test_svg_is_valid_xml():
    svg = output.to_svg([("a", [0, 1, 2, 3], [0, 1, float("nan"), 3])], {"k": 1}, title="t & u")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert output.read_svg_config(svg) == {"k": 1}
    with pytest.raises(ValueError):
        output.to_svg([("a", [0], [float("nan")])], {})


def test_spectra_csv_regimes(capsys):
    code, out, _ = run(["spectra", "--kappa", "6", "--m", "1", "--p-min", "-5", "--p-max", "3", "--steps", "801"], capsys)
    assert code == 0
    config, rows = output.read_csv(out)
    assert config["command"] == "spectra"
    changes = [(float(a["p"]), float(b["p"]), b["regime"]) for a, b in zip(rows, rows[1:]) if a["regime"] != b["regime"]]
    assert [c[2] for c in changes] == ["bulk_beta0", "unbounded_Bm"]
    assert changes[0][0] < -3.25 <= changes[0][1]
    assert changes[1][0] < 0.7024404 <= changes[1][1]


def test_spectra_svg(capsys, tmp_path):
    code, _, _ = run(["spectra", "--kappa", "6", "--format", "svg", "--out", str(tmp_path)], capsys)
    assert code == 0
    text = (tmp_path / "spectra.svg").read_text()
    ET.fromstring(text)
    assert output.read_svg_config(text)["kappa"] == 6


def test_moments_symbolic_eighth(capsys):
    code, out, _ = run(["moments", "--family", "a", "--n", "8", "--mode", "symbolic"], capsys)
    assert code == 0
    _, rows = output.read_csv(out)
    assert parse(rows[-1]["value"]) == closed_forms.sle_reference(8)
    assert rows[-1]["value"] == closed_forms.sle_reference(8).render()


def test_moments_json(capsys, tmp_path):
    code, _, _ = run(["moments", "--family", "b", "--n", "4", "--symbol", "sle:4", "--all", "--format", "json",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    config, data = output.read_json((tmp_path / "moments.json").read_text())
    assert config["family"] == "b"
    assert [round(float(r["float"]), 12) for r in data] == [round(1 / (2 * n + 1), 12) for n in range(1, 5)]


def test_oracle_and_series(capsys):
    code, out, _ = run(["oracle", "--what", "a4", "--kappa", "2"], capsys)
    assert code == 0 and "4" in output.read_csv(out)[1][0]["value"]
    code, out, _ = run(["series", "--kappa", "6", "--m", "1", "--count", "5", "--format", "json"], capsys)
    assert code == 0
    _, data = output.read_json(out)
    assert len(data) == 5


def test_pde_check(capsys):
    code, out, _ = run(["pde-check", "--kappa", "6", "--m", "1", "--grid", "16"], capsys)
    assert code == 0


def test_simulate(capsys):
    code, out, _ = run(["simulate", "--driver", "koebe", "--n", "3", "--samples", "100", "--seed", "1"], capsys)
    assert code == 0
    config, rows = output.read_csv(out)
    assert config["driver"] == "brownian:0" and config["seed"] == 1
    assert rows


@pytest.mark.parametrize("argv", [[], ["bogus"], ["spectra"], ["spectra", "--kappa", "x"],
                                  ["moments", "--n", "3", "--symbol", "nope:1"],
                                  ["series", "--kappa", "3", "--m", "1"]])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err


def test_verification_failure_exits_1(monkeypatch, capsys):
    def broken(quick=True):
        return [("bad", lambda: verify.CheckResult("deliberately broken", False, "x", diffs=(("v", 1, 2),)))]

    monkeypatch.setattr(verify, "suite", broken)
    code, out, _ = run(["verify-all", "--quick"], capsys)
    assert code == 1
    assert "expected 1, got 2" in out


def test_verify_all_quick_subprocess():
    proc = subprocess.run([sys.executable, "-m", "loewner_lab", "verify-all", "--quick"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "11/11 checks passed" in proc.stdout
