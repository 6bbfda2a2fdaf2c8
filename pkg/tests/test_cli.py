import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from diracslab.cli import SPECTRUM_HEADER, fmt, run


def write_cfg(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg) if not isinstance(cfg, str) else cfg)
    return str(path)


def run_to_file(tmp_path, command, cfg, *extra, name="out"):
    out = tmp_path / name
    code = run([command, "--config", write_cfg(tmp_path, cfg), "--output", str(out), *extra])
    return code, out


SPECTRUM_CFG = {"variant": "OnePhase(1)", "phases": [0.25], "mass": 1.0, "field": 1.0,
                "a_slab": 1.0, "k_window": [0, 10]}


class TestSpectrum:
    def test_merged_branches(self, tmp_path):
        code, out = run_to_file(tmp_path, "spectrum", SPECTRUM_CFG)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out.read_text())))
        assert rows[0] == SPECTRUM_HEADER
        ks = np.array([float(r[2]) for r in rows[1:]])
        assert np.allclose(ks, math.pi / 2 * np.arange(1, 7), atol=1e-10)

    def test_full_precision(self, tmp_path):
        code, out = run_to_file(tmp_path, "spectrum", SPECTRUM_CFG)
        row = out.read_text().splitlines()[1].split(",")
        assert float(row[2]) == pytest.approx(math.pi / 2, abs=1e-12)
        assert float(fmt(float(row[2]))) == float(row[2])
        assert fmt(-0.0) == "0"
        assert fmt(0.1) == "0.10000000000000001"

    def test_json(self, tmp_path):
        code, out = run_to_file(tmp_path, "spectrum", SPECTRUM_CFG, "--format", "json")
        assert code == 0
        data = json.loads(out.read_text())
        assert isinstance(data, dict)

    def test_deterministic(self, tmp_path):
        _, a = run_to_file(tmp_path, "spectrum", SPECTRUM_CFG, name="a")
        _, b = run_to_file(tmp_path, "spectrum", SPECTRUM_CFG, name="b")
        assert a.read_bytes() == b.read_bytes()


class TestErrors:
    def test_malformed_json(self, tmp_path):
        code, out = run_to_file(tmp_path, "spectrum", "{not json")
        assert code == 2
        assert not out.exists()

    def test_unknown_key(self, tmp_path):
        code, out = run_to_file(tmp_path, "spectrum", {**SPECTRUM_CFG, "colour": "red"})
        assert code == 2 and not out.exists()

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 2

    def test_domain_error_names_field(self, tmp_path, capsys):
        code, out = run_to_file(tmp_path, "spectrum", {**SPECTRUM_CFG, "a_slab": -1.0})
        assert code == 3 and not out.exists()
        assert "a_slab" in capsys.readouterr().err

    def test_energy_below_mass(self, tmp_path, capsys):
        code, _ = run_to_file(tmp_path, "roots", {"mass": 2.0, "energy": 1.0, "k": 0.5})
        assert code == 3
        assert "energy" in capsys.readouterr().err


class TestOtherCommands:
    def test_roots(self, tmp_path):
        cfg = {"variant": "FourPhase", "phases": [0.1, 0.7, 1.2, 1.9], "mass": 1.0,
               "energy": 2.3, "k": 0.7}
        code, out = run_to_file(tmp_path, "roots", cfg)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 4
        assert max(float(r["distance"]) for r in rows) < 1e-8

    def test_oracle_check(self, tmp_path, capsys):
        code, out = run_to_file(tmp_path, "oracle-check", {}, "--seed", "0", "--draws", "20")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 19 and all(r["status"] == "pass" for r in rows)
        summary = capsys.readouterr().out.strip()
        assert summary.startswith("max root deviation") and " < " in summary

    def test_mode(self, tmp_path):
        cfg = {"variant": "OnePhase(2)", "phases": [0.3], "mass": 1.0, "energy": 2.0, "k": 0.6,
               "field": 1.0, "landau_index": 1, "y_points": 5, "z_points": 3}
        code, out = run_to_file(tmp_path, "mode", cfg, "--format", "json")
        assert code == 0
        data = json.loads(out.read_text())
        assert float(data["boundary_residual"]) < 1e-8
        assert len(data["grid"]) == 15

    def test_sweep(self, tmp_path):
        cfg = {**SPECTRUM_CFG, "root_selector": 0, "k_window": [0.05, 10],
               "sweep": {"parameter": "a_slab", "values": [1.0, 2.0]}}
        code, out = run_to_file(tmp_path, "sweep", cfg)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        first = [float(r["k"]) for r in rows if r["sweep_index"] == "0"]
        second = [float(r["k"]) for r in rows if r["sweep_index"] == "1"]
        assert np.allclose(first, math.pi * np.arange(1, 4))
        assert np.allclose(second, math.pi / 2 * np.arange(1, 7))

    def test_bad_sweep(self, tmp_path):
        code, _ = run_to_file(tmp_path, "sweep", {**SPECTRUM_CFG, "sweep": [1, 2]})
        assert code == 2

    def test_selftest(self, tmp_path):
        code, out = run_to_file(tmp_path, "selftest", {}, "--draws", "5")
        assert code == 0
        assert "FAIL" not in out.read_text()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diracslab", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "spectrum" in proc.stdout
