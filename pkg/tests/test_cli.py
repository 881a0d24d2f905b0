import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from curvosc import checks, cli
from curvosc.checks import CheckResult


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# curvosc ") and lines[0].endswith(" schema v1")
    rows = list(csv.reader(lines[1:]))
    return rows[0], np.array(rows[1:], dtype=float)


class TestClassify:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "classify", "--lambda", 1, "--alpha", 3, "--J", 1, "--E", 3)
        assert code == 0
        fields = dict(line.split("=", 1) for line in out.splitlines())
        assert fields["regime"] == "Bounded"
        assert float(fields["omega"]) == pytest.approx(math.sqrt(3), rel=1e-15)
        assert fields["omega"].startswith("1.7320508")

    def test_json(self, capsys):
        code, out, _ = run(capsys, "classify", "--lambda", 1, "--alpha", 3, "--J", 5, "--E", 1, "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["regime"] == "Forbidden" and d["r_min"] is None


class TestTrajectory:
    def test_sphere_example(self, capsys, tmp_path):
        path = tmp_path / "traj.csv"
        code, _, _ = run(capsys, "trajectory", "--lambda", -1, "--alpha", 2, "--J", 1, "--E", 3,
                         "--t1", 5, "--samples", 500, "--out", path)
        assert code == 0
        header, data = read_csv(path.read_text())
        assert header == ["t", "r", "r_dot", "phi", "x", "y", "energy_rel_drift"]
        assert data.shape == (500, 7)
        r = data[:, 1]
        assert r.min() >= math.sqrt(0.2) - 1e-12 and r.max() <= math.sqrt(0.5) + 1e-12
        assert r.min() == pytest.approx(math.sqrt(0.2), abs=1e-4)
        np.testing.assert_allclose(data[:, 4] ** 2 + data[:, 5] ** 2, r**2, rtol=1e-14)
        assert np.max(data[:, 6]) < 1e-12

    def test_ode_source_matches(self, capsys):
        base = ["trajectory", "--lambda", 1, "--alpha", 3, "--J", 1, "--E", 3, "--t1", 4, "--samples", 50]
        _, closed, _ = run(capsys, *base)
        _, ode, _ = run(capsys, *base, "--source", "ode")
        a, b = read_csv(closed)[1], read_csv(ode)[1]
        np.testing.assert_allclose(a[:, 1], b[:, 1], atol=1e-8)
        assert np.max(b[:, 6]) < 1e-8

    def test_byte_identical(self, capsys):
        argv = ["trajectory", "--lambda", 1, "--alpha", 3, "--J", 1, "--E", 6, "--t1", 2, "--samples", 40]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_seventeen_digits(self, capsys):
        _, out, _ = run(capsys, "trajectory", "--lambda", 1, "--alpha", 3, "--J", 1, "--E", 3, "--samples", 3)
        value = out.splitlines()[2].split(",")[1]
        assert value == format(float(value), ".17g")

    def test_forbidden_energy(self, capsys):
        code, _, err = run(capsys, "trajectory", "--lambda", 1, "--alpha", 3, "--J", 5, "--E", 1)
        assert code == 1 and "forbidden" in err


class TestPotential:
    @pytest.mark.parametrize("lam,alpha,r_min,v_min", [(1, 3, math.sqrt(0.5), 2.5), (-1, 2, 1 / math.sqrt(3), 2.5)])
    def test_profile_minimum(self, capsys, lam, alpha, r_min, v_min):
        code, out, _ = run(capsys, "potential", "--lambda", lam, "--alpha", alpha, "--J", 1, "--samples", 2000)
        header, data = read_csv(out)
        assert code == 0 and header == ["r", "v_eff_J0", "v_eff_J"]
        i = np.argmin(data[:, 2])
        assert data[i, 0] == pytest.approx(r_min, abs=2e-3)
        assert data[i, 2] == pytest.approx(v_min, abs=1e-5)
        assert data[0, 1] < 0.05 * v_min

    def test_sphere_columns_diverge_at_wall(self, capsys):
        _, out, _ = run(capsys, "potential", "--lambda", -1, "--alpha", 2, "--r-max", 0.9999)
        data = read_csv(out)[1]
        assert data[-1, 1] > 1e3 and data[-1, 2] > 1e3

    def test_grid_outside_domain(self, capsys):
        code, _, err = run(capsys, "potential", "--lambda", -1, "--alpha", 2, "--r-max", 1.5)
        assert code == 1 and "grid" in err


class TestSpectrum:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--lambda", 1, "--beta", 5.2)
        levels = json.loads(out)
        assert code == 0 and len(levels) == 5
        assert [lv["n"] for lv in levels] == [0, 1, 2, 3, 4]
        assert set(levels[0]) == {"n", "E", "degeneracy", "states"}
        assert levels[2]["degeneracy"] == 3 and len(levels[2]["states"]) == 3

    def test_sphere_levels_and_csv(self, capsys):
        _, out, _ = run(capsys, "spectrum", "--lambda", -1, "--beta", 1, "--levels", 4, "--format", "csv")
        header, data = read_csv(out)
        assert header == ["n", "E", "degeneracy"]
        np.testing.assert_allclose(data[:, 1], [1, 3, 6, 10])


class TestWavefunction:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "wavefunction", "--lambda", 1, "--beta", 5.2, "--nr", 1, "--m", 1, "--samples", 100)
        header, data = read_csv(out)
        assert code == 0 and header == ["r", "R", "residual"]
        assert np.max(np.abs(data[:, 2])) < 1e-8
        assert np.count_nonzero(np.diff(np.sign(data[:, 1]))) == 1

    def test_inadmissible(self, capsys):
        code, _, err = run(capsys, "wavefunction", "--lambda", 1, "--beta", 5.2, "--nr", 2, "--m", 1)
        assert code == 1 and "not a bound state" in err


class TestBridge:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "bridge", "--A1", 2, "--A2", 1, "--phi1", math.pi / 2, "--lambda", 1,
                           "--alpha", math.sqrt(10), "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["passed"]
        assert d["A"] == pytest.approx(1.5) and d["B"] == pytest.approx(2.5)

    def test_linear_csv(self, capsys):
        code, out, _ = run(capsys, "bridge", "--variant", "linear", "--A1", 1, "--A2", 0, "--B1", 0, "--B2", 1,
                           "--lambda", 1, "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[2].startswith("linear,Limiting,")

    def test_inconsistent(self, capsys):
        code, _, _ = run(capsys, "bridge", "--variant", "hyper", "--A1", 0.1, "--A2", 0.1, "--lambda", 1, "--alpha", 1)
        assert code == 1


class TestVerify:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--acceptance-only")
        assert code == 0
        assert out.count("[PASS]") == 10 and "10/10" in out

    def test_with_property_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", 5, "--format", "json")
        results = json.loads(out)
        assert code == 0 and len(results) == len(checks.ALL_CHECKS) + len(checks.PROPERTY_CHECKS)
        assert all(r["passed"] for r in results)

    def test_failure_gives_exit_two(self, capsys, monkeypatch):
        monkeypatch.setattr(checks, "run_all",
                            lambda seed, properties=True: [CheckResult("x", True, ""), CheckResult("y", False, "")])
        code, out, _ = run(capsys, "verify")
        assert code == 2 and "[FAIL] y" in out


class TestUsage:
    @pytest.mark.parametrize("argv", [["bogus"], ["classify", "--nope", "1"], ["classify", "--lambda", "x"], []])
    def test_parse_errors_exit_one(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 1

    def test_missing_flags(self, capsys):
        code, _, err = run(capsys, "classify", "--lambda", 1)
        assert code == 1 and "--alpha" in err

    def test_bad_sample_count(self, capsys):
        code, _, _ = run(capsys, "trajectory", "--lambda", 1, "--alpha", 3, "--J", 1, "--E", 3, "--samples", 1)
        assert code == 1

    def test_invalid_model(self, capsys):
        code, _, _ = run(capsys, "classify", "--lambda", 0, "--alpha", 3, "--J", 1, "--E", 3)
        assert code == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "curvosc", "spectrum", "--lambda", "1", "--beta", "5.2",
                               "--format", "text"], capture_output=True, text=True)
        assert proc.returncode == 0 and "n_max=4" in proc.stdout
        bad = subprocess.run([sys.executable, "-m", "curvosc", "frobnicate"], capture_output=True, text=True)
        assert bad.returncode == 1
