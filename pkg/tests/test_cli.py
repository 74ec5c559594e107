"""Command-line interface tests: exit-code contract, config-file merging,
output artifacts, and run-to-run determinism."""

import json

import pytest

from shiftcurv import cli


def run(argv):
    return cli.main(argv)


class TestExitCodes:
    def test_symfun_check_passes(self, capsys):
        assert run(["symfun-check", "--n", "3"]) == cli.EXIT_PASS
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_verify_sphere_passes(self):
        assert run(["verify", "--surface", "sphere:rho=1.0:d=0.2",
                    "--n", "3", "--grid", "64"]) == cli.EXIT_PASS

    def test_verify_negative_control_fails(self):
        # mis-signing the gradient correction breaks the weighted identity
        assert run(["verify", "--surface", "sphere:rho=1.0:d=0.3",
                    "--n", "2", "--grid", "48",
                    "--negate-correction"]) == cli.EXIT_FAIL

    def test_bad_k_is_usage_error(self):
        assert run(["verify", "--n", "2", "--k", "5"]) == cli.EXIT_USAGE

    def test_malformed_surface_is_usage_error(self):
        assert run(["surface-info", "--surface", "blob:rho=1"]) == cli.EXIT_USAGE

    def test_mean_convexity_precondition(self):
        # this surface has H <= n somewhere; the lower-bound identity's
        # hypothesis fails, which the suite reports as a precondition error
        assert run(["verify", "--surface",
                    "perturbed:rho=0.8:eps=0.3:mode=4",
                    "--n", "2", "--grid", "48"]) == cli.EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit):
            cli._build_parser().parse_args(["frobnicate"])
        assert run(["frobnicate"]) == cli.EXIT_USAGE


class TestTheoremAndAudit:
    def test_theorem_satisfied_on_sphere(self):
        assert run(["theorem", "--name", "thm1.1i", "--surface",
                    "sphere:rho=1.0", "--n", "2", "--k", "1",
                    "--grid", "48"]) == cli.EXIT_PASS

    def test_theorem_not_satisfied_on_perturbed(self):
        assert run(["theorem", "--name", "thm1.1i", "--surface",
                    "perturbed:rho=1.0:eps=0.1:mode=2", "--n", "2",
                    "--k", "1", "--grid", "48"]) == cli.EXIT_FAIL

    def test_audit_sphere_passes(self, tmp_path):
        out = tmp_path / "audit"
        assert run(["audit", "--name", "thm1.1", "--surface",
                    "sphere:rho=1.0", "--n", "2", "--k", "1",
                    "--grid", "48", "--out", str(out)]) == cli.EXIT_PASS
        csvs = list(out.glob("*.csv"))
        assert len(csvs) == 1
        header = csvs[0].read_text().splitlines()[0]
        assert header == "check,lhs,rhs,abs_err,rel_err,tol,pass"

    def test_audit_unknown_name(self):
        assert run(["audit", "--name", "thm9.9",
                    "--surface", "sphere:rho=1.0"]) == cli.EXIT_USAGE


class TestSolverCommands:
    def test_solve_converges(self, tmp_path):
        out = tmp_path / "solve"
        code = run(["solve", "--surface", "perturbed:rho=1.0:eps=0.1:mode=2",
                    "--n", "2", "--k", "1", "--grid", "48", "--chi", "const",
                    "--out", str(out), "--format", "json"])
        assert code == cli.EXIT_PASS
        payload = json.loads((out / "solve.json").read_text())
        assert payload["converged"]
        assert abs(payload["sphere_fit"]["rho"] - 1.0) < 1e-6

    def test_solve_svg_artifacts(self, tmp_path):
        out = tmp_path / "svg"
        code = run(["solve", "--surface", "perturbed:rho=1.0:eps=0.05:mode=2",
                    "--n", "2", "--k", "1", "--grid", "32",
                    "--out", str(out), "--format", "svg"])
        assert code == cli.EXIT_PASS
        for name in ("residuals.svg", "solution.svg"):
            text = (out / name).read_text()
            assert text.lstrip().startswith("<?xml")

    def test_sweep(self, capsys):
        import math
        t1 = math.cosh(1.0) / math.sinh(1.0) - 1.0
        t2 = math.cosh(0.9) / math.sinh(0.9) - 1.0
        code = run(["sweep", "--surface", "sphere:rho=1.0", "--n", "2",
                    "--k", "1", "--grid", "48", "--chi", "const",
                    "--targets", f"{t1},{t2}"])
        assert code == cli.EXIT_PASS
        out = capsys.readouterr().out
        assert out.splitlines()[0].startswith("target,")

    def test_sweep_without_targets(self):
        assert run(["sweep", "--surface", "sphere:rho=1.0"]) == cli.EXIT_USAGE

    def test_ensemble_deterministic(self, capsys, tmp_path):
        argv = ["ensemble", "--n", "2", "--k", "1", "--grid", "32",
                "--samples", "3", "--eps", "0.05", "--seed", "11",
                "--chi", "const"]
        assert run(argv) == cli.EXIT_PASS
        first = capsys.readouterr().out
        assert run(argv) == cli.EXIT_PASS
        second = capsys.readouterr().out
        assert first == second
        # 3 samples + header + summary line
        assert len(first.strip().splitlines()) == 5


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, tmp_path):
        cfgfile = tmp_path / "run.json"
        cfgfile.write_text(json.dumps({"surface": "sphere:rho=1.0",
                                       "n": 3, "grid": 40}))
        cfg = cli.parse_config(["verify", "--config", str(cfgfile),
                                "--grid", "64"])
        assert cfg.n == 3
        assert cfg.grid == 64  # flag wins
        assert cfg.surface == "sphere:rho=1.0"

    def test_unknown_key_rejected(self, tmp_path):
        cfgfile = tmp_path / "bad.json"
        cfgfile.write_text(json.dumps({"gird": 64}))
        assert run(["verify", "--config", str(cfgfile)]) == cli.EXIT_USAGE

    def test_unreadable_config(self):
        assert run(["verify", "--config", "/no/such/file.json"]) == cli.EXIT_USAGE


class TestSurfaceInfo:
    def test_prints_summary(self, capsys):
        assert run(["surface-info", "--surface", "sphere:rho=1.2:d=0.3",
                    "--n", "2", "--grid", "48"]) == cli.EXIT_PASS
        out = capsys.readouterr().out
        assert "area" in out and "umbilicity" in out

    def test_json_artifact(self, tmp_path):
        out = tmp_path / "info"
        run(["surface-info", "--surface", "sphere:rho=1.0", "--n", "2",
             "--grid", "32", "--out", str(out), "--format", "json"])
        data = json.loads((out / "surface.json").read_text())
        assert data["umbilicity"] < 1e-10
