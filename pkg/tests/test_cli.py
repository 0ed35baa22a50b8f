import pytest

from capmult.cli import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    parse_config_file,
    run,
)

ECONOMY = ["--set", "c=0.5", "--set", "p=0.15", "--set", "n=0.1", "--set", "R=0.05"]


def run_cli(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMultiplier:
    def test_equilibrium_prints_unit_multiplier(self, capsys):
        code, out, _ = run_cli(capsys, ["multiplier", *ECONOMY])
        assert code == EXIT_OK
        assert "M_r_status = Convergent" in out
        mr = float(out.strip().splitlines()[-1].split(" = ")[1])
        assert mr == pytest.approx(1.0, abs=1e-12)

    def test_divergent_region_reported_not_failed(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["multiplier", "--set", "c=0.5", "--set", "p=0.3",
             "--set", "n=0.1", "--set", "R=0.05"],
        )
        assert code == EXIT_OK
        assert "M_r_status = Divergent" in out
        assert "\nM_r = " not in out

    def test_hyperbolic_needs_k(self, capsys):
        code, _, err = run_cli(
            capsys, ["multiplier", *ECONOMY, "--set", "discounting=hyperbolic"]
        )
        assert code == EXIT_CONFIG
        assert "'k'" in err

    def test_hyperbolic_value(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["multiplier", *ECONOMY, "--set", "discounting=hyperbolic", "--set", "k=0.1"],
        )
        assert code == EXIT_OK
        assert "M_r = " in out

    def test_bad_economy_value(self, capsys):
        code, _, err = run_cli(
            capsys, ["multiplier", *ECONOMY[:-2], "--set", "R=-1"]
        )
        assert code == EXIT_CONFIG
        assert "R" in err


class TestConfigFile:
    def test_comments_and_overrides(self, capsys, tmp_path):
        cfg = tmp_path / "econ.cfg"
        cfg.write_text(
            "# economy\n"
            "c = 0.5   # consumer share\n"
            "p = 0.2\n"
            "n = 0.1\n"
            "R = 0.05\n"
        )
        code, out, _ = run_cli(
            capsys, ["multiplier", "--config", str(cfg), "--set", "p=0.15"]
        )
        assert code == EXIT_OK
        # the override moved p onto the equilibrium
        mr = float(out.strip().splitlines()[-1].split(" = ")[1])
        assert mr == pytest.approx(1.0, abs=1e-12)

    def test_parse_error_carries_line_number(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("c = 0.5\np = 0.2\nnot a pair\n")
        with pytest.raises(Exception) as excinfo:
            parse_config_file(str(cfg))
        assert f"{cfg}:3" in str(excinfo.value)

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, ["multiplier", "--config", str(tmp_path / "absent.cfg")]
        )
        assert code == EXIT_CONFIG
        assert "absent.cfg" in err

    def test_missing_key_named(self, capsys):
        code, _, err = run_cli(capsys, ["multiplier", "--set", "c=0.5"])
        assert code == EXIT_CONFIG
        assert "'p'" in err


class TestSimulate:
    ARGS = [
        "simulate", "--set", "c=0.5", "--set", "p=0.1", "--set", "n=0.05",
        "--set", "R=0.05", "--set", "model=net_capital", "--set", "A=1",
        "--set", "L=1", "--set", "alpha_L=0.5", "--set", "b=0.5",
        "--set", "K0=4", "--set", "horizon=8000", "--set", "dt_out=400",
    ]

    def test_header_and_columns(self, capsys):
        code, out, _ = run_cli(capsys, self.ARGS)
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(TRAJECTORY_COLUMNS)
        assert all(len(line.split(",")) == len(TRAJECTORY_COLUMNS) for line in lines[1:])

    def test_reaches_steady_state(self, capsys):
        code, out, _ = run_cli(capsys, self.ARGS)
        assert code == EXIT_OK
        last = out.strip().splitlines()[-1].split(",")
        assert float(last[1]) == pytest.approx(25.0, rel=1e-5)
        assert last[-1] == "Convergent"

    def test_unknown_model_lists_valid_laws(self, capsys):
        code, _, err = run_cli(
            capsys, self.ARGS[:-8] + ["--set", "model=bogus", "--set", "K0=4",
                                      "--set", "horizon=10"]
        )
        assert code == EXIT_CONFIG
        assert "net_capital" in err

    def test_writes_file(self, capsys, tmp_path):
        out_path = tmp_path / "traj.csv"
        code, out, _ = run_cli(capsys, [*self.ARGS, "--out", str(out_path)])
        assert code == EXIT_OK
        assert out == ""
        assert out_path.read_text().startswith(",".join(TRAJECTORY_COLUMNS))


class TestSweep:
    ARGS = [
        "sweep", *ECONOMY, "--set", "sweep.variable=p",
        "--set", "sweep.from=0.01", "--set", "sweep.to=0.3",
        "--set", "sweep.steps=40",
    ]

    def test_header_and_shape(self, capsys):
        code, out, _ = run_cli(capsys, self.ARGS)
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 41

    def test_includes_divergent_points(self, capsys):
        _, out, _ = run_cli(capsys, self.ARGS)
        assert "Divergent" in out and "Convergent" in out

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(self.ARGS + ["--out", str(a)]) == EXIT_OK
        assert run(self.ARGS + ["--out", str(b)]) == EXIT_OK
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_parallel_matches_serial_bytes(self, tmp_path, capsys):
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        assert run(self.ARGS + ["--out", str(serial)]) == EXIT_OK
        assert run(self.ARGS + ["--jobs", "4", "--out", str(parallel)]) == EXIT_OK
        capsys.readouterr()
        assert serial.read_bytes() == parallel.read_bytes()

    def test_k_sweep_requires_hyperbolic(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["sweep", *ECONOMY, "--set", "sweep.variable=k",
             "--set", "sweep.from=0.01", "--set", "sweep.to=1",
             "--set", "sweep.steps=5"],
        )
        assert code == EXIT_CONFIG
        assert "hyperbolic" in err

    def test_rejects_bad_variable(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["sweep", *ECONOMY, "--set", "sweep.variable=zeta",
             "--set", "sweep.from=0", "--set", "sweep.to=1", "--set", "sweep.steps=2"],
        )
        assert code == EXIT_CONFIG
        assert "sweep.variable" in err


class TestSensitivity:
    def test_partials_with_small_fd_residuals(self, capsys):
        code, out, _ = run_cli(capsys, ["sensitivity", *ECONOMY])
        assert code == EXIT_OK
        values = dict(line.split(" = ") for line in out.strip().splitlines())
        assert float(values["dMr_dR"]) < 0.0
        for key in ("fd_residual_p", "fd_residual_R", "fd_residual_c"):
            assert abs(float(values[key])) < 1e-6

    def test_divergent_region_is_numerical_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["sensitivity", "--set", "c=0.5", "--set", "p=0.3",
             "--set", "n=0.1", "--set", "R=0.05"],
        )
        assert code == EXIT_NUMERICAL
        assert "convergent region" in err


class TestPredict:
    def test_all_predictions_pass(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["predict", *ECONOMY, "--set", "A=1", "--set", "L=1",
             "--set", "alpha_L=0.5", "--set", "b=0.5"],
        )
        assert code == EXIT_OK
        assert out.count(": pass") == 11
        assert "FAIL" not in out
        assert "RFalls" in out and "RGrows" in out


class TestOptimumAndAdjudicate:
    def test_optimum_interior_at_equilibrium(self, capsys):
        code, out, _ = run_cli(capsys, ["optimum", *ECONOMY])
        assert code == EXIT_OK
        assert "regime = Interior" in out

    def test_optimum_hyperbolic_domain_exit_is_numerical(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["optimum", "--set", "c=0.5", "--set", "p=0.25", "--set", "n=0.2",
             "--set", "R=0.05", "--set", "k=0.1"],
        )
        assert code == EXIT_NUMERICAL

    def test_adjudicate_monotone_partials(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["adjudicate", "--set", "c=0.5", "--set", "p=0.2", "--set", "n=0.15",
             "--set", "R=0.05", "--set", "k=0.1",
             "--set", "horizons=10,100,1000"],
        )
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        partials = [float(l.split(" = ")[1]) for l in lines if l.startswith("partial_integral")]
        limit = float(lines[-1].split(" = ")[1])
        assert partials == sorted(partials)
        assert partials[-1] <= limit * (1 + 1e-9)

    def test_bad_jobs_rejected(self, capsys):
        code, _, err = run_cli(capsys, ["multiplier", *ECONOMY, "--jobs", "0"])
        assert code == EXIT_CONFIG
        assert "--jobs" in err
