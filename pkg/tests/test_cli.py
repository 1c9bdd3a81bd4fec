import numpy as np
import pytest

from ruinlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SOLVE_FIG1_II = [
    "solve", "--a", "0.02", "--b", "0.1", "--c", "0.1",
    "--lambda", "0.09", "--m", "1", "--umax", "100", "--points", "200",
]


class TestSolveCommand:
    def test_csv_shape_and_footer(self, capsys):
        code, out, err = run(capsys, *SOLVE_FIG1_II)
        assert code == 0 and err == ""
        lines = out.strip().split("\n")
        assert lines[0] == "u,phi,dphi,ddphi"
        rows = [ln for ln in lines if not ln.startswith("#")][1:]
        assert len(rows) == 200
        footer = [ln for ln in lines if ln.startswith("#")]
        c0_line = next(ln for ln in footer if ln.startswith("# C0 = "))
        assert float(c0_line.split("=")[1]) == pytest.approx(0.295, abs=0.002)
        assert any(ln.startswith("# regime = main") for ln in footer)

    def test_round_trip_formatting(self, capsys):
        _, out, _ = run(capsys, *SOLVE_FIG1_II)
        rows = [ln for ln in out.strip().split("\n")[1:] if not ln.startswith("#")]
        for row in rows[::37]:
            rebuilt = ",".join(f"{float(tok):.12g}" for tok in row.split(","))
            assert rebuilt == row

    def test_preset_riskfree(self, capsys):
        code, out, _ = run(capsys, "solve", "--preset", "fig3-II")
        assert code == 0
        c0_line = next(ln for ln in out.split("\n") if ln.startswith("# C0 = "))
        assert float(c0_line.split("=")[1]) == pytest.approx(0.2046, rel=1e-3)

    def test_preset_capital_stock_reports_p1(self, capsys):
        code, out, _ = run(capsys, "solve", "--preset", "fig5-I", "--umax", "20")
        assert code == 0
        p1_line = next(ln for ln in out.split("\n") if ln.startswith("# P1 = "))
        assert float(p1_line.split("=")[1]) == pytest.approx(0.0595238, rel=1e-4)

    def test_no_solution_exits_3(self, capsys):
        code, out, err = run(
            capsys, "solve", "--a", "0", "--b", "0", "--c", "0.05",
            "--lambda", "0.09", "--m", "1",
        )
        assert code == 3
        assert "no solution: c <= lambda*m" in err

    def test_zero_solution_flagged(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--a", "0.001", "--b", "0.1", "--c", "0.1",
            "--lambda", "0.09", "--m", "1", "--umax", "10",
        )
        assert code == 0
        assert "ruin certain" in out
        rows = [ln for ln in out.strip().split("\n")[1:] if not ln.startswith("#")]
        assert all(float(r.split(",")[1]) == 0.0 for r in rows)

    def test_missing_params_exit_2(self, capsys):
        code, _, err = run(capsys, "solve", "--a", "0.02")
        assert code == 2 and "missing parameter" in err

    def test_unknown_preset_exit_2(self, capsys):
        code, _, err = run(capsys, "solve", "--preset", "nope")
        assert code == 2 and "unknown preset" in err

    def test_bad_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--bogus", "1"])
        assert exc.value.code == 2

    def test_output_file_and_gnuplot(self, tmp_path, capsys):
        csv = tmp_path / "sol.csv"
        code, out, _ = run(
            capsys, "solve", "--preset", "fig1-I", "--out", str(csv), "--gnuplot"
        )
        assert code == 0 and out == ""
        text = csv.read_text()
        assert text.startswith("u,phi,dphi,ddphi\n") and text.endswith("\n")
        script = tmp_path / "sol.gp"
        assert script.exists() and str(csv) in script.read_text()

    def test_gnuplot_requires_out(self, capsys):
        code, _, err = run(capsys, "solve", "--preset", "fig1-I", "--gnuplot")
        assert code == 2 and "--gnuplot requires --out" in err

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "a = 0\nb = 0\nc = 0.05\nlambda = 0.09\nm = 1\numax = 10  # comment\n"
        )
        # config alone: nonviable parameters
        code, _, err = run(capsys, "solve", "--config", str(cfg))
        assert code == 3
        # flag overrides the config premium rate
        code, out, _ = run(capsys, "solve", "--config", str(cfg), "--c", "0.1")
        assert code == 0
        c0_line = next(ln for ln in out.split("\n") if ln.startswith("# C0 = "))
        assert float(c0_line.split("=")[1]) == pytest.approx(0.1, abs=1e-12)


class TestResidualCommand:
    def test_classical_sup_residual(self, capsys):
        code, out, _ = run(capsys, "residual", "--preset", "fig1-I", "--points", "101")
        assert code == 0
        sup_line = next(ln for ln in out.split("\n") if "sup_rel_residual" in ln)
        assert float(sup_line.split("=")[1]) < 1e-9


class TestMcCommand:
    ARGS = [
        "mc", "--preset", "fig1-I", "--u", "5", "--n", "2000",
        "--T", "400", "--seed", "42",
    ]

    def test_header_and_determinism(self, capsys):
        code1, out1, _ = run(capsys, *self.ARGS)
        code2, out2, _ = run(capsys, *self.ARGS)
        assert code1 == code2 == 0
        assert out1 == out2
        assert out1.startswith("u,p_hat,stderr,n,T,dt,seed\n")
        row = out1.strip().split("\n")[1].split(",")
        assert float(row[0]) == 5.0 and int(row[3]) == 2000 and int(row[6]) == 42

    def test_multiple_u_values(self, capsys):
        code, out, _ = run(
            capsys, "mc", "--preset", "fig1-I", "--u", "0,2,5", "--n", "500",
            "--T", "100", "--seed", "1",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 4

    def test_single_path_degenerate(self, capsys):
        code, out, _ = run(
            capsys, "mc", "--preset", "fig1-I", "--u", "5", "--n", "1",
            "--T", "100", "--seed", "9",
        )
        assert code == 0
        row = out.strip().split("\n")[1].split(",")
        assert float(row[1]) in (0.0, 1.0) and float(row[2]) == 0.0

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("RUINLAB_SEED", "777")
        code, out, _ = run(
            capsys, "mc", "--preset", "fig1-I", "--u", "5", "--n", "100", "--T", "50"
        )
        assert code == 0
        assert out.strip().split("\n")[1].split(",")[6] == "777"

    def test_missing_u_exit_2(self, capsys):
        code, _, err = run(capsys, "mc", "--preset", "fig1-I")
        assert code == 2 and "requires --u" in err


class TestPresetsCommand:
    def test_lists_all_scenarios(self, capsys):
        code, out, _ = run(capsys, "presets")
        assert code == 0
        for name in ("fig1-I", "fig1-II", "fig2-I", "fig2-II", "fig3-I",
                     "fig3-II", "fig4-I", "fig4-II", "fig5-I", "fig5-II"):
            assert name in out
        assert "P1 = 0.059587" in out  # landmark column present


class TestUnboundedSlopeFormatting:
    def test_riskfree_no_premium_writes_inf(self, capsys):
        code, out, _ = run(capsys, "solve", "--preset", "fig4-II", "--umax", "5",
                           "--points", "6")
        assert code == 0
        first_row = out.split("\n")[1].split(",")
        assert first_row[2] == "inf" and first_row[3] == "-inf"

    def test_capital_stock_low_mu1_writes_inf(self, capsys):
        code, out, _ = run(capsys, "solve", "--preset", "fig5-II", "--umax", "5",
                           "--points", "6")
        assert code == 0
        first_row = out.split("\n")[1].split(",")
        assert first_row[2] == "inf"
