import numpy as np
import pytest

from rumorplots import (FigureSpec, SchemaError, plot_sweep_scatter,
                        plot_trajectory_compare, read_aggregate, read_summary)
from rumorplots.cli import main_compare, main_sweep


def fmt(x):
    return format(float(x), ".9g")


def write_aggregate(path, t, r, tf):
    lines = ["t,R_frac,T_frac"]
    lines += [f"{fmt(a)},{fmt(b)},{fmt(c)}" for a, b, c in zip(t, r, tf)]
    path.write_text("\n".join(lines) + "\n")


def write_summary(path, rows):
    lines = ["combo,s_q1,s_q2,verdict,outcome_linear,outcome_exact,deviation"]
    lines += [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def decaying_pair(tmp_path):
    t = np.linspace(0, 50, 101)
    lin = tmp_path / "linear.csv"
    exa = tmp_path / "exact.csv"
    write_aggregate(lin, t, 0.2 * np.exp(-0.3 * t), 1 - np.exp(-0.1 * t))
    write_aggregate(exa, t, 0.21 * np.exp(-0.28 * t), 1 - np.exp(-0.11 * t))
    return lin, exa


class TestReaders:
    def test_aggregate_round_trip(self, decaying_pair):
        lin, _ = decaying_pair
        data = read_aggregate(lin)
        assert set(data) == {"t", "R_frac", "T_frac"}
        assert len(data["t"]) == 101
        assert data["R_frac"][0] == pytest.approx(0.2)

    def test_aggregate_missing_column_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,rumor,T_frac\n0,0.5,0.5\n")
        with pytest.raises(SchemaError, match="R_frac"):
            read_aggregate(bad)

    def test_aggregate_no_rows(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("t,R_frac,T_frac\n")
        with pytest.raises(SchemaError, match="no rows"):
            read_aggregate(bad)

    def test_aggregate_non_numeric(self, tmp_path):
        bad = tmp_path / "nan.csv"
        bad.write_text("t,R_frac,T_frac\n0,high,0.5\n")
        with pytest.raises(SchemaError, match="non-numeric"):
            read_aggregate(bad)

    def test_missing_file_named(self, tmp_path):
        with pytest.raises(SchemaError, match="absent.csv"):
            read_aggregate(tmp_path / "absent.csv")

    def test_summary_blank_deviation_is_nan(self, tmp_path):
        f = tmp_path / "s.csv"
        write_summary(f, [(0, -0.5, -1.0, "DiesOut", "DiesOut", "", ""),
                          (1, 0.5, 0.1, "Persistent", "Persists",
                           "Persists", 0.12)])
        data = read_summary(f)
        assert np.isnan(data["deviation"][0])
        assert data["deviation"][1] == pytest.approx(0.12)
        assert list(data["combo"]) == [0, 1]

    def test_summary_wrong_header(self, tmp_path):
        f = tmp_path / "s.csv"
        f.write_text("combo,s_q1\n0,0.1\n")
        with pytest.raises(SchemaError, match="s_q2"):
            read_summary(f)


class TestTrajectoryCompare:
    def test_writes_non_empty_image(self, decaying_pair, tmp_path):
        lin, exa = decaying_pair
        out = tmp_path / "fig.png"
        plot_trajectory_compare(FigureSpec(
            kind="trajectory_compare", inputs={"linear": lin, "exact": exa},
            out=out))
        assert out.stat().st_size > 1000

    def test_identical_inputs_identical_output(self, decaying_pair, tmp_path):
        lin, _ = decaying_pair
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            plot_trajectory_compare(FigureSpec(
                kind="trajectory_compare",
                inputs={"linear": lin, "exact": lin}, out=out))
        assert a.read_bytes() == b.read_bytes()

    def test_mismatched_grids_rejected(self, decaying_pair, tmp_path):
        lin, _ = decaying_pair
        short = tmp_path / "short.csv"
        t = np.linspace(0, 50, 11)
        write_aggregate(short, t, np.zeros(11), np.ones(11))
        with pytest.raises(SchemaError, match="time grid"):
            plot_trajectory_compare(FigureSpec(
                kind="trajectory_compare",
                inputs={"linear": lin, "exact": short}, out=tmp_path / "x.png"))

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(SchemaError, match="kind"):
            FigureSpec(kind="pie_chart", inputs={}, out=tmp_path / "x.png")


class TestSweepScatter:
    def test_three_rows_plot(self, tmp_path):
        f = tmp_path / "s.csv"
        write_summary(f, [(0, -0.5, -1.0, "DiesOut", "DiesOut", "DiesOut", 0.01),
                          (1, 0.5, 0.1, "Persistent", "Persists",
                           "Persists", 0.3),
                          (2, 0.2, -0.1, "MayPersist", "Persists",
                           "Persists", 0.2)])
        out = tmp_path / "fig.png"
        plot_sweep_scatter(FigureSpec(
            kind="sweep_scatter", inputs={"summary": f}, out=out))
        assert out.stat().st_size > 1000

    def test_no_plottable_rows(self, tmp_path):
        f = tmp_path / "s.csv"
        write_summary(f, [(0, -0.5, -1.0, "DiesOut", "DiesOut", "", "")])
        with pytest.raises(SchemaError, match="no rows"):
            plot_sweep_scatter(FigureSpec(
                kind="sweep_scatter", inputs={"summary": f},
                out=tmp_path / "x.png"))


class TestCli:
    def test_compare_success(self, decaying_pair, tmp_path):
        lin, exa = decaying_pair
        out = tmp_path / "fig.png"
        rc = main_compare(["--linear", str(lin), "--exact", str(exa),
                           "--out", str(out)])
        assert rc == 0 and out.exists()

    def test_compare_schema_error_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,rumor,T_frac\n0,0.5,0.5\n")
        rc = main_compare(["--linear", str(bad), "--exact", str(bad),
                           "--out", str(tmp_path / "x.png")])
        assert rc == 1
        assert "R_frac" in capsys.readouterr().err

    def test_sweep_success(self, tmp_path):
        f = tmp_path / "s.csv"
        write_summary(f, [(0, -0.5, -1.0, "DiesOut", "DiesOut",
                           "DiesOut", 0.01)])
        out = tmp_path / "fig.png"
        rc = main_sweep(["--summary", str(f), "--out", str(out)])
        assert rc == 0 and out.exists()

    def test_sweep_missing_file_exit_1(self, tmp_path, capsys):
        rc = main_sweep(["--summary", str(tmp_path / "absent.csv"),
                         "--out", str(tmp_path / "x.png")])
        assert rc == 1
        assert "absent.csv" in capsys.readouterr().err


class TestAcceptanceSecondary:
    def test_dies_out_combo_figure(self, tmp_path):
        """plot-compare on DiesOut-style outputs: image non-empty and both
        Rfrac series (re-read from the CSVs) decay below 1e-3 by t_max."""
        t = np.linspace(0, 60, 121)
        lin = tmp_path / "combo_linear.csv"
        exa = tmp_path / "combo_exact.csv"
        write_aggregate(lin, t, 0.1 * np.exp(-0.25 * t), 1 - np.exp(-0.1 * t))
        write_aggregate(exa, t, 0.11 * np.exp(-0.24 * t), 1 - np.exp(-0.1 * t))
        out = tmp_path / "fig.png"
        rc = main_compare(["--linear", str(lin), "--exact", str(exa),
                           "--out", str(out)])
        assert rc == 0
        assert out.stat().st_size > 1000
        for path in (lin, exa):
            data = read_aggregate(path)
            assert data["R_frac"][-1] < 1e-3
        print("[SECONDARY] plot-compare DiesOut combo: PASS")
