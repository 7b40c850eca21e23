"""Renderers against hand-built fixtures plus live solver artifacts.

The live test drives the hyperres CLI (the solver's external interface)
end to end and regenerates the figure set from its CSV output.
"""

import shutil
import subprocess
import sys

import pytest
from click.testing import CliRunner

from resplots.cli import main
from resplots.io import (
    EmptyInputError,
    SchemaError,
    read_counting,
    read_indicator,
    read_resonances,
)

RES_HEADER = "n,l,k,re_s,im_s,zero_order,mu,total_multiplicity,residual\n"


@pytest.fixture()
def res_csv(tmp_path):
    path = tmp_path / "resonances.csv"
    rows = [
        "2,0,0.5,-0.7548,-2.6663,1,1,1,1e-14",
        "2,0,0.5,-0.7548,2.6663,1,1,1,1e-14",
        "2,1,1.5,-1.2,4.0,1,3,3,1e-13",
        "2,1,1.5,-1.2,-4.0,1,3,3,1e-13",
        "2,0,0.5,-1,0,1,1,1,1e-15",
    ]
    path.write_text(RES_HEADER + "\n".join(rows) + "\n")
    return path


@pytest.fixture()
def counting_csv(tmp_path):
    path = tmp_path / "counting.csv"
    lines = ["t,N,N0,N_tilde,weyl_pred"]
    for i in range(30):
        t = i / 3.0
        lines.append(f"{t},{i * i},{0},{1.5 * i * i},{1.55 * t ** 3}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture()
def indicator_csv(tmp_path):
    path = tmp_path / "indicator.csv"
    lines = ["theta,h,rho"]
    import math

    for i in range(41):
        th = -math.pi / 2 + i * math.pi / 40
        lines.append(f"{th},{max(0.0, 1.2 * math.cos(th))},{0.85 + 0.1 * math.cos(th)}")
    path.write_text("\n".join(lines) + "\n")
    return path


class TestReaders:
    def test_schema_mismatch_is_explicit(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError) as err:
            read_resonances(bad)
        assert "missing" in str(err.value)

    def test_empty_input_is_error(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(RES_HEADER)
        with pytest.raises(EmptyInputError):
            read_resonances(empty)

    def test_roundtrip_row_count(self, res_csv):
        assert read_resonances(res_csv).rows == 5


class TestCli:
    def test_all_kinds(self, res_csv, counting_csv, indicator_csv, tmp_path):
        runner = CliRunner()
        jobs = [
            (["resonances", "--in", str(res_csv), "--out", str(tmp_path / "f1.svg")], "5 rows"),
            (["counting", "--in", str(counting_csv), "--out", str(tmp_path / "f2.png")], "30 rows"),
            (["indicator", "--in", str(indicator_csv), "--out", str(tmp_path / "f4.svg")], "41 rows"),
            (["hregion", "--in", str(indicator_csv), "--out", str(tmp_path / "f3.svg")], "41 rows"),
            (
                ["compare", "--in", str(res_csv), "--in", str(res_csv),
                 "--out", str(tmp_path / "f5.png")],
                "10 rows",
            ),
        ]
        for args, needle in jobs:
            result = runner.invoke(main, args)
            assert result.exit_code == 0, result.output
            assert needle in result.output
            out = args[args.index("--out") + 1]
            assert (tmp_path / out.split("/")[-1]).stat().st_size > 0

    def test_bad_extension(self, res_csv, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            main, ["resonances", "--in", str(res_csv), "--out", str(tmp_path / "f.pdf")]
        )
        assert result.exit_code == 2

    def test_wrong_schema_fails_cleanly(self, counting_csv, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            main, ["resonances", "--in", str(counting_csv), "--out", str(tmp_path / "x.svg")]
        )
        assert result.exit_code == 1
        assert "header mismatch" in result.output


@pytest.mark.skipif(shutil.which("hyperres") is None, reason="solver CLI not installed")
class TestLiveArtifacts:
    """AC11-style: regenerate the figure set from real solver output."""

    def test_figures_from_solver_artifacts(self, tmp_path):
        run = tmp_path / "run"
        subprocess.run(
            ["hyperres", "resonances", "--n", "2", "--potential", "step:c=1,r0=1",
             "--tmax", "8", "--out", str(run)],
            check=True,
        )
        subprocess.run(
            ["hyperres", "count", "--n", "2", "--potential", "step:c=1,r0=1",
             "--tmax", "8", "--out", str(run),
             "--resonances-csv", str(run / "resonances.csv")],
            check=True,
        )
        subprocess.run(
            ["hyperres", "resonances", "--n", "2", "--potential", "step:c=0+1i,r0=1",
             "--tmax", "8", "--out", str(run / "imag")],
            check=True,
        )
        subprocess.run(
            ["hyperres", "indicator", "--n", "2", "--r0", "1.0", "--num-theta", "41",
             "--out", str(run)],
            check=True,
        )
        runner = CliRunner()
        n_res = read_resonances(run / "resonances.csv").rows
        jobs = [
            ["resonances", "--in", str(run / "resonances.csv"),
             "--out", str(tmp_path / "fig1.svg")],
            ["counting", "--in", str(run / "counting.csv"),
             "--out", str(tmp_path / "fig2.svg")],
            ["indicator", "--in", str(run / "indicator.csv"),
             "--out", str(tmp_path / "fig4.svg")],
            ["compare", "--in", str(run / "resonances.csv"),
             "--in", str(run / "imag" / "resonances.csv"),
             "--out", str(tmp_path / "fig5.png")],
        ]
        for args in jobs:
            result = runner.invoke(main, args)
            assert result.exit_code == 0, result.output
        assert f"{n_res} rows" in runner.invoke(main, jobs[0]).output
        for name in ("fig1.svg", "fig2.svg", "fig4.svg", "fig5.png"):
            assert (tmp_path / name).stat().st_size > 1000
