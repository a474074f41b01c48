import os
import subprocess
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import render  # noqa: E402


def hitrun(*args):
    """Drive the primary package through its CLI, its published interface."""
    result = subprocess.run(["hitrun", *args], capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def fixtures(tmp_path_factory):
    d = tmp_path_factory.mktemp("csv")
    paths = {
        "hnr": d / "s5_hnr.csv",
        "r2r": d / "s5_r2r.csv",
        "curve": d / "mix_n4.csv",
        "curve2": d / "mix_n5.csv",
    }
    hitrun("spectrum", "--n", "5", "--measure", "hnr-ttr", "--out", str(paths["hnr"]))
    hitrun("spectrum", "--n", "5", "--measure", "r2r", "--out", str(paths["r2r"]))
    hitrun("mix", "--n", "4", "--tmax", "25", "--out", str(paths["curve"]))
    hitrun("mix", "--n", "5", "--tmax", "25", "--out", str(paths["curve2"]))
    return {k: str(v) for k, v in paths.items()}


def run_render(*argv):
    return render.main(list(argv))


class TestKinds:
    def test_eig_hist(self, fixtures, tmp_path):
        out = tmp_path / "hist.svg"
        assert run_render(fixtures["hnr"], "--kind", "eig-hist", "--out", str(out)) == 0
        assert out.read_text().lstrip().startswith("<?xml")

    def test_eig_hist_values_within_unit_interval(self, fixtures):
        vals = render.read_spectrum(fixtures["hnr"])
        assert all(-1e-9 <= v <= 1 + 1e-9 for v in vals)

    def test_overlay(self, fixtures, tmp_path):
        out = tmp_path / "overlay.svg"
        code = run_render(
            fixtures["r2r"], fixtures["hnr"],
            "--kind", "eig-hist-overlay", "--out", str(out),
        )
        assert code == 0 and out.exists()

    def test_overlay_requires_two_inputs(self, fixtures, tmp_path):
        out = tmp_path / "overlay.svg"
        code = run_render(fixtures["r2r"], "--kind", "eig-hist-overlay", "--out", str(out))
        assert code == 2 and not out.exists()

    def test_curve(self, fixtures, tmp_path):
        out = tmp_path / "curve.svg"
        assert run_render(fixtures["curve"], "--kind", "curve", "--out", str(out)) == 0
        assert out.exists()
        out2 = tmp_path / "curve_d2.svg"
        assert run_render(
            fixtures["curve"], "--kind", "curve", "--column", "d2", "--out", str(out2)
        ) == 0

    def test_cutoff_panel(self, fixtures, tmp_path):
        out = tmp_path / "panel.svg"
        code = run_render(
            fixtures["curve"], fixtures["curve2"],
            "--kind", "cutoff-panel", "--out", str(out),
        )
        assert code == 0 and out.exists()


class TestDeterminism:
    def test_identical_inputs_identical_bytes(self, fixtures, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for out in (a, b):
            assert run_render(fixtures["hnr"], "--kind", "eig-hist", "--out", str(out)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_inputs_not_mutated(self, fixtures, tmp_path):
        before = open(fixtures["hnr"], "rb").read()
        run_render(fixtures["hnr"], "--kind", "eig-hist", "--out", str(tmp_path / "x.svg"))
        assert open(fixtures["hnr"], "rb").read() == before


class TestErrors:
    def test_schema_mismatch_names_missing_column(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("foo,bar\n1,2\n")
        out = tmp_path / "never.svg"
        assert run_render(str(bad), "--kind", "eig-hist", "--out", str(out)) == 2
        assert "missing column 'index'" in capsys.readouterr().err
        assert not out.exists()

    def test_empty_input_writes_no_file(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text("index,eigenvalue\n")
        out = tmp_path / "never.svg"
        assert run_render(str(empty), "--kind", "eig-hist", "--out", str(out)) == 2
        assert "no data rows" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_file(self, tmp_path):
        out = tmp_path / "never.svg"
        assert run_render(str(tmp_path / "nope.csv"), "--kind", "curve", "--out", str(out)) == 2
        assert not out.exists()


class TestFigure2Claim:
    def test_r2r_has_strictly_more_near_zero_eigenvalues(self, fixtures):
        r2r = render.near_zero_count(render.read_spectrum(fixtures["r2r"]))
        hnr = render.near_zero_count(render.read_spectrum(fixtures["hnr"]))
        assert r2r > hnr
