"""Command-line driver: exit codes, artifacts, determinism, SVG output."""
from __future__ import annotations

import json
import subprocess
import sys
from types import SimpleNamespace

import numpy as np
import pytest

from bcregions import (
    JointPmf,
    Pmf,
    RegionError,
    UVDist,
    UXDist,
    from_halfplanes,
    HalfPlane,
    Region2D,
    load_region,
    make_bsc_bc,
    region_svg,
    save_channel,
    save_dist,
)
import bcregions.cli as cli


@pytest.fixture
def bsc_file(tmp_path):
    path = tmp_path / "channel.txt"
    save_channel(make_bsc_bc(0.1, 0.2), str(path))
    return str(path)


@pytest.fixture
def uv_file(tmp_path):
    dist = UVDist(Pmf([0.5, 0.5]), Pmf([0.5, 0.5]), np.array([[0, 1], [1, 0]]))
    path = tmp_path / "uv.txt"
    save_dist(dist, str(path))
    return str(path)


@pytest.fixture
def ux_file(tmp_path):
    path = tmp_path / "ux.txt"
    save_dist(UXDist(JointPmf(np.array([[0.4, 0.1], [0.1, 0.4]]))), str(path))
    return str(path)


def small_config(tmp_path) -> str:
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps({"sweep": {"grid_steps": 2, "random_samples": 5, "refine_iters": 2, "refine_directions": 4}})
    )
    return str(path)


class TestRegionCommand:
    def test_single_scheme_writes_parseable_document(self, tmp_path, bsc_file, uv_file, capsys):
        out = tmp_path / "region.txt"
        svg = tmp_path / "region.svg"
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "uv", "--dist", uv_file, "--out", str(out), "--svg", str(svg)]
        )
        assert code == 0
        region = load_region(str(out))
        assert not region.is_empty
        assert svg.read_text().startswith("<svg ")
        assert "wrote" in capsys.readouterr().out

    def test_rerun_is_byte_identical(self, tmp_path, bsc_file, ux_file):
        argv = ["region", "--channel", bsc_file, "--scheme", "ux,vx", "--dist", ux_file]
        out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
        svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
        assert cli.main(argv + ["--out", str(out1), "--svg", str(svg1)]) == 0
        assert cli.main(argv + ["--out", str(out2), "--svg", str(svg2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert svg1.read_bytes() == svg2.read_bytes()

    def test_swept_scheme_with_config(self, tmp_path, bsc_file):
        out = tmp_path / "swept.txt"
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", small_config(tmp_path), "--out", str(out)]
        )
        assert code == 0
        assert not load_region(str(out)).is_empty

    def test_missing_dist_for_single_scheme(self, tmp_path, bsc_file, capsys):
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "uv", "--out", str(tmp_path / "r.txt")])
        assert code == 2
        assert "requires --dist" in capsys.readouterr().err

    def test_scheme_dist_kind_mismatch(self, tmp_path, bsc_file, uv_file, capsys):
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "vx", "--dist", uv_file, "--out", str(tmp_path / "r.txt")]
        )
        assert code == 2
        assert "joint (u, x)" in capsys.readouterr().err

    def test_unknown_scheme(self, tmp_path, bsc_file, uv_file, capsys):
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "qq", "--dist", uv_file, "--out", str(tmp_path / "r.txt")]
        )
        assert code == 2
        assert "unknown scheme 'qq'" in capsys.readouterr().err

    def test_malformed_channel_names_the_row(self, tmp_path, uv_file, capsys):
        bad = tmp_path / "bad-channel.txt"
        good = tmp_path / "good.txt"
        save_channel(make_bsc_bc(0.1, 0.2), str(good))
        lines = good.read_text().splitlines()
        lines[-1] = "0.9 0.1 0.1 0.1"  # row no longer sums to one
        bad.write_text("\n".join(lines) + "\n")
        code = cli.main(
            ["region", "--channel", str(bad), "--scheme", "uv", "--dist", uv_file, "--out", str(tmp_path / "r.txt")]
        )
        assert code == 2
        assert "row for x=1" in capsys.readouterr().err

    def test_missing_dist_file(self, tmp_path, bsc_file, capsys):
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "uv", "--dist", str(tmp_path / "absent.txt"), "--out", str(tmp_path / "r.txt")]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_geometry_failure_is_internal_error(self, tmp_path, bsc_file, uv_file, capsys, monkeypatch):
        def boom(channel, dist):
            raise RegionError("synthetic geometry failure")

        monkeypatch.setattr(cli, "region_uv", boom)
        code = cli.main(
            ["region", "--channel", bsc_file, "--scheme", "uv", "--dist", uv_file, "--out", str(tmp_path / "r.txt")]
        )
        assert code == 3
        assert "internal error: synthetic geometry failure" in capsys.readouterr().err


class TestConfigHandling:
    def test_unknown_block_rejected(self, tmp_path, bsc_file, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"sweeps": {}}))
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", str(cfg), "--out", str(tmp_path / "r.txt")])
        assert code == 2
        assert "unknown config blocks" in capsys.readouterr().err

    def test_unknown_sweep_key_rejected(self, tmp_path, bsc_file, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"sweep": {"grid": 3}}))
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", str(cfg), "--out", str(tmp_path / "r.txt")])
        assert code == 2
        assert "unknown sweep keys" in capsys.readouterr().err

    def test_non_object_root_rejected(self, tmp_path, bsc_file, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("[1, 2]")
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", str(cfg), "--out", str(tmp_path / "r.txt")])
        assert code == 2
        assert "config root" in capsys.readouterr().err

    def test_invalid_budget_value_rejected(self, tmp_path, bsc_file, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"sweep": {"grid_steps": 1}}))
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", str(cfg), "--out", str(tmp_path / "r.txt")])
        assert code == 2
        assert "grid_steps" in capsys.readouterr().err

    def test_malformed_json_rejected(self, tmp_path, bsc_file, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        code = cli.main(["region", "--channel", bsc_file, "--scheme", "sweep-ux", "--config", str(cfg), "--out", str(tmp_path / "r.txt")])
        assert code == 2


class TestVerifyTheoremCommand:
    def test_small_corpus_passes(self, tmp_path, capsys):
        report = tmp_path / "report.txt"
        code = cli.main(["verify-theorem", "--channels", "3", "--dists", "2", "--skip-demo", "--report", str(report)])
        assert code == 0
        text = report.read_text()
        assert text.startswith("theorem verification report")
        # named channels plus the random ones, each with both dists
        assert text.count("verdict=ok") == (3 + 3) * 2
        assert "verdicts: all ok" in text
        assert "FAIL" not in text

    def test_failure_serializes_the_offender(self, tmp_path, capsys, monkeypatch):
        def fake_verify(channel, dist):
            return SimpleNamespace(
                primary_case="case1", applicable_cases=("case1",), margin=-0.5, verdict=False
            )

        monkeypatch.setattr(cli, "verify_inclusion", fake_verify)
        report = tmp_path / "report.txt"
        code = cli.main(["verify-theorem", "--channels", "0", "--dists", "1", "--skip-demo", "--report", str(report)])
        assert code == 1
        assert "FAILURES PRESENT" in report.read_text()
        err = capsys.readouterr().err
        assert "offending instance serialized" in err
        offenders = list(tmp_path.glob("offending-*"))
        assert len(offenders) == 2  # channel and dist documents


class TestSimulateCommand:
    def test_csv_shape_and_determinism(self, tmp_path, bsc_file, uv_file):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = [
            "simulate", "--channel", bsc_file, "--dist", uv_file,
            "--n", "6", "--r1", "0.333", "--r2", "0.333", "--trials", "10", "--seed", "5",
        ]
        assert cli.main(argv + ["--out", str(out1)]) == 0
        assert cli.main(argv + ["--out", str(out2)]) == 0
        lines = out1.read_text().splitlines()
        assert len(lines) == 2
        header, row = lines
        assert header.split(",")[0] == "scheme"
        fields = row.split(",")
        assert len(fields) == len(header.split(",")) == 17
        assert fields[0] == "uv"
        assert out1.read_bytes() == out2.read_bytes()

    def test_zero_trials_writes_header_only(self, tmp_path, bsc_file, uv_file):
        out = tmp_path / "empty.csv"
        code = cli.main(
            ["simulate", "--channel", bsc_file, "--dist", uv_file, "--n", "6", "--r1", "0.2", "--r2", "0.2",
             "--trials", "0", "--out", str(out)]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 1

    def test_pair_cap_is_an_input_error(self, tmp_path, bsc_file, uv_file, capsys):
        code = cli.main(
            ["simulate", "--channel", bsc_file, "--dist", uv_file, "--n", "30", "--r1", "0.45", "--r2", "0.45",
             "--trials", "1", "--out", str(tmp_path / "o.csv")]
        )
        assert code == 2
        assert "exceeds the cap" in capsys.readouterr().err

    def test_typicality_and_receiver_selection(self, tmp_path, bsc_file, uv_file):
        out = tmp_path / "typ.csv"
        code = cli.main(
            ["simulate", "--channel", bsc_file, "--dist", uv_file, "--n", "6", "--r1", "0.333", "--r2", "0.333",
             "--trials", "5", "--decoder", "typicality", "--eps", "0.5", "--receivers", "2", "--out", str(out)]
        )
        assert code == 0
        fields = out.read_text().splitlines()[1].split(",")
        assert fields[8] == "typicality"
        rx1_errors, rx2_errors, joint = fields[12], fields[13], fields[14]
        assert rx1_errors == "" and joint == ""
        assert rx2_errors != ""


class TestDemoCommand:
    def test_artifacts_and_certification(self, tmp_path, capsys):
        outdir = tmp_path / "demo"
        code = cli.main(["demo-vector-bc", "--outdir", str(outdir), "--config", small_config(tmp_path), "--seed", "1"])
        assert code == 0
        for name in ("channel.txt", "witness-dist.txt", "two-layer-hull.txt", "split-hull.txt", "demo.svg", "report.txt"):
            assert (outdir / name).exists(), name
        report = (outdir / "report.txt").read_text()
        assert "corner (1,1) achieved by witness: True" in report
        assert "separation certified: True" in report
        hull = load_region(str(outdir / "two-layer-hull.txt"))
        assert hull.member((1.0 - 1e-9, 1.0 - 1e-9))
        split = load_region(str(outdir / "split-hull.txt"))
        assert not split.member((0.6, 0.6))


class TestHelpEntryPoint:
    def test_console_script_prints_usage(self):
        proc = subprocess.run(["bcregions", "--help"], capture_output=True, text=True, timeout=60)
        assert proc.returncode == 0
        assert "region" in proc.stdout and "simulate" in proc.stdout


class TestSvgRendering:
    def test_deterministic_and_labeled(self):
        square = from_halfplanes([HalfPlane(1, 0, 1), HalfPlane(0, 1, 1)])
        tri = from_halfplanes([HalfPlane(1, 1, 0.8)])
        svg1 = region_svg([("outer", square), ("inner", tri)], title="two shapes")
        svg2 = region_svg([("outer", square), ("inner", tri)], title="two shapes")
        assert svg1 == svg2
        assert svg1.count("<polygon ") == 2
        assert ">outer<" in svg1 and ">inner<" in svg1
        assert ">two shapes<" in svg1
        assert "R1 (bits)" in svg1 and "R2 (bits)" in svg1

    def test_empty_region_still_draws_axes(self):
        svg = region_svg([("nothing", Region2D())])
        assert "<polygon " not in svg
        assert svg.count("<line ") >= 2
        assert ">nothing<" in svg

    def test_segment_part_drawn_as_polyline(self):
        seg = from_halfplanes([HalfPlane(1, 0, 1.2), HalfPlane(0, 1, 0)])
        svg = region_svg([("segment", seg)])
        assert "<polyline " in svg
