"""Command-line interface: subcommands, exit codes, output formats."""

import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from ruled_slant.cli import main
from ruled_slant.report import CSV_BASE_COLUMNS, load_schema


def run(*argv):
    return main(list(argv))


def test_gallery_lists_presets(capsys):
    assert run("gallery") == 0
    out = capsys.readouterr().out
    for name in ("helicoid", "cone-theta", "slant-family-c", "quadratic", "nonslant-mixed"):
        assert name in out


def test_analyze_cone_preset(tmp_path):
    out = tmp_path / "cone.json"
    code = run("analyze", "--preset", "cone-theta", "--theta", "0.7853981634",
               "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["slant"]["q_slant"]["verdict"] == "yes"
    assert report["frame_summary"]["kappa_q"]["spread"] <= 1e-8
    assert report["consistency"]["disagreement"] is False


def test_analyze_helicoid_flags(tmp_path):
    out = tmp_path / "heli.json"
    code = run("analyze", "--base", "0,0,u", "--director", "cos(u),sin(u),0",
               "--u", "0:6.283:256", "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["frame_summary"]["kappa_q"]["max"] <= 1e-12
    assert report["slant"]["a_slant"]["verdict"] == "degenerate"
    assert report["slant"]["q_slant"]["verdict"] == "yes"


def test_analyze_cylindrical_exits_2(capsys):
    code = run("analyze", "--base", "cos(u),sin(u),0", "--director", "0,0,1",
               "--u", "0:6.283:64")
    assert code == 2
    assert "cylindrical" in capsys.readouterr().err


def test_usage_errors_exit_1(capsys):
    assert run("analyze") == 1
    assert run("analyze", "--base", "0,0,u") == 1
    assert run("analyze", "--preset", "bogus") == 1
    assert run("analyze", "--base", "0,0,u", "--director", "cos(u),sin(u),0",
               "--u", "0:1") == 1


def test_syntax_error_exits_1(capsys):
    code = run("analyze", "--base", "0,0,u", "--director", "cos(u)+,sin(u),0",
               "--u", "0:6.283:64")
    assert code == 1
    assert "expression error" in capsys.readouterr().err


def test_wrong_component_count_exits_1(capsys):
    code = run("analyze", "--base", "0,0,u", "--director", "cos(u),sin(u)",
               "--u", "0:6.283:64")
    assert code == 1
    assert "usage error" in capsys.readouterr().err


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["analyze", "--preset", "cone-theta", "--theta", "0.7853981634"]
    assert run(*argv, "--out", str(a)) == 0
    assert run(*argv, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_validates_against_schema(tmp_path):
    out = tmp_path / "r.json"
    assert run("analyze", "--preset", "slant-family-c", "--c", "0.5",
               "--out", str(out)) == 0
    jsonschema.validate(json.loads(out.read_text()), load_schema())


def test_csv_output(tmp_path):
    out = tmp_path / "r.json"
    csv_path = tmp_path / "r.csv"
    assert run("analyze", "--preset", "helicoid", "--u", "0:6.283:32",
               "--out", str(out), "--csv", str(csv_path)) == 0
    lines = csv_path.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header[: len(CSV_BASE_COLUMNS)] == CSV_BASE_COLUMNS
    assert len(lines) == 33  # header + one row per grid point
    # helicoid kappa == 0: central-tangent columns are blank
    first = lines[1].split(",")
    assert first[header.index("a_kappa")] == ""
    assert float(first[header.index("kappa_q")]) == pytest.approx(0.0, abs=1e-12)


def test_classify_subcommand_restricts(tmp_path):
    out = tmp_path / "c.json"
    assert run("classify", "--preset", "cone-theta", "--out", str(out)) == 0
    report = json.loads(out.read_text())
    assert set(report) == {"tool", "spec", "tolerances", "slant"}


def test_residuals_subcommand(tmp_path):
    out = tmp_path / "r.json"
    assert run("residuals", "--preset", "quadratic", "--out", str(out)) == 0
    report = json.loads(out.read_text())
    assert "ode_residuals" in report and "slant" not in report
    kinds = {entry["kind"] for entry in report["ode_residuals"]}
    assert len(kinds) == 9
    assert all(not entry["satisfied"] for entry in report["ode_residuals"])


def test_synth_subcommand(tmp_path):
    out = tmp_path / "s.json"
    csv_path = tmp_path / "s.csv"
    assert run("synth", "--preset", "slant-family-c", "--c", "1.0",
               "--out", str(out), "--csv", str(csv_path)) == 0
    report = json.loads(out.read_text())
    assert report["slant"]["h_slant"]["verdict"] == "yes"
    assert report["synthesis"]["max_gram_defect"] <= 1e-12
    assert csv_path.exists()


def test_synth_custom_kappa(tmp_path):
    out = tmp_path / "lin.json"
    assert run("synth", "--kappa", "t", "--u", "0:1.5:64", "--out", str(out)) == 0
    report = json.loads(out.read_text())
    assert report["spec"]["kind"] == "curvature-profile"
    assert report["slant"]["q_slant"]["verdict"] == "no"


def test_synth_rejects_surface_preset():
    assert run("synth", "--preset", "helicoid") == 1


def test_ode_tol_flag(tmp_path):
    out = tmp_path / "r.json"
    assert run("residuals", "--preset", "cone-theta", "--ode-tol", "1e-12",
               "--out", str(out)) == 0
    report = json.loads(out.read_text())
    assert all(entry["tolerance"] == 1e-12 for entry in report["ode_residuals"])


def test_mesh_obj_structure(tmp_path):
    out = tmp_path / "h.obj"
    assert run("mesh", "--preset", "helicoid", "--vmax", "1", "--nu", "64",
               "--nv", "9", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    vertices = [l for l in lines if l.startswith("v ")]
    faces = [l for l in lines if l.startswith("f ")]
    polylines = [l for l in lines if l.startswith("l ")]
    assert len(vertices) == 64 * 9 + 64  # surface grid plus striction polyline
    assert len(faces) == 2 * 63 * 8
    assert len(polylines) == 1
    max_index = max(int(i) for f in faces for i in f.split()[1:])
    assert max_index <= len(vertices)
    polyline_ids = [int(i) for i in polylines[0].split()[1:]]
    assert len(polyline_ids) == 64
    assert max(polyline_ids) == len(vertices)


def test_mesh_cone_striction_is_apex(tmp_path):
    out = tmp_path / "c.obj"
    assert run("mesh", "--preset", "cone-theta", "--nu", "16", "--nv", "3",
               "--out", str(out)) == 0
    lines = [l for l in out.read_text().splitlines() if l.startswith("v ")]
    striction = lines[16 * 3:]
    for line in striction:
        xyz = np.array([float(x) for x in line.split()[1:]])
        assert np.linalg.norm(xyz) <= 1e-10


def test_mesh_bad_grid_exits_1():
    assert run("mesh", "--preset", "helicoid", "--nv", "0", "--out", "/tmp/x.obj") == 1
    assert run("mesh", "--preset", "helicoid", "--vmax", "-1", "--out", "/tmp/x.obj") == 1


def test_plots_written(tmp_path):
    outdir = tmp_path / "figs"
    assert run("analyze", "--preset", "cone-theta", "--u", "0:6.283:48",
               "--out", str(tmp_path / "r.json"), "--plots", str(outdir)) == 0
    for name in ("curvature_profile.png", "ode_residuals.png", "derived_curvatures.png"):
        f = outdir / name
        assert f.exists() and f.stat().st_size > 0


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ruled_slant.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ruled-slant" in proc.stdout


def test_thread_cap_does_not_change_results(tmp_path, monkeypatch):
    argv = ["analyze", "--preset", "cone-theta", "--u", "0:6.283:64"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(*argv, "--out", str(a)) == 0
    monkeypatch.setenv("RULED_SLANT_THREADS", "4")
    assert run(*argv, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
