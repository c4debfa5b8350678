"""Command line front end.

Subcommands: ``analyze`` (full pipeline, JSON/CSV/figures), ``classify`` and
``residuals`` (restricted views of analyze), ``synth`` (integrate a
curvature profile), ``mesh`` (OBJ export) and ``gallery`` (list presets).

Exit codes: 0 success, 1 usage or input errors, 2 degenerate-surface errors
(cylindrical ruling, vanishing normal, vanishing curvature, out-of-domain
expression evaluation).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .expr import ExpressionDomainError, ExpressionError
from .frame import GeometryError, RuledSurfaceSpec, Tolerances
from .report import (
    dump_json,
    run_analysis,
    write_csv,
    write_json,
)
from .synth import (
    CurvatureProfile,
    UnknownPresetError,
    gallery,
    gallery_description,
    gallery_names,
    synthesize_field,
)


class UsageError(ValueError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems through our exit-code scheme."""

    def error(self, message):
        raise UsageError(message)


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--u expects 'min:max:count', got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as err:
        raise UsageError(f"bad --u value {text!r}: {err}") from err
    return lo, hi, count


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="preset name (see the gallery subcommand)")
    p.add_argument("--theta", type=float, help="cone-theta half-angle parameter")
    p.add_argument("--c", type=float, help="slant-family-c constant")
    p.add_argument("--base", help="base curve, comma-separated component expressions")
    p.add_argument("--director", help="director curve, comma-separated component expressions")
    p.add_argument("--u", dest="grid", help="parameter grid as min:max:count")


def _add_tolerance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-abs", type=float, default=None, help="absolute constancy tolerance")
    p.add_argument("--tol-rel", type=float, default=None, help="relative constancy tolerance")
    p.add_argument("--ode-tol", type=float, default=None, help="ODE residual satisfaction tolerance")


def _resolve_source(args):
    """Preset name or --base/--director/--u flags -> analysis source."""
    if args.preset:
        params = {}
        if args.theta is not None:
            params["theta"] = args.theta
        if args.c is not None:
            params["c"] = args.c
        try:
            source = gallery(args.preset, **params)
        except UnknownPresetError as err:
            raise UsageError(str(err)) from err
        except ValueError as err:
            raise UsageError(f"bad preset parameter: {err}") from err
        n_samples = None
        if args.grid:
            lo, hi, count = _parse_grid(args.grid)
            if isinstance(source, RuledSurfaceSpec):
                source = RuledSurfaceSpec(
                    base=source.base, director=source.director,
                    u_min=lo, u_max=hi, n_samples=count, label=source.label,
                )
            else:
                source = CurvatureProfile(source.expression, lo, hi, source.description)
                n_samples = count
        return source, n_samples, args.preset
    if getattr(args, "kappa", None):
        if not args.grid:
            raise UsageError("--kappa requires --u min:max:count for the arc-length grid")
        lo, hi, count = _parse_grid(args.grid)
        return CurvatureProfile.from_string(args.kappa, lo, hi, "custom profile"), count, None
    if not args.base or not args.director:
        raise UsageError("need either --preset or both --base and --director")
    if not args.grid:
        raise UsageError("--u min:max:count is required with --base/--director")
    lo, hi, count = _parse_grid(args.grid)
    try:
        spec = RuledSurfaceSpec.from_strings(args.base, args.director, lo, hi, count)
    except ExpressionError:
        raise
    except ValueError as err:
        raise UsageError(str(err)) from err
    return spec, None, None


def _tolerances(args) -> Tolerances:
    base = Tolerances()
    updates = {}
    if getattr(args, "tol_abs", None) is not None:
        updates["spread_abs"] = args.tol_abs
    if getattr(args, "tol_rel", None) is not None:
        updates["spread_rel"] = args.tol_rel
    if getattr(args, "ode_tol", None) is not None:
        updates["ode_residual"] = args.ode_tol
    if updates:
        from dataclasses import replace
        return replace(base, **updates)
    return base


def _emit_report(report: dict, out: Optional[str]) -> None:
    if out:
        write_json(report, out)
    else:
        sys.stdout.write(dump_json(report))


def _cmd_analyze(args, restrict: Optional[str] = None) -> int:
    source, n_samples, preset = _resolve_source(args)
    tolerances = _tolerances(args)
    field, slant_report, profiles, derived_h, derived_a, report = run_analysis(
        source, n_samples, tolerances,
        tol_abs=args.tol_abs, tol_rel=args.tol_rel, ode_tol=args.ode_tol,
        preset=preset,
    )
    if restrict == "classify":
        report = {"tool": report["tool"], "spec": report["spec"],
                  "tolerances": report["tolerances"], "slant": report["slant"]}
    elif restrict == "residuals":
        report = {"tool": report["tool"], "spec": report["spec"],
                  "tolerances": report["tolerances"],
                  "ode_residuals": report["ode_residuals"],
                  "consistency": report["consistency"]}
    _emit_report(report, args.out)
    if getattr(args, "csv", None):
        write_csv(field, derived_h, derived_a, args.csv)
    if getattr(args, "plots", None):
        from . import plots
        if restrict == "residuals":
            from pathlib import Path
            outdir = Path(args.plots)
            outdir.mkdir(parents=True, exist_ok=True)
            plots.save_residual_figure(field, profiles, outdir / "ode_residuals.png")
        else:
            plots.render_analysis_figures(
                field, slant_report.sigma_values, profiles, derived_h, derived_a, args.plots
            )
    return 0


def _cmd_synth(args) -> int:
    source, n_samples, preset = _resolve_source(args)
    if not isinstance(source, CurvatureProfile):
        raise UsageError("synth needs a curvature-profile preset or --kappa")
    tolerances = _tolerances(args)
    synthesized = synthesize_field(source, n_samples or 256, tolerances=tolerances)
    field = synthesized.field
    from .derived import derived_frames
    from .odecheck import evaluate_profiles
    from .slant import classify
    from .report import build_report
    slant_report = classify(field, args.tol_abs, args.tol_rel)
    profiles = evaluate_profiles(field, tol=args.ode_tol)
    derived_h = derived_frames(field, "h")
    derived_a = derived_frames(field, "a")
    report = build_report(source, field, slant_report, profiles, derived_h, derived_a, preset)
    report["synthesis"] = {
        "n_steps": int(synthesized.n_steps),
        "step": float(synthesized.step),
        "max_gram_defect": float(synthesized.max_gram_defect),
    }
    _emit_report(report, args.out)
    if args.csv:
        write_csv(field, derived_h, derived_a, args.csv)
    if getattr(args, "plots", None):
        from . import plots
        plots.render_analysis_figures(
            field, slant_report.sigma_values, profiles, derived_h, derived_a, args.plots
        )
    return 0


def _cmd_mesh(args) -> int:
    source, n_samples, _ = _resolve_source(args)
    if isinstance(source, CurvatureProfile):
        source = synthesize_field(source, n_samples or 256).spec
    if not args.out:
        raise UsageError("mesh requires --out FILE.obj")
    from .mesh import write_obj
    try:
        write_obj(source, args.out, args.vmax, args.nu, args.nv)
    except ValueError as err:
        if isinstance(err, (GeometryError, ExpressionError)):
            raise
        raise UsageError(str(err)) from err
    return 0


def _cmd_gallery(args) -> int:
    for name in gallery_names():
        sys.stdout.write(f"{name:18s} {gallery_description(name)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ruled-slant",
                             description="Frenet analysis and slant classification of ruled surfaces")
    parser.add_argument("--version", action="version", version=f"ruled-slant {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="full analysis pipeline")
    _add_source_args(p_analyze)
    _add_tolerance_args(p_analyze)
    p_analyze.add_argument("--out", help="write the JSON report here (stdout otherwise)")
    p_analyze.add_argument("--csv", help="write the frame-field table here")
    p_analyze.add_argument("--plots", help="directory for figure files")

    p_classify = sub.add_parser("classify", help="slant verdicts only")
    _add_source_args(p_classify)
    _add_tolerance_args(p_classify)
    p_classify.add_argument("--out")

    p_res = sub.add_parser("residuals", help="ODE residual profiles only")
    _add_source_args(p_res)
    _add_tolerance_args(p_res)
    p_res.add_argument("--out")
    p_res.add_argument("--plots", help="directory for the residual figure")

    p_synth = sub.add_parser("synth", help="integrate a curvature profile")
    _add_source_args(p_synth)
    p_synth.add_argument("--kappa", help="curvature expression in the arc-length parameter")
    _add_tolerance_args(p_synth)
    p_synth.add_argument("--out")
    p_synth.add_argument("--csv")
    p_synth.add_argument("--plots")

    p_mesh = sub.add_parser("mesh", help="write an OBJ mesh of the surface")
    _add_source_args(p_mesh)
    p_mesh.add_argument("--vmax", type=float, default=1.0, help="ruling extent; v in [-vmax, vmax]")
    p_mesh.add_argument("--nu", type=int, default=64, help="grid points along the base curve")
    p_mesh.add_argument("--nv", type=int, default=9, help="grid points along each ruling")
    p_mesh.add_argument("--out", required=False, help="output OBJ path")

    sub.add_parser("gallery", help="list the preset surfaces and profiles")
    return parser


_COMMANDS = {
    "analyze": lambda args: _cmd_analyze(args),
    "classify": lambda args: _cmd_analyze(args, restrict="classify"),
    "residuals": lambda args: _cmd_analyze(args, restrict="residuals"),
    "synth": _cmd_synth,
    "mesh": _cmd_mesh,
    "gallery": _cmd_gallery,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return 1
    except ExpressionDomainError as err:
        sys.stderr.write(f"expression domain error: {err}\n")
        return 2
    except ExpressionError as err:
        sys.stderr.write(f"expression error: {err}\n")
        return 1
    except GeometryError as err:
        sys.stderr.write(f"degenerate surface: {err}\n")
        return 2
    except OSError as err:
        sys.stderr.write(f"i/o error: {err}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
