"""Analysis-report assembly and serialization (JSON and CSV).

The report echoes the input, summarizes the frame field, carries the slant
verdicts, the nine residual profiles, and derived-surface summaries, and
cross-checks that the verdicts and the residual suite agree; a disagreement
is flagged explicitly, never silently dropped.  Field order and float
formatting (shortest round-trip repr) are fixed so identical inputs produce
byte-identical JSON.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from typing import Dict, List, Optional, Union

import numpy as np

from . import __version__
from .derived import DerivedFrame, derived_frames
from .frame import DEFAULT_TOLERANCES, FrameField, RuledSurfaceSpec, Tolerances, analyze
from .odecheck import OdeKind, ResidualReport, evaluate_profiles
from .slant import SlantReport, classify
from .synth import CurvatureProfile, synthesize_field

AnalysisSource = Union[RuledSurfaceSpec, CurvatureProfile]

# Kinds whose joint satisfaction is equivalent to the q-slant verdict, and
# to the h-slant verdict, at matched tolerances.
Q_SUITE = (OdeKind.Q3, OdeKind.H2, OdeKind.A3, OdeKind.QA3, OdeKind.HA2, OdeKind.AA3)
H_SUITE = (OdeKind.QH3, OdeKind.HH2, OdeKind.AH3)


def analyze_source(source: AnalysisSource, n_samples: Optional[int] = None,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> FrameField:
    """Frame field of a surface spec or a synthesized curvature profile."""
    if isinstance(source, RuledSurfaceSpec):
        if n_samples is not None and n_samples != source.n_samples:
            source = RuledSurfaceSpec(
                base=source.base, director=source.director,
                u_min=source.u_min, u_max=source.u_max,
                n_samples=n_samples, label=source.label,
            )
        return analyze(source, tolerances)
    if isinstance(source, CurvatureProfile):
        return synthesize_field(source, n_samples or 256, tolerances=tolerances).field
    raise TypeError(f"cannot analyze {type(source).__name__}")


def _floats(values) -> list:
    return [float(v) for v in values]


def _stats(values: np.ndarray) -> dict:
    return {
        "min": float(np.min(values)),
        "max": float(np.max(values)),
        "mean": float(np.mean(values)),
        "spread": float(np.max(values) - np.min(values)),
    }


def _verdict_dict(v) -> dict:
    return {"verdict": v.verdict, "spread": float(v.spread), "tol": float(v.tol)}


def _spec_echo(source: AnalysisSource, field: FrameField, preset: Optional[str]) -> dict:
    if isinstance(source, CurvatureProfile):
        return {
            "kind": "curvature-profile",
            "preset": preset,
            "kappa": source.source(),
            "s_min": float(source.s_min),
            "s_max": float(source.s_max),
            "n_samples": len(field),
        }
    return {
        "kind": "ruled-surface",
        "preset": preset,
        "base": list(source.base.sources()),
        "director": list(source.director.sources()),
        "u_min": float(source.u_min),
        "u_max": float(source.u_max),
        "n_samples": int(source.n_samples),
    }


def build_report(source: AnalysisSource, field: FrameField, slant_report: SlantReport,
                 profiles: Dict[OdeKind, ResidualReport],
                 derived_h: List[DerivedFrame], derived_a: List[Optional[DerivedFrame]],
                 preset: Optional[str] = None) -> dict:
    """Assemble the full analysis report as a JSON-ready dict."""
    kappa = field.kappa
    sigmas = slant_report.sigma_values

    kappa_h = np.array([d.kappa_d for d in derived_h])
    ka_values = [d.kappa_d for d in derived_a if d is not None]
    a_excluded = sum(1 for d in derived_a if d is None)

    q_suite = all(profiles[k].satisfied for k in Q_SUITE)
    h_suite = all(profiles[k].satisfied for k in H_SUITE)
    disagreement = (
        q_suite != (slant_report.q_slant.verdict == "yes")
        or h_suite != (slant_report.h_slant.verdict == "yes")
    )

    tol = field.tolerances
    report = {
        "tool": {"name": "ruled-slant", "version": __version__},
        "spec": _spec_echo(source, field, preset),
        "tolerances": {
            "tol_abs": float(slant_report.tol_abs),
            "tol_rel": float(slant_report.tol_rel),
            "ode_tol": float(next(iter(profiles.values())).tolerance),
            "eps_cyl": float(tol.cylinder_speed),
            "eps_kappa": float(tol.vanishing_kappa),
        },
        "frame_summary": {
            "kappa_q": _stats(kappa),
            "sigma": _stats(sigmas),
            "s_q_total": float(field.s_q[-1]),
        },
        "slant": {
            "q_slant": _verdict_dict(slant_report.q_slant),
            "h_slant": _verdict_dict(slant_report.h_slant),
            "a_slant": _verdict_dict(slant_report.a_slant),
            "axis": _floats(slant_report.axis) if slant_report.axis is not None else None,
            "theta": float(slant_report.theta) if slant_report.theta is not None else None,
        },
        "derived": {
            "h_surface": {"kappa_h": _stats(kappa_h)},
            "a_surface": {
                "kappa_a": _stats(np.array(ka_values)) if ka_values else None,
                "n_excluded": a_excluded,
            },
            "negative_kappa": bool(np.min(kappa) < 0.0),
        },
        "ode_residuals": [
            {
                "kind": kind.name,
                "max_norm": float(profiles[kind].max_norm),
                "satisfied": bool(profiles[kind].satisfied),
                "tolerance": float(profiles[kind].tolerance),
                "n_excluded": int(profiles[kind].n_excluded),
            }
            for kind in OdeKind
        ],
        "consistency": {
            "q_suite_satisfied": bool(q_suite),
            "h_suite_satisfied": bool(h_suite),
            "disagreement": bool(disagreement),
        },
    }
    return report


def run_analysis(source: AnalysisSource, n_samples: Optional[int] = None,
                 tolerances: Tolerances = DEFAULT_TOLERANCES,
                 tol_abs: Optional[float] = None, tol_rel: Optional[float] = None,
                 ode_tol: Optional[float] = None, preset: Optional[str] = None):
    """Full pipeline: frame field, slant verdicts, residual suite, report."""
    field = analyze_source(source, n_samples, tolerances)
    slant_report = classify(field, tol_abs, tol_rel)
    profiles = evaluate_profiles(field, tol=ode_tol)
    derived_h = derived_frames(field, "h")
    derived_a = derived_frames(field, "a")
    report = build_report(source, field, slant_report, profiles, derived_h, derived_a, preset)
    return field, slant_report, profiles, derived_h, derived_a, report


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def write_json(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(report))


CSV_BASE_COLUMNS = [
    "u", "s_q", "qx", "qy", "qz", "hx", "hy", "hz", "ax", "ay", "az",
    "kappa_q", "kappa_q_prime", "speed", "cx", "cy", "cz",
]


def _derived_columns(prefix: str) -> list:
    cols = []
    for vec in ("q", "h", "a"):
        cols += [f"{prefix}_{vec}{axis}" for axis in ("x", "y", "z")]
    cols += [f"{prefix}_kappa", f"{prefix}_ds_ratio"]
    return cols


def write_csv(field: FrameField, derived_h: List[DerivedFrame],
              derived_a: List[Optional[DerivedFrame]], path) -> None:
    """Frame field plus derived-frame columns, one row per grid point.

    Central-tangent columns are left blank where |kappa_q| is below the
    vanishing threshold.
    """
    header = CSV_BASE_COLUMNS + _derived_columns("h") + _derived_columns("a")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for sample, dh, da in zip(field.samples, derived_h, derived_a):
            row = [
                sample.u, sample.s_q,
                *sample.q, *sample.h, *sample.a,
                sample.kappa_q, sample.kappa_q_prime, sample.speed,
                *sample.striction_point,
            ]
            row += [*dh.q_d, *dh.h_d, *dh.a_d, dh.kappa_d, dh.ds_ratio]
            if da is None:
                row += [""] * 11
            else:
                row += [*da.q_d, *da.h_d, *da.a_d, da.kappa_d, da.ds_ratio]
            writer.writerow([repr(float(v)) if v != "" else "" for v in row])


def load_schema() -> dict:
    """The JSON schema the analysis report validates against."""
    text = resources.files("ruled_slant").joinpath("analysis_report.schema.json").read_text()
    return json.loads(text)
