"""Figure rendering for analysis reports (static files, Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .derived import DerivedFrame  # noqa: E402
from .frame import FrameField  # noqa: E402
from .odecheck import OdeKind, ResidualReport  # noqa: E402


def save_curvature_figure(field: FrameField, sigma_values: np.ndarray, path) -> None:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    s = field.s_q
    ax1.plot(s, field.kappa, lw=1.2)
    ax1.set_ylabel(r"$\kappa_q$")
    ax1.grid(alpha=0.3)
    ax2.plot(s, sigma_values, lw=1.2, color="tab:orange")
    ax2.set_ylabel(r"$\sigma$")
    ax2.set_xlabel(r"$s_q$")
    ax2.grid(alpha=0.3)
    fig.suptitle("Conical curvature and slant invariant")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_residual_figure(field: FrameField, profiles: Dict[OdeKind, ResidualReport], path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    s_by_u = {s.u: s.s_q for s in field.samples}
    floor = 1e-18
    for kind, report in profiles.items():
        if not report.norms:
            continue
        s = [s_by_u[u] for u in report.us]
        ax.semilogy(s, np.maximum(report.norms, floor), lw=1.0, label=kind.name)
    ax.axhline(next(iter(profiles.values())).tolerance, color="k", ls="--", lw=0.8,
               label="tolerance")
    ax.set_xlabel(r"$s_q$")
    ax.set_ylabel("residual norm")
    ax.set_title("ODE residual profiles")
    ax.legend(ncol=2, fontsize=8)
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_derived_figure(field: FrameField, derived_h: List[DerivedFrame],
                        derived_a: List[Optional[DerivedFrame]], path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    s = field.s_q
    ax.plot(s, [d.kappa_d for d in derived_h], lw=1.2, label=r"$\kappa_h$")
    ka = np.array([d.kappa_d if d is not None else np.nan for d in derived_a])
    if np.any(np.isfinite(ka)):
        ax.plot(s, ka, lw=1.2, label=r"$\kappa_a$")
    ax.set_xlabel(r"$s_q$")
    ax.set_ylabel("derived conical curvature")
    ax.set_title("Central-normal and central-tangent surfaces")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_analysis_figures(field: FrameField, sigma_values: np.ndarray,
                            profiles: Dict[OdeKind, ResidualReport],
                            derived_h: List[DerivedFrame],
                            derived_a: List[Optional[DerivedFrame]],
                            outdir) -> List[Path]:
    """Write the standard figure set into ``outdir`` and return the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [
        outdir / "curvature_profile.png",
        outdir / "ode_residuals.png",
        outdir / "derived_curvatures.png",
    ]
    save_curvature_figure(field, sigma_values, paths[0])
    save_residual_figure(field, profiles, paths[1])
    save_derived_figure(field, derived_h, derived_a, paths[2])
    return paths
