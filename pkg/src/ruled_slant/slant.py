"""Slant classification of ruled surfaces and recovery of the fixed axis.

A surface is q-slant (h-slant, a-slant) when the ruling (central normal,
central tangent) keeps a constant angle with some fixed direction.  The
working criteria are curvature constancy tests: q-slant iff kappa_q is
constant, h-slant iff sigma = kappa_q' / (1 + kappa_q^2)^(3/2) is constant,
and a-slant mirrors q-slant wherever kappa_q stays away from zero.  The
kappa_q == 0 case satisfies the constancy test but forces the excluded angle
pi/2, so the a-verdict there is 'degenerate' rather than yes or no.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .frame import FrameField, FrenetSample

VERDICT_YES = "yes"
VERDICT_NO = "no"
VERDICT_DEGENERATE = "degenerate"

# Verification bound on the spread of <frame vector, axis> after recovery.
AXIS_VERIFY_TOL = 1e-6


class TooFewSamplesError(ValueError):
    pass


class NotSlantError(ValueError):
    """Axis recovery was requested for a field that is not slant of that kind."""


@dataclass(frozen=True)
class KindVerdict:
    verdict: str
    spread: float
    tol: float

    @property
    def is_yes(self) -> bool:
        return self.verdict == VERDICT_YES


@dataclass
class SlantReport:
    q_slant: KindVerdict
    h_slant: KindVerdict
    a_slant: KindVerdict
    sigma_values: np.ndarray
    axis: Optional[np.ndarray]
    theta: Optional[float]
    tol_abs: float
    tol_rel: float


def sigma(sample: FrenetSample) -> float:
    """The h-slant invariant kappa_q' / (1 + kappa_q^2)^(3/2)."""
    k = sample.kappa_q
    return sample.kappa_q_prime / (1.0 + k * k) ** 1.5


def _spread(values: np.ndarray) -> float:
    return float(np.max(values) - np.min(values))


def _spread_tol(values: np.ndarray, tol_abs: float, tol_rel: float) -> float:
    return tol_abs + tol_rel * float(np.median(np.abs(values)))


def classify(field: FrameField, tol_abs: float = None, tol_rel: float = None) -> SlantReport:
    """Constancy-test verdicts for all three slant kinds.

    The constancy tolerance is mixed: tol_abs + tol_rel * median(|values|),
    which stays scale-free for large curvatures and keeps an absolute floor
    near zero.
    """
    if len(field) < 3:
        raise TooFewSamplesError(f"classification needs >= 3 samples, got {len(field)}")
    if tol_abs is None:
        tol_abs = field.tolerances.spread_abs
    if tol_rel is None:
        tol_rel = field.tolerances.spread_rel

    kappa = field.kappa
    sigmas = np.array([sigma(s) for s in field.samples])

    k_tol = _spread_tol(kappa, tol_abs, tol_rel)
    k_spread = _spread(kappa)
    q_verdict = KindVerdict(
        VERDICT_YES if k_spread <= k_tol else VERDICT_NO, k_spread, k_tol
    )

    s_tol = _spread_tol(sigmas, tol_abs, tol_rel)
    s_spread = _spread(sigmas)
    h_verdict = KindVerdict(
        VERDICT_YES if s_spread <= s_tol else VERDICT_NO, s_spread, s_tol
    )

    if np.max(np.abs(kappa)) <= field.tolerances.vanishing_kappa:
        a_verdict = KindVerdict(VERDICT_DEGENERATE, k_spread, k_tol)
    else:
        a_verdict = KindVerdict(q_verdict.verdict, k_spread, k_tol)

    axis = None
    theta = None
    for kind, verdict in (("q", q_verdict), ("h", h_verdict), ("a", a_verdict)):
        if verdict.is_yes:
            try:
                axis, theta = recover_axis(field, kind)
            except NotSlantError:
                continue
            break

    return SlantReport(
        q_slant=q_verdict,
        h_slant=h_verdict,
        a_slant=a_verdict,
        sigma_values=sigmas,
        axis=axis,
        theta=theta,
        tol_abs=tol_abs,
        tol_rel=tol_rel,
    )


def recover_axis(field: FrameField, kind: str) -> tuple:
    """Fixed direction and angle for a slant field of the given kind.

    Kind 'q' uses the closed form: theta = arccot(mean kappa_q) and the axis
    is the grid average of cos(theta) q + sin(theta) a.  Kinds 'h' and 'a'
    fit the axis as the direction of least projection variance (smallest
    eigenvector of the covariance of the frame vectors).  In every case the
    recovered axis is verified a posteriori: the spread of the inner products
    with the frame vectors must stay within AXIS_VERIFY_TOL, otherwise
    :class:`NotSlantError` is raised.

    A kappa_q == 0 field recovers theta = pi/2, the angle excluded by the
    slant definition; callers should treat that boundary as degenerate.
    """
    if kind not in ("q", "h", "a"):
        raise ValueError("kind must be 'q', 'h' or 'a'")
    if kind == "q":
        kbar = float(np.mean(field.kappa))
        theta = math.atan2(1.0, kbar)  # arccot with range (0, pi)
        stack = np.array([
            math.cos(theta) * s.q + math.sin(theta) * s.a for s in field.samples
        ])
        axis = np.mean(stack, axis=0)
        axis = axis / np.linalg.norm(axis)
        witness = np.array([float(s.q @ axis) for s in field.samples])
    else:
        vectors = np.array([getattr(s, kind) for s in field.samples])
        centered = vectors - vectors.mean(axis=0)
        cov = centered.T @ centered / len(vectors)
        eigvals, eigvecs = np.linalg.eigh(cov)
        axis = eigvecs[:, 0]
        projections = vectors @ axis
        if float(np.mean(projections)) < 0.0:
            axis = -axis
            projections = -projections
        theta = math.acos(float(np.clip(np.mean(projections), -1.0, 1.0)))
        witness = projections

    spread = float(np.max(witness) - np.min(witness))
    if spread > AXIS_VERIFY_TOL:
        raise NotSlantError(
            f"axis verification failed for kind '{kind}': "
            f"projection spread {spread:.3e} > {AXIS_VERIFY_TOL:.1e}"
        )
    return axis, theta
