"""Frenet apparatus of the central-normal surface S_h and central-tangent
surface S_a, in closed form from a parent sample, with a direct re-analysis
oracle.

For a parent frame {q, h, a} with signed conical curvature k = kappa_q:

* S_h (ruled by h):  q_h = h,  h_h = (-q + k a)/w,  a_h = (a + k q)/w with
  w = sqrt(1 + k^2), curvature kappa_h = k'/w^3 and ds_q/ds_h = 1/w.
* S_a (ruled by a):  q_a = a,  h_a = -sign(k) h,  a_a = sign(k) q,
  curvature kappa_a = 1/|k| and ds_q/ds_a = 1/|k|.

The sign(k) factors keep every derived frame right-handed and both arc-length
ratios positive; for k > 0 they reduce to h_a = -h, a_a = q, kappa_a = 1/k.
With these conventions each derived frame satisfies its own Frenet system
exactly, which the residual checks rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .frame import (
    DEFAULT_TOLERANCES,
    FrameField,
    FrenetSample,
    GeometryError,
    SplineCurve,
    frame_jets,
)


class VanishingCurvatureError(GeometryError):
    """kappa_q is too close to zero for the central-tangent surface."""


@dataclass(frozen=True)
class DerivedFrame:
    kind: str            # 'h' or 'a'
    q_d: np.ndarray
    h_d: np.ndarray
    a_d: np.ndarray
    kappa_d: float
    ds_ratio: float      # ds_q/ds_h or ds_q/ds_a


def sh_apparatus(sample: FrenetSample) -> DerivedFrame:
    """Closed-form apparatus of the surface ruled by the central normal."""
    k = sample.kappa_q
    w = math.sqrt(1.0 + k * k)
    return DerivedFrame(
        kind="h",
        q_d=sample.h.copy(),
        h_d=(-sample.q + k * sample.a) / w,
        a_d=(sample.a + k * sample.q) / w,
        kappa_d=sample.kappa_q_prime / w**3,
        ds_ratio=1.0 / w,
    )


def sa_apparatus(sample: FrenetSample, eps_kappa: float = DEFAULT_TOLERANCES.vanishing_kappa) -> DerivedFrame:
    """Closed-form apparatus of the surface ruled by the central tangent."""
    k = sample.kappa_q
    if abs(k) < eps_kappa:
        raise VanishingCurvatureError(
            f"|kappa_q| = {abs(k):.3e} < {eps_kappa:.1e} at u={sample.u!r}: "
            "central-tangent surface undefined"
        )
    sign = 1.0 if k > 0 else -1.0
    return DerivedFrame(
        kind="a",
        q_d=sample.a.copy(),
        h_d=-sign * sample.h,
        a_d=sign * sample.q,
        kappa_d=1.0 / abs(k),
        ds_ratio=1.0 / abs(k),
    )


def derived_frames(field: FrameField, which: str) -> List[Optional[DerivedFrame]]:
    """Per-sample derived frames; ``None`` where the a-surface is undefined."""
    if which == "h":
        return [sh_apparatus(s) for s in field.samples]
    if which == "a":
        eps = field.tolerances.vanishing_kappa
        out: List[Optional[DerivedFrame]] = []
        for s in field.samples:
            try:
                out.append(sa_apparatus(s, eps))
            except VanishingCurvatureError:
                out.append(None)
        return out
    raise ValueError("which must be 'h' or 'a'")


@dataclass
class CrossValidation:
    """Maximum deviations between closed forms and direct re-analysis.

    ``max_kappa_dev`` is the worst absolute curvature deviation;
    ``max_kappa_scaled_dev`` divides each deviation by 1 + |closed-form
    curvature|, which is the meaningful measure where kappa_a = 1/|kappa_q|
    grows large (an absolute bound there is below double-precision
    conditioning of the spline-based oracle).
    """

    which: str
    max_kappa_dev: float
    max_kappa_scaled_dev: float
    max_frame_dev: float   # 1 - |<closed, direct>|, worst over the three vectors
    n_compared: int
    n_excluded: int


def cross_validate(field_or_spec, which: str, dense_factor: int = 10,
                   kappa_floor: float = 1e-3) -> CrossValidation:
    """Re-analyze the h- or a-director surface directly and compare.

    The derived director exists only as samples, so the fresh surface uses a
    quintic spline through frames on a ``dense_factor`` times denser grid;
    its conical curvature and frame are then computed pointwise by the
    ordinary pipeline and compared with the closed forms at interior grid
    points.  Samples with |kappa_q| < ``kappa_floor`` are excluded for the
    a-surface, whose hypotheses fail there; frame vectors are compared as
    lines so the per-sample orientation flips across kappa sign changes do
    not register as error.
    """
    if which not in ("h", "a"):
        raise ValueError("which must be 'h' or 'a'")
    if isinstance(field_or_spec, FrameField):
        field = field_or_spec
    else:
        from .frame import analyze
        field = analyze(field_or_spec)
    if which == "a":
        usable = [s for s in field.samples if abs(s.kappa_q) >= kappa_floor]
        if not usable:
            raise VanishingCurvatureError(
                "kappa_q is below the comparison floor on the whole grid"
            )
    dense_us, _, dense_h, dense_a = field.dense_frames(dense_factor)
    curve = SplineCurve(dense_us, dense_h if which == "h" else dense_a)

    max_kappa_dev = 0.0
    max_scaled_dev = 0.0
    max_frame_dev = 0.0
    n_compared = 0
    n_excluded = 0
    for sample in field.interior():
        if which == "a" and abs(sample.kappa_q) < kappa_floor:
            n_excluded += 1
            continue
        closed = sh_apparatus(sample) if which == "h" else sa_apparatus(sample)
        direct = frame_jets(curve, sample.u, 3, field.tolerances)
        dev = abs(closed.kappa_d - direct.kappa.value)
        max_kappa_dev = max(max_kappa_dev, dev)
        max_scaled_dev = max(max_scaled_dev, dev / (1.0 + abs(closed.kappa_d)))
        for closed_vec, direct_vec in (
            (closed.q_d, direct.q.value),
            (closed.h_d, direct.h.value),
            (closed.a_d, direct.a.value),
        ):
            max_frame_dev = max(max_frame_dev, 1.0 - abs(float(closed_vec @ direct_vec)))
        n_compared += 1
    return CrossValidation(
        which=which,
        max_kappa_dev=max_kappa_dev,
        max_kappa_scaled_dev=max_scaled_dev,
        max_frame_dev=max_frame_dev,
        n_compared=n_compared,
        n_excluded=n_excluded,
    )
