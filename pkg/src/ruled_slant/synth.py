"""Frame-field synthesis with prescribed conical curvature, plus presets.

Integrating q' = h, h' = -q + kappa a, a' = -kappa h (derivatives in the
spherical arc length s) with a chosen curvature function kappa(s) produces a
frame field whose conical curvature is exactly that function.  These fields
are the test fixtures for the constancy and residual characterizations: pick kappa
constant and the field is q-slant, pick sigma constant and it is h-slant,
pick anything else and it is neither.

The integrator is classical fixed-step RK4 with modified Gram-Schmidt
re-orthonormalization after every step.  The synthesized field exposes exact
arc-length jets at its grid nodes (the Frenet recursion applied to the
integrated frame and the curvature expression), and reconstructs a ruled
surface whose director is the interpolated ruling and whose base curve is
the origin, i.e. a cone, whose striction curve is its apex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import expr as expr_mod
from . import jets
from .expr import ExpressionAst
from .frame import (
    DEFAULT_TOLERANCES,
    ExpressionCurve,
    FrameField,
    FrameJets,
    FrenetSample,
    RuledSurfaceSpec,
    SplineCurve,
    Tolerances,
    frame_jets,
)
from .jets import Jet, VecJet

_BINOM = [[math.comb(i, j) for j in range(i + 1)] for i in range(jets.MAX_ORDER + 1)]


class UnknownPresetError(KeyError):
    def __init__(self, name: str, valid):
        message = f"unknown preset {name!r}; valid presets: {', '.join(sorted(valid))}"
        super().__init__(message)
        self.name = name
        self.message = message

    def __str__(self) -> str:  # plain text, not KeyError's quoted repr
        return self.message


@dataclass(frozen=True)
class CurvatureProfile:
    """Conical curvature as a function of spherical arc length."""

    expression: ExpressionAst
    s_min: float
    s_max: float
    description: str = ""

    def __post_init__(self):
        if not self.s_min < self.s_max:
            raise ValueError(f"s_min must be < s_max, got [{self.s_min}, {self.s_max}]")

    @classmethod
    def from_string(cls, text: str, s_min: float, s_max: float, description: str = "") -> "CurvatureProfile":
        return cls(expr_mod.parse_expression(text), float(s_min), float(s_max), description)

    def kappa(self, s: float) -> float:
        return expr_mod.eval_jet(self.expression, s, 0).value

    def source(self) -> str:
        return expr_mod.to_source(self.expression)


@dataclass
class SynthesizedField:
    """Integration output: frame field, reconstructed spec, step diagnostics."""

    field: FrameField
    spec: RuledSurfaceSpec
    profile: CurvatureProfile
    initial_frame: np.ndarray
    step: float
    n_steps: int
    max_gram_defect: float      # worst pre-orthonormalization Gram defect
    nodes: np.ndarray           # every integration node
    q_nodes: np.ndarray         # integrated ruling at every node
    h_nodes: np.ndarray
    a_nodes: np.ndarray


def _orthonormalize(frame: np.ndarray) -> np.ndarray:
    q = frame[0] / np.linalg.norm(frame[0])
    h = frame[1] - (frame[1] @ q) * q
    h = h / np.linalg.norm(h)
    a = frame[2] - (frame[2] @ q) * q - (frame[2] @ h) * h
    a = a / np.linalg.norm(a)
    return np.array([q, h, a])


def _gram_defect(frame: np.ndarray) -> float:
    return float(np.max(np.abs(frame @ frame.T - np.eye(3))))


def integrate_frenet(profile: CurvatureProfile, initial: Optional[np.ndarray] = None,
                     n_steps: int = 2048, sample_every: int = 1,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> SynthesizedField:
    """Integrate the frame system for the given curvature profile.

    ``initial`` is the starting (q, h, a) triple as rows, default identity;
    it must be orthonormal within 1e-12 and right-handed.  ``sample_every``
    controls which integration nodes become frame-field samples (it must
    divide ``n_steps``); every node is retained for the reconstruction
    spline regardless.
    """
    if n_steps < 16:
        raise ValueError(f"n_steps must be >= 16, got {n_steps}")
    if n_steps % sample_every != 0:
        raise ValueError(f"sample_every={sample_every} must divide n_steps={n_steps}")
    if initial is None:
        initial = np.eye(3)
    initial = np.asarray(initial, dtype=float)
    if initial.shape != (3, 3):
        raise ValueError("initial frame must be a 3x3 array of rows (q, h, a)")
    if _gram_defect(initial) > 1e-12:
        raise ValueError("initial frame must be orthonormal within 1e-12")
    if np.linalg.det(initial) < 0.0:
        raise ValueError("initial frame must be right-handed")

    ast = profile.expression
    s0, s1 = profile.s_min, profile.s_max
    step = (s1 - s0) / n_steps

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        k = expr_mod.eval_jet(ast, s, 0).value
        return np.array([y[1], -y[0] + k * y[2], -k * y[1]])

    nodes = s0 + step * np.arange(n_steps + 1)
    frames = np.empty((n_steps + 1, 3, 3))
    frames[0] = _orthonormalize(initial)
    y = frames[0]
    max_defect = 0.0
    for i in range(n_steps):
        s = nodes[i]
        k1 = rhs(s, y)
        k2 = rhs(s + 0.5 * step, y + 0.5 * step * k1)
        k3 = rhs(s + 0.5 * step, y + 0.5 * step * k2)
        k4 = rhs(s + step, y + step * k3)
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        max_defect = max(max_defect, _gram_defect(y))
        y = _orthonormalize(y)
        frames[i + 1] = y

    q_nodes = frames[:, 0, :]
    h_nodes = frames[:, 1, :]
    a_nodes = frames[:, 2, :]

    sample_idx = np.arange(0, n_steps + 1, sample_every)
    origin = np.zeros(3)
    samples = []
    for i in sample_idx:
        s = float(nodes[i])
        kj = expr_mod.eval_jet(ast, s, 1)
        samples.append(FrenetSample(
            u=s,
            s_q=s - s0,
            q=q_nodes[i].copy(),
            h=h_nodes[i].copy(),
            a=a_nodes[i].copy(),
            kappa_q=kj.d[0],
            kappa_q_prime=kj.d[1],
            speed=1.0,
            striction_point=origin.copy(),
        ))

    spec = RuledSurfaceSpec(
        base=ExpressionCurve.from_strings(("0", "0", "0")),
        director=SplineCurve(nodes, q_nodes),
        u_min=s0,
        u_max=s1,
        n_samples=len(samples),
        label=profile.description or "synthesized",
    )

    def jets_at(u: float, order: int = jets.MAX_ORDER) -> FrameJets:
        return _recursion_jets(ast, nodes, frames, u, order)

    def dense_frames(factor: int) -> tuple:
        return nodes, q_nodes, h_nodes, a_nodes

    field = FrameField(samples, spec, tolerances, jets_at, dense_frames)
    return SynthesizedField(
        field=field,
        spec=spec,
        profile=profile,
        initial_frame=initial,
        step=step,
        n_steps=n_steps,
        max_gram_defect=max_defect,
        nodes=nodes,
        q_nodes=q_nodes,
        h_nodes=h_nodes,
        a_nodes=a_nodes,
    )


def _recursion_jets(ast: ExpressionAst, nodes: np.ndarray, frames: np.ndarray,
                    u: float, order: int) -> FrameJets:
    """Arc-length jets of a synthesized field at a grid node.

    The frame system gives every derivative of (q, h, a) in terms of lower
    ones and the curvature jet, which the profile expression supplies exactly,
    so jets here are limited only by the accuracy of the integrated frame.
    """
    step = nodes[1] - nodes[0]
    idx = int(round((u - nodes[0]) / step))
    if idx < 0 or idx >= len(nodes) or abs(nodes[idx] - u) > 1e-9 * max(1.0, abs(u)):
        raise ValueError(
            f"synthesized fields provide jets only at integration nodes, got u={u!r}"
        )
    s = float(nodes[idx])
    kj = expr_mod.eval_jet(ast, s, min(order - 1, jets.MAX_ORDER - 1))
    dq = [frames[idx, 0, :]]
    dh = [frames[idx, 1, :]]
    da = [frames[idx, 2, :]]
    for i in range(order):
        dq.append(dh[i])
        ka = sum(_BINOM[i][j] * kj.d[j] * da[i - j] for j in range(min(i, kj.order) + 1))
        kh = sum(_BINOM[i][j] * kj.d[j] * dh[i - j] for j in range(min(i, kj.order) + 1))
        dh.append(-dq[i] + ka)
        da.append(-kh)

    def vec(rows, n):
        cols = list(zip(*[tuple(r) for r in rows[: n + 1]]))
        return VecJet(Jet(cols[0]), Jet(cols[1]), Jet(cols[2]))

    return FrameJets(
        u=s,
        q=vec(dq, order),
        h=vec(dh, order - 1),
        a=vec(da, order - 1),
        speed=Jet.constant(1.0, order - 1),
        kappa=kj.truncate(order - 2) if kj.order > order - 2 else kj,
    )


def synthesize_field(profile: CurvatureProfile, n_samples: int = 256, oversample: int = 12,
                     initial: Optional[np.ndarray] = None,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> SynthesizedField:
    """Integrate at ``oversample`` times the sampling resolution."""
    if n_samples < 3:
        raise ValueError(f"n_samples must be >= 3, got {n_samples}")
    n_steps = (n_samples - 1) * oversample
    return integrate_frenet(profile, initial, n_steps, sample_every=oversample,
                            tolerances=tolerances)


def recompute_curvature(synthesized: SynthesizedField) -> tuple:
    """Conical curvature of the integrated ruling, measured independently.

    Splines the integrated ruling over all integration nodes and runs the
    ordinary frame pipeline on it, so the result reflects integration (and
    interpolation) error rather than echoing the input profile.
    """
    curve = SplineCurve(synthesized.nodes, synthesized.q_nodes)
    us = [s.u for s in synthesized.field.interior()]
    kappas = np.array([
        frame_jets(curve, u, 3, synthesized.field.tolerances).kappa.value for u in us
    ])
    return np.array(us), kappas


# -- preset gallery ------------------------------------------------------------

def _helicoid(**params) -> RuledSurfaceSpec:
    return RuledSurfaceSpec.from_strings(
        ("0", "0", "t"), ("cos(t)", "sin(t)", "0"),
        0.0, 2.0 * math.pi, 256, label="helicoid",
    )


def _cone_theta(theta: float = math.pi / 4, **params) -> RuledSurfaceSpec:
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2), got {theta!r}")
    st, ct = math.sin(theta), math.cos(theta)
    return RuledSurfaceSpec.from_strings(
        ("0", "0", "0"),
        (f"{st!r}*cos(t)", f"{st!r}*sin(t)", f"{ct!r}"),
        0.0, 2.0 * math.pi, 256, label=f"cone-theta(theta={theta!r})",
    )


def _slant_family(c: float = 0.5, **params) -> CurvatureProfile:
    if c == 0.0:
        raise ValueError("c must be nonzero")
    half = 0.9 / abs(c)
    return CurvatureProfile.from_string(
        f"{c!r}*t/sqrt(1-{c * c!r}*t^2)", -half, half,
        description=f"slant-family-c(c={c!r})",
    )


def _quadratic(**params) -> CurvatureProfile:
    return CurvatureProfile.from_string("t^2", 0.0, 1.5, description="quadratic")


def _nonslant_mixed(**params) -> CurvatureProfile:
    return CurvatureProfile.from_string("sin(t)+t", 0.5, 2.5, description="nonslant-mixed")


_PRESETS = {
    "helicoid": (_helicoid, "axis base curve with rotating ruling; kappa_q == 0"),
    "cone-theta": (_cone_theta, "cone over a small circle at angle theta; kappa_q == cot(theta)"),
    "slant-family-c": (_slant_family, "synthesized family with sigma == c (h-slant, not q-slant)"),
    "quadratic": (_quadratic, "synthesized kappa_q(s) = s^2 (not slant)"),
    "nonslant-mixed": (_nonslant_mixed, "synthesized kappa_q(s) = sin(s) + s (not slant)"),
}


def gallery_names() -> tuple:
    return tuple(sorted(_PRESETS))


def gallery_description(name: str) -> str:
    if name not in _PRESETS:
        raise UnknownPresetError(name, _PRESETS)
    return _PRESETS[name][1]


def gallery(name: str, **params):
    """Named preset surface or curvature profile.

    Parameter overrides: ``theta`` for cone-theta, ``c`` for slant-family-c.
    """
    if name not in _PRESETS:
        raise UnknownPresetError(name, _PRESETS)
    return _PRESETS[name][0](**params)
