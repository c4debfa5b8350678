"""Frenet apparatus of non-cylindrical ruled surfaces.

A ruled surface is given by a base curve f(u) and a director q(u); the
surface point is r(u, v) = f(u) + v * qhat(u) with qhat the normalized
director.  This module computes the striction curve, the orthonormal frame
{q, h, a}, the signed conical curvature kappa_q and its arc-length
derivative, the spherical-image arc length s_q, and the surface normal.

Directors may be given as parsed expressions, as quintic splines through
sample points, or as the h/a frame fields of another analyzed surface; the
pipeline only needs derivative jets of the director at a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import make_interp_spline

from . import expr as expr_mod
from . import jets
from .jets import Jet, VecJet
from .parallel import parallel_map


class GeometryError(ValueError):
    """Base class for degenerate-geometry failures."""


class CylindricalSurfaceError(GeometryError):
    """Director direction is (locally) constant; the frame is undefined."""


class DegenerateNormalError(GeometryError):
    """The surface normal vanishes at the requested point."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared across the analysis pipeline."""

    cylinder_speed: float = 1e-12   # |d qhat/du| below this means cylindrical
    vanishing_kappa: float = 1e-9   # |kappa_q| below this blocks the a-surface
    spread_abs: float = 1e-8        # absolute part of constancy tolerance
    spread_rel: float = 1e-6        # relative part of constancy tolerance
    ode_residual: float = 1e-6      # satisfaction threshold for ODE residuals


DEFAULT_TOLERANCES = Tolerances()


# -- director/base curve sources ---------------------------------------------

class ExpressionCurve:
    """Curve in R^3 whose coordinates are parsed expressions of one parameter."""

    max_jet_order = jets.MAX_ORDER

    def __init__(self, components: Sequence[expr_mod.ExpressionAst]):
        if len(components) != 3:
            raise ValueError("an expression curve needs exactly 3 components")
        self.components = tuple(components)

    @classmethod
    def from_strings(cls, text) -> "ExpressionCurve":
        """Build from a comma-separated string or a 3-sequence of strings."""
        if isinstance(text, str):
            parts = _split_components(text)
        else:
            parts = list(text)
        if len(parts) != 3:
            raise ValueError(f"expected 3 comma-separated components, got {len(parts)}")
        return cls([expr_mod.parse_expression(p) for p in parts])

    def jet(self, u: float, order: int) -> VecJet:
        return expr_mod.curve_jet(self.components, u, order)

    def sources(self) -> tuple:
        return tuple(expr_mod.to_source(c) for c in self.components)

    def __repr__(self) -> str:
        return f"ExpressionCurve({','.join(self.sources())})"


def _split_components(text: str) -> list:
    """Split on commas that are not inside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


class SplineCurve:
    """Curve represented by quintic interpolating splines through samples."""

    max_jet_order = 5

    def __init__(self, u_nodes: np.ndarray, points: np.ndarray):
        u_nodes = np.asarray(u_nodes, dtype=float)
        points = np.asarray(points, dtype=float)
        if points.shape != (u_nodes.size, 3):
            raise ValueError("points must have shape (len(u_nodes), 3)")
        if u_nodes.size < 6:
            raise ValueError("quintic interpolation needs at least 6 samples")
        self.u_min = float(u_nodes[0])
        self.u_max = float(u_nodes[-1])
        self._spline = make_interp_spline(u_nodes, points, k=5, axis=0)

    def jet(self, u: float, order: int) -> VecJet:
        if not (self.u_min - 1e-12 <= u <= self.u_max + 1e-12):
            raise ValueError(f"u={u!r} outside interpolation range [{self.u_min}, {self.u_max}]")
        rows = [self._spline(u, nu=i) for i in range(order + 1)]
        cols = list(zip(*rows))
        return VecJet(Jet(cols[0]), Jet(cols[1]), Jet(cols[2]))

    def sources(self) -> tuple:
        return ("<spline>", "<spline>", "<spline>")


class DerivedDirectorCurve:
    """The h- or a-field of an analyzed director, exposed as a curve.

    Jets come from the same automatic differentiation pipeline as the parent
    analysis (one order is consumed by the h = dqhat/du / speed step), so
    re-analysis of the central-normal or central-tangent surface carries no
    interpolation error.
    """

    def __init__(self, director, which: str, tolerances: Tolerances = DEFAULT_TOLERANCES):
        if which not in ("h", "a"):
            raise ValueError("which must be 'h' or 'a'")
        self.director = director
        self.which = which
        self.tolerances = tolerances
        self.max_jet_order = director.max_jet_order - 1

    def jet(self, u: float, order: int) -> VecJet:
        fj = frame_jets(self.director, u, order + 1, self.tolerances)
        vec = fj.h if self.which == "h" else fj.a
        return vec.truncate(order)

    def sources(self) -> tuple:
        return tuple(f"<{self.which}-field of {s}>" for s in self.director.sources())


# -- spec and samples ----------------------------------------------------------

@dataclass(frozen=True)
class RuledSurfaceSpec:
    """Base curve, director and sampling plan of one ruled surface."""

    base: object
    director: object
    u_min: float
    u_max: float
    n_samples: int
    label: str = ""

    def __post_init__(self):
        if not self.u_min < self.u_max:
            raise ValueError(f"u_min must be < u_max, got [{self.u_min}, {self.u_max}]")
        if self.n_samples < 3:
            raise ValueError(f"n_samples must be >= 3, got {self.n_samples}")

    @classmethod
    def from_strings(cls, base, director, u_min, u_max, n_samples, label="") -> "RuledSurfaceSpec":
        return cls(
            base=ExpressionCurve.from_strings(base),
            director=ExpressionCurve.from_strings(director),
            u_min=float(u_min),
            u_max=float(u_max),
            n_samples=int(n_samples),
            label=label,
        )

    def grid(self) -> np.ndarray:
        return np.linspace(self.u_min, self.u_max, self.n_samples)


@dataclass
class FrenetSample:
    """Frame, curvature and striction data at one parameter value."""

    u: float
    s_q: float
    q: np.ndarray
    h: np.ndarray
    a: np.ndarray
    kappa_q: float
    kappa_q_prime: float
    speed: float
    striction_point: np.ndarray


@dataclass
class FrameJets:
    """Jets of the frame pipeline at one point (all in the surface parameter u).

    Orders for an order-N director jet: q carries N, h/a/speed N-1, kappa N-2.
    """

    u: float
    q: VecJet
    h: VecJet
    a: VecJet
    speed: Jet
    kappa: Jet

    def arc_derivative(self, x):
        """d/ds_q via the chain rule d/ds_q = (1/speed) d/du, as jet division."""
        return x.shift() / self.speed

    @property
    def kappa_prime(self) -> float:
        return (self.kappa.shift() / self.speed).value


def frame_jets(director, u: float, order: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> FrameJets:
    """Normalize the director and build the frame jets at ``u``.

    Raises :class:`CylindricalSurfaceError` when |d qhat/du| falls below the
    cylindricity threshold and ``ValueError`` when the raw director vanishes.
    """
    if order > director.max_jet_order:
        raise ValueError(
            f"director supports jets up to order {director.max_jet_order}, requested {order}"
        )
    if order < 2:
        raise ValueError("frame jets need order >= 2")
    raw = director.jet(u, order)
    mag_sq = raw.dot(raw)
    if mag_sq.value < 1e-28:
        raise GeometryError(f"director vanishes at u={u!r}")
    q = raw / jets.sqrt(mag_sq)
    qdot = q.shift()
    speed_sq = qdot.dot(qdot)
    speed_value = math.sqrt(max(speed_sq.value, 0.0))
    if speed_value <= tolerances.cylinder_speed:
        raise CylindricalSurfaceError(
            f"|d qhat/du| = {speed_value:.3e} <= {tolerances.cylinder_speed:.1e} at u={u!r}: "
            "cylindrical (constant-direction) ruling"
        )
    speed = jets.sqrt(speed_sq)
    h = qdot / speed
    a = q.cross(h)
    dh_ds = h.shift() / speed
    kappa = dh_ds.dot(a.truncate(dh_ds.order))
    return FrameJets(u=u, q=q, h=h, a=a, speed=speed, kappa=kappa)


# -- pointwise operations ------------------------------------------------------

def striction_point(spec: RuledSurfaceSpec, u: float,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Central point of the ruling through ``u``.

    c(u) = f(u) - (<f', qhat'> / <qhat', qhat'>) qhat(u); the surface normal
    at c(u) is perpendicular to the central tangent, which is the defining
    property validated by the tests.
    """
    base = spec.base.jet(u, 1)
    fj = frame_jets(spec.director, u, 2, tolerances)
    f = base.value
    fdot = base.deriv(1)
    qhat = fj.q.value
    qhatdot = fj.q.deriv(1)
    denom = float(qhatdot @ qhatdot)
    v_star = -float(fdot @ qhatdot) / denom
    return f + v_star * qhat


def frenet_apparatus(spec: RuledSurfaceSpec, u: float,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> FrenetSample:
    """Full Frenet sample at one parameter value (s_q measured from u_min)."""
    order = min(jets.MAX_ORDER, spec.director.max_jet_order)
    fj = frame_jets(spec.director, u, order, tolerances)
    s_q = arc_length_sq(spec, spec.u_min, u, tolerances)
    return _sample_from_jets(spec, fj, s_q, tolerances)


def _sample_from_jets(spec, fj: FrameJets, s_q: float, tolerances: Tolerances) -> FrenetSample:
    return FrenetSample(
        u=fj.u,
        s_q=s_q,
        q=fj.q.value,
        h=fj.h.value,
        a=fj.a.value,
        kappa_q=fj.kappa.value,
        kappa_q_prime=fj.kappa_prime,
        speed=fj.speed.value,
        striction_point=striction_point(spec, fj.u, tolerances),
    )


_GL_NODES, _GL_WEIGHTS = leggauss(16)


def _speed_value(director, u: float, tolerances: Tolerances) -> float:
    fj = frame_jets(director, u, 2, tolerances)
    return fj.speed.value


def arc_length_sq(spec: RuledSurfaceSpec, u0: float, u1: float,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Arc length of the spherical image between u0 and u1.

    Composite 16-node Gauss-Legendre quadrature of |d qhat/du|; the panel
    count is proportional to the fraction of the full parameter range.
    """
    if not (spec.u_min - 1e-12 <= u0 <= u1 <= spec.u_max + 1e-12):
        raise ValueError(f"need u_min <= u0 <= u1 <= u_max, got u0={u0!r}, u1={u1!r}")
    if u1 == u0:
        return 0.0
    span = spec.u_max - spec.u_min
    panels = max(1, round(spec.n_samples * (u1 - u0) / span))
    return _gl_arc_length(spec.director, u0, u1, panels, tolerances)


def _gl_arc_length(director, u0: float, u1: float, panels: int, tolerances: Tolerances) -> float:
    edges = np.linspace(u0, u1, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        total += half * math.fsum(
            w * _speed_value(director, mid + half * x, tolerances)
            for x, w in zip(_GL_NODES, _GL_WEIGHTS)
        )
    return total


def surface_normal(spec: RuledSurfaceSpec, u: float, v: float,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Unit normal m(u, v) = (f' + v qhat') x qhat, normalized."""
    base = spec.base.jet(u, 1)
    raw = spec.director.jet(u, 1)
    mag_sq = raw.dot(raw)
    if mag_sq.value < 1e-28:
        raise GeometryError(f"director vanishes at u={u!r}")
    qhat_jet = raw / jets.sqrt(mag_sq)
    qhat = qhat_jet.value
    qhatdot = qhat_jet.deriv(1)
    m = np.cross(base.deriv(1) + v * qhatdot, qhat)
    norm = float(np.linalg.norm(m))
    if norm <= 1e-12:
        raise DegenerateNormalError(f"surface normal vanishes at (u={u!r}, v={v!r})")
    return m / norm


# -- field construction --------------------------------------------------------

class FrameField:
    """Frenet samples over a u-grid plus a jet source for residual checks."""

    def __init__(self, samples, spec, tolerances: Tolerances,
                 jets_at: Callable[[float, int], FrameJets],
                 dense_frames: Callable[[int], tuple]):
        self.samples = list(samples)
        self.spec = spec
        self.tolerances = tolerances
        self.jets_at = jets_at
        self.dense_frames = dense_frames

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def us(self) -> np.ndarray:
        return np.array([s.u for s in self.samples])

    @property
    def s_q(self) -> np.ndarray:
        return np.array([s.s_q for s in self.samples])

    @property
    def kappa(self) -> np.ndarray:
        return np.array([s.kappa_q for s in self.samples])

    @property
    def kappa_prime(self) -> np.ndarray:
        return np.array([s.kappa_q_prime for s in self.samples])

    def interior(self):
        return self.samples[1:-1]


def analyze(spec: RuledSurfaceSpec, tolerances: Tolerances = DEFAULT_TOLERANCES) -> FrameField:
    """Analyze a ruled surface over its sampling grid.

    Per-sample frame jets are evaluated independently (parallelizable); the
    spherical arc length is then accumulated over consecutive grid intervals
    with one 16-node Gauss-Legendre panel per interval.
    """
    us = spec.grid()
    order = min(jets.MAX_ORDER, spec.director.max_jet_order)
    frame_list = parallel_map(
        lambda u: frame_jets(spec.director, float(u), order, tolerances), us
    )
    s_vals = [0.0]
    for a, b in zip(us[:-1], us[1:]):
        s_vals.append(s_vals[-1] + _gl_arc_length(spec.director, float(a), float(b), 1, tolerances))
    samples = [
        _sample_from_jets(spec, fj, s, tolerances) for fj, s in zip(frame_list, s_vals)
    ]

    def jets_at(u: float, order: int = order) -> FrameJets:
        return frame_jets(spec.director, u, order, tolerances)

    dense_cache = {}

    def dense_frames(factor: int) -> tuple:
        if factor not in dense_cache:
            dense_us = np.linspace(spec.u_min, spec.u_max, (spec.n_samples - 1) * factor + 1)
            rows = parallel_map(
                lambda u: frame_jets(spec.director, float(u), 2, tolerances), dense_us
            )
            q = np.array([fj.q.value for fj in rows])
            h = np.array([fj.h.value for fj in rows])
            a = np.array([fj.a.value for fj in rows])
            dense_cache[factor] = (dense_us, q, h, a)
        return dense_cache[factor]

    return FrameField(samples, spec, tolerances, jets_at, dense_frames)
