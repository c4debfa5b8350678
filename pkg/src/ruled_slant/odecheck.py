"""Residuals of the nine vector differential equations characterizing slant
ruled surfaces.

Each kind names one frame vector of one of the three surfaces (the original,
the central-normal surface, the central-tangent surface) and asserts a
second- or third-order linear ODE in that surface's own spherical arc
length, with coefficient 1 + kappa^2 built from that surface's conical
curvature.  On a slant surface of the matching kind the left-hand side
vanishes; elsewhere it measures how far from slant the surface is.

The residual path differentiates jets through the chain rules
d/ds_h = (ds_q/ds_h) d/ds_q and d/ds_a = (ds_q/ds_a) d/ds_q, never through
the frame equations themselves.  Independently, each residual has a closed
form obtained by differentiating the Frenet system symbolically
(e.g. the third-derivative ruling equation reduces to kappa' * tangent);
``closed_form_residual`` evaluates those and serves as the oracle the tests
compare against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import jets
from .derived import VanishingCurvatureError
from .frame import FrameField, FrameJets
from .parallel import parallel_map


class OdeKind(enum.Enum):
    """(surface system, frame vector, derivative order) of one equation."""

    Q3 = ("q", "ruling", 3)
    H2 = ("q", "normal", 2)
    A3 = ("q", "tangent", 3)
    QH3 = ("h", "ruling", 3)
    HH2 = ("h", "normal", 2)
    AH3 = ("h", "tangent", 3)
    QA3 = ("a", "ruling", 3)
    HA2 = ("a", "normal", 2)
    AA3 = ("a", "tangent", 3)

    @property
    def system(self) -> str:
        return self.value[0]

    @property
    def vector(self) -> str:
        return self.value[1]

    @property
    def derivative_order(self) -> int:
        return self.value[2]

    @property
    def uses_sa(self) -> bool:
        return self.system == "a"


# Minimum director jet order each kind needs; the central-tangent field of
# S_h already embeds two director derivatives, so its third derivative is the
# deepest consumer at order 5.
REQUIRED_DIRECTOR_ORDER = {
    OdeKind.Q3: 3, OdeKind.H2: 3, OdeKind.A3: 4,
    OdeKind.QH3: 4, OdeKind.HH2: 4, OdeKind.AH3: 5,
    OdeKind.QA3: 4, OdeKind.HA2: 3, OdeKind.AA3: 4,
}


@dataclass
class ResidualReport:
    kind: OdeKind
    us: List[float]
    norms: List[float]
    max_norm: float
    satisfied: bool
    tolerance: float
    n_excluded: int


class _SystemJets:
    """Frame-vector and curvature jets of one surface system at a point."""

    __slots__ = ("ruling", "normal", "tangent", "curvature", "factor")

    def __init__(self, ruling, normal, tangent, curvature, factor):
        self.ruling = ruling
        self.normal = normal
        self.tangent = tangent
        self.curvature = curvature
        self.factor = factor  # dX/d(arc length) = shift(X) / factor

    def arc_derivative(self, x):
        return x.shift() / self.factor


def _system_jets(fj: FrameJets, system: str, eps_kappa: float) -> _SystemJets:
    if system == "q":
        return _SystemJets(fj.q, fj.h, fj.a, fj.kappa, fj.speed)
    if system == "h":
        w = jets.sqrt(1.0 + fj.kappa * fj.kappa)
        kappa_h = (fj.kappa.shift() / fj.speed) / w**3
        return _SystemJets(
            ruling=fj.h,
            normal=(-fj.q + fj.a * fj.kappa) / w,
            tangent=(fj.a + fj.q * fj.kappa) / w,
            curvature=kappa_h,
            factor=fj.speed * w,
        )
    if system == "a":
        k0 = fj.kappa.value
        if abs(k0) < eps_kappa:
            raise VanishingCurvatureError(
                f"|kappa_q| = {abs(k0):.3e} < {eps_kappa:.1e} at u={fj.u!r}: "
                "central-tangent system undefined"
            )
        sign = 1.0 if k0 > 0 else -1.0
        abs_kappa = fj.kappa * sign
        return _SystemJets(
            ruling=fj.a,
            normal=fj.h * (-sign),
            tangent=fj.q * sign,
            curvature=1.0 / abs_kappa,
            factor=fj.speed * abs_kappa,
        )
    raise ValueError(f"unknown system {system!r}")


def _lhs(sys: _SystemJets, kind: OdeKind) -> np.ndarray:
    x = getattr(sys, kind.vector)
    coeff = 1.0 + sys.curvature.value ** 2
    d1 = sys.arc_derivative(x)
    if kind.derivative_order == 2:
        d2 = sys.arc_derivative(d1)
        return d2.value + coeff * x.value
    d2 = sys.arc_derivative(d1)
    d3 = sys.arc_derivative(d2)
    return d3.value + coeff * d1.value


def _closed_form(sys: _SystemJets, kind: OdeKind) -> np.ndarray:
    k = sys.curvature
    k1 = sys.arc_derivative(k)
    if kind.vector in ("ruling", "normal"):
        return k1.value * sys.tangent.value
    k2 = sys.arc_derivative(k1)
    return (
        2.0 * k1.value * sys.ruling.value
        - k2.value * sys.normal.value
        - 3.0 * k.value * k1.value * sys.tangent.value
    )


def _jets_for(field: FrameField, kind: OdeKind, u: float) -> _SystemJets:
    needed = REQUIRED_DIRECTOR_ORDER[kind]
    fj = field.jets_at(u, needed)
    return _system_jets(fj, kind.system, field.tolerances.vanishing_kappa)


def residual(field: FrameField, kind: OdeKind, u: float) -> np.ndarray:
    """Left-hand side of the kind's equation at ``u`` (a 3-vector)."""
    return _lhs(_jets_for(field, kind, u), kind)


def closed_form_residual(field: FrameField, kind: OdeKind, u: float) -> np.ndarray:
    """Symbolically derived value of the same residual (the oracle path)."""
    return _closed_form(_jets_for(field, kind, u), kind)


def residual_profile(field: FrameField, kind: OdeKind, tol: Optional[float] = None) -> ResidualReport:
    """Residual norms over interior grid points and the satisfaction flag.

    Grid endpoints carry no residual.  For central-tangent kinds, samples
    with |kappa_q| below the vanishing threshold are excluded and counted;
    a profile with every sample excluded is vacuously satisfied.
    """
    return evaluate_profiles(field, [kind], tol)[kind]


def evaluate_profiles(field: FrameField, kinds: Optional[Iterable[OdeKind]] = None,
                      tol: Optional[float] = None) -> Dict[OdeKind, ResidualReport]:
    """Profiles for several kinds, sharing one jet evaluation per grid point."""
    if kinds is None:
        kinds = list(OdeKind)
    kinds = list(kinds)
    if tol is None:
        tol = field.tolerances.ode_residual
    eps = field.tolerances.vanishing_kappa

    max_order = max(REQUIRED_DIRECTOR_ORDER[k] for k in kinds)
    wanted_systems = {k.system for k in kinds}

    def one_sample(sample):
        fj = field.jets_at(sample.u, max_order)
        systems: Dict[str, Optional[_SystemJets]] = {}
        for system in wanted_systems:
            try:
                systems[system] = _system_jets(fj, system, eps)
            except VanishingCurvatureError:
                systems[system] = None
        row = {}
        for kind in kinds:
            sys = systems[kind.system]
            row[kind] = None if sys is None else float(np.linalg.norm(_lhs(sys, kind)))
        return sample.u, row

    rows = parallel_map(one_sample, field.interior())

    reports = {}
    for kind in kinds:
        us = [u for u, row in rows if row[kind] is not None]
        norms = [row[kind] for _, row in rows if row[kind] is not None]
        excluded = sum(1 for _, row in rows if row[kind] is None)
        max_norm = max(norms) if norms else 0.0
        reports[kind] = ResidualReport(
            kind=kind,
            us=us,
            norms=norms,
            max_norm=max_norm,
            satisfied=max_norm <= tol,
            tolerance=tol,
            n_excluded=excluded,
        )
    return reports
