"""Shared oracles for the test suite: finite-difference stencils and random
surface generators.  These stay independent of the jet arithmetic they check.
"""

from __future__ import annotations

import numpy as np

import ruled_slant as rs

# 4th-order central stencils: (offsets, weights, denominator power).
_STENCILS = {
    1: ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
    2: ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
    3: ((-3, -2, -1, 1, 2, 3), (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8)),
}

# Steps trading truncation against roundoff for each derivative order.
_STEPS = {1: 1e-3, 2: 4e-3, 3: 2e-2}


def _stencil(f, x: float, order: int, h: float) -> float:
    offsets, weights = _STENCILS[order]
    return sum(w * f(x + k * h) for k, w in zip(offsets, weights)) / h**order


def fd_derivative(f, x: float, order: int, h: float = None) -> float:
    """Central finite-difference derivative of a scalar callable.

    Orders 2 and 3 use one Richardson extrapolation step on the 4th-order
    stencil, which keeps the truncation error manageable for functions with
    large high-order derivatives without pushing the step into roundoff.
    """
    if order == 0:
        return f(x)
    if h is None:
        h = _STEPS[order]
    if order == 1:
        return _stencil(f, x, 1, h)
    coarse = _stencil(f, x, order, h)
    fine = _stencil(f, x, order, 0.5 * h)
    return (16.0 * fine - coarse) / 15.0


def trig_poly(rng: np.random.Generator, degree: int = 2) -> str:
    """Random trigonometric polynomial a0 + sum a_k cos(kt) + b_k sin(kt)."""
    terms = [repr(float(rng.uniform(-1, 1)))]
    for k in range(1, degree + 1):
        terms.append(f"{float(rng.uniform(-1, 1))!r}*cos({k}*t)")
        terms.append(f"{float(rng.uniform(-1, 1))!r}*sin({k}*t)")
    return "+".join(terms)


def random_trig_spec(rng: np.random.Generator) -> rs.RuledSurfaceSpec:
    return rs.RuledSurfaceSpec.from_strings(
        tuple(trig_poly(rng) for _ in range(3)),
        tuple(trig_poly(rng) for _ in range(3)),
        0.0, 2 * np.pi, 16,
    )


def frame_matrix(sample) -> np.ndarray:
    return np.array([sample.q, sample.h, sample.a])


def orthonormality_defect(sample) -> float:
    g = frame_matrix(sample)
    return float(np.max(np.abs(g @ g.T - np.eye(3))))
