"""Wavefront OBJ export of a ruled surface patch and its striction curve.

Vertices sit at r(u_i, v_j) = f(u_i) + v_j * qhat(u_i) on an n_u x n_v grid
with v in [-v_max, v_max]; each grid quad is split into two triangles.  The
striction curve is appended as extra vertices joined by one polyline
element, so viewers show the central curve on top of the surface.
"""

from __future__ import annotations

import numpy as np

from .frame import DEFAULT_TOLERANCES, RuledSurfaceSpec, Tolerances, striction_point


def write_obj(spec: RuledSurfaceSpec, path, v_max: float, n_u: int, n_v: int,
              tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
    if n_u < 2:
        raise ValueError(f"n_u must be >= 2, got {n_u}")
    if n_v < 2:
        raise ValueError(f"n_v must be >= 2, got {n_v}")
    if not v_max > 0.0:
        raise ValueError(f"v_max must be positive, got {v_max!r}")

    us = np.linspace(spec.u_min, spec.u_max, n_u)
    vs = np.linspace(-v_max, v_max, n_v)

    lines = [f"# ruled surface{': ' + spec.label if spec.label else ''}",
             f"# {n_u}x{n_v} grid, striction polyline appended"]
    for u in us:
        base = spec.base.jet(float(u), 0).value
        raw = spec.director.jet(float(u), 0)
        qhat = (raw / raw.norm()).value
        for v in vs:
            point = base + float(v) * qhat
            lines.append(f"v {float(point[0])!r} {float(point[1])!r} {float(point[2])!r}")

    def vid(i: int, j: int) -> int:
        return i * n_v + j + 1  # OBJ indices are 1-based

    for i in range(n_u - 1):
        for j in range(n_v - 1):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")

    first_striction = n_u * n_v + 1
    for u in us:
        c = striction_point(spec, float(u), tolerances)
        lines.append(f"v {float(c[0])!r} {float(c[1])!r} {float(c[2])!r}")
    polyline = " ".join(str(first_striction + i) for i in range(n_u))
    lines.append(f"l {polyline}")

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
