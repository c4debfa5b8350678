"""Closed-form apparatus of the central-normal/central-tangent surfaces and
the direct re-analysis oracle."""

import math

import numpy as np
import pytest

import ruled_slant as rs
from ruled_slant.derived import VanishingCurvatureError
from ruled_slant.frame import DerivedDirectorCurve, ExpressionCurve, FrenetSample, RuledSurfaceSpec


def _synthetic_sample(kappa, kappa_prime=0.0):
    return FrenetSample(
        u=0.0, s_q=0.0,
        q=np.array([1.0, 0.0, 0.0]),
        h=np.array([0.0, 1.0, 0.0]),
        a=np.array([0.0, 0.0, 1.0]),
        kappa_q=kappa, kappa_q_prime=kappa_prime,
        speed=1.0, striction_point=np.zeros(3),
    )


# -- central-normal surface ------------------------------------------------------

def test_sh_helicoid_sample(helicoid_field):
    s = helicoid_field.samples[10]
    d = rs.sh_apparatus(s)
    assert np.allclose(d.q_d, s.h, atol=1e-12)
    assert np.allclose(d.h_d, -s.q, atol=1e-10)
    assert np.allclose(d.a_d, s.a, atol=1e-10)
    assert abs(d.kappa_d) <= 1e-12
    assert d.ds_ratio == pytest.approx(1.0, abs=1e-10)


def test_sh_unit_curvature_sample(cone_pi4_field):
    s = cone_pi4_field.samples[30]
    d = rs.sh_apparatus(s)
    assert abs(d.kappa_d) <= 1e-10
    assert np.allclose(d.h_d, (-s.q + s.a) / math.sqrt(2.0), atol=1e-10)
    assert d.ds_ratio == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-10)


def test_sh_slant_family_has_unit_kappa_h(preset_fields):
    # kappa(s) = s/sqrt(1-s^2) makes kappa/sqrt(1+kappa^2) = s, whose
    # derivative (the derived curvature) is exactly 1.
    field = preset_fields["slant-1.0"]
    for s in field.samples:
        assert rs.sh_apparatus(s).kappa_d == pytest.approx(1.0, abs=1e-10)


def test_sh_frame_relations(preset_fields):
    for field in preset_fields.values():
        for s in field.samples[:: 16]:
            d = rs.sh_apparatus(s)
            w = math.sqrt(1.0 + s.kappa_q**2)
            assert float(d.h_d @ s.q) == pytest.approx(-1.0 / w, abs=1e-10)
            assert float(d.h_d @ s.a) == pytest.approx(s.kappa_q / w, abs=1e-10)
            # right-handed orthonormal triple
            g = np.array([d.q_d, d.h_d, d.a_d])
            assert np.max(np.abs(g @ g.T - np.eye(3))) <= 1e-10
            assert np.linalg.det(g) == pytest.approx(1.0, abs=1e-10)


# -- central-tangent surface ------------------------------------------------------

def test_sa_reciprocal_curvature():
    d = rs.sa_apparatus(_synthetic_sample(2.0))
    assert d.kappa_d == pytest.approx(0.5)
    assert d.ds_ratio == pytest.approx(0.5)


def test_sa_unit_curvature(cone_pi4_field):
    s = cone_pi4_field.samples[5]
    d = rs.sa_apparatus(s)
    assert d.kappa_d == pytest.approx(1.0, abs=1e-10)


def test_sa_frame_relations():
    s = _synthetic_sample(1.5)
    d = rs.sa_apparatus(s)
    assert np.allclose(d.q_d, s.a)
    assert np.allclose(d.h_d, -s.h)
    assert np.allclose(d.a_d, s.q)
    # negative curvature flips the orientation carriers, not handedness
    s_neg = _synthetic_sample(-1.5)
    d_neg = rs.sa_apparatus(s_neg)
    assert np.allclose(d_neg.h_d, s_neg.h)
    assert np.allclose(d_neg.a_d, -s_neg.q)
    for frame in (d, d_neg):
        g = np.array([frame.q_d, frame.h_d, frame.a_d])
        assert np.linalg.det(g) == pytest.approx(1.0, abs=1e-12)
    assert d_neg.kappa_d == pytest.approx(1.0 / 1.5)


def test_sa_vanishing_curvature_error(helicoid_field):
    with pytest.raises(VanishingCurvatureError):
        rs.sa_apparatus(helicoid_field.samples[0])


def test_derived_frames_excludes_zero_kappa(preset_fields):
    frames = rs.derived_frames(preset_fields["quadratic"], "a")
    assert frames[0] is None          # kappa = s^2 vanishes at s = 0
    assert frames[-1] is not None
    assert all(f is not None for f in rs.derived_frames(preset_fields["quadratic"], "h"))


# -- cross validation ---------------------------------------------------------------

def test_cross_validate_h_cone(cone_pi4_field):
    cv = rs.cross_validate(cone_pi4_field, "h")
    assert cv.max_kappa_dev <= 1e-6
    assert cv.max_frame_dev <= 1e-6
    assert cv.n_compared == len(cone_pi4_field) - 2


def test_cross_validate_a_cone(cone_pi4_field):
    cv = rs.cross_validate(cone_pi4_field, "a")
    assert cv.max_kappa_dev <= 1e-6   # direct kappa of the a-surface is 1
    assert cv.max_frame_dev <= 1e-6
    assert cv.n_excluded == 0


def test_cross_validate_a_helicoid_errors(helicoid_field):
    with pytest.raises(VanishingCurvatureError):
        rs.cross_validate(helicoid_field, "a")


def test_cross_validate_accepts_spec():
    spec = rs.gallery("cone-theta", theta=1.0)
    spec = rs.RuledSurfaceSpec(base=spec.base, director=spec.director,
                               u_min=spec.u_min, u_max=spec.u_max,
                               n_samples=48, label=spec.label)
    cv = rs.cross_validate(spec, "h")
    assert cv.max_kappa_dev <= 1e-6


def test_cross_validate_sign_change(preset_fields):
    # kappa changes sign across s = 0; the line-span comparison absorbs the
    # per-sample orientation flips, and the curvature deviation is judged on
    # the 1/(1+|kappa_a|) scale since kappa_a blows up near the crossing.
    field = preset_fields["slant-0.5"]
    cv = rs.cross_validate(field, "a")
    assert cv.max_kappa_scaled_dev <= 1e-6
    assert cv.max_frame_dev <= 1e-6


def test_cross_validate_counts_exclusions():
    # an odd grid puts a node exactly on the kappa = 0 crossing
    prof = rs.gallery("slant-family-c", c=0.5)
    field = rs.synthesize_field(prof, n_samples=129, oversample=12).field
    cv = rs.cross_validate(field, "a")
    assert cv.n_excluded >= 1
    assert cv.n_compared == len(field) - 2 - cv.n_excluded
    assert cv.max_frame_dev <= 1e-6


def test_arc_length_ratio(twisted_spec, twisted_field):
    # integral of sqrt(1+kappa^2) ds_q matches the arc length of the
    # spherical image of h computed by re-analyzing the h-director surface.
    from scipy.integrate import quad
    from ruled_slant.frame import frame_jets

    def integrand(u):
        fj = frame_jets(twisted_spec.director, u, 3)
        return math.sqrt(1.0 + fj.kappa.value**2) * fj.speed.value

    lo, hi = twisted_spec.u_min, twisted_spec.u_max
    via_ratio, _ = quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-12)

    spec_h = RuledSurfaceSpec(
        base=ExpressionCurve.from_strings(("0", "0", "0")),
        director=DerivedDirectorCurve(twisted_spec.director, "h"),
        u_min=lo, u_max=hi, n_samples=twisted_spec.n_samples,
    )
    direct = rs.arc_length_sq(spec_h, lo, hi)
    assert via_ratio == pytest.approx(direct, rel=1e-6)
