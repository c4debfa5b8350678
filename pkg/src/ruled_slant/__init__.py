"""Frenet apparatus, slant classification and differential-equation
characterizations of ruled surfaces in Euclidean 3-space."""

__version__ = "0.1.0"

from .expr import (  # noqa: F401
    ExpressionAst,
    ExpressionDomainError,
    ExpressionError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
    curve_jet,
    eval_jet,
    parse_expression,
    to_source,
)
from .jets import MAX_ORDER, Jet, JetDomainError, VecJet  # noqa: F401
from .frame import (  # noqa: F401
    DEFAULT_TOLERANCES,
    CylindricalSurfaceError,
    DegenerateNormalError,
    DerivedDirectorCurve,
    ExpressionCurve,
    FrameField,
    FrenetSample,
    GeometryError,
    RuledSurfaceSpec,
    SplineCurve,
    Tolerances,
    analyze,
    arc_length_sq,
    frame_jets,
    frenet_apparatus,
    striction_point,
    surface_normal,
)
from .derived import (  # noqa: F401
    CrossValidation,
    DerivedFrame,
    VanishingCurvatureError,
    cross_validate,
    derived_frames,
    sa_apparatus,
    sh_apparatus,
)
from .slant import (  # noqa: F401
    NotSlantError,
    SlantReport,
    TooFewSamplesError,
    classify,
    recover_axis,
    sigma,
)
from .odecheck import (  # noqa: F401
    OdeKind,
    ResidualReport,
    closed_form_residual,
    evaluate_profiles,
    residual,
    residual_profile,
)
from .synth import (  # noqa: F401
    CurvatureProfile,
    SynthesizedField,
    UnknownPresetError,
    gallery,
    gallery_description,
    gallery_names,
    integrate_frenet,
    recompute_curvature,
    synthesize_field,
)
from .report import analyze_source, run_analysis  # noqa: F401
