import math

import pytest

import ruled_slant as rs


def acceptance_sources():
    """The preset battery every suite-wide check runs over (256-point grids)."""
    return {
        "helicoid": rs.gallery("helicoid"),
        "cone-pi6": rs.gallery("cone-theta", theta=math.pi / 6),
        "cone-pi4": rs.gallery("cone-theta", theta=math.pi / 4),
        "cone-1.0": rs.gallery("cone-theta", theta=1.0),
        "slant-0.5": rs.gallery("slant-family-c", c=0.5),
        "slant-1.0": rs.gallery("slant-family-c", c=1.0),
        "quadratic": rs.gallery("quadratic"),
        "nonslant-mixed": rs.gallery("nonslant-mixed"),
    }


@pytest.fixture(scope="session")
def preset_fields():
    return {
        name: rs.analyze_source(source, 256)
        for name, source in acceptance_sources().items()
    }


@pytest.fixture(scope="session")
def cone_pi4_field(preset_fields):
    return preset_fields["cone-pi4"]


@pytest.fixture(scope="session")
def helicoid_field(preset_fields):
    return preset_fields["helicoid"]


@pytest.fixture(scope="session")
def twisted_spec():
    """Expression-backed surface with genuinely varying conical curvature."""
    return rs.RuledSurfaceSpec.from_strings(
        ("0.1*t", "0", "0.2*t"), ("cos(t)", "sin(t)", "0.5*t"),
        0.3, 2.8, 96, label="twisted",
    )


@pytest.fixture(scope="session")
def twisted_field(twisted_spec):
    return rs.analyze(twisted_spec)
