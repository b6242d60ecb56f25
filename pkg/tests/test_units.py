import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gravkick.units import DIMENSIONS, G, HBAR, UnitSystem, convert

from .refvals import MOMENTUM_UNIT_W_1E5


def test_constants_are_fixed():
    assert G == 6.67430e-11
    assert HBAR == 1.054571817e-34


def test_natural_momentum_unit_to_si():
    value = convert(1.0, "momentum", UnitSystem.NATURAL, UnitSystem.SI, width=1e-5)
    assert value == pytest.approx(MOMENTUM_UNIT_W_1E5, rel=1e-12)


def test_si_momentum_unit_to_natural():
    assert convert(HBAR / 1e-5, "momentum", UnitSystem.SI, UnitSystem.NATURAL, width=1e-5) == \
        pytest.approx(1.0, rel=1e-12)


def test_si_to_si_is_identity():
    assert convert(3.7, "energy", UnitSystem.SI, UnitSystem.SI) == 3.7


def test_unknown_dimension_rejected():
    with pytest.raises(ValueError, match="dimension"):
        convert(1.0, "charge", UnitSystem.SI, UnitSystem.NATURAL, width=1e-5)


def test_missing_width_rejected():
    with pytest.raises(ValueError, match="width"):
        convert(1.0, "momentum", UnitSystem.SI, UnitSystem.NATURAL)


@given(
    q=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False),
    exponent=st.integers(min_value=-6, max_value=6),
    dimension=st.sampled_from(DIMENSIONS),
    width=st.floats(min_value=1e-9, max_value=1e-3),
)
def test_round_trip(q, exponent, dimension, width):
    value = q * 10.0**exponent
    there = convert(value, dimension, UnitSystem.SI, UnitSystem.NATURAL, width=width)
    back = convert(there, dimension, UnitSystem.NATURAL, UnitSystem.SI, width=width)
    assert back == pytest.approx(value, rel=1e-12)


@given(
    q=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
    a=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
    dimension=st.sampled_from(DIMENSIONS),
)
def test_linearity(q, a, dimension):
    width = 2e-6
    scaled = convert(a * q, dimension, UnitSystem.SI, UnitSystem.NATURAL, width=width)
    direct = a * convert(q, dimension, UnitSystem.SI, UnitSystem.NATURAL, width=width)
    assert scaled == pytest.approx(direct, rel=1e-15, abs=1e-300)


def test_unit_system_is_dimensionally_consistent():
    # momentum^2 / mass must convert like energy
    width = 3e-7
    p = convert(1.0, "momentum", UnitSystem.NATURAL, UnitSystem.SI, width=width)
    m = convert(1.0, "mass", UnitSystem.NATURAL, UnitSystem.SI, width=width)
    e = convert(1.0, "energy", UnitSystem.NATURAL, UnitSystem.SI, width=width)
    assert p * p / m == pytest.approx(e, rel=1e-12)
    t = convert(1.0, "time", UnitSystem.NATURAL, UnitSystem.SI, width=width)
    assert e * t == pytest.approx(HBAR, rel=1e-12)  # hbar = 1 in natural units
