import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vacfilm.physmodels import (C, CONSTANTS, DielectricModel, DomainError, Kind, LayerStack,
                                UsageError, eval_epsilon)

freq = st.floats(1e10, 1e19)


def test_constants_are_codata():
    assert CONSTANTS.c == 299792458.0
    assert CONSTANTS.hbar == pytest.approx(1.054571817e-34, rel=0, abs=0)


def test_vacuum_is_one():
    assert eval_epsilon(DielectricModel.vacuum(), 3e14) == 1.0


def test_drude_value():
    m = DielectricModel.drude(2e15, 1e14)
    xi = 5e14
    assert m.epsilon(xi) == pytest.approx(1 + 4e30 / (xi * (xi + 1e14)), rel=1e-15)


def test_plasma_is_drude_without_relaxation():
    xi = np.geomspace(1e12, 1e18, 7)
    np.testing.assert_array_equal(DielectricModel.plasma(3e15).epsilon(xi),
                                  DielectricModel.drude(3e15, 0.0).epsilon(xi))


def test_reflector_has_no_permittivity():
    with pytest.raises(UsageError):
        DielectricModel.perfect_reflector().epsilon(1e15)


@pytest.mark.parametrize("xi", [0.0, -1.0, math.inf])
def test_bad_frequency(xi):
    with pytest.raises(DomainError):
        DielectricModel.plasma(1e15).epsilon(xi)


@pytest.mark.parametrize("args", [(-1.0, 0.0), (1e15, -1.0), (math.nan, 0.0)])
def test_bad_parameters(args):
    with pytest.raises(DomainError):
        DielectricModel.drude(*args)


def test_plasma_rejects_relaxation():
    with pytest.raises(DomainError):
        DielectricModel(Kind.PLASMA, 1e15, 1e13)


def test_wavelengths():
    m = DielectricModel.drude(2e15, 1e14)
    assert m.plasma_wavelength == pytest.approx(2 * math.pi * C / 2e15)
    assert DielectricModel.plasma(1e15).relaxation_wavelength == math.inf


@given(freq, st.floats(0, 1e17), freq)
def test_epsilon_above_one_and_decreasing(om, tau, xi):
    m = DielectricModel.drude(om, tau)
    e1, e2 = m.epsilon(xi), m.epsilon(2 * xi)
    assert e1 >= 1.0 and e2 >= 1.0
    assert e2 <= e1


@given(freq, st.floats(0, 1e17), freq)
def test_relaxation_lowers_epsilon(om, tau, xi):
    assert DielectricModel.drude(om, tau).epsilon(xi) <= DielectricModel.plasma(om).epsilon(xi)


def test_stack_validation():
    film = DielectricModel.plasma(1e15)
    with pytest.raises(DomainError):
        LayerStack.free_standing(film, 0.0)
    with pytest.raises(DomainError):
        LayerStack.free_standing(DielectricModel.perfect_reflector(), 1e-9)
    s = LayerStack.on_substrate(film, DielectricModel.perfect_reflector(), 1e-9)
    assert s.with_thickness(2e-9).thickness == 2e-9
    assert s.ambient.kind is Kind.VACUUM
