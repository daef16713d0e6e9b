import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import ideal_casimir, lifshitz_pxi, nonretarded_pressure_li3
from vacfilm import lifshitz
from vacfilm.lifshitz import IntegrandPoint, QuadratureSpec, q_factors
from vacfilm.physmodels import DielectricModel as D, LayerStack

MIRROR = D.perfect_reflector()


def as_layers(stack):
    def one(m):
        if m.is_reflector:
            return ("mirror", 0.0, 0.0)
        if m.is_vacuum_like:
            return ("vac", 0.0, 0.0)
        return ("metal", m.omega_p, m.omega_tau)
    return {"film": one(stack.film), "sub": one(stack.substrate), "amb": one(stack.ambient)}


@pytest.mark.parametrize("d", [1e-8, 1e-7, 1e-6, 1e-5])
def test_ideal_cavity(d):
    q = lifshitz.vacuum_quantities(LayerStack(MIRROR, MIRROR, D.vacuum(), d))
    e, f, e2 = ideal_casimir(d)
    assert q.energy_per_area == pytest.approx(e, rel=1e-10)
    assert q.pressure == pytest.approx(f, rel=1e-10)
    assert q.energy_second_derivative == pytest.approx(e2, rel=1e-10)


ORACLE_CASES = [
    LayerStack.free_standing(D.plasma(2e15), 10e-9),
    LayerStack.free_standing(D.drude(5e16, 3e15), 3e-9),
    LayerStack.on_substrate(D.drude(1e16, 1e14), MIRROR, 30e-9),
    LayerStack.on_substrate(D.drude(5e15, 1e15), D.drude(2e16, 3e14), 5e-9),
    LayerStack.on_substrate(D.plasma(3e16), D.plasma(1e15), 2e-9),
    LayerStack(D.drude(4e15, 1e13), D.plasma(9e15), D.drude(1e16, 2e14), 20e-9),
]


@pytest.mark.parametrize("stack", ORACLE_CASES)
@pytest.mark.parametrize("what", ["energy", "pressure", "second_derivative"])
def test_against_pxi_oracle(stack, what):
    q = lifshitz.vacuum_quantities(stack)
    got = {"energy": q.energy_per_area, "pressure": q.pressure,
           "second_derivative": q.energy_second_derivative}[what]
    assert got == pytest.approx(lifshitz_pxi(as_layers(stack), stack.thickness, what), rel=1e-7)


@pytest.mark.parametrize("stack", ORACLE_CASES[:4])
def test_finite_difference_consistency(stack):
    d = stack.thickness
    h = d * 1e-4
    quad = QuadratureSpec(rel_tol=1e-11)
    E = [lifshitz.energy_per_area(stack.with_thickness(x), quad).value for x in (d - h, d, d + h)]
    F = [lifshitz.pressure(stack.with_thickness(x), quad).value for x in (d - h, d + h)]
    q = lifshitz.vacuum_quantities(stack, quad)
    assert -(E[2] - E[0]) / (2 * h) == pytest.approx(q.pressure, rel=1e-4)
    assert -(F[1] - F[0]) / (2 * h) == pytest.approx(q.energy_second_derivative, rel=1e-4)


def test_error_estimate_reported():
    q = lifshitz.vacuum_quantities(ORACLE_CASES[0])
    assert 0 < q.pressure_error <= 1e-8 * abs(q.pressure)


@pytest.mark.parametrize("d", [1e-9, 1e-10])
def test_small_thickness_matches_nonretarded_limit(d):
    stack = LayerStack.free_standing(D.plasma(2e15), d)
    ref = nonretarded_pressure_li3(as_layers(stack), d)
    tol = 1e-3 if d == 1e-9 else 1e-4
    assert lifshitz.pressure(stack).value == pytest.approx(ref, rel=tol)


def test_reflector_retardation_correction_is_linear_in_d():
    # the retarded/non-retarded gap shrinks like d * Omega / c
    gaps = []
    for d in (1e-10, 1e-11, 1e-12):
        stack = LayerStack.on_substrate(D.plasma(2e15), MIRROR, d)
        gaps.append(lifshitz.pressure(stack).value / nonretarded_pressure_li3(as_layers(stack), d) - 1)
    assert abs(gaps[-1]) < 1e-5
    assert gaps[0] / gaps[1] == pytest.approx(10, rel=0.01)
    assert gaps[1] / gaps[2] == pytest.approx(10, rel=0.01)


def test_identical_media_give_zero():
    m = D.drude(3e15, 1e14)
    q = lifshitz.vacuum_quantities(LayerStack(m, m, m, 5e-9))
    assert q.energy_per_area == 0 and q.pressure == 0 and q.energy_second_derivative == 0


def test_nearly_identical_media_converge():
    om = 7.3e15
    stack = LayerStack.on_substrate(D.plasma(om), D.plasma(om * (1 + 1e-15)), 6e-9)
    r = lifshitz.energy_second_derivative(stack)
    assert abs(r.value) < 1.0 and r.error < 1e-6


def test_runtime_per_point():
    stack = LayerStack(MIRROR, MIRROR, D.vacuum(), 1e-6)
    t = time.perf_counter()
    lifshitz.vacuum_quantities(stack)
    assert time.perf_counter() - t < 1.0


@pytest.mark.parametrize("substrate, lo, hi", [(D.vacuum(), 0.0, 1.0), (MIRROR, 1.0, 2.0)])
def test_q_factor_range(substrate, lo, hi):
    # both reflection products flip sign when the vacuum below is replaced by a mirror
    stack = LayerStack.on_substrate(D.plasma(2e15), substrate, 5e-9)
    for p in (1.0, 1.5, 10.0, 1e3):
        for xi in (1e12, 1e15, 1e17):
            for q in q_factors(stack, IntegrandPoint.at(stack, p, xi)):
                assert lo <= q <= hi


def test_integrand_point():
    stack = LayerStack.on_substrate(D.plasma(2e15), MIRROR, 5e-9)
    pt = IntegrandPoint.at(stack, 2.0, 1e15)
    assert pt.K[0] == math.inf
    assert pt.K[1] == pytest.approx(2.0)
    assert pt.k == pytest.approx(1e15 / 299792458.0 * math.sqrt(3))
    with pytest.raises(ValueError):
        IntegrandPoint.at(stack, 0.5, 1e15)


# sign structure: free-standing films are attracted, a film whose
# permittivity lies between its neighbours is pushed apart

@given(st.floats(1e14, 1e18), st.floats(0, 1e16), st.floats(1e-9, 1e-6))
@settings(max_examples=25)
def test_free_standing_is_attractive(om, tau, d):
    q = lifshitz.vacuum_quantities(LayerStack.free_standing(D.drude(om, tau), d))
    assert q.pressure <= 0
    assert q.energy_per_area <= 0
    assert q.energy_second_derivative <= 0


@given(st.floats(1e14, 1e17), st.floats(1.5, 100.0), st.floats(1e-9, 1e-7))
@settings(max_examples=25)
def test_denser_substrate_repels(om3, ratio, d):
    stack = LayerStack.on_substrate(D.plasma(om3), D.plasma(om3 * ratio), d)
    assert lifshitz.pressure(stack).value > 0


@given(st.floats(1e14, 1e18), st.floats(1e-9, 1e-6))
@settings(max_examples=25)
def test_mirror_substrate_repels(om3, d):
    assert lifshitz.pressure(LayerStack.on_substrate(D.plasma(om3), MIRROR, d)).value >= 0


@given(st.floats(1e-9, 1e-6), st.floats(0.5, 2.0))
@settings(max_examples=20)
def test_energy_scales_between_mirrors(d, k):
    a = lifshitz.energy_per_area(LayerStack(MIRROR, MIRROR, D.vacuum(), d)).value
    b = lifshitz.energy_per_area(LayerStack(MIRROR, MIRROR, D.vacuum(), k * d)).value
    assert b == pytest.approx(a / k**3, rel=1e-9)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.1)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=2)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1)


def test_tiny_budget_raises():
    from vacfilm.cubature import ConvergenceError
    with pytest.raises(ConvergenceError) as info:
        lifshitz.pressure(ORACLE_CASES[3], QuadratureSpec(rel_tol=1e-14, max_subdivisions=10))
    assert np.isfinite(info.value.value).all()


def test_mirror_is_limit_of_dense_substrate():
    d = 10e-9
    mirror = lifshitz.pressure(LayerStack.on_substrate(D.plasma(1e16), MIRROR, d)).value
    gaps = [abs(lifshitz.pressure(LayerStack.on_substrate(D.plasma(1e16), D.plasma(om1), d)).value / mirror - 1)
            for om1 in (1e18, 1e19, 1e20)]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-3
