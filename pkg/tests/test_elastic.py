import math
import warnings

import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq, minimize_scalar

from vacfilm import elastic
from vacfilm.elastic import FilmElasticParams, StrainState, WavyPerturbation
from vacfilm.physmodels import DomainError
from vacfilm.stability import stability_threshold

P = FilmElasticParams()


def test_defaults():
    assert (P.young, P.surface_energy, P.mismatch_stress) == (76e9, 1.0, 500e6)
    assert stability_threshold(P) == pytest.approx(1.0820637119113574e13, rel=1e-15)


def test_elastic_surface_crossing():
    lam = elastic.critical_wavelength(P)
    assert lam == pytest.approx(math.pi * 76e9 / 500e6**2, rel=1e-15)
    q = 1e-10
    el = elastic.delta_u_elastic(P.mismatch_stress, q, P.young)
    su = elastic.delta_u_surface(P.surface_energy, q, lam)
    assert abs(el + su) <= 1e-10 * abs(el)
    assert el + elastic.delta_u_surface(P.surface_energy, q, 2 * lam) < 0 < el + elastic.delta_u_surface(
        P.surface_energy, q, lam / 2)


def _min_du(e2, q=1e-10):
    res = minimize_scalar(lambda ll: elastic.delta_u_total(P, e2, q, math.exp(ll)),
                          bracket=(math.log(1e-9), math.log(1e-6)), tol=1e-12)
    return res.fun / q**2, math.exp(res.x)


def test_wavelength_minimisation_reproduces_threshold():
    thr = stability_threshold(P)
    found = brentq(lambda e2: _min_du(e2)[0], 0.5 * thr, 2 * thr, xtol=1e-30, rtol=1e-14)
    assert found == pytest.approx(thr, rel=1e-10)


@given(st.floats(1e11, 1e15))
def test_optimal_wavelength(e2):
    _, lam = _min_du(e2)
    assert lam == pytest.approx(elastic.optimal_wavelength(P, e2), rel=1e-5)


def test_optimal_wavelength_without_restoring_force():
    assert elastic.optimal_wavelength(P, -1.0) == math.inf


def test_hamaker_critical_thickness_matches_equality_condition():
    p = FilmElasticParams(hamaker=-3e-19)
    dc = elastic.hamaker_critical_thickness(p)
    thr = stability_threshold(p)
    root = math.exp(brentq(lambda y: elastic.hamaker_second_derivative(-3e-19, math.exp(y)) - thr,
                           math.log(1e-10), math.log(1e-6), xtol=1e-14))
    assert dc == pytest.approx(root, rel=1e-6)
    assert elastic.hamaker_second_derivative(-3e-19, dc) == pytest.approx(thr, rel=1e-12)


def test_hamaker_domain():
    with pytest.raises(DomainError):
        elastic.hamaker_critical_thickness(P)
    with pytest.raises(DomainError):
        elastic.hamaker_critical_thickness(FilmElasticParams(hamaker=1e-19))


@given(st.floats(-1e14, 1e14), st.floats(1e-9, 1e-7))
def test_equivalent_hamaker_roundtrip(e2, d):
    H = elastic.equivalent_hamaker(e2, d)
    assert elastic.hamaker_second_derivative(H, d) == pytest.approx(e2, rel=1e-12, abs=1e-300)


def test_three_d_modulus():
    assert elastic.effective_young_3d(76e9, 0.3) == pytest.approx(76e9 / 0.91)
    assert stability_threshold(P, three_d=True) == pytest.approx(stability_threshold(P) * 0.91**2)


def test_biaxial_strains():
    s = elastic.biaxial_strains(500e6, P)
    assert s.eps_parallel == pytest.approx(500e6 * 0.7 / 76e9)
    assert s.eps_perp == pytest.approx(-2 * 500e6 * 0.3 / 76e9)


def test_surface_stress_and_vacuum_strains():
    p = FilmElasticParams(surface_stress=1.0)
    d = 5e-9
    s = elastic.strains_from_surface_stress(p, d)
    # surface stress balanced by an in-plane bulk stress -2 sigma_s / d
    assert s.eps_parallel == pytest.approx(elastic.biaxial_strains(-2 * 1.0 / d, p).eps_parallel)
    v = elastic.strains_with_vacuum(p, d, 1e6)
    assert v.eps_perp - s.eps_perp == pytest.approx(1e6 / p.young)


def test_large_strain_warns():
    with pytest.warns(RuntimeWarning):
        StrainState(0.06, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        StrainState(0.01, -0.01)


def test_wavy_field_reduces_to_uniform():
    pert = WavyPerturbation(0.0, 1e-6, 1e-8)
    assert elastic.wavy_stress_field(5e8, pert, 0.3e-6) == (5e8, 0.0, 0.0)
    assert pert.small_amplitude and pert.thin_film


def test_wavy_surface_stress():
    pert = WavyPerturbation(1e-9, 1e-6, 1e-8)
    assert elastic.tangential_surface_stress(5e8, pert, 0.0) == pytest.approx(5e8 * (1 + 4 * math.pi * 1e-3))
    sxx, szz, sxz = elastic.wavy_stress_field(5e8, pert, 0.0)
    assert sxz == 0.0 and szz > 0 and sxx > 5e8


def test_parameter_validation():
    with pytest.raises(DomainError):
        FilmElasticParams(young=0)
    with pytest.raises(DomainError):
        FilmElasticParams(poisson=0.5)
    with pytest.raises(DomainError):
        WavyPerturbation(-1, 1, 1)
