"""Continuum elasticity of a strained film and the energetics of a wavy surface.

The wavy-surface terms are energy changes over one wavelength of a 2-D
cosine perturbation ``z = d - q cos(2 pi x / lambda)``; per unit length
transverse to the sketch they carry units of J/m.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .physmodels import DomainError

# |strain| above this is outside linear elasticity
STRAIN_WARNING = 0.05


@dataclass(frozen=True)
class FilmElasticParams:
    """Elastic and surface parameters of the film.

    Defaults are the mismatch stress, surface energy and Young modulus used
    for the stability estimates (500 MPa, 1 J/m^2, 76 GPa) with nu = 0.3.
    """

    young: float = 76e9
    poisson: float = 0.3
    surface_energy: float = 1.0
    mismatch_stress: float = 500e6
    surface_stress: float = 0.0
    hamaker: float | None = None

    def __post_init__(self):
        if not self.young > 0:
            raise DomainError("Young modulus must be > 0")
        if not -1.0 < self.poisson < 0.5:
            raise DomainError("Poisson ratio must lie in (-1, 0.5)")
        if not self.surface_energy > 0:
            raise DomainError("surface energy must be > 0")
        if not math.isfinite(self.mismatch_stress):
            raise DomainError("mismatch stress must be finite")

    def effective_young(self, three_d: bool = False) -> float:
        return effective_young_3d(self.young, self.poisson) if three_d else self.young


@dataclass(frozen=True)
class WavyPerturbation:
    amplitude: float
    wavelength: float
    thickness: float

    def __post_init__(self):
        if self.amplitude < 0 or not self.wavelength > 0:
            raise DomainError("need amplitude >= 0 and wavelength > 0")

    @property
    def small_amplitude(self) -> bool:
        return self.amplitude / self.wavelength <= 0.1

    @property
    def thin_film(self) -> bool:
        return self.thickness / self.wavelength <= 0.1


@dataclass(frozen=True)
class StrainState:
    eps_parallel: float
    eps_perp: float

    def __post_init__(self):
        if max(abs(self.eps_parallel), abs(self.eps_perp)) > STRAIN_WARNING:
            warnings.warn("strain beyond the linear-elastic range", RuntimeWarning, stacklevel=3)

    def __add__(self, other: StrainState) -> StrainState:
        return StrainState(self.eps_parallel + other.eps_parallel, self.eps_perp + other.eps_perp)


def biaxial_strains(sigma: float, params: FilmElasticParams) -> StrainState:
    Y, nu = params.young, params.poisson
    return StrainState(sigma * (1.0 - nu) / Y, -2.0 * sigma * nu / Y)


def strains_from_surface_stress(params: FilmElasticParams, d: float) -> StrainState:
    """Strains balancing the surface stress, ``sigma_s = -(d/2) sigma``."""
    Y, nu, ss = params.young, params.poisson, params.surface_stress
    return StrainState(-2.0 * ss * (1.0 - nu) / (Y * d), 4.0 * ss * nu / (Y * d))


def strains_with_vacuum(params: FilmElasticParams, d: float, F: float) -> StrainState:
    """Surface-stress strains plus the linear response to a normal pressure ``F``."""
    Y, nu = params.young, params.poisson
    return strains_from_surface_stress(params, d) + StrainState(-nu * F / Y, F / Y)


def wavy_stress_field(sigma: float, pert: WavyPerturbation, x: float) -> tuple[float, float, float]:
    """``(sigma_xx, sigma_zz, sigma_xz)`` of the perturbed film at lateral position ``x``."""
    q, lam, d = pert.amplitude, pert.wavelength, pert.thickness
    k = 2.0 * math.pi / lam
    att = math.exp(-2.0 * math.pi * d / lam)
    sxx = sigma * (1.0 + 4.0 * math.pi * q / lam * (1.0 - math.pi * d / lam) * att * math.cos(k * x))
    szz = sigma * 4.0 * math.pi * d * q / lam**2 * att * math.cos(k * x)
    sxz = sigma * 2.0 * math.pi * q / lam * (1.0 - 2.0 * math.pi * d / lam) * att * math.sin(k * x)
    return sxx, szz, sxz


def tangential_surface_stress(sigma: float, pert: WavyPerturbation, x: float) -> float:
    q, lam = pert.amplitude, pert.wavelength
    return sigma * (1.0 + 4.0 * math.pi * q / lam * math.cos(2.0 * math.pi * x / lam))


def delta_u_elastic(sigma: float, q: float, young: float) -> float:
    return -(sigma**2) * q**2 * math.pi / young


def delta_u_surface(gamma: float, q: float, wavelength: float) -> float:
    return gamma * q**2 * math.pi**2 / wavelength


def delta_u_vacuum(e2: float, q: float, wavelength: float) -> float:
    """Second-order vacuum energy change for curvature ``e2 = d^2E/dd^2``."""
    return e2 * q**2 * wavelength / 4.0


def delta_u_total(params: FilmElasticParams, e2: float, q: float, wavelength: float,
                  three_d: bool = False) -> float:
    Y = params.effective_young(three_d)
    return (delta_u_elastic(params.mismatch_stress, q, Y)
            + delta_u_surface(params.surface_energy, q, wavelength)
            + delta_u_vacuum(e2, q, wavelength))


def optimal_wavelength(params: FilmElasticParams, e2: float) -> float:
    """Wavelength minimising :func:`delta_u_total`, ``2 pi sqrt(gamma / e2)``."""
    return 2.0 * math.pi * math.sqrt(params.surface_energy / e2) if e2 > 0 else math.inf


def critical_wavelength(params: FilmElasticParams, three_d: bool = False) -> float:
    """Wavelength ``pi Y gamma / sigma^2`` above which a flat film roughens (no vacuum term)."""
    sigma = params.mismatch_stress
    if sigma == 0.0:
        return math.inf
    return math.pi * params.effective_young(three_d) * params.surface_energy / sigma**2


def hamaker_critical_thickness(params: FilmElasticParams, three_d: bool = False) -> float:
    """``d_c = (-H Y^2 gamma / (2 pi sigma^4))^(1/4)``; needs a repulsive (negative) H."""
    H = params.hamaker
    if H is None:
        raise DomainError("no Hamaker constant given")
    if H >= 0:
        raise DomainError("attractive vacuum term: no stable thickness")
    Y = params.effective_young(three_d)
    return (-H * Y**2 * params.surface_energy / (2.0 * math.pi * params.mismatch_stress**4)) ** 0.25


def hamaker_second_derivative(H: float, d: float) -> float:
    """Energy curvature of ``E = -H / (12 pi d^2)``."""
    return -H / (2.0 * math.pi * d**4)


def equivalent_hamaker(e2: float, d: float) -> float:
    """Hamaker constant reproducing curvature ``e2`` at thickness ``d``."""
    return -2.0 * math.pi * d**4 * e2


def effective_young_3d(young: float, poisson: float) -> float:
    return young / (1.0 - poisson**2)
