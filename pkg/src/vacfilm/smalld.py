"""Non-retarded (van der Waals, small thickness) limits of the film force.

For ``d`` well below the plasma and relaxation wavelengths only TM modes
contribute and the force keeps its leading reflection term,

    F = -hbar / (8 pi^2 d^3) * int_0^inf Delta_31 Delta_32 dxi,
    Delta_3i = (eps_3 - eps_i) / (eps_3 + eps_i),

so every result here scales exactly as ``d**-3``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cubature import ConvergenceError
from .physmodels import HBAR, DielectricModel, DomainError, Kind, LayerStack

SQRT2 = math.sqrt(2.0)
# d < min(lambda_p, lambda_tau) / VALIDITY_RATIO flags the closed forms as applicable
VALIDITY_RATIO = 20.0


@dataclass(frozen=True)
class SmallDResult:
    pressure: float
    valid: bool
    x: float          # omega_tau / Omega_3


@dataclass(frozen=True)
class DerivedFrequencies:
    omega_s: float
    omega_bar: float


def derived_frequencies(omega3: float, omega1: float) -> DerivedFrequencies:
    return DerivedFrequencies(omega3 / SQRT2, math.sqrt(0.5 * (omega1**2 + omega3**2)))


def _quad_0_inf(f, rel_tol=1e-10):
    """int_0^inf f(t) dt for an O(1)-scaled integrand."""
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in ((0.0, 1.0), (1.0, np.inf)):
            val, e = integrate.quad(f, a, b, epsabs=0.0, epsrel=rel_tol * 0.1, limit=500)
            total += val
            err += e
    if err > rel_tol * abs(total) and err > 1e-300:
        raise ConvergenceError(f"quadrature error {err:.3g} exceeds tolerance", total, err)
    return total


def _drude_kernel_integral(x: float) -> float:
    # int_0^inf dt / (2 t (t + x) + 1)^2, the free-standing kernel with Omega_3 scaled out
    return _quad_0_inf(lambda t: 1.0 / (2.0 * t * (t + x) + 1.0) ** 2)


def _require_metal(film: DielectricModel):
    if film.kind not in (Kind.PLASMA, Kind.DRUDE):
        raise DomainError(f"film must be a plasma or Drude metal, got {film.kind.value}")


def vdw_force_free_standing_integral(film: DielectricModel, d: float) -> float:
    """Small-d force on a free-standing film by 1-D quadrature (N/m^2, <= 0)."""
    _require_metal(film)
    if d <= 0:
        raise DomainError("d must be > 0")
    if film.omega_p == 0.0:
        return 0.0
    x = film.omega_tau / film.omega_p
    return -HBAR * film.omega_p * _drude_kernel_integral(x) / (8.0 * math.pi**2 * d**3)


def fp1(omega3: float, d: float) -> float:
    """Plasma-model small-d force on a free-standing film, ``-hbar Omega_s / (32 pi d^3)``."""
    return -HBAR * omega3 / (SQRT2 * 32.0 * math.pi * d**3)


def fp2(omega3: float, d: float) -> float:
    """Plasma-model small-d force on a film over a perfect reflector, ``-2 fp1``."""
    return -2.0 * fp1(omega3, d)


def g_factor(x: float) -> float:
    """Relaxation correction ``F / F_P1`` for a free-standing Drude film, ``x = omega_tau / Omega_3``.

    Defined by the small-d integral itself, so ``g(0) == 1``.
    """
    if x < 0:
        raise DomainError("x must be >= 0")
    if x == 0.0:
        return 1.0
    return 4.0 * SQRT2 / math.pi * _drude_kernel_integral(x)


def g_factor_closed(x: float) -> float:
    """The printed closed form for g, evaluated verbatim on ``0 <= x < 1``.

    Kept for comparison with :func:`g_factor`.  Its ``x -> 0`` limit is
    ``sqrt(2)/2`` rather than 1 and it grows without bound as ``x -> 1``.
    """
    if not 0.0 <= x < 1.0:
        raise DomainError("closed-form g is defined for 0 <= x < 1 only")
    if x == 0.0:
        return SQRT2 / 2.0
    one_m = 1.0 - x * x
    first = (2.0 * one_m - 2.0) / (x * one_m)
    second = (math.atan(x / math.sqrt(2.0 - x * x)) - math.pi / 2.0) / one_m**1.5
    return SQRT2 / math.pi * (first - second)


def f_factor(x: float) -> float:
    """Relaxation correction ``F / F_P2`` for a Drude film on a perfect reflector."""
    if not 0.0 <= x < SQRT2:
        raise DomainError("f(x) requires 0 <= x < sqrt(2)")
    root = math.sqrt(2.0 - x * x)
    return (1.0 - 2.0 / math.pi * math.atan(x / root)) / math.sqrt(1.0 - 0.5 * x * x)


def vdw_force_perfect_reflector(omega3: float, omega_tau: float, d: float) -> float:
    if omega3 == 0.0:
        return 0.0
    return fp2(omega3, d) * f_factor(omega_tau / omega3)


def vdw_second_derivative_perfect_reflector(omega3: float, omega_tau: float, d: float) -> float:
    """``d^2 E / d d^2 = 3 sqrt(2) hbar Omega_3 f(x) / (32 pi d^4)``."""
    if omega3 == 0.0:
        return 0.0
    return 3.0 * SQRT2 * HBAR * omega3 / (32.0 * math.pi * d**4) * f_factor(omega_tau / omega3)


def _check_substrate_args(omega3, omega1, omega_tau):
    if omega1 <= 0.0:
        raise DomainError("substrate plasma frequency must be > 0 (use the free-standing form)")
    fr = derived_frequencies(omega3, omega1)
    rad_bar = 4.0 * fr.omega_bar**2 - omega_tau**2
    rad_s = 4.0 * fr.omega_s**2 - omega_tau**2
    if rad_s <= 0.0:
        raise DomainError("radical sqrt(4 Omega_s^2 - omega_tau^2) is not real")
    if rad_bar <= 0.0:
        raise DomainError("radical sqrt(4 Omega_bar^2 - omega_tau^2) is not real")
    return fr, rad_bar, rad_s


def vdw_force_drude_substrate_literal(omega3: float, omega1: float, omega_tau: float, d: float) -> float:
    """The closed form exactly as written; loses digits when ``omega1 << omega3``."""
    if omega3 == 0.0:
        return 0.0
    fr, rad_bar, rad_s = _check_substrate_args(omega3, omega1, omega_tau)

    def term(rad):
        root = math.sqrt(rad)
        return (math.pi / 2.0 - math.atan(omega_tau / root)) / root

    pref = HBAR / (16.0 * math.pi**2 * d**3)
    ratio = omega3**2 * (omega1**2 - omega3**2) / (fr.omega_s**2 - fr.omega_bar**2)
    return pref * ratio * (term(rad_bar) - term(rad_s))


def vdw_force_drude_substrate(omega3: float, omega1: float, omega_tau: float, d: float) -> float:
    """Closed-form small-d force for Drude film and substrate sharing ``omega_tau``.

    Repulsive (positive) iff ``omega3 < omega1``.  The difference of the two
    radical terms and the ``Omega_s^2 - Omega_bar^2 = -Omega_1^2 / 2``
    denominator are cancelled analytically.
    """
    if omega3 == 0.0:
        return 0.0
    _, rad_bar, rad_s = _check_substrate_args(omega3, omega1, omega_tau)
    rb, rs = math.sqrt(rad_bar), math.sqrt(rad_s)
    S = rb + rs
    P = rb * rs + omega_tau**2
    z = 2.0 * omega_tau * omega1**2 / (S * P)
    atanc = math.atan(z) / z if z > 1e-8 else 1.0 - z * z / 3.0
    a_bar = math.atan(omega_tau / rb)
    bracket = (math.pi / 2.0 - a_bar) / (S * rb * rs) - omega_tau * atanc / (S * P * rs)
    pref = HBAR / (16.0 * math.pi**2 * d**3)
    return pref * 4.0 * omega3**2 * (omega1 - omega3) * (omega1 + omega3) * bracket


def _delta(film: DielectricModel, other: DielectricModel, t, scale):
    if other.is_reflector:
        return -1.0
    xi = scale * t
    chi3 = 0.0 if film.is_vacuum_like else film.omega_p**2 / (xi * (xi + film.omega_tau))
    chi = 0.0 if other.is_vacuum_like else other.omega_p**2 / (xi * (xi + other.omega_tau))
    return (chi3 - chi) / (2.0 + chi3 + chi)


def vdw_force_three_layer_integral(stack: LayerStack) -> float:
    """Small-d force ``-hbar/(8 pi^2 d^3) int Delta_31 Delta_32 dxi`` for dissimilar boundaries."""
    layers = (stack.substrate, stack.ambient, stack.film)
    scale = max(m.omega_p for m in layers)
    if scale == 0.0:
        return 0.0

    def f(t):
        return _delta(stack.film, stack.substrate, t, scale) * _delta(stack.film, stack.ambient, t, scale)

    integral = scale * _quad_0_inf(f)
    return -HBAR * integral / (8.0 * math.pi**2 * stack.thickness**3)


def is_valid(film: DielectricModel, d: float) -> bool:
    return d < min(film.plasma_wavelength, film.relaxation_wavelength) / VALIDITY_RATIO


def small_d_pressure(stack: LayerStack) -> SmallDResult:
    """Small-d force for any stack, preferring the closed forms where they apply."""
    film, sub, amb, d = stack.film, stack.substrate, stack.ambient, stack.thickness
    om3 = film.omega_p
    x = film.omega_tau / om3 if om3 > 0 else 0.0
    metal = film.kind in (Kind.PLASMA, Kind.DRUDE)
    if metal and amb.kind is Kind.VACUUM and sub.kind is Kind.VACUUM:
        F = vdw_force_free_standing_integral(film, d)
    elif metal and amb.kind is Kind.VACUUM and sub.is_reflector and x < SQRT2:
        F = vdw_force_perfect_reflector(om3, film.omega_tau, d)
    elif (metal and amb.kind is Kind.VACUUM and sub.kind in (Kind.PLASMA, Kind.DRUDE)
          and sub.omega_p > 0 and sub.omega_tau == film.omega_tau
          and film.omega_tau < SQRT2 * om3):
        F = vdw_force_drude_substrate(om3, sub.omega_p, film.omega_tau, d)
    else:
        F = vdw_force_three_layer_integral(stack)
    return SmallDResult(F, is_valid(film, d), x)


def small_d_second_derivative(stack: LayerStack) -> float:
    """``d^2 E / d d^2 = 3 F / d``, exact for a ``d**-3`` force."""
    return 3.0 * small_d_pressure(stack).pressure / stack.thickness
