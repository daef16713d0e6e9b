"""Physical constants and dielectric response on the imaginary frequency axis.

All quantities are SI: frequencies in rad/s, lengths in m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# CODATA 2018 (exact for c, rounded-exact for hbar)
HBAR = 1.054571817e-34
C = 299792458.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    c: float = C


CONSTANTS = PhysicalConstants()


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class UsageError(TypeError):
    """Operation not meaningful for the given model variant."""


class Kind(str, Enum):
    VACUUM = "vacuum"
    PLASMA = "plasma"
    DRUDE = "drude"
    PERFECT_REFLECTOR = "perfect_reflector"


@dataclass(frozen=True)
class DielectricModel:
    """Permittivity model evaluated at imaginary frequency.

    Use the constructors :meth:`vacuum`, :meth:`plasma`, :meth:`drude` and
    :meth:`perfect_reflector` rather than building instances by hand.
    """

    kind: Kind
    omega_p: float = 0.0
    omega_tau: float = 0.0

    def __post_init__(self):
        if not (self.omega_p >= 0.0 and math.isfinite(self.omega_p)):
            raise DomainError(f"omega_p must be finite and >= 0, got {self.omega_p}")
        if not (self.omega_tau >= 0.0 and math.isfinite(self.omega_tau)):
            raise DomainError(f"omega_tau must be finite and >= 0, got {self.omega_tau}")
        if self.kind in (Kind.VACUUM, Kind.PERFECT_REFLECTOR) and (self.omega_p or self.omega_tau):
            raise DomainError(f"{self.kind.value} takes no frequencies")
        if self.kind is Kind.PLASMA and self.omega_tau:
            raise DomainError("plasma model has no relaxation frequency; use drude")

    @classmethod
    def vacuum(cls) -> DielectricModel:
        return cls(Kind.VACUUM)

    @classmethod
    def plasma(cls, omega_p: float) -> DielectricModel:
        return cls(Kind.PLASMA, float(omega_p))

    @classmethod
    def drude(cls, omega_p: float, omega_tau: float = 0.0) -> DielectricModel:
        return cls(Kind.DRUDE, float(omega_p), float(omega_tau))

    @classmethod
    def perfect_reflector(cls) -> DielectricModel:
        return cls(Kind.PERFECT_REFLECTOR)

    @property
    def is_reflector(self) -> bool:
        return self.kind is Kind.PERFECT_REFLECTOR

    @property
    def is_vacuum_like(self) -> bool:
        """True when eps(i xi) == 1 identically."""
        return self.kind is Kind.VACUUM or (
            self.kind in (Kind.PLASMA, Kind.DRUDE) and self.omega_p == 0.0
        )

    @property
    def plasma_wavelength(self) -> float:
        return 2.0 * math.pi * C / self.omega_p if self.omega_p > 0 else math.inf

    @property
    def relaxation_wavelength(self) -> float:
        return 2.0 * math.pi * C / self.omega_tau if self.omega_tau > 0 else math.inf

    def epsilon(self, xi):
        return eval_epsilon(self, xi)


def eval_epsilon(model: DielectricModel, xi):
    """Permittivity eps(i xi) for ``xi > 0`` (scalar or array).

    Drude: ``1 + omega_p**2 / (xi * (xi + omega_tau))``; plasma is the
    ``omega_tau = 0`` case.  A perfect reflector has no finite value and
    raises :class:`UsageError`.
    """
    if model.kind is Kind.PERFECT_REFLECTOR:
        raise UsageError("perfect reflector has no numeric permittivity; use the reflection limit")
    xi_arr = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(xi_arr)) or np.any(xi_arr <= 0.0):
        raise DomainError("xi must be finite and > 0")
    if model.kind is Kind.VACUUM:
        out = np.ones_like(xi_arr)
    else:
        out = 1.0 + model.omega_p**2 / (xi_arr * (xi_arr + model.omega_tau))
    return float(out) if out.ndim == 0 else out


def _eps_unchecked(model: DielectricModel, xi: np.ndarray) -> np.ndarray:
    # hot path for the integrands: xi > 0 guaranteed by the caller
    if model.kind is Kind.VACUUM or model.omega_p == 0.0:
        return np.ones_like(xi)
    return 1.0 + model.omega_p**2 / (xi * (xi + model.omega_tau))


@dataclass(frozen=True)
class LayerStack:
    """Substrate (1) | film (3) of thickness ``d`` | ambient (2)."""

    substrate: DielectricModel
    ambient: DielectricModel
    film: DielectricModel
    thickness: float

    def __post_init__(self):
        if not (self.thickness > 0.0 and math.isfinite(self.thickness)):
            raise DomainError(f"thickness must be finite and > 0, got {self.thickness}")
        if self.film.is_reflector:
            raise DomainError("the film cannot be a perfect reflector")

    def with_thickness(self, d: float) -> LayerStack:
        return LayerStack(self.substrate, self.ambient, self.film, d)

    @classmethod
    def free_standing(cls, film: DielectricModel, d: float) -> LayerStack:
        return cls(DielectricModel.vacuum(), DielectricModel.vacuum(), film, d)

    @classmethod
    def on_substrate(cls, film: DielectricModel, substrate: DielectricModel, d: float) -> LayerStack:
        return cls(substrate, DielectricModel.vacuum(), film, d)

    def frequency_scale(self) -> float:
        """Largest plasma frequency in the stack, or c/d, whichever is larger."""
        omegas = [m.omega_p for m in (self.substrate, self.ambient, self.film)]
        return max(max(omegas), C / self.thickness)
