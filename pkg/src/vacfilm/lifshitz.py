"""Retarded Lifshitz energy, pressure and energy curvature of a three-layer stack.

The energy per unit area at T = 0 is

    E(d) = hbar / (4 pi^2 c^2) * int_1^inf p dp int_0^inf xi^2 [ln Q_TM + ln Q_TE] dxi,
    Q = 1 - r exp(-2 xi K_3 d / c),   K_i = sqrt(p^2 - 1 + eps_i(i xi)).

Internally the integral is taken in the variables ``kappa = xi p / c`` (the
vacuum normal wavenumber) and ``v = 1 / p``.  Since ``dp p xi^2 dxi / c^2 =
kappa^2 dkappa dv / c`` the domain becomes ``kappa in [0, inf)``,
``v in (0, 1]`` and the film decay constant is ``gamma_3 = kappa * g_3`` with
``g_3 = sqrt(1 + v^2 (eps_3 - 1))``.  ``kappa`` is scaled by ``2 d`` and
``v = exp(-w)`` so that the low-frequency structure, which sits at
``v ~ 2 d Omega / c``, is resolved on a logarithmic axis.

d-derivatives are taken analytically under the integral sign; the only
thickness dependence is ``exp(-2 gamma_3 d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cubature import ConvergenceError, integrate_2d
from .physmodels import C, HBAR, DielectricModel, LayerStack

__all__ = [
    "QuadratureSpec", "IntegrandPoint", "VacuumQuantities", "Estimate", "ConvergenceError",
    "q_factors", "energy_per_area", "pressure", "energy_second_derivative", "vacuum_quantities",
]

# v = exp(-w) on w in [0, W_MAX]; the neglected strip v < exp(-W_MAX) weighs < 1e-32
W_MAX = 75.0
_PREFACTOR = HBAR * C / (4.0 * math.pi**2)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-20
    max_subdivisions: int = 4000
    xi_scale: float | None = None

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-2):
            raise ValueError(f"rel_tol must lie in (0, 1e-2), got {self.rel_tol}")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")
        if self.xi_scale is not None and not self.xi_scale > 0.0:
            raise ValueError("xi_scale must be > 0")


class Estimate(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class VacuumQuantities:
    energy_per_area: float           # J/m^2
    pressure: float                  # N/m^2, > 0 repulsive
    energy_second_derivative: float  # N/m^3
    energy_error: float
    pressure_error: float
    second_derivative_error: float


@dataclass(frozen=True)
class IntegrandPoint:
    p: float
    xi: float
    k: float
    K: tuple[float, float, float]      # (K_1, K_2, K_3); inf for a perfect reflector
    gamma: tuple[float, float, float]

    @classmethod
    def at(cls, stack: LayerStack, p: float, xi: float) -> IntegrandPoint:
        if p < 1.0 or xi <= 0.0:
            raise ValueError("need p >= 1 and xi > 0")
        Ks = []
        for m in (stack.substrate, stack.ambient, stack.film):
            Ks.append(math.inf if m.is_reflector else math.sqrt(p * p - 1.0 + m.epsilon(xi)))
        k = xi / C * math.sqrt(p * p - 1.0)
        return cls(p, xi, k, tuple(Ks), tuple(xi / C * K for K in Ks))


def _susceptibility(m: DielectricModel, xi, v, beta):
    """Return (eps - 1, v^2 (eps - 1)) with the second form free of overflow."""
    if m.is_vacuum_like:
        z = np.zeros_like(xi)
        return z, z
    denom = xi + m.omega_tau
    chi = m.omega_p**2 / (xi * denom)
    return chi, v * m.omega_p**2 / (beta * denom)


def _chi_difference(a: DielectricModel, b: DielectricModel, xi):
    """``eps_a - eps_b`` free of cancellation between nearly equal models."""
    if a.is_vacuum_like and b.is_vacuum_like:
        return np.zeros_like(xi)
    if b.is_vacuum_like:
        return a.omega_p**2 / (xi * (xi + a.omega_tau))
    if a.is_vacuum_like:
        return -(b.omega_p**2) / (xi * (xi + b.omega_tau))
    wa, wb = a.omega_tau, b.omega_tau
    dsq = (a.omega_p - b.omega_p) * (a.omega_p + b.omega_p)
    num = dsq * xi + (a.omega_p**2 * wb - b.omega_p**2 * wa)
    return num / (xi * (xi + wa) * (xi + wb))


def _reflection_products(stack: LayerStack, v, beta):
    """Reflection products r_TM, r_TE and the film factor g_3.

    ``v = 1/p`` and ``beta = c kappa`` (so ``xi = beta v``).  Interface
    fractions use cancellation-free forms; a perfect reflector contributes
    its exact limit +1 (TM) and -1 (TE).
    """
    xi = beta * v
    chi3, vchi3 = _susceptibility(stack.film, xi, v, beta)
    g3 = np.sqrt(1.0 + vchi3)
    y3 = 1.0 / (1.0 + chi3)
    v2 = v * v
    tms, tes = [], []
    for m in (stack.substrate, stack.ambient):
        if m.is_reflector:
            tms.append(1.0)
            tes.append(-1.0)
            continue
        chi, vchi = _susceptibility(m, xi, v, beta)
        g = np.sqrt(1.0 + vchi)
        y = 1.0 / (1.0 + chi)
        diff = _chi_difference(m, stack.film, xi)          # eps_i - eps_3
        tms.append(diff * y * y3 * ((y3 + y) * (1.0 - v2) + v2) / (g3 * y3 + g * y) ** 2)
        tes.append(-v2 * diff / (g3 + g) ** 2)
    return tms[0] * tms[1], tes[0] * tes[1], g3


def q_factors(stack: LayerStack, point: IntegrandPoint) -> tuple[float, float]:
    """Mode factors ``(Q_TM, Q_TE)`` at one ``(p, xi)`` point."""
    v = np.array(1.0 / point.p)
    beta = np.array(point.xi * point.p)
    r_tm, r_te, g3 = _reflection_products(stack, v, beta)
    x = 2.0 * point.xi * point.p * float(g3) * stack.thickness / C  # = 2 xi K_3 d / c
    e = math.exp(-x)
    return 1.0 - float(r_tm) * e, 1.0 - float(r_te) * e


def _make_integrand(stack: LayerStack, components: tuple[str, ...]):
    d = stack.thickness

    def f(t, s):
        kt = t / (1.0 - t)                       # 2 kappa d
        w = W_MAX * s
        v = np.exp(-w)
        jac = W_MAX * v / (1.0 - t) ** 2
        beta = C * kt / (2.0 * d)
        r_tm, r_te, g3 = _reflection_products(stack, v, beta)
        x = kt * g3
        em1 = np.expm1(-x)
        e = np.exp(-x)
        out = []
        terms = []
        for r in (r_tm, r_te):
            u = r * e
            den = (1.0 - r) - r * em1            # 1 - u without cancellation
            terms.append((u, den))
        for name in components:
            if name == "energy":
                acc = 0.0
                for u, den in terms:
                    big = np.abs(u) > 0.5
                    acc = acc + np.where(big, np.log(np.where(big, den, 1.0)), np.log1p(-np.where(big, 0.0, u)))
                out.append(kt**2 * acc * jac)
            elif name == "pressure":
                acc = sum(u / den for u, den in terms)
                out.append(kt**3 * g3 * acc * jac)
            elif name == "second_derivative":
                acc = sum(u / den**2 for u, den in terms)
                out.append(kt**4 * g3**2 * acc * jac)
        return np.array(out)

    return f


def _scales(d: float):
    # physical value = scale * dimensionless integral
    base = _PREFACTOR / (8.0 * d**3)
    return {"energy": base, "pressure": -base / d, "second_derivative": -base / d**2}


def _w_breaks(stack: LayerStack, quad: QuadratureSpec):
    d = stack.thickness
    breaks = set(np.arange(0.0, W_MAX + 1e-9, 5.0).tolist())
    freqs = []
    for m in (stack.substrate, stack.ambient, stack.film):
        if m.omega_p > 0:
            freqs += [m.omega_p, m.omega_p / math.sqrt(2.0)]
        if m.omega_tau > 0:
            freqs.append(m.omega_tau)
    if quad.xi_scale:
        freqs.append(quad.xi_scale)
    for om in freqs:
        w = math.log(C / (2.0 * d * om))        # v where xi = om at kappa = 1/(2d)
        if 0.5 < w < W_MAX - 0.5:
            breaks.add(round(w, 6))
    return np.array(sorted(breaks)) / W_MAX


_T_BREAKS = np.array([0.0, 0.25, 0.5, 0.7, 0.85, 0.95, 1.0])


def _integrate(stack: LayerStack, quad: QuadratureSpec, components: tuple[str, ...]):
    scales = _scales(stack.thickness)
    sc = np.array([abs(scales[c]) for c in components])
    abs_tol = quad.abs_tol / sc
    try:
        res = integrate_2d(_make_integrand(stack, components), _T_BREAKS, _w_breaks(stack, quad),
                           rel_tol=quad.rel_tol, abs_tol=abs_tol, max_rects=quad.max_subdivisions)
    except ConvergenceError as exc:
        signs = np.array([np.sign(scales[c]) for c in components])
        raise ConvergenceError(str(exc), exc.value * sc * signs, exc.error * sc) from None
    vals = [float(scales[c] * v) for c, v in zip(components, res.value)]
    errs = [float(abs(scales[c]) * e) for c, e in zip(components, res.error)]
    return vals, errs


def energy_per_area(stack: LayerStack, quad: QuadratureSpec = QuadratureSpec()) -> Estimate:
    (v,), (e,) = _integrate(stack, quad, ("energy",))
    return Estimate(v, e)


def pressure(stack: LayerStack, quad: QuadratureSpec = QuadratureSpec()) -> Estimate:
    """Force per unit area ``-dE/dd``; positive pushes the film boundaries apart."""
    (v,), (e,) = _integrate(stack, quad, ("pressure",))
    return Estimate(v, e)


def energy_second_derivative(stack: LayerStack, quad: QuadratureSpec = QuadratureSpec()) -> Estimate:
    (v,), (e,) = _integrate(stack, quad, ("second_derivative",))
    return Estimate(v, e)


def vacuum_quantities(stack: LayerStack, quad: QuadratureSpec = QuadratureSpec()) -> VacuumQuantities:
    vals, errs = _integrate(stack, quad, ("energy", "pressure", "second_derivative"))
    return VacuumQuantities(*vals, *errs)
