"""Flat-film stability: vacuum energy curvature against the elastic threshold.

A strained flat film is stable against every small cosine perturbation when
``d^2E/dd^2 > sigma^4 / (Y^2 gamma)``.  The helpers here evaluate that
comparison, locate critical thicknesses, and trace stability-diagram
boundaries in the (Omega_3, Omega_1) plane.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import lifshitz, smalld
from .elastic import FilmElasticParams
from .lifshitz import QuadratureSpec
from .physmodels import DielectricModel, LayerStack

log = logging.getLogger(__name__)


class Method(str, Enum):
    FULL_RETARDED = "full_retarded"
    SMALL_D = "small_d"


@dataclass(frozen=True)
class StabilityResult:
    threshold: float
    second_derivative: float
    stable: bool
    method: Method
    critical_thickness: float | None = None
    bracket: tuple[float, float] | None = None
    reason: str = ""


@dataclass
class DiagramCurve:
    d: float
    omega_tau_film: float
    omega_tau_substrate: float
    method: Method
    lower: list[tuple[float, float]] = field(default_factory=list)   # unstable -> stable with rising Omega_1
    upper: list[tuple[float, float]] = field(default_factory=list)   # stable -> unstable
    missing: list[float] = field(default_factory=list)               # Omega_3 samples with no boundary

    @property
    def points(self) -> list[tuple[float, float]]:
        return sorted(self.lower + self.upper)


def stability_threshold(params: FilmElasticParams, three_d: bool = False) -> float:
    Y = params.effective_young(three_d)
    return params.mismatch_stress**4 / (Y**2 * params.surface_energy)


def second_derivative(stack: LayerStack, method: Method = Method.FULL_RETARDED,
                      quad: QuadratureSpec = QuadratureSpec()) -> float:
    if Method(method) is Method.SMALL_D:
        return smalld.small_d_second_derivative(stack)
    return lifshitz.energy_second_derivative(stack, quad).value


def is_stable(stack: LayerStack, params: FilmElasticParams, method: Method = Method.FULL_RETARDED,
              quad: QuadratureSpec = QuadratureSpec(), three_d: bool = False) -> StabilityResult:
    thr = stability_threshold(params, three_d)
    e2 = second_derivative(stack, method, quad)
    if e2 <= 0.0:
        return StabilityResult(thr, e2, False, Method(method), reason="attractive vacuum force")
    stable = e2 > thr
    return StabilityResult(thr, e2, stable, Method(method),
                           reason="" if stable else "vacuum curvature below elastic threshold")


def _bisect_log(h, lo, hi, h_lo, h_hi, rtol=1e-12):
    # root of h on a log axis; h_lo and h_hi must differ in sign
    if h_lo == 0.0:
        return lo
    if h_hi == 0.0:
        return hi
    s = brentq(lambda y: h(math.exp(y)), math.log(lo), math.log(hi), xtol=1e-14, rtol=rtol)
    return math.exp(s)


def find_critical_thickness(stack: LayerStack, params: FilmElasticParams,
                            method: Method = Method.FULL_RETARDED,
                            quad: QuadratureSpec = QuadratureSpec(),
                            d_range: tuple[float, float] = (1e-10, 1e-6),
                            three_d: bool = False, n_grid: int = 64) -> StabilityResult:
    """Largest thickness at which the curvature equals the threshold.

    ``stack.thickness`` is ignored; ``d`` is scanned on a log grid over
    ``d_range`` and the last stable-to-unstable crossing is refined.  The
    result is evaluated at the critical thickness (``critical_thickness``
    is ``None`` when no such crossing exists inside the range).
    """
    d_lo, d_hi = d_range
    if not 0.0 < d_lo < d_hi:
        raise ValueError("d_range must satisfy 0 < d_lo < d_hi")
    thr = stability_threshold(params, three_d)
    method = Method(method)

    def h(d):
        return second_derivative(stack.with_thickness(d), method, quad) - thr

    ds = np.geomspace(d_lo, d_hi, n_grid)
    hs = np.array([h(d) for d in ds])
    crossing = None
    for i in range(n_grid - 2, -1, -1):
        if hs[i] >= 0.0 and hs[i + 1] < 0.0:
            crossing = i
            break
    if crossing is None:
        top = hs[-1] + thr
        reason = "stable over the whole range" if hs[-1] >= 0 else "curvature below threshold over the whole range"
        return StabilityResult(thr, top, hs[-1] > 0, method, None, None, reason)
    a, b = ds[crossing], ds[crossing + 1]
    dc = _bisect_log(h, a, b, hs[crossing], hs[crossing + 1])
    return StabilityResult(thr, h(dc) + thr, False, method, dc, (a, b), "critical thickness")


def critical_thickness(stack: LayerStack, params: FilmElasticParams,
                       method: Method = Method.FULL_RETARDED,
                       quad: QuadratureSpec = QuadratureSpec(),
                       d_range: tuple[float, float] = (1e-10, 1e-6),
                       three_d: bool = False) -> float | None:
    return find_critical_thickness(stack, params, method, quad, d_range, three_d).critical_thickness


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _two_metal_stack(omega3, omega1, d, tau3, tau1):
    return LayerStack.on_substrate(DielectricModel.drude(omega3, tau3),
                                   DielectricModel.drude(omega1, tau1), d)


def boundary_roots(omega3: float, omega1_range: tuple[float, float], d: float,
                   params: FilmElasticParams, omega_tau_film: float = 0.0,
                   omega_tau_substrate: float = 0.0, method: Method = Method.SMALL_D,
                   quad: QuadratureSpec = QuadratureSpec(), n_grid: int = 64,
                   three_d: bool = False) -> list[tuple[float, str]]:
    """Roots of ``E''(Omega_1) = threshold`` at fixed ``Omega_3``, tagged lower/upper."""
    thr = stability_threshold(params, three_d)

    def h(om1):
        return second_derivative(_two_metal_stack(omega3, om1, d, omega_tau_film, omega_tau_substrate),
                                 method, quad) - thr

    grid = np.geomspace(*omega1_range, n_grid)
    hs = np.array([h(o) for o in grid])
    roots = []
    for i in range(n_grid - 1):
        if (hs[i] < 0.0) != (hs[i + 1] < 0.0):
            try:
                r = _bisect_log(h, grid[i], grid[i + 1], hs[i], hs[i + 1])
            except (ValueError, RuntimeError) as exc:
                log.warning("boundary solve failed at Omega_3=%g: %s", omega3, exc)
                continue
            roots.append((r, "lower" if hs[i] < 0.0 else "upper"))
    return roots


def stability_boundary(omega3_values, omega1_range: tuple[float, float], d: float,
                       params: FilmElasticParams, omega_tau_film: float = 0.0,
                       omega_tau_substrate: float = 0.0, method: Method = Method.SMALL_D,
                       quad: QuadratureSpec = QuadratureSpec(), n_grid: int = 64,
                       three_d: bool = False, threads: int = 1) -> DiagramCurve:
    """Stability-diagram boundary for Drude film on Drude substrate at thickness ``d``."""
    method = Method(method)
    curve = DiagramCurve(d, omega_tau_film, omega_tau_substrate, method)

    def solve(om3):
        return boundary_roots(om3, omega1_range, d, params, omega_tau_film, omega_tau_substrate,
                              method, quad, n_grid, three_d)

    omega3_values = [float(o) for o in omega3_values]
    for om3, roots in zip(omega3_values, _pool_map(solve, omega3_values, threads)):
        if not roots:
            curve.missing.append(om3)
        for om1, branch in roots:
            (curve.lower if branch == "lower" else curve.upper).append((om3, om1))
    return curve


def critical_thickness_curve(omega3_values, substrate: DielectricModel, params: FilmElasticParams,
                             omega_tau_film: float = 0.0, method: Method = Method.SMALL_D,
                             quad: QuadratureSpec = QuadratureSpec(),
                             d_range: tuple[float, float] = (1e-10, 1e-6),
                             three_d: bool = False, threads: int = 1) -> list[tuple[float, StabilityResult]]:
    """Critical thickness against film plasma frequency over a fixed substrate."""

    def solve(om3):
        stack = LayerStack.on_substrate(DielectricModel.drude(om3, omega_tau_film), substrate, d_range[0])
        return find_critical_thickness(stack, params, method, quad, d_range, three_d)

    omega3_values = [float(o) for o in omega3_values]
    return list(zip(omega3_values, _pool_map(solve, omega3_values, threads)))
