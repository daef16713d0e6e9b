"""Independent reference computations used by the tests.

Nothing here shares code with the package integrands: the retarded oracle
integrates literally over ``(p, xi)`` with the textbook reflection
coefficients, and the non-retarded oracle sums all reflections through the
trilogarithm.
"""

import math
import warnings

import mpmath
import numpy as np
from scipy import integrate

HBAR = 1.054571817e-34
C = 299792458.0


def ideal_casimir(d):
    """(energy, pressure, second derivative) between ideal mirrors at distance d."""
    e = -math.pi**2 * HBAR * C / (720.0 * d**3)
    return e, 3.0 * e / d, 12.0 * e / d**2


def _eps(m, xi):
    kind, om, tau = m
    if kind == "vac":
        return np.ones_like(xi)
    return 1.0 + om * om / (xi * (xi + tau))


def _deltas(layers, p, xi):
    """TM and TE interface products of the film against both neighbours."""
    e3 = _eps(layers["film"], xi)
    K3 = np.sqrt(p * p - 1.0 + e3)
    tm, te = np.ones_like(xi), np.ones_like(xi)
    for side in ("sub", "amb"):
        m = layers[side]
        if m[0] == "mirror":
            te = -te
            continue
        ei = _eps(m, xi)
        Ki = np.sqrt(p * p - 1.0 + ei)
        tm = tm * (ei * K3 - e3 * Ki) / (ei * K3 + e3 * Ki)
        te = te * (K3 - Ki) / (K3 + Ki)
    return tm, te, K3


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_PANELS = np.r_[0.0, np.geomspace(1e-7, 80.0, 60)]


def _xi_nodes(p, d):
    # x = 2 xi p d / c on composite Gauss-Legendre panels
    a, b = _PANELS[:-1, None], _PANELS[1:, None]
    x = (0.5 * (a + b) + 0.5 * (b - a) * _GL_X).ravel()
    w = (0.5 * (b - a) * _GL_W).ravel()
    scale = C / (2.0 * p * d)
    return x * scale, w * scale


def lifshitz_pxi(layers, d, what="pressure", rel=1e-10):
    """Lifshitz formula integrated literally over (p, xi).

    ``layers`` maps ``film``, ``sub``, ``amb`` to ``(kind, omega_p, omega_tau)``
    with kind in {"vac", "metal", "mirror"}.  The xi integral uses a fixed
    composite Gauss-Legendre rule, the p integral adaptive QUADPACK.
    """

    def inner(p):
        xi, w = _xi_nodes(p, d)
        tm, te, K3 = _deltas(layers, p, xi)
        a = 2.0 * xi * K3 / C
        e = np.exp(-a * d)
        if what == "energy":
            val = np.log1p(-tm * e) + np.log1p(-te * e)
        elif what == "pressure":
            val = a * (tm * e / (1 - tm * e) + te * e / (1 - te * e))
        else:
            val = a * a * (tm * e / (1 - tm * e) ** 2 + te * e / (1 - te * e) ** 2)
        return float(np.sum(w * xi * xi * val))

    def outer(u):
        if u == 0.0:
            return 0.0
        p = 1.0 / u          # dp = du / u^2
        return p * inner(p) / (u * u)

    pts = np.geomspace(1e-6, 1.0, 13)
    tot = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(np.r_[0.0, pts[:-1]], pts):
            tot += integrate.quad(outer, lo, hi, epsabs=0.0, epsrel=rel, limit=200)[0]
    pref = HBAR / (4.0 * math.pi**2 * C**2)
    return pref * tot if what == "energy" else -pref * tot


def nonretarded_pressure_li3(layers, d, dps=30):
    """Exact non-retarded pressure ``-hbar/(8 pi^2 d^3) int Li_3(D31 D32) dxi``."""
    mpmath.mp.dps = dps
    film = layers["film"]

    def delta(side, xi):
        m = layers[side]
        if m[0] == "mirror":
            return mpmath.mpf(-1)
        e3, ei = _eps_mp(film, xi), _eps_mp(m, xi)
        return (e3 - ei) / (e3 + ei)

    om = max(layers[k][1] for k in layers)

    def f(t):
        xi = om * t
        return mpmath.polylog(3, delta("sub", xi) * delta("amb", xi))

    val = om * mpmath.quad(f, [0, 0.1, 1, 10, mpmath.inf])
    return float(-HBAR * val / (8 * mpmath.pi**2 * d**3))


def _eps_mp(m, xi):
    kind, om, tau = m
    if kind == "vac":
        return mpmath.mpf(1)
    return 1 + mpmath.mpf(om) ** 2 / (xi * (xi + tau))
