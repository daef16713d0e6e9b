"""Adaptive tensor-product Gauss-Kronrod cubature on rectangles.

Vector-valued integrands are supported: ``f(x, y)`` receives flat node
arrays and returns an array of shape ``(ncomp, npts)``.  The global
adaptive loop bisects the rectangles with the largest scaled error along
the axis whose Gauss/Kronrod difference dominates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# QUADPACK qk15 abscissae / weights (positive half, centre last)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])            # 15 nodes on [-1, 1]
KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS = np.zeros(15)
GAUSS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])        # G7 lives on odd slots


class ConvergenceError(RuntimeError):
    """Adaptive integration exhausted its budget before meeting tolerance."""

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass
class CubatureResult:
    value: np.ndarray
    error: np.ndarray
    nrects: int
    converged: bool


def _rules(rects: np.ndarray, f):
    """Evaluate KK, GK, KG, GG products on ``rects`` (k, 4) = (x0, x1, y0, y1)."""
    x0, x1, y0, y1 = rects.T
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    xs = (0.5 * (x0 + x1))[:, None] + hx[:, None] * NODES[None, :]          # (k, 15)
    ys = (0.5 * (y0 + y1))[:, None] + hy[:, None] * NODES[None, :]
    X = np.broadcast_to(xs[:, :, None], (len(rects), 15, 15))
    Y = np.broadcast_to(ys[:, None, :], (len(rects), 15, 15))
    vals = np.asarray(f(X.reshape(-1), Y.reshape(-1)))
    ncomp = vals.shape[0]
    vals = vals.reshape(ncomp, len(rects), 15, 15) * (hx * hy)[None, :, None, None]
    kk = np.einsum("ckij,i,j->ck", vals, KRONROD, KRONROD)
    gk = np.einsum("ckij,i,j->ck", vals, GAUSS, KRONROD)
    kg = np.einsum("ckij,i,j->ck", vals, KRONROD, GAUSS)
    gg = np.einsum("ckij,i,j->ck", vals, GAUSS, GAUSS)
    return kk, np.abs(kk - gg), np.abs(kk - gk), np.abs(kk - kg)


def integrate_2d(f, x_breaks, y_breaks, rel_tol=1e-8, abs_tol=0.0, max_rects=2000,
                 batch=32, raise_on_failure=True) -> CubatureResult:
    """Integrate ``f`` over the grid of rectangles spanned by the breakpoints.

    ``abs_tol`` may be a scalar or one value per component.  Convergence
    requires every component to satisfy ``err <= max(abs_tol, rel_tol*|I|)``.
    """
    xb = np.asarray(x_breaks, dtype=float)
    yb = np.asarray(y_breaks, dtype=float)
    rects = np.array([(xb[i], xb[i + 1], yb[j], yb[j + 1])
                      for i in range(len(xb) - 1) for j in range(len(yb) - 1)])
    val, err, ex, ey = _rules(rects, f)
    ncomp = val.shape[0]
    abs_tol = np.broadcast_to(np.asarray(abs_tol, dtype=float), (ncomp,))

    while True:
        total = val.sum(axis=1)
        total_err = err.sum(axis=1)
        tol = np.maximum(abs_tol, rel_tol * np.abs(total))
        if np.all(total_err <= tol):
            return CubatureResult(total, total_err, len(rects), True)
        if len(rects) + batch > max_rects:
            break
        scale = np.where(tol > 0, tol, np.finfo(float).tiny)
        scaled = err / scale[:, None]
        worst = np.argmax(scaled, axis=0)
        score = scaled[worst, np.arange(len(rects))]
        order = np.argsort(-score, kind="stable")
        k = max(1, min(batch, int(np.count_nonzero(score >= score[order[0]] / 16.0))))
        chosen = order[:k]
        cols = np.arange(len(rects))
        split_x = ex[worst, cols] >= ey[worst, cols]

        x0, x1, y0, y1 = rects[chosen].T
        xm = 0.5 * (x0 + x1)
        ym = 0.5 * (y0 + y1)
        sx = split_x[chosen]
        # bisect along the axis whose Gauss/Kronrod gap dominates
        first = np.where(sx[:, None], np.stack([x0, xm, y0, y1], 1), np.stack([x0, x1, y0, ym], 1))
        second = np.where(sx[:, None], np.stack([xm, x1, y0, y1], 1), np.stack([x0, x1, ym, y1], 1))
        children = np.concatenate([first, second])
        cv, ce, cex, cey = _rules(children, f)

        keep = np.ones(len(rects), dtype=bool)
        keep[chosen] = False
        rects = np.concatenate([rects[keep], children])
        val = np.concatenate([val[:, keep], cv], axis=1)
        err = np.concatenate([err[:, keep], ce], axis=1)
        ex = np.concatenate([ex[:, keep], cex], axis=1)
        ey = np.concatenate([ey[:, keep], cey], axis=1)

    result = CubatureResult(total, total_err, len(rects), False)
    if raise_on_failure:
        raise ConvergenceError(
            f"cubature did not converge within {max_rects} rectangles "
            f"(error {total_err} vs tolerance {tol})", total, total_err)
    return result
