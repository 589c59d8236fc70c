"""Floating-point quadrature rules for cells and edges.

Element matrices are integrated exactly elsewhere; these rules only touch
the trigonometric load, error norms, and interpolation of non-polynomial
fields.  Rectangles use tensor Gauss-Legendre; triangles use the collapsed
(Duffy) tensor rule, which needs no tabulated constants and inherits the 1D
accuracy.
"""

from __future__ import annotations

import numpy as np

from .polycore import CellGeometry


def gauss01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1.0) / 2.0, w / 2.0


def rect_rule(cell: CellGeometry, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor rule on an axis-aligned rectangle: points (n*n, 2), weights."""
    xl, xr, yd, yu = (float(v) for v in cell.bbox())
    t, w = gauss01(n)
    X = xl + (xr - xl) * t
    Y = yd + (yu - yd) * t
    pts = np.stack(
        [np.repeat(X, n), np.tile(Y, n)],
        axis=1,
    )
    wts = np.outer(w * (xr - xl), w * (yu - yd)).reshape(-1)
    return pts, wts


def triangle_rule(cell: CellGeometry, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed tensor rule on a triangle."""
    (x1, y1), (x2, y2), (x3, y3) = ((float(a), float(b)) for a, b in cell.vertices)
    t, w = gauss01(n)
    xi = np.repeat(t, n)
    eta = np.tile(t, n)
    wts = np.repeat(w, n) * np.tile(w, n)
    s = xi
    u = eta * (1.0 - xi)
    jac = 1.0 - xi
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    X = x1 + s * (x2 - x1) + u * (x3 - x1)
    Y = y1 + s * (y2 - y1) + u * (y3 - y1)
    return np.stack([X, Y], axis=1), wts * jac * abs(det)


def cell_rule(cell: CellGeometry, n: int) -> tuple[np.ndarray, np.ndarray]:
    if cell.shape == "rectangle":
        return rect_rule(cell, n)
    return triangle_rule(cell, n)
