"""Local shape-function spaces on a concrete cell.

Spaces are built as explicit spanning sets of polynomials / vector fields in
the cell's *local frame* (coordinates relative to a fixed origin).  The
curl null-homotopy operator is origin-dependent, so the frame pins it down:
the origin is the cell barycenter, except on the two classical reference
cells (unit triangle, square (-1,1)^2) where the global origin is used so
that the closed-form low-order formulas come out verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .linalg import SingularMatrixError, rank, solve
from .polycore import (
    CellGeometry,
    Point,
    Polynomial,
    VectorField,
    barycentric_coordinates,
    curl_vec,
    grad,
    p1d_add,
    p1d_antiderivative,
    p1d_eval,
    p1d_integral01,
    p1d_scale,
    p1d_trim,
    poincare,
    pt,
)

_REFERENCE_TRI_VERTS = {pt(0, 0), pt(1, 0), pt(0, 1)}


@dataclass(frozen=True)
class LocalFrame:
    """A cell together with the base point of the null-homotopy operator.

    All polynomials built on this frame are expressed in xi = x - origin.
    """

    cell: CellGeometry
    origin: Point

    @staticmethod
    def for_cell(cell: CellGeometry) -> "LocalFrame":
        if cell.shape == "triangle" and set(cell.vertices) == _REFERENCE_TRI_VERTS:
            return LocalFrame(cell, pt(0, 0))
        return LocalFrame(cell, cell.barycenter())

    @property
    def local_vertices(self) -> tuple[Point, ...]:
        ox, oy = self.origin
        return tuple((v[0] - ox, v[1] - oy) for v in self.cell.vertices)

    def local_cell(self) -> CellGeometry:
        return CellGeometry(self.cell.shape, self.local_vertices)

    def to_local(self, p: Point) -> Point:
        return (p[0] - self.origin[0], p[1] - self.origin[1])

    def edge_endpoints_local(self, i: int) -> tuple[Point, Point]:
        a, b = self.cell.edge_endpoints(i)
        return self.to_local(a), self.to_local(b)


# ---------------------------------------------------------------------------
# monomial index sets


def p_exponents(r: int) -> list[tuple[int, int]]:
    """Exponent pairs of the total-degree space P_r, constant first."""
    return [(a, d - a) for d in range(r + 1) for a in range(d, -1, -1)]


def q_exponents(r: int) -> list[tuple[int, int]]:
    """Exponent pairs of the tensor space Q_r, constant first."""
    return [(a, b) for b in range(r + 1) for a in range(r + 1)]


def homogeneous_exponents(j: int) -> list[tuple[int, int]]:
    return [(a, j - a) for a in range(j, -1, -1)]


def space_exponents(shape: str, r: int) -> list[tuple[int, int]]:
    return p_exponents(r) if shape == "triangle" else q_exponents(r)


# ---------------------------------------------------------------------------
# spanning-set container


@dataclass
class SpaceBasis:
    """Ordered spanning set with verified exact linear independence."""

    kind: str  # 'sigma' | 'w' | 'v'
    r: int | None
    k: int | None
    shape: str
    members: list
    frame: LocalFrame

    @property
    def dim(self) -> int:
        return len(self.members)


def scalar_coord_matrix(polys: Sequence[Polynomial]):
    """Rows of monomial coordinates for a family of scalar polynomials."""
    monos = sorted({m for p in polys for m in p.terms})
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monos)
        for m, c in p.terms.items():
            row[index[m]] = c
        rows.append(row)
    return rows, monos


def vector_coord_matrix(fields: Sequence[VectorField]):
    """Rows of stacked monomial coordinates for vector fields."""
    monos = sorted(
        {m for f in fields for m in f.c1.terms}
        | {m for f in fields for m in f.c2.terms}
    )
    index = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    rows = []
    for f in fields:
        row = [Fraction(0)] * (2 * n)
        for m, c in f.c1.terms.items():
            row[index[m]] = c
        for m, c in f.c2.terms.items():
            row[n + index[m]] = c
        rows.append(row)
    return rows, monos


# ---------------------------------------------------------------------------
# the scalar spaces


def sigma_space(r: int, frame: LocalFrame) -> SpaceBasis:
    """Monomial basis of P_r (triangle) or Q_r (rectangle) in the local frame."""
    if r < 1:
        raise ValueError(f"sigma space needs r >= 1, got {r}")
    shape = frame.cell.shape
    members = [Polynomial.monomial(a, b) for a, b in space_exponents(shape, r)]
    return SpaceBasis("sigma", r, None, shape, members, frame)


def triangle_bubble(frame: LocalFrame) -> Polynomial:
    lam1, lam2, lam3 = barycentric_coordinates(frame.local_vertices)
    return lam1 * lam2 * lam3


def rectangle_bubble(frame: LocalFrame) -> Polynomial:
    xl, xr, yd, yu = frame.local_cell().bbox()
    hx, hy = xr - xl, yu - yd
    px = Polynomial({(1, 0): 1, (0, 0): -xl}) * Polynomial({(1, 0): 1, (0, 0): -xr})
    py = Polynomial({(0, 1): 1, (0, 0): -yd}) * Polynomial({(0, 1): 1, (0, 0): -yu})
    return px * py * (Fraction(1) / (hx * hx * hy * hy))


def has_bubble(k: int, shape: str) -> bool:
    return k in (2, 3) if shape == "triangle" else k == 2


def w_space(k: int, frame: LocalFrame) -> SpaceBasis:
    """Order k-1 polynomial space, enriched with the cell bubble at low order."""
    if k < 2:
        raise ValueError(f"w space needs k >= 2, got {k}")
    shape = frame.cell.shape
    members = [Polynomial.monomial(a, b) for a, b in space_exponents(shape, k - 1)]
    if has_bubble(k, shape):
        members.append(
            triangle_bubble(frame) if shape == "triangle" else rectangle_bubble(frame)
        )
    return SpaceBasis("w", None, k, shape, members, frame)


# ---------------------------------------------------------------------------
# the tangential-trace-flattening correction


def _lagrange_nodes(shape: str, m: int, frame: LocalFrame):
    """Nodes of the order-m Lagrange space on the local cell.

    Returns (points, values_slots) where each slot is ('vertex',),
    ('edge', edge_index, t) or ('interior',); t is the exact parameter of the
    node along the ccw-directed edge.
    """
    nodes = []
    if shape == "triangle":
        v1, v2, v3 = frame.local_vertices
        for i in range(m + 1):
            for j in range(m + 1 - i):
                x = (
                    v1[0] + Fraction(i, m) * (v2[0] - v1[0]) + Fraction(j, m) * (v3[0] - v1[0]),
                    v1[1] + Fraction(i, m) * (v2[1] - v1[1]) + Fraction(j, m) * (v3[1] - v1[1]),
                )
                if (i, j) in ((0, 0), (m, 0), (0, m)):
                    slot = ("vertex",)
                elif j == 0:
                    slot = ("edge", 0, Fraction(i, m))
                elif i + j == m:
                    slot = ("edge", 1, Fraction(j, m))
                elif i == 0:
                    slot = ("edge", 2, Fraction(m - j, m))
                else:
                    slot = ("interior",)
                nodes.append((x, slot))
    else:
        xl, xr, yd, yu = frame.local_cell().bbox()
        hx, hy = xr - xl, yu - yd
        for j in range(m + 1):
            for i in range(m + 1):
                x = (xl + Fraction(i, m) * hx, yd + Fraction(j, m) * hy)
                corner = (i in (0, m)) and (j in (0, m))
                if corner:
                    slot = ("vertex",)
                elif j == 0:
                    slot = ("edge", 0, Fraction(i, m))
                elif i == m:
                    slot = ("edge", 1, Fraction(j, m))
                elif j == m:
                    slot = ("edge", 2, Fraction(m - i, m))
                elif i == 0:
                    slot = ("edge", 3, Fraction(m - j, m))
                else:
                    slot = ("interior",)
                nodes.append((x, slot))
    return nodes


def tangential_trace(v: VectorField, a: Point, b: Point) -> list[Fraction]:
    """1D coefficients in t of v(a + t(b-a)) . (b-a)  (tangent scaled by |e|)."""
    d = (b[0] - a[0], b[1] - a[1])
    return p1d_trim(
        p1d_add(
            p1d_scale(v.c1.restrict_line(a, d), d[0]),
            p1d_scale(v.c2.restrict_line(a, d), d[1]),
        )
    )


def modified_poincare(u: Polynomial, frame: LocalFrame, order: int | None = None) -> VectorField:
    """Null-homotopy image corrected by a gradient so that the tangential
    component is constant on every edge of the cell.

    The correction potential is the Lagrange interpolant (order inferred from
    the degree of u unless given) with zero vertex values, edge traces that
    integrate the zero-mean tangential trace, and zero interior nodal values.
    """
    if u.is_zero:
        return VectorField.zero()
    shape = frame.cell.shape
    if order is None:
        if shape == "triangle":
            order = u.degree() + 1
        else:
            order = max(u.degrees_by_var()) + 1
    v = poincare(u)

    # per-edge potentials psi_e with d psi_e/dt = trace - mean, psi_e(0)=0
    psis = []
    for i in range(frame.cell.n_edges):
        a, b = frame.edge_endpoints_local(i)
        trace = tangential_trace(v, a, b)
        mean = p1d_integral01(trace)
        zero_mean = p1d_add(trace, [-mean])
        psi = p1d_antiderivative(zero_mean)
        assert p1d_eval(psi, 1) == 0  # zero-mean integrand closes up
        psis.append(psi)

    nodes = _lagrange_nodes(shape, order, frame)
    exps = space_exponents(shape, order)
    vand = [[Polynomial.monomial(a, b).eval(*x) for a, b in exps] for x, _ in nodes]
    rhs = []
    for _, slot in nodes:
        if slot[0] == "edge":
            rhs.append([p1d_eval(psis[slot[1]], slot[2])])
        else:
            rhs.append([Fraction(0)])
    coeffs = solve(vand, rhs)
    phi = Polynomial({exps[i]: coeffs[i][0] for i in range(len(exps))})
    return v - grad(phi)


# ---------------------------------------------------------------------------
# the curl-conforming local space


def uses_modified_operator(r: int, k: int) -> bool:
    """Case split of the space definition: whether the corrected operator
    (constant edge traces) is applied to the W part."""
    if r == k - 1:
        return True
    if r == k:
        return k in (2, 3)
    if r == k + 1:
        return False
    raise ValueError(f"invalid (r, k) = ({r}, {k}); need r in {{k-1, k, k+1}}")


def v_space(r: int, k: int, frame: LocalFrame) -> SpaceBasis:
    """Gradient part plus (possibly corrected) null-homotopy image of W.

    Spanning set: gradients of the non-constant sigma-basis monomials,
    followed by the operator images of the W basis.  Exact linear
    independence is asserted.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if r not in (k - 1, k, k + 1):
        raise ValueError(f"invalid (r, k) = ({r}, {k}); need r in {{k-1, k, k+1}}")
    modified = uses_modified_operator(r, k)
    sig = sigma_space(r, frame)
    wsp = w_space(k, frame)
    members: list[VectorField] = [grad(p) for p in sig.members[1:]]
    for w in wsp.members:
        members.append(modified_poincare(w, frame) if modified else poincare(w))
    basis = SpaceBasis("v", r, k, frame.cell.shape, members, frame)
    expected = (sig.dim - 1) + wsp.dim
    if basis.dim != expected:
        raise AssertionError("spanning set size mismatch")
    rows, _ = vector_coord_matrix(members)
    if rank(rows) != expected:
        raise SingularMatrixError(
            f"v_space(r={r}, k={k}, {frame.cell.shape}) spanning set is dependent"
        )
    return basis
