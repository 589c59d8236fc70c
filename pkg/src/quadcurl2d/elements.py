"""Degrees of freedom, dualization, and local interpolation operators.

Three element families are provided on triangles and rectangles, indexed by
the curl-range order ``k`` (the curl of the element space is the order-(k-1)
scalar space, bubble-enriched at low order):

* ``new``  -- gradient part of order k-1, the smallest element,
* ``mid``  -- gradient part of order k,
* ``high`` -- gradient part of order k+1, highest L2 accuracy.

Edge moment weights are Legendre polynomials in the normalized edge
parameter; tangent moments contract against the unnormalized edge vector so
that every functional is rational-valued on rational polynomial fields (the
arclength and unit-tangent square roots cancel).  Curl moments and scalar
edge moments are taken in the normalized parameter as well, i.e. the
published arclength functionals divided by the edge length; the rescaling is
uniform per edge so the resulting element is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .linalg import SingularMatrixError, invert
from .polycore import (
    CellGeometry,
    Point,
    Polynomial,
    VectorField,
    curl_scalar,
    curl_vec,
    integrate_cell,
    legendre01,
    p1d_integral01,
    p1d_mul,
    p1d_trim,
)
from .spaces import (
    LocalFrame,
    SpaceBasis,
    has_bubble,
    homogeneous_exponents,
    p_exponents,
    q_exponents,
    sigma_space,
    space_exponents,
    v_space,
    w_space,
)

FAMILIES = ("new", "mid", "high")

#: combinations exercised by the verification suite
SUPPORTED_COMBINATIONS = tuple(
    (family, k, shape)
    for family in FAMILIES
    for shape, ks in (("triangle", (2, 3, 4)), ("rectangle", (2, 3)))
    for k in ks
)


def family_r(family: str, k: int) -> int:
    """Order of the gradient part for a family."""
    try:
        return {"new": k - 1, "mid": k, "high": k + 1}[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


class UnisolvenceFailure(SingularMatrixError):
    """The DOF/basis matrix of an element is singular."""


# ---------------------------------------------------------------------------
# DOF functionals (all geometry in local-frame coordinates)


@dataclass(frozen=True)
class VertexCurl:
    vertex: int
    point: Point

    @property
    def entity(self):
        return ("vertex", self.vertex)

    def apply(self, v: VectorField) -> Fraction:
        return curl_vec(v).eval(*self.point)


@dataclass(frozen=True)
class EdgeTangentMoment:
    edge: int
    a: Point
    d: Point  # parameterization endpoint difference; tangent * |e|
    q: tuple[Fraction, ...]
    orientation_sign: int

    @property
    def entity(self):
        return ("edge", self.edge)

    def apply(self, v: VectorField) -> Fraction:
        trace = [
            c1 * self.d[0] + c2 * self.d[1]
            for c1, c2 in zip(
                _pad(v.c1.restrict_line(self.a, self.d)),
                _pad(v.c2.restrict_line(self.a, self.d)),
            )
        ]
        return p1d_integral01(p1d_mul(p1d_trim(trace), list(self.q)))


@dataclass(frozen=True)
class EdgeCurlMoment:
    edge: int
    a: Point
    d: Point
    q: tuple[Fraction, ...]
    orientation_sign: int

    @property
    def entity(self):
        return ("edge", self.edge)

    def apply(self, v: VectorField) -> Fraction:
        w = curl_vec(v).restrict_line(self.a, self.d)
        return p1d_integral01(p1d_mul(w, list(self.q)))


@dataclass(frozen=True)
class InteriorMoment:
    test_field: VectorField
    cell: CellGeometry  # local-frame cell

    @property
    def entity(self):
        return ("cell", 0)

    def apply(self, v: VectorField) -> Fraction:
        return integrate_cell(v.dot(self.test_field), self.cell)


@dataclass(frozen=True)
class VertexValue:
    vertex: int
    point: Point

    @property
    def entity(self):
        return ("vertex", self.vertex)

    def apply(self, u: Polynomial) -> Fraction:
        return u.eval(*self.point)


@dataclass(frozen=True)
class EdgeScalarMoment:
    edge: int
    a: Point
    d: Point
    q: tuple[Fraction, ...]
    orientation_sign: int

    @property
    def entity(self):
        return ("edge", self.edge)

    def apply(self, u: Polynomial) -> Fraction:
        return p1d_integral01(p1d_mul(u.restrict_line(self.a, self.d), list(self.q)))


@dataclass(frozen=True)
class InteriorScalarMoment:
    weight: Polynomial
    cell: CellGeometry

    @property
    def entity(self):
        return ("cell", 0)

    def apply(self, u: Polynomial) -> Fraction:
        return integrate_cell(u * self.weight, self.cell)


def _pad(coeffs):
    return coeffs if coeffs else [Fraction(0)]


# ---------------------------------------------------------------------------
# interior test spaces


def _x_field(exp: tuple[int, int]) -> VectorField:
    """The field x * x1^a x2^b in local coordinates."""
    a, b = exp
    return VectorField(Polynomial.monomial(a + 1, b), Polynomial.monomial(a, b + 1))


def _component_fields(exps: Sequence[tuple[int, int]]) -> list[VectorField]:
    out = [VectorField(Polynomial.monomial(a, b), Polynomial()) for a, b in exps]
    out += [VectorField(Polynomial(), Polynomial.monomial(a, b)) for a, b in exps]
    return out


def interior_test_fields(family: str, k: int, shape: str) -> list[VectorField]:
    """The moment test space for the interior DOFs of a vector element."""
    if shape == "triangle":
        fields: list[VectorField] = []
        if k >= 5:
            fields += _component_fields(p_exponents(k - 5))
            fields += [_x_field(e) for e in homogeneous_exponents(k - 5)]
            fields += [_x_field(e) for e in homogeneous_exponents(k - 4)]
            if family in ("mid", "high"):
                fields += [_x_field(e) for e in homogeneous_exponents(k - 3)]
            if family == "high":
                fields += [_x_field(e) for e in homogeneous_exponents(k - 2)]
            return fields
        if family == "new":
            return [_x_field((0, 0))] if k == 4 else []
        if family == "mid":
            return [_x_field(e) for e in p_exponents(k - 3)] if k in (3, 4) else []
        return [_x_field(e) for e in p_exponents(k - 2)]  # high, k = 2, 3, 4
    # rectangles: G1 = psi * x, G2 = vector curls of scalars modulo constants
    g1_order = {"new": k - 3, "mid": k - 2, "high": k - 1}[family]
    fields = []
    if k == 2:
        if family == "new":
            return []
        if family == "mid":
            return [_x_field((0, 0))]
        return [_x_field(e) for e in q_exponents(1)]  # high
    fields += [_x_field(e) for e in q_exponents(g1_order)]
    fields += [curl_scalar(Polynomial.monomial(a, b)) for a, b in q_exponents(k - 3)[1:]]
    return fields


# ---------------------------------------------------------------------------
# DOF set construction


def _edge_param(frame: LocalFrame, i: int, direction: int) -> tuple[Point, Point]:
    a, b = frame.edge_endpoints_local(i)
    if direction < 0:
        a, b = b, a
    return a, (b[0] - a[0], b[1] - a[1])


def vector_dofs(
    family: str, k: int, frame: LocalFrame, edge_dirs: Sequence[int] | None = None
) -> list:
    """Ordered DOF set: vertex curls, per-edge blocks, interior moments.

    ``edge_dirs[i]`` is +1 when the moment parameterization runs along the
    cell's ccw traversal of edge i and -1 when it runs against it (used to
    follow a global low-to-high vertex convention on meshes).
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    r = family_r(family, k)
    cell = frame.cell
    if edge_dirs is None:
        edge_dirs = [1] * cell.n_edges
    dofs: list = [
        VertexCurl(i, frame.to_local(v)) for i, v in enumerate(cell.vertices)
    ]
    for i in range(cell.n_edges):
        a, d = _edge_param(frame, i, edge_dirs[i])
        for j in range(r):
            dofs.append(EdgeTangentMoment(i, a, d, tuple(legendre01(j)), edge_dirs[i]))
        for j in range(k - 2):
            dofs.append(EdgeCurlMoment(i, a, d, tuple(legendre01(j)), edge_dirs[i]))
    local_cell = frame.local_cell()
    for q in interior_test_fields(family, k, cell.shape):
        dofs.append(InteriorMoment(q, local_cell))
    return dofs


def scalar_dofs(
    order: int,
    frame: LocalFrame,
    edge_dirs: Sequence[int] | None = None,
    extra_average: bool = False,
) -> list:
    """Vertex values, edge moments, interior moments of the order-r Lagrange
    element; ``extra_average`` appends the plain cell integral."""
    cell = frame.cell
    if edge_dirs is None:
        edge_dirs = [1] * cell.n_edges
    dofs: list = [
        VertexValue(i, frame.to_local(v)) for i, v in enumerate(cell.vertices)
    ]
    for i in range(cell.n_edges):
        a, d = _edge_param(frame, i, edge_dirs[i])
        for j in range(order - 1):
            dofs.append(EdgeScalarMoment(i, a, d, tuple(legendre01(j)), edge_dirs[i]))
    local_cell = frame.local_cell()
    interior_order = order - 3 if cell.shape == "triangle" else order - 2
    if interior_order >= 0:
        for a, b in space_exponents(cell.shape, interior_order):
            dofs.append(InteriorScalarMoment(Polynomial.monomial(a, b), local_cell))
    if extra_average:
        dofs.append(InteriorScalarMoment(Polynomial.constant(1), local_cell))
    return dofs


# ---------------------------------------------------------------------------
# elements


def vector_layout(family: str, k: int, shape: str) -> tuple[int, int, int]:
    """(dofs per vertex, per edge, per cell) of the vector element."""
    r = family_r(family, k)
    return 1, r + (k - 2), len(interior_test_fields(family, k, shape))


def sigma_layout(r: int, shape: str) -> tuple[int, int, int]:
    interior_order = r - 3 if shape == "triangle" else r - 2
    n_int = len(space_exponents(shape, interior_order)) if interior_order >= 0 else 0
    return 1, r - 1, n_int


def w_layout(k: int, shape: str) -> tuple[int, int, int]:
    nv, ne, nc = sigma_layout(k - 1, shape)
    return nv, ne, nc + (1 if has_bubble(k, shape) else 0)


class _ElementBase:
    def dof_values(self, member) -> list[Fraction]:
        return [dof.apply(member) for dof in self.dofs]

    def interpolate(self, member):
        """Exact local interpolation of a polynomial (field): returns the
        element-space representative with the same DOF values."""
        return self.from_dof_values(self.dof_values(member))


@dataclass
class FiniteElement(_ElementBase):
    """A dualized curl-curl conforming element on a single cell."""

    family: str
    k: int
    frame: LocalFrame
    space: SpaceBasis
    dofs: list
    coeff: list  # exact dual coefficients; column j = dual basis j

    def __post_init__(self):
        self._dual_cache: list[VectorField] | None = None

    @property
    def dim(self) -> int:
        return len(self.dofs)

    def dual_basis(self) -> list[VectorField]:
        """Shape functions biorthogonal to the DOFs (materialized lazily)."""
        if self._dual_cache is None:
            members = self.space.members
            dual = []
            for j in range(self.dim):
                f = VectorField.zero()
                for m in range(self.dim):
                    c = self.coeff[m][j]
                    if c:
                        f = f + members[m].scale(c)
                dual.append(f)
            self._dual_cache = dual
        return self._dual_cache

    def from_dof_values(self, values: Sequence[Fraction]) -> VectorField:
        f = VectorField.zero()
        for val, d in zip(values, self.dual_basis()):
            if val:
                f = f + d.scale(val)
        return f

    def interpolate_fn(
        self,
        u_fn: Callable,
        curl_fn: Callable | None,
        n_gauss: int = 12,
    ) -> np.ndarray:
        """Numeric DOF evaluation for non-polynomial fields.

        ``u_fn(x, y) -> (u1, u2)`` and ``curl_fn(x, y) -> scalar`` take global
        coordinates; the curl is required by the vertex and edge curl DOFs.
        """
        if curl_fn is None and any(
            isinstance(d, (VertexCurl, EdgeCurlMoment)) for d in self.dofs
        ):
            raise ValueError("analytic curl required for curl-type DOFs")
        ox, oy = float(self.frame.origin[0]), float(self.frame.origin[1])
        t, wt = np.polynomial.legendre.leggauss(n_gauss)
        t = (t + 1) / 2
        wt = wt / 2
        from .quadrature import cell_rule  # local import to avoid cycle

        pts, wts = cell_rule(self.frame.local_cell(), n_gauss)
        vals = []
        for dof in self.dofs:
            if isinstance(dof, VertexCurl):
                vals.append(curl_fn(float(dof.point[0]) + ox, float(dof.point[1]) + oy))
            elif isinstance(dof, (EdgeTangentMoment, EdgeCurlMoment)):
                ax, ay = float(dof.a[0]), float(dof.a[1])
                dx, dy = float(dof.d[0]), float(dof.d[1])
                X, Y = ax + t * dx + ox, ay + t * dy + oy
                qv = np.zeros_like(t)
                for m, c in enumerate(dof.q):
                    qv += float(c) * t**m
                if isinstance(dof, EdgeTangentMoment):
                    u1, u2 = u_fn(X, Y)
                    vals.append(np.sum(wt * qv * (u1 * dx + u2 * dy)))
                else:
                    vals.append(np.sum(wt * qv * curl_fn(X, Y)))
            else:
                u1, u2 = u_fn(pts[:, 0] + ox, pts[:, 1] + oy)
                q1 = dof.test_field.c1.eval_float(pts[:, 0], pts[:, 1])
                q2 = dof.test_field.c2.eval_float(pts[:, 0], pts[:, 1])
                vals.append(np.sum(wts * (u1 * q1 + u2 * q2)))
        return np.array(vals)


@dataclass
class ScalarElement(_ElementBase):
    kind: str  # 'sigma' | 'w'
    order: int
    frame: LocalFrame
    space: SpaceBasis
    dofs: list
    coeff: list

    def __post_init__(self):
        self._dual_cache: list[Polynomial] | None = None

    @property
    def dim(self) -> int:
        return len(self.dofs)

    def dual_basis(self) -> list[Polynomial]:
        if self._dual_cache is None:
            members = self.space.members
            dual = []
            for j in range(self.dim):
                p = Polynomial()
                for m in range(self.dim):
                    c = self.coeff[m][j]
                    if c:
                        p = p + members[m] * c
                dual.append(p)
            self._dual_cache = dual
        return self._dual_cache

    def from_dof_values(self, values: Sequence[Fraction]) -> Polynomial:
        p = Polynomial()
        for val, d in zip(values, self.dual_basis()):
            if val:
                p = p + d * val
        return p


def dualize(members: Sequence, dofs: Sequence, label: str):
    """Exact generalized Vandermonde inversion; the dual coefficient matrix
    certifies unisolvence."""
    if len(members) != len(dofs):
        raise UnisolvenceFailure(
            f"{label}: {len(dofs)} DOFs vs space dimension {len(members)}"
        )
    m = [[dof.apply(member) for member in members] for dof in dofs]
    try:
        return invert(m)
    except SingularMatrixError as exc:
        raise UnisolvenceFailure(f"{label}: DOF matrix is singular") from exc


def vector_element(
    family: str,
    k: int,
    cell: CellGeometry,
    edge_dirs: Sequence[int] | None = None,
    frame: LocalFrame | None = None,
) -> FiniteElement:
    """Build and dualize a curl-curl conforming element on a cell."""
    frame = frame or LocalFrame.for_cell(cell)
    space = v_space(family_r(family, k), k, frame)
    dofs = vector_dofs(family, k, frame, edge_dirs)
    coeff = dualize(space.members, dofs, f"{family}, k={k}, {cell.shape}")
    return FiniteElement(family, k, frame, space, dofs, coeff)


def scalar_element(
    kind: str,
    order_param: int,
    cell: CellGeometry,
    edge_dirs: Sequence[int] | None = None,
    frame: LocalFrame | None = None,
) -> ScalarElement:
    """Lagrange-type scalar element.

    ``kind='sigma'`` takes the polynomial order r; ``kind='w'`` takes the
    family parameter k and builds the order k-1 space with the bubble and its
    extra interior average DOF in the low-order cases.
    """
    frame = frame or LocalFrame.for_cell(cell)
    if kind == "sigma":
        space = sigma_space(order_param, frame)
        dofs = scalar_dofs(order_param, frame, edge_dirs)
        order = order_param
    elif kind == "w":
        space = w_space(order_param, frame)
        bubble = has_bubble(order_param, cell.shape)
        dofs = scalar_dofs(order_param - 1, frame, edge_dirs, extra_average=bubble)
        order = order_param - 1
    else:
        raise ValueError(f"unknown scalar element kind {kind!r}")
    coeff = dualize(space.members, dofs, f"{kind}({order_param}), {cell.shape}")
    return ScalarElement(kind, order, frame, space, dofs, coeff)
