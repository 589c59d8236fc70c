"""Exact bivariate polynomial arithmetic and the calculus operators that the
element construction is built on.

Every coefficient is a `fractions.Fraction`, so all identities (null-homotopy,
exactness, biorthogonality) can be tested exactly.  Floating point enters only
through the ``*_float`` evaluation helpers used by quadrature code.

The Poincare operator implemented here is anchored at the coordinate origin;
callers that need it about another point work in a translated local frame
(see :mod:`quadcurl2d.spaces`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

Scalar = int | Fraction
Point = tuple[Fraction, Fraction]


def frac(x: Scalar) -> Fraction:
    """Coerce an int/Fraction to Fraction, rejecting floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def pt(x: Scalar | str, y: Scalar | str) -> Point:
    """Build an exact point; strings are parsed as fractions ('1/3')."""
    return (Fraction(x), Fraction(y))


class Polynomial:
    """Bivariate polynomial ``sum c_ab * x1^a * x2^b`` with exact coefficients.

    Zero coefficients are never stored; the zero polynomial has an empty term
    map and reports ``degree() == -1`` (standing in for minus infinity).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (a, b), c in terms.items():
                if a < 0 or b < 0:
                    raise ValueError("negative exponent")
                c = frac(c)
                if c:
                    clean[(a, b)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(c: Scalar) -> "Polynomial":
        return Polynomial({(0, 0): c})

    @staticmethod
    def monomial(a: int, b: int, c: Scalar = 1) -> "Polynomial":
        return Polynomial({(a, b): c})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(a + b for a, b in self.terms)

    def degrees_by_var(self) -> tuple[int, int]:
        """Maximal exponent per variable; (-1, -1) for zero."""
        if not self.terms:
            return (-1, -1)
        return (max(a for a, _ in self.terms), max(b for _, b in self.terms))

    def coeff(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self.terms.items())

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        res = Polynomial()
        res.terms = out
        return res

    def __neg__(self) -> "Polynomial":
        res = Polynomial()
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict[tuple[int, int], Fraction] = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    key = (a1 + a2, b1 + b2)
                    s = out.get(key, Fraction(0)) + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
            res = Polynomial()
            res.terms = out
            return res
        c = frac(other)
        if not c:
            return Polynomial()
        res = Polynomial()
        res.terms = {k: c * v for k, v in self.terms.items()}
        return res

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Polynomial":
        return self * (Fraction(1) / frac(other))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.sorted_terms()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (a, b), c in self.sorted_terms():
            mono = "".join(
                f"*x{i+1}^{e}" if e > 1 else (f"*x{i+1}" if e == 1 else "")
                for i, e in enumerate((a, b))
            )
            bits.append(f"({c}){mono}")
        return " + ".join(bits)

    # -- calculus ----------------------------------------------------------

    def diff(self, var: int) -> "Polynomial":
        """Partial derivative; var is 0 for x1, 1 for x2."""
        out: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in self.terms.items():
            e = (a, b)[var]
            if e:
                key = (a - 1, b) if var == 0 else (a, b - 1)
                out[key] = out.get(key, Fraction(0)) + c * e
        res = Polynomial()
        res.terms = {k: v for k, v in out.items() if v}
        return res

    # -- evaluation and substitution ----------------------------------------

    def eval(self, x1: Scalar, x2: Scalar) -> Fraction:
        x1, x2 = frac(x1), frac(x2)
        total = Fraction(0)
        for (a, b), c in self.terms.items():
            total += c * x1**a * x2**b
        return total

    def eval_float(self, x1, x2):
        """Evaluate at float scalars or numpy arrays."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        total = np.zeros(np.broadcast(x1, x2).shape)
        for (a, b), c in self.terms.items():
            total += float(c) * x1**a * x2**b
        return total

    def shift(self, c1: Scalar, c2: Scalar) -> "Polynomial":
        """Return q with q(x) = p(x1 + c1, x2 + c2)."""
        c1, c2 = frac(c1), frac(c2)
        out = Polynomial()
        for (a, b), c in self.terms.items():
            fac1 = [c * comb(a, i) * c1 ** (a - i) for i in range(a + 1)]
            for i, ci in enumerate(fac1):
                if not ci:
                    continue
                for j in range(b + 1):
                    cij = ci * comb(b, j) * c2 ** (b - j)
                    if cij:
                        out = out + Polynomial.monomial(i, j, cij)
        return out

    def restrict_line(self, a: Point, d: Point) -> list[Fraction]:
        """1D coefficients (ascending in t) of ``p(a + t*d)``."""
        out = [Fraction(0)] * (self.degree() + 2 if self.terms else 1)
        for (e1, e2), c in self.terms.items():
            f1 = _binomial_1d(a[0], d[0], e1)
            f2 = _binomial_1d(a[1], d[1], e2)
            prod = p1d_mul(f1, f2)
            for m, cm in enumerate(prod):
                val = c * cm
                if val:
                    while m >= len(out):
                        out.append(Fraction(0))
                    out[m] += val
        return p1d_trim(out)


def _binomial_1d(a: Fraction, d: Fraction, e: int) -> list[Fraction]:
    """Coefficients of (a + t d)^e in t."""
    return [comb(e, m) * a ** (e - m) * d**m for m in range(e + 1)]


# ---------------------------------------------------------------------------
# small helpers for 1D polynomials represented as ascending coefficient lists


def p1d_trim(c: list[Fraction]) -> list[Fraction]:
    while len(c) > 1 and not c[-1]:
        c.pop()
    return c


def p1d_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return p1d_trim(out)


def p1d_scale(p: Sequence[Fraction], s: Scalar) -> list[Fraction]:
    s = frac(s)
    return p1d_trim([c * s for c in p])


def p1d_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, ci in enumerate(p):
        if not ci:
            continue
        for j, cj in enumerate(q):
            out[i + j] += ci * cj
    return p1d_trim(out)


def p1d_eval(p: Sequence[Fraction], t: Scalar) -> Fraction:
    t = frac(t)
    total = Fraction(0)
    for c in reversed(p):
        total = total * t + c
    return total


def p1d_integral01(p: Sequence[Fraction]) -> Fraction:
    """Exact integral over t in [0, 1]."""
    return sum((c / (m + 1) for m, c in enumerate(p)), Fraction(0))


def p1d_antiderivative(p: Sequence[Fraction]) -> list[Fraction]:
    """Antiderivative vanishing at t = 0."""
    return [Fraction(0)] + [c / (m + 1) for m, c in enumerate(p)]


def legendre01(j: int) -> list[Fraction]:
    """Legendre polynomial P_j mapped to [0, 1], exact coefficients in t."""
    # Bonnet recursion on [-1, 1], then substitute s = 2t - 1.
    ps: list[list[Fraction]] = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    while len(ps) <= j:
        n = len(ps) - 1
        t_pn = [Fraction(0)] + ps[-1]
        nxt = p1d_add(
            p1d_scale(t_pn, Fraction(2 * n + 1, n + 1)),
            p1d_scale(ps[-2], Fraction(-n, n + 1)),
        )
        ps.append(nxt)
    # compose with s = 2t - 1
    shifted = [Fraction(0)]
    s_pow = [Fraction(1)]
    base = [Fraction(-1), Fraction(2)]
    for c in ps[j]:
        shifted = p1d_add(shifted, p1d_scale(s_pow, c))
        s_pow = p1d_mul(s_pow, base)
    return shifted


# ---------------------------------------------------------------------------
# vector fields


@dataclass(frozen=True)
class VectorField:
    """Pair of polynomials, the components along x1 and x2."""

    c1: Polynomial
    c2: Polynomial

    @staticmethod
    def zero() -> "VectorField":
        return VectorField(Polynomial(), Polynomial())

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.c1, -self.c2)

    def scale(self, s: Scalar) -> "VectorField":
        return VectorField(self.c1 * s, self.c2 * s)

    def dot(self, other: "VectorField") -> Polynomial:
        return self.c1 * other.c1 + self.c2 * other.c2

    @property
    def is_zero(self) -> bool:
        return self.c1.is_zero and self.c2.is_zero

    def degree(self) -> int:
        return max(self.c1.degree(), self.c2.degree())

    def eval(self, x1: Scalar, x2: Scalar) -> tuple[Fraction, Fraction]:
        return (self.c1.eval(x1, x2), self.c2.eval(x1, x2))


# ---------------------------------------------------------------------------
# differential operators


def grad(p: Polynomial) -> VectorField:
    """Gradient (d p/d x1, d p/d x2)."""
    return VectorField(p.diff(0), p.diff(1))


def curl_scalar(p: Polynomial) -> VectorField:
    """Vector curl of a scalar: (d p/d x2, -d p/d x1)."""
    return VectorField(p.diff(1), -p.diff(0))


def curl_vec(v: VectorField) -> Polynomial:
    """Scalar curl of a vector field: d v2/d x1 - d v1/d x2."""
    return v.c2.diff(0) - v.c1.diff(1)


def div(v: VectorField) -> Polynomial:
    return v.c1.diff(0) + v.c2.diff(1)


def curlcurl(v: VectorField) -> VectorField:
    """The composition vector-curl of scalar-curl."""
    return curl_scalar(curl_vec(v))


def poincare(u: Polynomial) -> VectorField:
    """Curl null-homotopy about the origin.

    Acts on a monomial x1^a x2^b as multiplication by xperp/(a+b+2), extended
    linearly; raises the degree by exactly one and satisfies
    ``curl_vec(poincare(u)) == u``.
    """
    w = Polynomial()
    for (a, b), c in u.terms.items():
        w = w + Polynomial.monomial(a, b, c / (a + b + 2))
    return VectorField(w * Polynomial.monomial(0, 1, -1), w * Polynomial.monomial(1, 0))


def koszul(u: Polynomial) -> VectorField:
    """Multiplication by xperp = (-x2, x1)."""
    return VectorField(u * Polynomial.monomial(0, 1, -1), u * Polynomial.monomial(1, 0))


# ---------------------------------------------------------------------------
# cell geometry


@dataclass(frozen=True)
class CellGeometry:
    """A triangle or axis-aligned rectangle with exact rational vertices.

    Vertices are listed counterclockwise; edge i joins vertex i and vertex
    i+1 (mod n).
    """

    shape: str  # 'triangle' | 'rectangle'
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if self.shape == "triangle":
            if len(self.vertices) != 3:
                raise ValueError("triangle needs 3 vertices")
        elif self.shape == "rectangle":
            if len(self.vertices) != 4:
                raise ValueError("rectangle needs 4 vertices")
        else:
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.signed_area() <= 0:
            raise ValueError("vertices must be counterclockwise with positive area")
        if self.shape == "rectangle":
            for i in range(4):
                dx, dy = self.edge_vector(i)
                if dx != 0 and dy != 0:
                    raise ValueError("rectangle edges must be axis-aligned")

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    def signed_area(self) -> Fraction:
        total = Fraction(0)
        n = len(self.vertices)
        for i in range(n):
            x1, y1 = self.vertices[i]
            x2, y2 = self.vertices[(i + 1) % n]
            total += x1 * y2 - x2 * y1
        return total / 2

    def barycenter(self) -> Point:
        n = len(self.vertices)
        sx = sum((v[0] for v in self.vertices), Fraction(0))
        sy = sum((v[1] for v in self.vertices), Fraction(0))
        return (sx / n, sy / n)

    def edge_endpoints(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n_edges]

    def edge_vector(self, i: int) -> Point:
        a, b = self.edge_endpoints(i)
        return (b[0] - a[0], b[1] - a[1])

    def edge_length_sq(self, i: int) -> Fraction:
        dx, dy = self.edge_vector(i)
        return dx * dx + dy * dy

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), max(xs), min(ys), max(ys))

    def translated(self, c1: Scalar, c2: Scalar) -> "CellGeometry":
        c1, c2 = frac(c1), frac(c2)
        return CellGeometry(
            self.shape, tuple((v[0] + c1, v[1] + c2) for v in self.vertices)
        )


def reference_triangle() -> CellGeometry:
    return CellGeometry("triangle", (pt(0, 0), pt(1, 0), pt(0, 1)))


def reference_square() -> CellGeometry:
    return CellGeometry("rectangle", (pt(-1, -1), pt(1, -1), pt(1, 1), pt(-1, 1)))


def barycentric_coordinates(vertices: Sequence[Point]) -> list[Polynomial]:
    """Affine functions lam_i with lam_i(v_j) = delta_ij on a triangle."""
    (x1, y1), (x2, y2), (x3, y3) = vertices
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    lams = []
    for (xa, ya), (xb, yb) in (((x2, y2), (x3, y3)), ((x3, y3), (x1, y1)), ((x1, y1), (x2, y2))):
        # lam = ((xb-xa)(y-ya) - (yb-ya)(x-xa)) / det
        p = Polynomial(
            {
                (0, 1): xb - xa,
                (1, 0): -(yb - ya),
                (0, 0): -(xb - xa) * ya + (yb - ya) * xa,
            }
        )
        lams.append(p * (Fraction(1) / det))
    return lams


# ---------------------------------------------------------------------------
# exact integration


def integrate_rect(
    p: Polynomial, xl: Scalar, xr: Scalar, yd: Scalar, yu: Scalar
) -> Fraction:
    xl, xr, yd, yu = frac(xl), frac(xr), frac(yd), frac(yu)
    total = Fraction(0)
    for (a, b), c in p.terms.items():
        ix = (xr ** (a + 1) - xl ** (a + 1)) / (a + 1)
        iy = (yu ** (b + 1) - yd ** (b + 1)) / (b + 1)
        total += c * ix * iy
    return total


def integrate_triangle(p: Polynomial, vertices: Sequence[Point]) -> Fraction:
    """Exact integral over a triangle via the affine map to the unit simplex."""
    (x1, y1), (x2, y2), (x3, y3) = vertices
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    # substitute x = v1 + s*(v2-v1) + t*(v3-v1) and expand in (s, t)
    total = Fraction(0)
    for (a, b), c in p.terms.items():
        fx = _affine_expand(x1, x2 - x1, x3 - x1, a)
        fy = _affine_expand(y1, y2 - y1, y3 - y1, b)
        for (i1, j1), c1 in fx.items():
            for (i2, j2), c2 in fy.items():
                s_e, t_e = i1 + i2, j1 + j2
                total += c * c1 * c2 * _simplex_monomial(s_e, t_e)
    return total * abs(det)


def _affine_expand(a0: Fraction, a1: Fraction, a2: Fraction, e: int):
    """Terms of (a0 + a1 s + a2 t)^e as {(i, j): coeff} with s^i t^j."""
    out: dict[tuple[int, int], Fraction] = {}
    for i in range(e + 1):
        for j in range(e - i + 1):
            k = e - i - j
            c = (
                Fraction(comb(e, i) * comb(e - i, j))
                * a1**i
                * a2**j
                * a0**k
            )
            if c:
                out[(i, j)] = out.get((i, j), Fraction(0)) + c
    return out


def _simplex_monomial(a: int, b: int) -> Fraction:
    """Integral of s^a t^b over the unit simplex s, t >= 0, s + t <= 1."""
    num = 1
    for m in range(1, a + 1):
        num *= m
    for m in range(1, b + 1):
        num *= m
    den = 1
    for m in range(1, a + b + 3):
        den *= m
    return Fraction(num, den)


def integrate_cell(p: Polynomial, cell: CellGeometry) -> Fraction:
    """Exact integral of p over the cell."""
    if cell.shape == "rectangle":
        xl, xr, yd, yu = cell.bbox()
        return integrate_rect(p, xl, xr, yd, yu)
    return integrate_triangle(p, cell.vertices)


@dataclass(frozen=True)
class EdgeIntegral:
    """Line integral stored exactly as (rational factor) * |e|.

    ``factor`` is the integral of the parameterized integrand over t in [0,1];
    the true arclength integral is factor * sqrt(length_sq).
    """

    factor: Fraction
    length_sq: Fraction

    def value_float(self) -> float:
        return float(self.factor) * float(self.length_sq) ** 0.5

    def value_exact_if_rational(self) -> Fraction:
        r = isqrt(int(self.length_sq.numerator)) if self.length_sq.denominator == 1 else None
        if r is not None and r * r == self.length_sq.numerator:
            return self.factor * r
        raise ValueError("edge length is irrational; use value_float()")


def integrate_edge(p: Polynomial, a: Point, b: Point) -> EdgeIntegral:
    """Exact arclength integral of p along the segment from a to b."""
    d = (b[0] - a[0], b[1] - a[1])
    coeffs = p.restrict_line(a, d)
    return EdgeIntegral(p1d_integral01(coeffs), d[0] * d[0] + d[1] * d[1])
