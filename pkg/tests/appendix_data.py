"""Published closed-form shape functions of the two lowest-order elements
(gradient part of order 1, curl range of order 2) on the reference cells.

Used as exact oracles: the dualized elements must reproduce these lists up
to a signed permutation.
"""

from quadcurl2d.polycore import Polynomial, VectorField

X = Polynomial.monomial(1, 0)
Y = Polynomial.monomial(0, 1)
ONE = Polynomial.constant(1)


def _vf(u1: Polynomial, u2: Polynomial) -> VectorField:
    return VectorField(u1, u2)


def reference_square_basis() -> list[VectorField]:
    """Eight shape functions on the square (-1,1)^2."""
    u1 = [
        -((Y**2 - ONE) * (-3 * Y * X**2 + 2 * X + 5 * Y - 4 * ONE)) / 32,
        ((Y**2 - ONE) * (3 * Y * X**2 + 2 * X - 5 * Y + 4 * ONE)) / 32,
        ((Y**2 - ONE) * (3 * Y * X**2 + 2 * X - 5 * Y - 4 * ONE)) / 32,
        -((Y**2 - ONE) * (-3 * Y * X**2 + 2 * X + 5 * Y + 4 * ONE)) / 32,
        -((Y - ONE) * (3 * X**2 * Y**2 + 3 * X**2 * Y - 5 * Y**2 - 5 * Y + 8 * ONE)) / 32,
        ((Y + ONE) * (3 * X**2 * Y**2 - 3 * X**2 * Y - 5 * Y**2 + 5 * Y + 8 * ONE)) / 32,
        (Y * (Y**2 - ONE) * (3 * X**2 - 5 * ONE)) / 32,
        -(Y * (Y**2 - ONE) * (3 * X**2 - 5 * ONE)) / 32,
    ]
    u2 = [
        ((X**2 - ONE) * (-3 * X * Y**2 + 2 * Y + 5 * X - 4 * ONE)) / 32,
        ((X**2 - ONE) * (-3 * X * Y**2 - 2 * Y + 5 * X + 4 * ONE)) / 32,
        -((X**2 - ONE) * (3 * X * Y**2 + 2 * Y - 5 * X + 4 * ONE)) / 32,
        ((X**2 - ONE) * (-3 * X * Y**2 + 2 * Y + 5 * X + 4 * ONE)) / 32,
        (X * (X**2 - ONE) * (3 * Y**2 - 5 * ONE)) / 32,
        -(X * (X**2 - ONE) * (3 * Y**2 - 5 * ONE)) / 32,
        -((X - ONE) * (3 * X**2 * Y**2 - 5 * X**2 + 3 * X * Y**2 - 5 * X + 8 * ONE)) / 32,
        ((X + ONE) * (3 * X**2 * Y**2 - 5 * X**2 - 3 * X * Y**2 + 5 * X + 8 * ONE)) / 32,
    ]
    return [_vf(a, b) for a, b in zip(u1, u2)]


def reference_triangle_basis() -> list[VectorField]:
    """Six shape functions on the triangle (0,0), (1,0), (0,1)."""
    edge = X + Y - ONE
    q1 = Y * (3 * X - 4 * X * Y) * edge
    q2 = X * (X + 4 * X * Y) * edge
    u1 = [
        Y * (X + Y) / 2 - Y / 2 + X * Y / 2 + q1,
        -X * Y * (4 * Y - 3 * ONE) * edge,
        X * Y + q1,
        -Y * (X + Y) - 3 * X * Y - 6 * q1,
        -Y * (X + Y) - 3 * X * Y - 6 * q1,
        ONE - 3 * X * Y - 6 * q1 - Y * (X + Y),
    ]
    u2 = [
        X * (8 * X**2 * Y + 2 * X**2 + 8 * X * Y**2 - 6 * X * Y - 3 * X + ONE) / 2,
        X**2 * (4 * Y + ONE) * edge,
        X * Y + q2,
        X * (X + Y) - 3 * X * Y - 6 * q2,
        X * (X + Y) - 3 * X * Y - 6 * q2 - ONE,
        X * (X + Y) - 3 * X * Y - 6 * q2,
    ]
    return [_vf(a, b) for a, b in zip(u1, u2)]
