"""Curvature algebra of diagonal left-invariant metrics in the Milnor frame.

A unimodular 3D Lie group carries an orthogonal frame F_1, F_2, F_3 with
brackets [F_1,F_2] = nu*F_3, [F_2,F_3] = lam*F_1, [F_3,F_1] = mu*F_2 and
structure constants lam, mu, nu in {-1, 0, 1} selecting the Bianchi class.
For the diagonal metric g = a*w1(x)w1 + b*w2(x)w2 + c*w3(x)w3 every curvature
quantity of interest (Ricci, Schouten, dual Cotton, the H and J one-forms and
the fourth-order K one-form with trace K = (3/8)R^2 - |Ric|^2) reduces to a
polynomial in x = lam*a, y = mu*b, z = nu*c divided by a power of abc.

All coefficient tables below are exact rationals.  Evaluation is duck-typed:
feeding `fractions.Fraction` (or int) coefficients yields exact rational
results, floats yield doubles.  No symbolic differentiation happens anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Number = Union[int, float, Fraction]

__all__ = [
    "StructureConstants",
    "MilnorMetric",
    "FrameDiagonal",
    "BIANCHI_CLASSES",
    "ricci_frame",
    "scalar_curvature",
    "schouten_frame",
    "cotton_star_frame",
    "j_frame",
    "h_frame",
    "k_frame",
    "k_trace",
    "frame_to_coordinate",
]

# Structure-constant triples of the named unimodular classes.
BIANCHI_CLASSES = {
    "r3": (0, 0, 0),
    "su2": (1, 1, 1),
    "sl2r": (-1, -1, 1),
    "isom_r2": (-1, -1, 0),
    "sol": (-1, 0, 1),
    "nil": (-1, 0, 0),
}


@dataclass(frozen=True)
class StructureConstants:
    """Milnor structure constants (lam, mu, nu), each in {-1, 0, 1}."""

    lam: int
    mu: int
    nu: int

    def __post_init__(self):
        for name in ("lam", "mu", "nu"):
            v = getattr(self, name)
            if v not in (-1, 0, 1):
                raise ValueError(f"structure constant {name}={v!r} not in {{-1, 0, 1}}")

    @classmethod
    def from_name(cls, name: str) -> "StructureConstants":
        key = name.lower()
        if key not in BIANCHI_CLASSES:
            raise ValueError(f"unknown Bianchi class {name!r}; expected one of {sorted(BIANCHI_CLASSES)}")
        return cls(*BIANCHI_CLASSES[key])

    @classmethod
    def r3(cls):
        return cls(0, 0, 0)

    @classmethod
    def su2(cls):
        return cls(1, 1, 1)

    @classmethod
    def sl2r(cls):
        return cls(-1, -1, 1)

    @classmethod
    def isom_r2(cls):
        return cls(-1, -1, 0)

    @classmethod
    def sol(cls):
        return cls(-1, 0, 1)

    @classmethod
    def nil(cls):
        return cls(-1, 0, 0)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.lam, self.mu, self.nu)

    def class_name(self) -> str | None:
        """Named class of this triple, or None for an unnamed sign pattern."""
        for name, triple in BIANCHI_CLASSES.items():
            if triple == self.as_tuple():
                return name
        return None


@dataclass(frozen=True)
class MilnorMetric:
    """Positive diagonal metric coefficients (a, b, c) in the Milnor frame."""

    a: Number
    b: Number
    c: Number

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not v > 0:  # also rejects NaN
                raise ValueError(f"metric coefficient {name}={v!r} must be strictly positive")

    def as_tuple(self) -> Tuple[Number, Number, Number]:
        return (self.a, self.b, self.c)

    def scaled(self, s: Number) -> "MilnorMetric":
        return MilnorMetric(s * self.a, s * self.b, s * self.c)

    def volume(self) -> Number:
        return self.a * self.b * self.c


@dataclass(frozen=True)
class FrameDiagonal:
    """Diagonal orthonormal-frame components of a symmetric tensor.

    The tensor is T = f1 e1(x)e1 + f2 e2(x)e2 + f3 e3(x)e3 in the orthonormal
    coframe; coordinate (orthogonal-basis) components are (f1*a, f2*b, f3*c).
    """

    f1: Number
    f2: Number
    f3: Number

    def as_tuple(self) -> Tuple[Number, Number, Number]:
        return (self.f1, self.f2, self.f3)

    def trace(self) -> Number:
        return self.f1 + self.f2 + self.f3


# ---------------------------------------------------------------------------
# coefficient tables
#
# Degree-2 monomial basis: (x^2, y^2, z^2, xy, xz, yz), x = lam*a etc.
# Degree-4 monomial basis:
#   (x^4, x^3 y, x^3 z, x^2 y^2, x^2 y z, x^2 z^2,
#    x y^3, x y^2 z, x y z^2, x z^3,
#    y^4, y^3 z, y^2 z^2, y z^3, z^4)
# ---------------------------------------------------------------------------

F = Fraction

# Ricci one-form coefficients over 1/(2abc).
_RICCI = (
    (F(1), F(-1), F(-1), F(0), F(0), F(2)),
    (F(-1), F(1), F(-1), F(0), F(2), F(0)),
    (F(-1), F(-1), F(1), F(2), F(0), F(0)),
)
# Scalar curvature over 1/(2abc).
_SCALAR = (F(-1), F(-1), F(-1), F(2), F(2), F(2))

# J one-form coefficients over 1/(4 a^2 b^2 c^2).
_J = (
    (F(9, 16), F(-3, 4), F(-3, 4), F(-9, 8), F(13, 4), F(-9, 8),
     F(9, 4), F(-9, 4), F(-9, 4), F(9, 4),
     F(-15, 16), F(-1, 4), F(19, 8), F(-1, 4), F(-15, 16)),
    (F(-15, 16), F(9, 4), F(-1, 4), F(-9, 8), F(-9, 4), F(19, 8),
     F(-3, 4), F(13, 4), F(-9, 4), F(-1, 4),
     F(9, 16), F(-3, 4), F(-9, 8), F(9, 4), F(-15, 16)),
    (F(-15, 16), F(-1, 4), F(9, 4), F(19, 8), F(-9, 4), F(-9, 8),
     F(-1, 4), F(-9, 4), F(13, 4), F(-3, 4),
     F(-15, 16), F(9, 4), F(-9, 8), F(-3, 4), F(9, 16)),
)

# H one-form coefficients over 1/(4 a^2 b^2 c^2); identically traceless.
_H = (
    (F(6), F(-3), F(-3), F(1), F(-2), F(1),
     F(-1), F(1), F(1), F(-1),
     F(-3), F(4), F(-2), F(4), F(-3)),
    (F(-3), F(-1), F(4), F(1), F(1), F(-2),
     F(-3), F(-2), F(1), F(4),
     F(6), F(-3), F(1), F(-1), F(-3)),
    (F(-3), F(4), F(-1), F(-2), F(1), F(1),
     F(4), F(1), F(-2), F(-3),
     F(-3), F(-1), F(1), F(-3), F(6)),
)

# K one-form coefficients over -1/(32 a^2 b^2 c^2); equals 2(J + H).
_K = (
    (F(-105), F(60), F(60), F(2), F(-20), F(2),
     F(-20), F(20), F(20), F(-20),
     F(63), F(-60), F(-6), F(-60), F(63)),
    (F(63), F(-20), F(-60), F(2), F(20), F(-6),
     F(60), F(-20), F(20), F(-60),
     F(-105), F(60), F(2), F(-20), F(63)),
    (F(63), F(-60), F(-20), F(-6), F(20), F(2),
     F(-60), F(20), F(-20), F(60),
     F(63), F(-20), F(2), F(60), F(-105)),
)

# Trace K over 1/(2 a^2 b^2 c^2).
_K_TRACE = (
    F(-21, 16), F(5, 4), F(5, 4), F(1, 8), F(-5, 4), F(1, 8),
    F(5, 4), F(-5, 4), F(-5, 4), F(5, 4),
    F(-21, 16), F(5, 4), F(1, 8), F(5, 4), F(-21, 16),
)

# Float mirrors, used whenever any input is a float.
_RICCI_F = tuple(tuple(float(v) for v in row) for row in _RICCI)
_SCALAR_F = tuple(float(v) for v in _SCALAR)
_J_F = tuple(tuple(float(v) for v in row) for row in _J)
_H_F = tuple(tuple(float(v) for v in row) for row in _H)
_K_F = tuple(tuple(float(v) for v in row) for row in _K)
_K_TRACE_F = tuple(float(v) for v in _K_TRACE)


def _exact(sc: StructureConstants, m: MilnorMetric) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in m.as_tuple())


def _xyz(sc: StructureConstants, m: MilnorMetric):
    return sc.lam * m.a, sc.mu * m.b, sc.nu * m.c


def _deg2(x, y, z):
    return (x * x, y * y, z * z, x * y, x * z, y * z)


def _deg4(x, y, z):
    x2, y2, z2 = x * x, y * y, z * z
    return (
        x2 * x2, x2 * x * y, x2 * x * z, x2 * y2, x2 * y * z, x2 * z2,
        x * y2 * y, x * y2 * z, x * y * z2, x * z2 * z,
        y2 * y2, y2 * y * z, y2 * z2, y * z2 * z, z2 * z2,
    )


def _dot(coeffs, monomials):
    total = coeffs[0] * monomials[0]
    for c, mono in zip(coeffs[1:], monomials[1:]):
        total = total + c * mono
    return total


def _exact_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def ricci_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Diagonal orthonormal-frame Ricci components."""
    exact = _exact(sc, m)
    mono = _deg2(*_xyz(sc, m))
    table = _RICCI if exact else _RICCI_F
    den = 2 * m.a * m.b * m.c
    return FrameDiagonal(*(_dot(row, mono) / den for row in table))


def scalar_curvature(sc: StructureConstants, m: MilnorMetric) -> Number:
    """Scalar curvature R; equals the trace of ricci_frame."""
    exact = _exact(sc, m)
    mono = _deg2(*_xyz(sc, m))
    return _dot(_SCALAR if exact else _SCALAR_F, mono) / (2 * m.a * m.b * m.c)


def schouten_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Schouten components S^a = Ric^a - (R/4) e^a."""
    ric = ricci_frame(sc, m)
    quarter_r = scalar_curvature(sc, m) / 4
    return FrameDiagonal(ric.f1 - quarter_r, ric.f2 - quarter_r, ric.f3 - quarter_r)


def cotton_star_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Hodge-dual Cotton one-form components; identically traceless.

    Involves (abc)^(3/2): the exact path survives only when abc is a perfect
    rational square, otherwise the result falls back to floats.
    """
    x, y, z = _xyz(sc, m)
    p1 = -x * x * (-2 * x + y + z) - (y + z) * (y - z) ** 2
    p2 = -y * y * (x - 2 * y + z) - (x + z) * (x - z) ** 2
    p3 = -z * z * (x + y - 2 * z) - (x + y) * (x - y) ** 2
    vol = m.a * m.b * m.c
    if _exact(sc, m):
        root = _exact_sqrt(Fraction(vol))
        if root is not None:
            den = 2 * vol * root
            return FrameDiagonal(p1 / den, p2 / den, p3 / den)
    den = 2.0 * float(vol) * math.sqrt(float(vol))
    return FrameDiagonal(float(p1) / den, float(p2) / den, float(p3) / den)


def j_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Components of the J one-form (quadratic-in-Schouten part of K)."""
    exact = _exact(sc, m)
    mono = _deg4(*_xyz(sc, m))
    table = _J if exact else _J_F
    v = m.a * m.b * m.c
    den = 4 * v * v
    return FrameDiagonal(*(_dot(row, mono) / den for row in table))


def h_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Components of the traceless Bach-like H one-form."""
    exact = _exact(sc, m)
    mono = _deg4(*_xyz(sc, m))
    table = _H if exact else _H_F
    v = m.a * m.b * m.c
    den = 4 * v * v
    return FrameDiagonal(*(_dot(row, mono) / den for row in table))


def k_frame(sc: StructureConstants, m: MilnorMetric) -> FrameDiagonal:
    """Components of the fourth-order K one-form, K = 2(J + H)."""
    exact = _exact(sc, m)
    mono = _deg4(*_xyz(sc, m))
    table = _K if exact else _K_F
    v = m.a * m.b * m.c
    den = -32 * v * v
    return FrameDiagonal(*(_dot(row, mono) / den for row in table))


def k_trace(sc: StructureConstants, m: MilnorMetric) -> Number:
    """Trace K = (3/8) R^2 - |Ric|^2; equals the sum of k_frame components."""
    exact = _exact(sc, m)
    mono = _deg4(*_xyz(sc, m))
    v = m.a * m.b * m.c
    return _dot(_K_TRACE if exact else _K_TRACE_F, mono) / (2 * v * v)


def frame_to_coordinate(f: FrameDiagonal, m: MilnorMetric) -> Tuple[Number, Number, Number]:
    """Coordinate-basis diagonal components (f1*a, f2*b, f3*c)."""
    return (f.f1 * m.a, f.f2 * m.b, f.f3 * m.c)
