"""Right-hand sides of the flow ODE systems for all model geometries.

Two non-equivalent statements of the flow coexist and differ by a factor of
two in time parametrization:

* FRAME:  d/dt e^a = -K^a, giving da/dt = -2 a k1 etc.  This is the form the
  Bianchi-class ODE systems are written in, so the printed polynomials are
  reproduced verbatim with this convention.
* METRIC: d/dt g_ij = -K_ij, half the FRAME right-hand side.  The reduced
  (non-Bianchi) families and the shrinking-scale solutions use this form.

Every velocity is labeled with its convention; nothing here guesses which
one is canonical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .milnor import BIANCHI_CLASSES, MilnorMetric, StructureConstants

__all__ = [
    "FlowConvention",
    "GeometryFamily",
    "Velocity",
    "bianchi_rhs",
    "normalized_rhs",
    "reduced_rhs",
    "bianchi_system",
    "reduced_system",
    "reduced_scalars",
    "GEOMETRY_NAMES",
]

REDUCED_NAMES = ("h3", "h2xr", "s2xr")
GEOMETRY_NAMES = tuple(sorted(BIANCHI_CLASSES)) + REDUCED_NAMES


class FlowConvention(enum.Enum):
    FRAME = "frame"
    METRIC = "metric"

    @classmethod
    def parse(cls, text: str) -> "FlowConvention":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown flow convention {text!r}; expected 'frame' or 'metric'") from None


@dataclass(frozen=True)
class GeometryFamily:
    """A model geometry: a Bianchi class or one of the reduced families."""

    tag: str  # "bianchi" | "h3" | "h2xr" | "s2xr"
    constants: Optional[StructureConstants] = None

    def __post_init__(self):
        if self.tag == "bianchi":
            if self.constants is None:
                raise ValueError("bianchi family requires structure constants")
        elif self.tag in REDUCED_NAMES:
            if self.constants is not None:
                raise ValueError(f"{self.tag} family carries no structure constants")
        else:
            raise ValueError(f"unknown family tag {self.tag!r}")

    @classmethod
    def bianchi(cls, sc: StructureConstants) -> "GeometryFamily":
        return cls("bianchi", sc)

    @classmethod
    def from_name(cls, name: str) -> "GeometryFamily":
        key = name.lower()
        if key in REDUCED_NAMES:
            return cls(key)
        return cls.bianchi(StructureConstants.from_name(key))

    @property
    def is_bianchi(self) -> bool:
        return self.tag == "bianchi"

    def dimension(self) -> int:
        """Number of evolving metric coefficients."""
        if self.is_bianchi:
            return 3
        return 1 if self.tag == "h3" else 2

    def default_convention(self) -> FlowConvention:
        # Matches the form each system is printed in.
        return FlowConvention.FRAME if self.is_bianchi else FlowConvention.METRIC


@dataclass(frozen=True)
class Velocity:
    """Time derivatives of the metric coefficients; unused slots are zero."""

    da: float
    db: float = 0.0
    dc: float = 0.0

    def as_tuple(self):
        return (self.da, self.db, self.dc)


# Bianchi ODE system, FRAME convention:
#   da/dt = a/(16 a^2 b^2 c^2) * P1(x, y, z),   x = lam*a, y = mu*b, z = nu*c,
# with P1, P2, P3 the degree-4 polynomials below (same monomial order as
# kflow.milnor: x^4, x^3 y, x^3 z, x^2 y^2, x^2 y z, x^2 z^2, x y^3, x y^2 z,
# x y z^2, x z^3, y^4, y^3 z, y^2 z^2, y z^3, z^4).
_ODE_ROWS = (
    (-105.0, 60.0, 60.0, 2.0, -20.0, 2.0, -20.0, 20.0, 20.0, -20.0,
     63.0, -60.0, -6.0, -60.0, 63.0),
    (63.0, -20.0, -60.0, 2.0, 20.0, -6.0, 60.0, -20.0, 20.0, -60.0,
     -105.0, 60.0, 2.0, -20.0, 63.0),
    (63.0, -60.0, -20.0, -6.0, 20.0, 2.0, -60.0, 20.0, -20.0, 60.0,
     63.0, -20.0, 2.0, 60.0, -105.0),
)

# Exponents of (lam, mu, nu) carried by each monomial position.
_SIGN_EXP = (
    (4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1), (2, 0, 2),
    (1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3),
    (0, 4, 0), (0, 3, 1), (0, 2, 2), (0, 1, 3), (0, 0, 4),
)


def _deg4_monomials(a, b, c):
    a2, b2, c2 = a * a, b * b, c * c
    return (
        a2 * a2, a2 * a * b, a2 * a * c, a2 * b2, a2 * b * c, a2 * c2,
        a * b2 * b, a * b2 * c, a * b * c2, a * c2 * c,
        b2 * b2, b2 * b * c, b2 * c2, b * c2 * c, c2 * c2,
    )


def _fold_row(row, lam, mu, nu):
    return tuple(r * float(lam ** i * mu ** j * nu ** k)
                 for r, (i, j, k) in zip(row, _SIGN_EXP))


def _folded_rows(sc: StructureConstants):
    """Per-component coefficient rows with structure-constant signs folded in.

    All three components use the first printed row under the cyclic axis
    rotation (an exact identity of the system, covered by tests).  Evaluating
    one instruction sequence three times makes velocities at symmetric states
    bit-identical, so isotropic metrics are exact fixed points of the
    volume-normalized flow.
    """
    lam, mu, nu = sc.as_tuple()
    return (_fold_row(_ODE_ROWS[0], lam, mu, nu),
            _fold_row(_ODE_ROWS[0], mu, nu, lam),
            _fold_row(_ODE_ROWS[0], nu, lam, mu))


def _frame_velocity(rows, a, b, c):
    vol2 = (a * b * c) ** 2
    p1 = sum(r * m for r, m in zip(rows[0], _deg4_monomials(a, b, c)))
    p2 = sum(r * m for r, m in zip(rows[1], _deg4_monomials(b, c, a)))
    p3 = sum(r * m for r, m in zip(rows[2], _deg4_monomials(c, a, b)))
    return (a * p1 / (16.0 * vol2), b * p2 / (16.0 * vol2), c * p3 / (16.0 * vol2))


def _project_volume(x, v):
    """Remove the volume mode: v_i -> x_i * (v_i/x_i - mean log-rate)."""
    r = (v[0] / x[0], v[1] / x[1], v[2] / x[2])
    if r[0] == r[1] == r[2]:
        return (0.0, 0.0, 0.0)
    mean = (r[0] + r[1] + r[2]) / 3.0
    return (x[0] * (r[0] - mean), x[1] * (r[1] - mean), x[2] * (r[2] - mean))


def bianchi_rhs(sc: StructureConstants, m: MilnorMetric,
                conv: FlowConvention = FlowConvention.FRAME) -> Velocity:
    """Flow velocity of a Bianchi-class metric in the requested convention."""
    va, vb, vc = _frame_velocity(_folded_rows(sc), float(m.a), float(m.b), float(m.c))
    if conv is FlowConvention.METRIC:
        va, vb, vc = 0.5 * va, 0.5 * vb, 0.5 * vc
    return Velocity(va, vb, vc)


def normalized_rhs(sc: StructureConstants, m: MilnorMetric) -> Velocity:
    """Volume-preserving projection of the FRAME-convention velocity.

    v_i -> v_i - (x_i/3) * sum_j v_j/x_j, which keeps abc exactly constant
    and leaves isotropic metrics fixed.
    """
    x = (float(m.a), float(m.b), float(m.c))
    v = _frame_velocity(_folded_rows(sc), *x)
    return Velocity(*_project_volume(x, v))


def reduced_rhs(fam: GeometryFamily, coeffs: Sequence[float],
                conv: FlowConvention = FlowConvention.METRIC) -> Velocity:
    """Flow velocity of a reduced (non-Bianchi) family.

    H3 evolves the single scale a with da/dt = -1/(2a); the product families
    evolve (a, b) with da/dt = -a/(2b^2), db/dt = 1/(2b) (identical for both
    products).  These are METRIC-convention equations; FRAME doubles them.
    """
    if fam.is_bianchi:
        raise ValueError("reduced_rhs does not handle Bianchi classes; use bianchi_rhs")
    coeffs = [float(v) for v in coeffs]
    if len(coeffs) != fam.dimension():
        raise ValueError(f"{fam.tag} expects {fam.dimension()} coefficients, got {len(coeffs)}")
    if any(not v > 0 for v in coeffs):
        raise ValueError("metric coefficients must be strictly positive")
    if fam.tag == "h3":
        vel = Velocity(-1.0 / (2.0 * coeffs[0]))
    else:
        a, b = coeffs
        vel = Velocity(-a / (2.0 * b * b), 1.0 / (2.0 * b))
    if conv is FlowConvention.FRAME:
        vel = Velocity(2.0 * vel.da, 2.0 * vel.db, 2.0 * vel.dc)
    return vel


def bianchi_system(sc: StructureConstants,
                   conv: FlowConvention = FlowConvention.FRAME,
                   normalized: bool = False) -> Callable[[np.ndarray], np.ndarray]:
    """Fast RHS closure over y = (a, b, c) for the integrator."""
    rows = _folded_rows(sc)
    scale = 0.5 if conv is FlowConvention.METRIC else 1.0

    if normalized:
        def rhs(y: np.ndarray) -> np.ndarray:
            a, b, c = y
            v = _frame_velocity(rows, a, b, c)
            return scale * np.array(_project_volume((a, b, c), v))
    else:
        def rhs(y: np.ndarray) -> np.ndarray:
            a, b, c = y
            return scale * np.array(_frame_velocity(rows, a, b, c))

    return rhs


def reduced_system(fam: GeometryFamily,
                   conv: FlowConvention = FlowConvention.METRIC) -> Callable[[np.ndarray], np.ndarray]:
    """RHS closure for a reduced family (1 or 2 coefficients)."""
    if fam.is_bianchi:
        raise ValueError("use bianchi_system for Bianchi classes")
    scale = 2.0 if conv is FlowConvention.FRAME else 1.0
    if fam.tag == "h3":
        def rhs(y: np.ndarray) -> np.ndarray:
            return np.array([scale * (-1.0 / (2.0 * y[0]))])
    else:
        def rhs(y: np.ndarray) -> np.ndarray:
            a, b = y
            return scale * np.array([-a / (2.0 * b * b), 1.0 / (2.0 * b)])
    return rhs


def reduced_scalars(fam: GeometryFamily, coeffs: Sequence[float]):
    """(R, trace K) of a reduced-family metric."""
    if fam.is_bianchi:
        raise ValueError("use kflow.milnor for Bianchi classes")
    coeffs = [float(v) for v in coeffs]
    if fam.tag == "h3":
        a = coeffs[0]
        return (-6.0 / a, 1.5 / (a * a))
    b = coeffs[1]
    r = -2.0 / b if fam.tag == "h2xr" else 2.0 / b
    return (r, -0.5 / (b * b))
