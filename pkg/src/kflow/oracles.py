"""Closed-form flow solutions and conserved quantities, used as ground truth.

Every oracle is tagged with the convention its formula is written in: the
Bianchi-class forms (round sphere, Sol degenerate locus, Nil) are FRAME
convention; the shrinking-scale and product solutions are METRIC convention.
Comparisons against integrated trajectories must match conventions.

The Nil solution is reconstructed from its two conservation laws,
    a^{6/5} b c = const   and   b^2 c^2 / a^2 = (231/8) t + const,
which give a(t) = a0 (Q0/Q)^{5/22}, b(t) = b0 (Q/Q0)^{3/22} and likewise for
c, with Q(t) = (231/8) t + Q0.  (The published prefactors of a(t), b(t) do
not satisfy the initial condition unless a0 = 1; the form used here does,
and is validated against the flow equations by finite differences.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .dynamics import FlowConvention
from .milnor import MilnorMetric, StructureConstants

__all__ = [
    "OracleSolution",
    "einstein_shrinker",
    "ancient_sphere",
    "h3_solution",
    "product_solution",
    "nil_solution",
    "sol_degenerate_solution",
    "round_sphere_solution",
    "conserved",
    "nil_affine_invariant",
    "degenerate_limit_values",
    "oracle_for_class",
]

_CONSERVED_CLASSES = ("isom_r2", "sol", "nil")


@dataclass(frozen=True)
class OracleSolution:
    """A closed-form trajectory: coefficients(t) on [0, singularity_time)."""

    family: str
    convention: FlowConvention
    initial: Tuple[float, ...]
    singularity_time: Optional[float]
    _evaluate: Callable[[float], Tuple[float, ...]]

    def at(self, t: float) -> Tuple[float, ...]:
        if self.singularity_time is not None and t >= self.singularity_time:
            raise ValueError(f"t={t} at or past singularity time {self.singularity_time}")
        return self._evaluate(t)


def round_sphere_solution(a0: float, t: float) -> float:
    """Round-sphere scale a(t), FRAME convention: a^2 = a0^2 - t/8."""
    if not a0 > 0:
        raise ValueError("a0 must be positive")
    s = a0 * a0 - t / 8.0
    if s <= 0:
        raise ValueError(f"t={t} at or past extinction time {8.0 * a0 * a0}")
    return math.sqrt(s)


def einstein_shrinker(a0: float, lam: float, t: float) -> float:
    """Einstein-metric scale a(t), METRIC convention: a^4 = a0^4 - lam^2 t."""
    if not a0 > 0:
        raise ValueError("a0 must be positive")
    if lam == 0:
        raise ValueError("lam must be nonzero (Ricci-flat metrics are stationary)")
    s = a0**4 - lam * lam * t
    if s <= 0:
        raise ValueError(f"t={t} at or past singularity time {a0**4 / (lam * lam)}")
    return s**0.25


def ancient_sphere(r0: float, t: float) -> float:
    """Ancient round-sphere radius r(t) = (r0^4 - t)^(1/4), defined on (-inf, r0^4)."""
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    s = r0**4 - t
    if s <= 0:
        raise ValueError(f"t={t} at or past singularity time {r0**4}")
    return s**0.25


def h3_solution(a0: float, t: float) -> float:
    """Hyperbolic-space scale a(t), METRIC convention: a^2 = a0^2 - t."""
    if not a0 > 0:
        raise ValueError("a0 must be positive")
    s = a0 * a0 - t
    if s <= 0:
        raise ValueError(f"t={t} at or past singularity time {a0 * a0}")
    return math.sqrt(s)


def product_solution(a0: float, b0: float, t: float) -> Tuple[float, float]:
    """(a, b) for the product geometries, METRIC convention.

    b^2 = b0^2 + t and a*b = a0*b0 (the pancake law); serves both the
    hyperbolic and spherical products.
    """
    if not (a0 > 0 and b0 > 0):
        raise ValueError("a0, b0 must be positive")
    if t < 0:
        raise ValueError("product solution is stated for t >= 0")
    b = math.sqrt(b0 * b0 + t)
    return (a0 * b0 / b, b)


def nil_solution(a0: float, b0: float, c0: float, t: float) -> Tuple[float, float, float]:
    """(a, b, c) for the nilpotent class, FRAME convention, valid for t >= 0."""
    if not (a0 > 0 and b0 > 0 and c0 > 0):
        raise ValueError("initial coefficients must be positive")
    if t < 0:
        raise ValueError("nil solution is stated for t >= 0")
    q0 = (b0 * c0 / a0) ** 2
    q = 231.0 / 8.0 * t + q0
    shrink = (q0 / q) ** (5.0 / 22.0)
    grow = (q / q0) ** (3.0 / 22.0)
    return (a0 * shrink, b0 * grow, c0 * grow)


def sol_degenerate_solution(a_eq: float, b0: float, t: float) -> Tuple[float, float]:
    """(a, b) on the a = c locus of the solvable class, FRAME convention.

    b^2 = b0^2 + 30 t and a = a_eq * b0^(1/3) * b^(-1/3); only the locus
    where the two equal coefficients have merged is covered, so a single
    a value is accepted rather than an (a, c) pair.
    """
    if not (a_eq > 0 and b0 > 0):
        raise ValueError("coefficients must be positive")
    if t < 0:
        raise ValueError("degenerate solution is stated for t >= 0")
    b = math.sqrt(b0 * b0 + 30.0 * t)
    return (a_eq * b0 ** (1.0 / 3.0) * b ** (-1.0 / 3.0), b)


def _class_name(sc_class) -> str:
    if isinstance(sc_class, StructureConstants):
        name = sc_class.class_name()
        if name is None:
            raise ValueError(f"no named class for structure constants {sc_class}")
        return name
    return str(sc_class).lower()


def conserved(sc_class, m: MilnorMetric) -> float:
    """The conserved combination of a class that has one.

    isom_r2: a b c^(2/3);  sol: a b^(2/3) c;  nil: a^(6/5) b c.
    """
    name = _class_name(sc_class)
    a, b, c = (float(v) for v in m.as_tuple())
    if name == "isom_r2":
        return a * b * c ** (2.0 / 3.0)
    if name == "sol":
        return a * b ** (2.0 / 3.0) * c
    if name == "nil":
        return a ** (6.0 / 5.0) * b * c
    raise ValueError(f"class {name!r} has no implemented conserved quantity "
                     f"(supported: {_CONSERVED_CLASSES})")


def nil_affine_invariant(m: MilnorMetric, t: float) -> float:
    """b^2 c^2 / a^2 - (231/8) t, constant along nilpotent-class flows."""
    a, b, c = (float(v) for v in m.as_tuple())
    return (b * c / a) ** 2 - 231.0 / 8.0 * t


def degenerate_limit_values(sc_class, **params) -> dict:
    """Printed asymptotic/limit values of R and trace K per class.

    sl2r (needs a, c): trace K on the a=b locus and its c->0 limit.
    sol (needs b): values on the a=c locus.
    nil (needs a0, b0, c0, t): decay laws along the closed-form solution.
    """
    name = _class_name(sc_class)
    if name == "sl2r":
        a, c = params["a"], params["c"]
        return {
            "k_trace_a_eq_b": (-16.0 * a * a - 40.0 * a * c - 21.0 * c * c) / (32.0 * a**4),
            "k_trace_c_to_zero": -1.0 / (2.0 * a * a),
        }
    if name == "sol":
        b = params["b"]
        return {"r": -2.0 / b, "k_trace": -5.0 / (2.0 * b * b)}
    if name == "nil":
        q = 231.0 / 8.0 * params["t"] + (params["b0"] * params["c0"] / params["a0"]) ** 2
        return {"r": -0.5 * q ** -0.5, "k_trace": -21.0 / 32.0 / q}
    raise ValueError(f"class {name!r} has no printed limit values")


def oracle_for_class(name: str, y0) -> OracleSolution:
    """Closed-form oracle matching an integrable class and initial state.

    Raises ValueError for class/state combinations without a printed closed
    form (general sl2r or isom_r2 flows, anisotropic su2, sol off the a=c
    locus).
    """
    key = name.lower()
    y0 = tuple(float(v) for v in y0)

    if key == "su2":
        a0, b0, c0 = y0
        if not (a0 == b0 == c0):
            raise ValueError("su2 closed form covers only the round locus a0 = b0 = c0")
        return OracleSolution("su2", FlowConvention.FRAME, y0, 8.0 * a0 * a0,
                              lambda t: (round_sphere_solution(a0, t),) * 3)
    if key == "nil":
        a0, b0, c0 = y0
        return OracleSolution("nil", FlowConvention.FRAME, y0, None,
                              lambda t: nil_solution(a0, b0, c0, t))
    if key == "sol":
        a0, b0, c0 = y0
        if a0 != c0:
            raise ValueError("sol closed form covers only the degenerate locus a0 = c0")

        def _eval(t, a0=a0, b0=b0):
            a, b = sol_degenerate_solution(a0, b0, t)
            return (a, b, a)

        return OracleSolution("sol", FlowConvention.FRAME, y0, None, _eval)
    if key == "r3":
        return OracleSolution("r3", FlowConvention.FRAME, y0, None, lambda t: y0)
    if key == "h3":
        (a0,) = y0
        return OracleSolution("h3", FlowConvention.METRIC, y0, a0 * a0,
                              lambda t: (h3_solution(a0, t),))
    if key in ("h2xr", "s2xr"):
        a0, b0 = y0
        return OracleSolution(key, FlowConvention.METRIC, y0, None,
                              lambda t: product_solution(a0, b0, t))
    raise ValueError(f"class {name!r} has no closed-form oracle")
