"""Entropy density, homogeneous evolution identities, and scaling diagnostics.

The scalar evolution equations below are the homogeneous specializations of
the general trace flow equations (all laplacian and double-gradient terms
drop), pinned to the METRIC convention d/dt g = -K: the round-sphere family
satisfies dR/dt = 3/(64 a^3) exactly with da/dt = -1/(32 a), not the doubled
FRAME rate.  Comparing against FRAME trajectories therefore yields exactly
twice these formulas, which the test suite records as a convention witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from . import milnor
from .dynamics import FlowConvention, bianchi_rhs
from .milnor import MilnorMetric, StructureConstants, frame_to_coordinate

__all__ = [
    "WeightEntry",
    "WeightReport",
    "f2_functional",
    "entropy",
    "r_dot_homogeneous",
    "k_dot_homogeneous",
    "j_dot_homogeneous",
    "volume_rate",
    "scale_weight_report",
    "fixed_point_residual",
    "f2_rate_along_flow",
    "EXPECTED_WEIGHTS",
]


def f2_functional(sc: StructureConstants, m: MilnorMetric) -> float:
    """Quadratic-action density per unit coordinate volume: K * sqrt(abc)."""
    return float(milnor.k_trace(sc, m)) * math.sqrt(float(m.volume()))


def entropy(sc: StructureConstants, m: MilnorMetric) -> float:
    return -f2_functional(sc, m)


def _frame_scalars(sc, m):
    s = milnor.schouten_frame(sc, m).as_tuple()
    k = milnor.k_frame(sc, m).as_tuple()
    j = milnor.j_frame(sc, m).as_tuple()
    return ([float(v) for v in s], [float(v) for v in k], [float(v) for v in j])


def _connection(sc, m):
    """Orthonormal-frame connection coefficients G[k][i][j] = <nabla_{E_i}E_j, E_k>."""
    lam, mu, nu = sc.as_tuple()
    a, b, c = (float(v) for v in m.as_tuple())
    n1 = lam * math.sqrt(a / (b * c))
    n2 = mu * math.sqrt(b / (a * c))
    n3 = nu * math.sqrt(c / (a * b))
    g = [[[0.0] * 3 for _ in range(3)] for _ in range(3)]
    g[2][0][1] = 0.5 * (n3 - n1 + n2)
    g[2][1][0] = 0.5 * (-n3 - n1 + n2)
    g[1][0][2] = 0.5 * (-n2 + n1 - n3)
    g[1][2][0] = 0.5 * (n2 + n1 - n3)
    g[0][1][2] = 0.5 * (n1 - n2 + n3)
    g[0][2][1] = 0.5 * (-n1 - n2 + n3)
    return g


def tensor_laplacian_diag(sc: StructureConstants, m: MilnorMetric, diag) -> tuple:
    """Frame laplacian of a diagonal left-invariant symmetric tensor.

    Left-invariant tensors have constant frame components but are not
    covariantly parallel, so their laplacian is generally nonzero; it stays
    diagonal and algebraic in (a, b, c).
    """
    g = _connection(sc, m)
    t = [float(v) for v in diag]
    # (DT)[c][a][b] = -G[d][c][a] T[d][b] - G[d][c][b] T[a][d], T diagonal
    dt = [[[-(g[bb][cc][aa] * t[bb] + g[aa][cc][bb] * t[aa])
            for bb in range(3)] for aa in range(3)] for cc in range(3)]
    out = []
    for aa in range(3):
        acc = 0.0
        for cc in range(3):
            acc -= sum(g[e][cc][aa] * dt[cc][e][aa] + g[e][cc][aa] * dt[cc][aa][e]
                       for e in range(3))
        out.append(acc)
    return tuple(out)


def r_dot_homogeneous(sc: StructureConstants, m: MilnorMetric) -> float:
    """dR/dt along the METRIC-convention flow: [SK] + S*K (laplacian term absent)."""
    s, k, _ = _frame_scalars(sc, m)
    sk = sum(si * ki for si, ki in zip(s, k))
    return sk + float(milnor.scalar_curvature(sc, m)) / 4.0 * float(milnor.k_trace(sc, m))


def k_dot_homogeneous(sc: StructureConstants, m: MilnorMetric) -> float:
    """d(trace K)/dt along the METRIC-convention flow.

    -2[KJ] + 3K^2 + 6[SKS] - 3S[SK] - S^2 K - [S:Delta K] with frame
    contractions [KJ] = sum k_a j_a, [SK] = sum s_a k_a, [SKS] = sum
    s_a^2 k_a.  The scalar-laplacian terms of the general equation vanish
    on homogeneous metrics, but the tensor laplacian of K does not (a
    left-invariant tensor is not parallel), so its Schouten contraction
    stays.
    """
    s, k, j = _frame_scalars(sc, m)
    big_k = float(milnor.k_trace(sc, m))
    big_s = float(milnor.scalar_curvature(sc, m)) / 4.0
    kj = sum(ki * ji for ki, ji in zip(k, j))
    sk = sum(si * ki for si, ki in zip(s, k))
    sks = sum(si * si * ki for si, ki in zip(s, k))
    s_lap_k = sum(si * li for si, li in zip(s, tensor_laplacian_diag(sc, m, k)))
    return (-2.0 * kj + 3.0 * big_k * big_k + 6.0 * sks
            - 3.0 * big_s * sk - big_s * big_s * big_k - s_lap_k)


def j_dot_homogeneous(sc: StructureConstants, m: MilnorMetric) -> float:
    """d(trace J)/dt along the METRIC-convention flow; equals k_dot/2.

    -[KJ] + 3*K*J + 3[SKS] - (3/2)S[SK] - (1/2)S^2 K - (1/2)[S:Delta K],
    with J the trace of the J one-form.
    """
    s, k, j = _frame_scalars(sc, m)
    big_k = float(milnor.k_trace(sc, m))
    big_s = float(milnor.scalar_curvature(sc, m)) / 4.0
    big_j = sum(j)
    kj = sum(ki * ji for ki, ji in zip(k, j))
    sk = sum(si * ki for si, ki in zip(s, k))
    sks = sum(si * si * ki for si, ki in zip(s, k))
    s_lap_k = sum(si * li for si, li in zip(s, tensor_laplacian_diag(sc, m, k)))
    return (-kj + 3.0 * big_k * big_j + 3.0 * sks
            - 1.5 * big_s * sk - 0.5 * big_s * big_s * big_k - 0.5 * s_lap_k)


def volume_rate(sc: StructureConstants, m: MilnorMetric,
                conv: FlowConvention = FlowConvention.METRIC) -> float:
    """d(abc)/dt from the determinant flow: -kappa * K * abc."""
    kappa = 2.0 if conv is FlowConvention.FRAME else 1.0
    return -kappa * float(milnor.k_trace(sc, m)) * float(m.volume())


@dataclass(frozen=True)
class WeightEntry:
    measured: float
    expected: Fraction


@dataclass(frozen=True)
class WeightReport:
    """Measured vs expected scaling exponents under (a,b,c) -> (La,Lb,Lc)."""

    scale: float
    entries: Dict[str, WeightEntry]

    def max_deviation(self) -> float:
        return max(abs(e.measured - float(e.expected)) for e in self.entries.values())


EXPECTED_WEIGHTS = {
    "scalar_curvature": Fraction(-1),
    "ricci_coordinate": Fraction(0),
    "cotton_coordinate": Fraction(-1, 2),
    "h_coordinate": Fraction(-1),
    "j_coordinate": Fraction(-1),
    "k_coordinate": Fraction(-1),
    "k_trace": Fraction(-2),
}


def _representative(values) -> float:
    best = max((float(v) for v in values), key=abs)
    if abs(best) < 1e-300:
        raise ValueError("quantity vanishes identically; scaling exponent undefined")
    return best


def scale_weight_report(sc: StructureConstants, m: MilnorMetric, scale: float) -> WeightReport:
    """Measure exponents ln(Q(L*m)/Q(m))/ln L for the coordinate-component zoo."""
    if not scale > 0 or scale == 1.0:
        raise ValueError("scale must be positive and distinct from 1")
    scaled = m.scaled(scale)
    log_l = math.log(scale)

    def coord(fn, metric):
        return frame_to_coordinate(fn(sc, metric), metric)

    quantities = {
        "scalar_curvature": (float(milnor.scalar_curvature(sc, m)),
                             float(milnor.scalar_curvature(sc, scaled))),
        "ricci_coordinate": (_representative(coord(milnor.ricci_frame, m)),
                             _representative(coord(milnor.ricci_frame, scaled))),
        "cotton_coordinate": (_representative(coord(milnor.cotton_star_frame, m)),
                              _representative(coord(milnor.cotton_star_frame, scaled))),
        "h_coordinate": (_representative(coord(milnor.h_frame, m)),
                         _representative(coord(milnor.h_frame, scaled))),
        "j_coordinate": (_representative(coord(milnor.j_frame, m)),
                         _representative(coord(milnor.j_frame, scaled))),
        "k_coordinate": (_representative(coord(milnor.k_frame, m)),
                         _representative(coord(milnor.k_frame, scaled))),
        "k_trace": (float(milnor.k_trace(sc, m)), float(milnor.k_trace(sc, scaled))),
    }
    entries = {}
    for name, (base, lifted) in quantities.items():
        if base == 0.0 or lifted == 0.0 or (base > 0) != (lifted > 0):
            raise ValueError(f"{name} vanishes or changes sign under scaling; "
                             "pick a less degenerate metric")
        entries[name] = WeightEntry(math.log(lifted / base) / log_l, EXPECTED_WEIGHTS[name])
    return WeightReport(scale, entries)


def fixed_point_residual(sc: StructureConstants, m: MilnorMetric) -> float:
    """max |k_frame| component; zero exactly at steady solitons (flat metrics)."""
    return max(abs(float(v)) for v in milnor.k_frame(sc, m).as_tuple())


def f2_rate_along_flow(sc: StructureConstants, m: MilnorMetric,
                       conv: FlowConvention = FlowConvention.METRIC,
                       step: float = 1e-6) -> float:
    """dF2/dt by a centered difference along the flow direction in state space."""
    v = bianchi_rhs(sc, m, conv).as_tuple()
    a, b, c = (float(x) for x in m.as_tuple())
    h = step * max(1.0, abs(a), abs(b), abs(c))
    plus = MilnorMetric(a + h * v[0], b + h * v[1], c + h * v[2])
    minus = MilnorMetric(a - h * v[0], b - h * v[1], c - h * v[2])
    return (f2_functional(sc, plus) - f2_functional(sc, minus)) / (2.0 * h)
