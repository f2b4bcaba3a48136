"""Seeded random invariant suite behind the `check` command.

Each check samples random structure constants from {-1,0,1}^3 and metric
coefficients from [0.1, 10], evaluates an identity, and reports the worst
relative deviation together with the first counterexample if the tolerance
is exceeded.  Identities that cancel catastrophically (K = 2(J+H) has
components tiny against the tensors entering them) are scaled by the
participating tensor norms, not the final value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, List, Optional

import numpy as np

from . import milnor
from .dynamics import FlowConvention, bianchi_rhs, normalized_rhs
from .evolution import j_dot_homogeneous, k_dot_homogeneous, volume_rate
from .milnor import MilnorMetric, StructureConstants
from .symbol import SymbolProbe, gauged_symbol, quadratic_form, tt_projection, ungauged_symbol

__all__ = ["CheckResult", "run_invariant_suite", "CHECK_NAMES"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    worst: float
    tolerance: float
    counterexample: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:34s} cases={self.cases:<6d} worst={self.worst:.3e} tol={self.tolerance:.1e}"


def _random_sc(rng) -> StructureConstants:
    return StructureConstants(*(int(v) for v in rng.integers(-1, 2, 3)))


def _random_metric(rng) -> MilnorMetric:
    return MilnorMetric(*(float(v) for v in rng.uniform(0.1, 10.0, 3)))


def _reldiff(lhs, rhs, scale) -> float:
    return abs(lhs - rhs) / max(scale, 1e-300)


def _term_scales(sc, m):
    """Magnitude of the degree-2 and degree-4 polynomial terms at (sc, m).

    Identities such as trace K = (3/8)R^2 - |Ric|^2 cancel catastrophically
    when the curvature polynomials do; deviations are meaningful relative to
    the term size, not the (possibly tiny) final value.  A wrong table
    coefficient still shows up at ~1e-2 on this scale.
    """
    a, b, c = (float(v) for v in m.as_tuple())
    s = abs(sc.lam) * a + abs(sc.mu) * b + abs(sc.nu) * c
    vol = a * b * c
    t2 = s * s / (2.0 * vol)
    t3 = s**3 / (2.0 * vol**1.5)
    t4 = s**4 / (vol * vol)
    return t2, t3, t4


class _Tracker:
    """Accumulates the worst deviation and its inputs."""

    def __init__(self, name: str, tolerance: float):
        self.name = name
        self.tolerance = tolerance
        self.worst = 0.0
        self.cases = 0
        self.witness: Optional[str] = None

    def update(self, deviation: float, describe: Callable[[], str]):
        self.cases += 1
        if deviation > self.worst:
            self.worst = deviation
            if deviation > self.tolerance:
                self.witness = describe()

    def result(self) -> CheckResult:
        passed = self.worst <= self.tolerance
        return CheckResult(self.name, passed, self.cases, self.worst, self.tolerance,
                           None if passed else self.witness)


def _fmt(sc, m) -> str:
    return (f"sc=({sc.lam},{sc.mu},{sc.nu}) metric=({float(m.a):.17g},"
            f"{float(m.b):.17g},{float(m.c):.17g})")


def _check_decomposition(rng, cases, fault=False):
    tr = _Tracker("k_equals_2_j_plus_h", 1e-12)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        m_rhs = MilnorMetric(m.a * (1 + 1e-6), m.b, m.c) if fault else m
        k = milnor.k_frame(sc, m).as_tuple()
        j = milnor.j_frame(sc, m_rhs).as_tuple()
        h = milnor.h_frame(sc, m_rhs).as_tuple()
        _, _, t4 = _term_scales(sc, m)
        scale = max(max(abs(v) for v in k), 2 * max(abs(v) for v in j),
                    2 * max(abs(v) for v in h), t4)
        dev = max(_reldiff(kk, 2 * (jj + hh), scale) for kk, jj, hh in zip(k, j, h))
        tr.update(dev, lambda: f"{_fmt(sc, m)} k={k} 2(j+h)={tuple(2*(jj+hh) for jj,hh in zip(j,h))}")
    return tr.result()


def _check_traceless_h(rng, cases):
    tr = _Tracker("h_traceless", 1e-12)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        h = milnor.h_frame(sc, m).as_tuple()
        scale = sum(abs(v) for v in h)
        dev = _reldiff(sum(h), 0.0, scale)
        tr.update(dev, lambda: f"{_fmt(sc, m)} trace={sum(h)}")
    return tr.result()


def _check_traceless_cotton(rng, cases):
    tr = _Tracker("cotton_traceless", 1e-12)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        c = milnor.cotton_star_frame(sc, m).as_tuple()
        scale = sum(abs(v) for v in c)
        dev = _reldiff(sum(c), 0.0, scale)
        tr.update(dev, lambda: f"{_fmt(sc, m)} trace={sum(c)}")
    return tr.result()


def _check_trace_consistency(rng, cases):
    tr = _Tracker("k_trace_consistency", 1e-12)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        kt = float(milnor.k_trace(sc, m))
        ksum = sum(milnor.k_frame(sc, m).as_tuple())
        r = float(milnor.scalar_curvature(sc, m))
        ric = milnor.ricci_frame(sc, m).as_tuple()
        quad = 0.375 * r * r - sum(v * v for v in ric)
        t2, _, t4 = _term_scales(sc, m)
        scale = max(abs(kt), abs(ksum), 0.375 * r * r, sum(v * v for v in ric), t2 * t2, t4)
        dev = max(_reldiff(kt, ksum, scale), _reldiff(kt, quad, scale))
        tr.update(dev, lambda: f"{_fmt(sc, m)} k_trace={kt} sum={ksum} quad={quad}")
    return tr.result()


_SCALING_WEIGHTS = (
    ("ricci", milnor.ricci_frame, -1.0),
    ("schouten", milnor.schouten_frame, -1.0),
    ("cotton", milnor.cotton_star_frame, -1.5),
    ("j", milnor.j_frame, -2.0),
    ("h", milnor.h_frame, -2.0),
    ("k", milnor.k_frame, -2.0),
)


def _check_frame_scaling(rng, cases):
    tr = _Tracker("frame_scaling_weights", 1e-12)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        # dyadic factors keep s*m exact, so only the weight structure is probed
        exponent = int(rng.integers(-3, 4))
        s = 2.0 ** (exponent if exponent != 0 else 1)
        ms = m.scaled(s)
        dev = 0.0
        for _name, fn, w in _SCALING_WEIGHTS:
            base = fn(sc, m).as_tuple()
            lifted = fn(sc, ms).as_tuple()
            scale = max(abs(v) for v in base) * s**w
            dev = max(dev, max(_reldiff(lv, bv * s**w, scale)
                               for lv, bv in zip(lifted, base)))
        r0, r1 = float(milnor.scalar_curvature(sc, m)), float(milnor.scalar_curvature(sc, ms))
        k0, k1 = float(milnor.k_trace(sc, m)), float(milnor.k_trace(sc, ms))
        dev = max(dev, _reldiff(r1, r0 / s, abs(r0) / s), _reldiff(k1, k0 / s**2, abs(k0) / s**2))
        tr.update(dev, lambda: f"{_fmt(sc, m)} scale={s}")
    return tr.result()


def _check_permutation_equivariance(rng, cases):
    tr = _Tracker("permutation_equivariance", 1e-12)
    perms = list(permutations(range(3)))
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        p = perms[int(rng.integers(len(perms)))]
        sct = sc.as_tuple()
        mt = m.as_tuple()
        scp = StructureConstants(*(sct[i] for i in p))
        mp = MilnorMetric(*(mt[i] for i in p))
        t2, t3, t4 = _term_scales(sc, m)
        dev = 0.0
        for fn, term_scale in ((milnor.ricci_frame, t2), (milnor.cotton_star_frame, t3),
                               (milnor.j_frame, t4), (milnor.h_frame, t4),
                               (milnor.k_frame, t4)):
            base = fn(sc, m).as_tuple()
            permuted = fn(scp, mp).as_tuple()
            scale = max(1e-300, max(abs(v) for v in base), term_scale)
            dev = max(dev, max(abs(permuted[j] - base[p[j]]) / scale for j in range(3)))
        tr.update(dev, lambda: f"{_fmt(sc, m)} perm={p}")
    return tr.result()


def _check_flat_class_zero(rng, cases):
    tr = _Tracker("flat_class_exactly_zero", 0.0)
    sc = StructureConstants.r3()
    for _ in range(cases):
        m = _random_metric(rng)
        vals = []
        for fn in (milnor.ricci_frame, milnor.cotton_star_frame, milnor.j_frame,
                   milnor.h_frame, milnor.k_frame):
            vals.extend(fn(sc, m).as_tuple())
        vals.append(milnor.scalar_curvature(sc, m))
        vals.append(milnor.k_trace(sc, m))
        vals.extend(bianchi_rhs(sc, m).as_tuple())
        dev = max(abs(float(v)) for v in vals)
        tr.update(dev, lambda: f"{_fmt(sc, m)}")
    return tr.result()


def _check_constant_curvature(rng, cases):
    tr = _Tracker("round_k_equals_r2_over_24", 1e-13)
    sc = StructureConstants.su2()
    for _ in range(cases):
        a = float(rng.uniform(0.1, 10.0))
        m = MilnorMetric(a, a, a)
        r = float(milnor.scalar_curvature(sc, m))
        kt = float(milnor.k_trace(sc, m))
        dev = _reldiff(kt, r * r / 24.0, abs(kt))
        tr.update(dev, lambda: f"a={a}")
    return tr.result()


def _check_rhs_consistency(rng, cases):
    tr = _Tracker("rhs_matches_k_frame", 1e-13)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        v = bianchi_rhs(sc, m, FlowConvention.FRAME).as_tuple()
        f = milnor.k_frame(sc, m).as_tuple()
        coeffs = [float(x) for x in m.as_tuple()]
        ref = tuple(-2.0 * x * float(fi) for x, fi in zip(coeffs, f))
        scale = max(1e-300, max(abs(x) for x in ref))
        dev = max(abs(a - b) / scale for a, b in zip(v, ref))
        vm = bianchi_rhs(sc, m, FlowConvention.METRIC).as_tuple()
        if any(b != 0.5 * a for a, b in zip(v, vm)):
            dev = max(dev, 1.0)
        tr.update(dev, lambda: f"{_fmt(sc, m)} rhs={v} -2xk={ref}")
    return tr.result()


def _check_su2_rhs_symmetry(rng, cases):
    tr = _Tracker("su2_rhs_permutation_symmetry", 1e-13)
    sc = StructureConstants.su2()
    perms = list(permutations(range(3)))
    for _ in range(cases):
        m = _random_metric(rng)
        p = perms[int(rng.integers(len(perms)))]
        mt = m.as_tuple()
        v = bianchi_rhs(sc, m).as_tuple()
        vp = bianchi_rhs(sc, MilnorMetric(*(mt[i] for i in p))).as_tuple()
        _, _, t4 = _term_scales(sc, m)
        scale = max(1e-300, max(abs(x) for x in v), max(float(x) for x in mt) * t4 / 8.0)
        dev = max(abs(vp[j] - v[p[j]]) / scale for j in range(3))
        tr.update(dev, lambda: f"{_fmt(sc, m)} perm={p}")
    return tr.result()


def _check_normalized_projection(rng, cases):
    tr = _Tracker("normalized_volume_preserving", 1e-13)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        v = normalized_rhs(sc, m).as_tuple()
        coeffs = [float(x) for x in m.as_tuple()]
        log_rate = sum(vi / xi for vi, xi in zip(v, coeffs))
        raw = bianchi_rhs(sc, m).as_tuple()
        scale = max(1e-300, sum(abs(vi / xi) for vi, xi in zip(raw, coeffs)))
        tr.update(abs(log_rate) / scale, lambda: f"{_fmt(sc, m)} log_rate={log_rate}")
        # isotropic metrics are exact fixed points of the normalized su2 flow
        a = coeffs[0]
        iso = normalized_rhs(StructureConstants.su2(), MilnorMetric(a, a, a)).as_tuple()
        if any(x != 0.0 for x in iso):
            tr.update(1.0, lambda: f"round a={a} -> {iso}")
    return tr.result()


def _check_symbol(rng, cases):
    tr = _Tracker("symbol_identities", 1e-12)
    for _ in range(cases):
        z = rng.normal(size=3)
        n2 = float(z @ z)
        if n2 < 1e-6:
            continue
        h = rng.normal(size=(3, 3))
        h = 0.5 * (h + h.T)
        gauge = SymbolProbe(z, np.outer(z, z))
        dev = abs(quadratic_form("gauged", gauge) / n2**4 - 0.75)
        dev = max(dev, abs(quadratic_form("ungauged", gauge)) / n2**4)
        htt = tt_projection(z, h)
        scale = max(1e-300, n2**2 * float(np.abs(htt).max()))
        for fn in (ungauged_symbol, gauged_symbol):
            dev = max(dev, float(np.abs(fn(SymbolProbe(z, htt)) - n2**2 * htt).max()) / scale)
            # linearity
            h2 = rng.normal(size=(3, 3))
            h2 = 0.5 * (h2 + h2.T)
            lhs = fn(SymbolProbe(z, 0.7 * h + 1.3 * h2))
            rhs = 0.7 * fn(SymbolProbe(z, h)) + 1.3 * fn(SymbolProbe(z, h2))
            dev = max(dev, float(np.abs(lhs - rhs).max()) / max(1e-300, float(np.abs(rhs).max())))
            # output symmetry
            s = fn(SymbolProbe(z, h))
            dev = max(dev, float(np.abs(s - s.T).max()) / max(1e-300, float(np.abs(s).max())))
        tr.update(dev, lambda: f"zeta={z} h={h.tolist()}")
    return tr.result()


def _check_jdot_kdot(rng, cases):
    tr = _Tracker("two_jdot_equals_kdot", 1e-13)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        kd = k_dot_homogeneous(sc, m)
        jd = j_dot_homogeneous(sc, m)
        dev = _reldiff(kd, 2 * jd, max(abs(kd), abs(2 * jd)))
        tr.update(dev, lambda: f"{_fmt(sc, m)} k_dot={kd} j_dot={jd}")
    return tr.result()


def _check_volume_rate(rng, cases):
    tr = _Tracker("volume_rate_chain_rule", 1e-13)
    for _ in range(cases):
        sc, m = _random_sc(rng), _random_metric(rng)
        a, b, c = (float(v) for v in m.as_tuple())
        _, _, t4 = _term_scales(sc, m)
        for conv in (FlowConvention.FRAME, FlowConvention.METRIC):
            v = bianchi_rhs(sc, m, conv).as_tuple()
            chain = v[0] * b * c + a * v[1] * c + a * b * v[2]
            vr = volume_rate(sc, m, conv)
            dev = _reldiff(chain, vr, max(abs(chain), abs(vr),
                                          abs(v[0] * b * c) + abs(a * v[1] * c) + abs(a * b * v[2]),
                                          a * b * c * max(a, b, c) * t4 / 8.0))
            tr.update(dev, lambda: f"{_fmt(sc, m)} conv={conv.value} chain={chain} rate={vr}")
    return tr.result()


def run_invariant_suite(seed: int = 0, cases: int = 1000,
                        inject_fault: bool = False) -> List[CheckResult]:
    """Run every invariant check with a fresh seeded generator per check."""
    results = []
    suite = [
        lambda rng, n: _check_decomposition(rng, n, fault=inject_fault),
        _check_traceless_h,
        _check_traceless_cotton,
        _check_trace_consistency,
        _check_frame_scaling,
        _check_permutation_equivariance,
        _check_flat_class_zero,
        _check_constant_curvature,
        _check_rhs_consistency,
        _check_su2_rhs_symmetry,
        _check_normalized_projection,
        _check_symbol,
        _check_jdot_kdot,
        _check_volume_rate,
    ]
    for i, check in enumerate(suite):
        rng = np.random.default_rng(seed * 1000003 + i)
        results.append(check(rng, cases))
    return results


CHECK_NAMES = [
    "k_equals_2_j_plus_h", "h_traceless", "cotton_traceless", "k_trace_consistency",
    "frame_scaling_weights", "permutation_equivariance", "flat_class_exactly_zero",
    "round_k_equals_r2_over_24", "rhs_matches_k_frame", "su2_rhs_permutation_symmetry",
    "normalized_volume_preserving", "symbol_identities", "two_jdot_equals_kdot",
    "volume_rate_chain_rule",
]
