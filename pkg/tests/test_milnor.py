"""Curvature algebra: exact fixtures, algebraic identities, scaling laws."""

from fractions import Fraction as F
from itertools import permutations

import numpy as np
import pytest

from kflow.milnor import (
    FrameDiagonal,
    MilnorMetric,
    StructureConstants,
    cotton_star_frame,
    frame_to_coordinate,
    h_frame,
    j_frame,
    k_frame,
    k_trace,
    ricci_frame,
    scalar_curvature,
    schouten_frame,
)

UNIT = MilnorMetric(F(1), F(1), F(1))


def rand_sc(rng):
    return StructureConstants(*(int(v) for v in rng.integers(-1, 2, 3)))


def rand_metric(rng):
    return MilnorMetric(*(float(v) for v in rng.uniform(0.1, 10.0, 3)))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def test_structure_constants_validation():
    with pytest.raises(ValueError):
        StructureConstants(2, 0, 0)
    with pytest.raises(ValueError):
        StructureConstants.from_name("so3")
    assert StructureConstants.from_name("SU2") == StructureConstants(1, 1, 1)


def test_named_classes():
    assert StructureConstants.r3().as_tuple() == (0, 0, 0)
    assert StructureConstants.su2().as_tuple() == (1, 1, 1)
    assert StructureConstants.sl2r().as_tuple() == (-1, -1, 1)
    assert StructureConstants.isom_r2().as_tuple() == (-1, -1, 0)
    assert StructureConstants.sol().as_tuple() == (-1, 0, 1)
    assert StructureConstants.nil().as_tuple() == (-1, 0, 0)
    assert StructureConstants.sol().class_name() == "sol"


def test_metric_positivity():
    for bad in [(0, 1, 1), (1, -2, 1), (1, 1, float("nan"))]:
        with pytest.raises(ValueError):
            MilnorMetric(*bad)


# ---------------------------------------------------------------------------
# exact rational fixtures
# ---------------------------------------------------------------------------

def test_round_sphere_fixture_exact():
    sc = StructureConstants.su2()
    assert ricci_frame(sc, UNIT).as_tuple() == (F(1, 2), F(1, 2), F(1, 2))
    assert k_frame(sc, UNIT).as_tuple() == (F(1, 32), F(1, 32), F(1, 32))
    assert scalar_curvature(sc, UNIT) == F(3, 2)


def test_sol_fixture_exact():
    # coordinate-table axis correspondence: the z axis is the Milnor F2 axis
    sc = StructureConstants.sol()
    assert ricci_frame(sc, UNIT).as_tuple() == (0, -2, 0)
    assert k_frame(sc, UNIT).as_tuple() == (F(5, 2), F(-15, 2), F(5, 2))


def test_nil_fixture_exact():
    # coordinate-table axis correspondence at x=0: the z axis is the Milnor F1 axis
    sc = StructureConstants.nil()
    assert k_frame(sc, UNIT).as_tuple() == (F(105, 32), F(-63, 32), F(-63, 32))
    assert ricci_frame(sc, UNIT).as_tuple() == (F(1, 2), F(-1, 2), F(-1, 2))
    assert scalar_curvature(sc, UNIT) == F(-1, 2)


def test_flat_class_exact_zero():
    sc = StructureConstants.r3()
    m = MilnorMetric(F(7, 2), F(1, 3), F(5))
    for fn in (ricci_frame, schouten_frame, cotton_star_frame, j_frame, h_frame, k_frame):
        assert fn(sc, m).as_tuple() == (0, 0, 0)
    assert scalar_curvature(sc, m) == 0
    assert k_trace(sc, m) == 0


def test_schouten_nil_hand_value():
    # hand evaluation: ricci = (1/2, -1/2, -1/2), R = -1/2, S = ric - R/4
    got = schouten_frame(StructureConstants.nil(), UNIT).as_tuple()
    assert got == (F(5, 8), F(-3, 8), F(-3, 8))


def test_cotton_nil_hand_value():
    got = cotton_star_frame(StructureConstants.nil(), UNIT).as_tuple()
    assert got == (F(-1), F(1, 2), F(1, 2))


def test_cotton_round_and_flat_vanish():
    sc = StructureConstants.su2()
    m = MilnorMetric(F(3), F(3), F(3))
    assert cotton_star_frame(sc, m).as_tuple() == (0, 0, 0)


def test_j_round_fixture():
    got = j_frame(StructureConstants.su2(), UNIT).as_tuple()
    assert got == (F(1, 64), F(1, 64), F(1, 64))
    assert h_frame(StructureConstants.su2(), MilnorMetric(F(2), F(2), F(2))).as_tuple() == (0, 0, 0)


def test_k_trace_printed_values():
    # su2 isotropic: 3/(32 a^2); sol on a=c: -5/(2 b^2); nil: -21 a^2/(32 b^2 c^2)
    a = F(3, 2)
    assert k_trace(StructureConstants.su2(), MilnorMetric(a, a, a)) == F(3, 32) / a**2
    a, b = F(2), F(5, 3)
    assert k_trace(StructureConstants.sol(), MilnorMetric(a, b, a)) == F(-5, 2) / b**2
    a, b, c = F(2), F(3), F(5)
    assert k_trace(StructureConstants.nil(), MilnorMetric(a, b, c)) == F(-21) * a**2 / (32 * b**2 * c**2)


def test_scalar_curvature_printed_values():
    a = F(4, 3)
    assert scalar_curvature(StructureConstants.su2(), MilnorMetric(a, a, a)) == F(3, 2) / a
    a, c = F(2), F(1, 2)
    got = scalar_curvature(StructureConstants.sl2r(), MilnorMetric(a, a, c))
    assert got == (-4 * a * c - c**2) / (2 * a**2 * c)


def test_round_k_equals_r_squared_over_24():
    for a in (F(1, 2), F(1), F(7, 3)):
        m = MilnorMetric(a, a, a)
        r = scalar_curvature(StructureConstants.su2(), m)
        assert k_trace(StructureConstants.su2(), m) == r * r / 24


def test_frame_to_coordinate():
    m = MilnorMetric(2.0, 3.0, 5.0)
    assert frame_to_coordinate(FrameDiagonal(1.0, -1.0, 0.5), m) == (2.0, -3.0, 2.5)
    sol_ric = ricci_frame(StructureConstants.sol(), MilnorMetric(F(1), F(1), F(1)))
    assert frame_to_coordinate(sol_ric, UNIT) == (0, -2, 0)


# ---------------------------------------------------------------------------
# identities over random samples
# ---------------------------------------------------------------------------

def term_scales(sc, m):
    # identities cancel catastrophically; deviations are judged against the
    # magnitude of the polynomial terms, where a wrong coefficient would
    # still surface at ~1e-2
    a, b, c = (float(v) for v in m.as_tuple())
    s = abs(sc.lam) * a + abs(sc.mu) * b + abs(sc.nu) * c
    vol = a * b * c
    return s * s / (2 * vol), s**4 / (vol * vol)


def test_decomposition_identity():
    rng = np.random.default_rng(101)
    for _ in range(2000):
        sc, m = rand_sc(rng), rand_metric(rng)
        k = k_frame(sc, m).as_tuple()
        j = j_frame(sc, m).as_tuple()
        h = h_frame(sc, m).as_tuple()
        _, t4 = term_scales(sc, m)
        scale = max(max(abs(v) for v in k), t4, 1e-300)
        assert max(abs(kk - 2 * (jj + hh)) for kk, jj, hh in zip(k, j, h)) <= 1e-12 * scale


def test_traces():
    rng = np.random.default_rng(102)
    for _ in range(2000):
        sc, m = rand_sc(rng), rand_metric(rng)
        h = h_frame(sc, m).as_tuple()
        ct = cotton_star_frame(sc, m).as_tuple()
        assert abs(sum(h)) <= 1e-12 * max(sum(abs(v) for v in h), 1e-300)
        assert abs(sum(ct)) <= 1e-12 * max(sum(abs(v) for v in ct), 1e-300)


def test_k_trace_consistency():
    rng = np.random.default_rng(103)
    for _ in range(2000):
        sc, m = rand_sc(rng), rand_metric(rng)
        kt = float(k_trace(sc, m))
        ksum = sum(k_frame(sc, m).as_tuple())
        r = float(scalar_curvature(sc, m))
        ric = ricci_frame(sc, m).as_tuple()
        quad = 0.375 * r * r - sum(v * v for v in ric)
        t2, t4 = term_scales(sc, m)
        scale = max(abs(kt), t4, t2 * t2, 1e-300)
        assert abs(kt - ksum) <= 1e-12 * scale
        assert abs(kt - quad) <= 1e-12 * scale


def test_schouten_is_ricci_minus_quarter_r():
    rng = np.random.default_rng(104)
    for _ in range(300):
        sc, m = rand_sc(rng), rand_metric(rng)
        s = schouten_frame(sc, m).as_tuple()
        ric = ricci_frame(sc, m).as_tuple()
        r = float(scalar_curvature(sc, m))
        for sv, rv in zip(s, ric):
            assert sv == pytest.approx(rv - r / 4, rel=1e-13, abs=1e-13 * abs(r))


def test_scaling_weights_dyadic_exact():
    rng = np.random.default_rng(105)
    weights = ((ricci_frame, -1), (schouten_frame, -1), (j_frame, -2), (h_frame, -2), (k_frame, -2))
    for _ in range(300):
        sc, m = rand_sc(rng), rand_metric(rng)
        s = 2.0 ** int(rng.integers(1, 4))
        ms = m.scaled(s)
        for fn, w in weights:
            base = fn(sc, m).as_tuple()
            lifted = fn(sc, ms).as_tuple()
            for lv, bv in zip(lifted, base):
                assert lv == bv * s**w
        assert float(scalar_curvature(sc, ms)) == float(scalar_curvature(sc, m)) / s
        assert float(k_trace(sc, ms)) == float(k_trace(sc, m)) / s**2
        ct0 = cotton_star_frame(sc, m).as_tuple()
        ct1 = cotton_star_frame(sc, ms).as_tuple()
        for lv, bv in zip(ct1, ct0):
            assert lv == pytest.approx(bv * s**-1.5, rel=1e-12, abs=1e-300)


def test_permutation_equivariance_exact_rational():
    # exact arithmetic removes all float noise from the equivariance claim
    rng = np.random.default_rng(106)
    for _ in range(60):
        sc = rand_sc(rng)
        m = MilnorMetric(F(int(rng.integers(1, 30)), 7), F(int(rng.integers(1, 30)), 5),
                         F(int(rng.integers(1, 30)), 11))
        p = list(permutations(range(3)))[int(rng.integers(6))]
        sct, mt = sc.as_tuple(), m.as_tuple()
        scp = StructureConstants(*(sct[i] for i in p))
        mp = MilnorMetric(*(mt[i] for i in p))
        for fn in (ricci_frame, j_frame, h_frame, k_frame):
            base = fn(sc, m).as_tuple()
            permuted = fn(scp, mp).as_tuple()
            assert all(permuted[j] == base[p[j]] for j in range(3))
        assert scalar_curvature(scp, mp) == scalar_curvature(sc, m)
        assert k_trace(scp, mp) == k_trace(sc, m)


def test_exact_and_float_paths_agree():
    rng = np.random.default_rng(107)
    for _ in range(100):
        sc = rand_sc(rng)
        vals = [F(int(v), 16) for v in rng.integers(1, 160, 3)]
        m_exact = MilnorMetric(*vals)
        m_float = MilnorMetric(*(float(v) for v in vals))
        for fn in (ricci_frame, j_frame, h_frame, k_frame):
            e = fn(sc, m_exact).as_tuple()
            f = fn(sc, m_float).as_tuple()
            for ev, fv in zip(e, f):
                assert fv == pytest.approx(float(ev), rel=1e-12, abs=1e-15)
