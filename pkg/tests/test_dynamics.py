"""Flow right-hand sides: printed ODE fixtures, conventions, projections."""

from fractions import Fraction as F

import numpy as np
import pytest

from kflow.dynamics import (
    _ODE_ROWS,
    _SIGN_EXP,
    _deg4_monomials,
    FlowConvention,
    GeometryFamily,
    bianchi_rhs,
    bianchi_system,
    normalized_rhs,
    reduced_rhs,
    reduced_scalars,
    reduced_system,
)
from kflow.milnor import MilnorMetric, StructureConstants, k_frame


def test_su2_round_rhs():
    for a in (0.5, 1.0, 2.0):
        v = bianchi_rhs(StructureConstants.su2(), MilnorMetric(a, a, a))
        assert v.as_tuple() == pytest.approx((-1 / (16 * a),) * 3, rel=1e-14)


def test_nil_rhs_printed():
    v = bianchi_rhs(StructureConstants.nil(), MilnorMetric(1.0, 1.0, 1.0))
    assert v.as_tuple() == pytest.approx((-105 / 16, 63 / 16, 63 / 16), rel=1e-15)
    a, b, c = 2.0, 3.0, 0.5
    v = bianchi_rhs(StructureConstants.nil(), MilnorMetric(a, b, c))
    expect = (-105 * a**3 / (16 * b**2 * c**2),
              63 * a**2 * b / (16 * b**2 * c**2),
              63 * a**2 * c / (16 * b**2 * c**2))
    assert v.as_tuple() == pytest.approx(expect, rel=1e-13)


def test_sol_rhs_printed_on_degenerate_locus():
    for b in (1.0, 2.0, 0.7):
        v = bianchi_rhs(StructureConstants.sol(), MilnorMetric(1.0, b, 1.0))
        assert v.as_tuple() == pytest.approx((-5 / b**2, 15 / b, -5 / b**2), rel=1e-13)


def test_sl2r_isotropic_rate():
    # all coefficients equal: da/dt = 159 a/16 (transient expansion rate)
    for a in (1.0, 2.5):
        v = bianchi_rhs(StructureConstants.sl2r(), MilnorMetric(a, a, a))
        assert v.da == pytest.approx(159 / (16 * a), rel=1e-13)


def test_flat_rhs_exact_zero():
    v = bianchi_rhs(StructureConstants.r3(), MilnorMetric(3.0, 1.0, 7.0))
    assert v.as_tuple() == (0.0, 0.0, 0.0)


def test_metric_convention_is_half_frame():
    rng = np.random.default_rng(20)
    for _ in range(200):
        sc = StructureConstants(*(int(v) for v in rng.integers(-1, 2, 3)))
        m = MilnorMetric(*(float(v) for v in rng.uniform(0.1, 10, 3)))
        vf = bianchi_rhs(sc, m, FlowConvention.FRAME).as_tuple()
        vm = bianchi_rhs(sc, m, FlowConvention.METRIC).as_tuple()
        assert all(b == 0.5 * a for a, b in zip(vf, vm))


def test_rhs_consistent_with_k_frame():
    rng = np.random.default_rng(21)
    for _ in range(500):
        sc = StructureConstants(*(int(v) for v in rng.integers(-1, 2, 3)))
        m = MilnorMetric(*(float(v) for v in rng.uniform(0.1, 10, 3)))
        v = bianchi_rhs(sc, m).as_tuple()
        f = k_frame(sc, m).as_tuple()
        ref = tuple(-2 * float(x) * fv for x, fv in zip(m.as_tuple(), f))
        scale = max(1e-300, max(abs(r) for r in ref))
        assert max(abs(a - b) for a, b in zip(v, ref)) <= 1e-13 * scale


def test_ode_rows_cyclic_rotation_exact():
    # component 2 (3) of the printed system equals component 1 under the
    # cyclic relabeling of axes; the implementation relies on this
    def eval_row(row, consts, args):
        lam, mu, nu = consts
        signs = [F(lam) ** i * F(mu) ** j * F(nu) ** k for (i, j, k) in _SIGN_EXP]
        return sum(F(r) * s * mo for r, s, mo in zip(row, signs, _deg4_monomials(*args)))

    rng = np.random.default_rng(22)
    for _ in range(40):
        lam, mu, nu = (int(v) for v in rng.integers(-1, 2, 3))
        a, b, c = (F(int(v), 13) for v in rng.integers(1, 60, 3))
        assert eval_row(_ODE_ROWS[1], (lam, mu, nu), (a, b, c)) == \
            eval_row(_ODE_ROWS[0], (mu, nu, lam), (b, c, a))
        assert eval_row(_ODE_ROWS[2], (lam, mu, nu), (a, b, c)) == \
            eval_row(_ODE_ROWS[0], (nu, lam, mu), (c, a, b))


# ---------------------------------------------------------------------------
# normalized flow
# ---------------------------------------------------------------------------

def test_normalized_round_is_exact_fixed_point():
    rng = np.random.default_rng(23)
    sc = StructureConstants.su2()
    for _ in range(500):
        a = float(rng.uniform(0.1, 10))
        assert normalized_rhs(sc, MilnorMetric(a, a, a)).as_tuple() == (0.0, 0.0, 0.0)


def test_normalized_su2_printed_polynomial():
    # independent evaluation of the printed volume-normalized equation,
    # coefficients (-42, 25, 25, 1, -10, 1, -5, 5, 5, -5, 21, -20, -2, -20, 21)
    # over 6 a^2 b^2 c^2, plus the same with the roles of a and b swapped
    def printed_norm_da(a, b, c):
        num = (-42 * a**4 + 25 * a**3 * b + 25 * a**3 * c + a**2 * b**2
               - 10 * a**2 * b * c + a**2 * c**2 - 5 * a * b**3 + 5 * a * b**2 * c
               + 5 * a * b * c**2 - 5 * a * c**3 + 21 * b**4 - 20 * b**3 * c
               - 2 * b**2 * c**2 - 20 * b * c**3 + 21 * c**4)
        return a * num / (6 * a**2 * b**2 * c**2)

    rng = np.random.default_rng(24)
    sc = StructureConstants.su2()
    for _ in range(100):
        a, b, c = (float(v) for v in rng.uniform(0.2, 4, 3))
        v = normalized_rhs(sc, MilnorMetric(a, b, c))
        assert v.da == pytest.approx(printed_norm_da(a, b, c), rel=1e-11, abs=1e-13)
        assert v.db == pytest.approx(printed_norm_da(b, a, c), rel=1e-11, abs=1e-13)
    # frozen spot value: (2,1,1) -> (-76/3, 19/3, 19/3)
    v = normalized_rhs(sc, MilnorMetric(2.0, 1.0, 1.0))
    assert v.as_tuple() == pytest.approx((-76 / 3, 19 / 3, 19 / 3), rel=1e-13)


def test_normalized_preserves_volume_rate():
    rng = np.random.default_rng(25)
    for _ in range(300):
        sc = StructureConstants(*(int(v) for v in rng.integers(-1, 2, 3)))
        m = MilnorMetric(*(float(v) for v in rng.uniform(0.1, 10, 3)))
        v = normalized_rhs(sc, m).as_tuple()
        x = [float(q) for q in m.as_tuple()]
        raw = bianchi_rhs(sc, m).as_tuple()
        scale = max(1e-300, sum(abs(rv / xv) for rv, xv in zip(raw, x)))
        assert abs(sum(vv / xv for vv, xv in zip(v, x))) <= 1e-13 * scale


# ---------------------------------------------------------------------------
# reduced families
# ---------------------------------------------------------------------------

def test_reduced_rhs_fixtures():
    h2 = GeometryFamily.from_name("h2xr")
    assert reduced_rhs(h2, [1.0, 1.0]).as_tuple() == (-0.5, 0.5, 0.0)
    s2 = GeometryFamily.from_name("s2xr")
    assert reduced_rhs(s2, [1.0, 1.0]).as_tuple() == (-0.5, 0.5, 0.0)
    h3 = GeometryFamily.from_name("h3")
    assert reduced_rhs(h3, [2.0]).da == -0.25
    assert reduced_rhs(h3, [2.0], FlowConvention.FRAME).da == -0.5


def test_reduced_rhs_rejects_bianchi():
    fam = GeometryFamily.bianchi(StructureConstants.su2())
    with pytest.raises(ValueError):
        reduced_rhs(fam, [1.0, 1.0, 1.0])


def test_reduced_rhs_validation():
    fam = GeometryFamily.from_name("h2xr")
    with pytest.raises(ValueError):
        reduced_rhs(fam, [1.0])
    with pytest.raises(ValueError):
        reduced_rhs(fam, [1.0, -1.0])


def test_family_parsing():
    fam = GeometryFamily.from_name("sol")
    assert fam.is_bianchi and fam.constants.class_name() == "sol"
    assert GeometryFamily.from_name("h3").dimension() == 1
    assert GeometryFamily.from_name("s2xr").dimension() == 2
    assert fam.default_convention() is FlowConvention.FRAME
    assert GeometryFamily.from_name("h3").default_convention() is FlowConvention.METRIC
    with pytest.raises(ValueError):
        GeometryFamily.from_name("t3")


def test_reduced_scalars():
    h3 = GeometryFamily.from_name("h3")
    assert reduced_scalars(h3, [2.0]) == (-3.0, 1.5 / 4.0)
    h2 = GeometryFamily.from_name("h2xr")
    assert reduced_scalars(h2, [1.0, 2.0]) == (-1.0, -0.125)
    s2 = GeometryFamily.from_name("s2xr")
    assert reduced_scalars(s2, [1.0, 2.0]) == (1.0, -0.125)


def test_system_closures_match_rhs():
    rng = np.random.default_rng(26)
    sc = StructureConstants.sl2r()
    sys_f = bianchi_system(sc)
    sys_n = bianchi_system(sc, normalized=True)
    for _ in range(50):
        y = rng.uniform(0.2, 5, 3)
        m = MilnorMetric(*y)
        assert sys_f(y) == pytest.approx(bianchi_rhs(sc, m).as_tuple(), rel=1e-15)
        assert sys_n(y) == pytest.approx(normalized_rhs(sc, m).as_tuple(), rel=1e-15, abs=1e-18)
    sys_r = reduced_system(GeometryFamily.from_name("h2xr"))
    got = sys_r(np.array([1.5, 0.7]))
    want = reduced_rhs(GeometryFamily.from_name("h2xr"), [1.5, 0.7]).as_tuple()[:2]
    assert got == pytest.approx(want, rel=1e-15)
