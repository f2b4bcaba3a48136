"""Integrator behavior: events, accuracy, determinism, positivity."""

import numpy as np
import pytest

from kflow.dynamics import FlowConvention, GeometryFamily, bianchi_system, reduced_system
from kflow.integrate import IntegratorOptions, StopReason, Trajectory, integrate
from kflow.milnor import StructureConstants
from kflow.oracles import nil_solution


def su2_system():
    return bianchi_system(StructureConstants.su2())


def test_round_sphere_collapse_time():
    traj = integrate(su2_system(), [1.0, 1.0, 1.0], IntegratorOptions(t_max=100.0))
    assert traj.stop.kind == "Collapse"
    # a^2 = 1 - t/8 hits the 1e-6 floor at t = 8(1 - 1e-12)
    assert traj.t_final == pytest.approx(8.0, abs=1e-6)
    assert min(traj.y_final) <= 1e-6
    assert min(traj.y_final) > 0.0


def test_flat_class_reaches_t_max():
    traj = integrate(bianchi_system(StructureConstants.r3()), [1.0, 2.0, 3.0],
                     IntegratorOptions(t_max=5.0))
    assert traj.stop.kind == "TMaxReached"
    assert traj.t_final == 5.0
    assert np.array_equal(traj.y_final, [1.0, 2.0, 3.0])


def test_nil_matches_closed_form():
    traj = integrate(bianchi_system(StructureConstants.nil()), [1.0, 1.0, 1.0],
                     IntegratorOptions(t_max=10.0))
    assert traj.stop.kind == "TMaxReached"
    for t, y in zip(traj.ts, traj.ys):
        ref = nil_solution(1.0, 1.0, 1.0, float(t))
        assert y == pytest.approx(ref, rel=1e-6)


def test_ordering_preserved_su2():
    traj = integrate(su2_system(), [2.0, 1.5, 1.0], IntegratorOptions(t_max=1000.0))
    assert traj.stop.kind == "Collapse"
    for y in traj.ys:
        assert y[0] >= y[1] - 1e-13 * y[0]
        assert y[1] >= y[2] - 1e-13 * y[0]


def test_normalized_su2_equilibrates_volume_constant():
    system = bianchi_system(StructureConstants.su2(), normalized=True)
    traj = integrate(system, [2.0, 1.5, 1.0],
                     IntegratorOptions(t_max=1000.0, detect_equilibration=True))
    assert traj.stop.kind == "Equilibrated"
    abc = traj.ys.prod(axis=1)
    assert np.abs(abc / abc[0] - 1.0).max() <= 1e-10
    # the limit is the round metric with the initial volume
    assert traj.y_final == pytest.approx((3.0 ** (1 / 3),) * 3, rel=1e-8)


def test_equilibration_requires_opt_in():
    system = bianchi_system(StructureConstants.su2(), normalized=True)
    traj = integrate(system, [1.0, 1.0, 1.0], IntegratorOptions(t_max=2.0))
    assert traj.stop.kind == "TMaxReached"


def test_isom_equilibrates_at_tight_tolerance():
    system = bianchi_system(StructureConstants.isom_r2())
    traj = integrate(system, [2.0, 1.0, 1.5],
                     IntegratorOptions(t_max=1000.0, rtol=1e-12, atol=1e-14,
                                       detect_equilibration=True, equilibration_tol=1e-10))
    assert traj.stop.kind == "Equilibrated"
    a, b, _ = traj.y_final
    assert abs(a - b) <= 1e-9 * a
    assert np.abs(system(traj.y_final)).max() < 1e-10


def test_determinism_bit_identical():
    opts = IntegratorOptions(t_max=3.0)
    t1 = integrate(su2_system(), [2.0, 1.5, 1.0], opts)
    t2 = integrate(su2_system(), [2.0, 1.5, 1.0], opts)
    assert np.array_equal(t1.ts, t2.ts)
    assert np.array_equal(t1.ys, t2.ys)


def test_convergence_under_tolerance_refinement():
    devs = []
    for k in range(3):
        opts = IntegratorOptions(t_max=0.99 * 8.0, rtol=1e-8 / 16**k, atol=1e-10 / 16**k)
        traj = integrate(su2_system(), [1.0, 1.0, 1.0], opts)
        grid, states = traj.resample(400)
        exact = np.sqrt(1.0 - grid / 8.0)
        devs.append(float(np.max(np.abs(states[:, 0] - exact) / exact)))
    assert devs[0] > devs[1] > devs[2]


def test_rhs_never_sees_nonpositive_state():
    seen_bad = []
    base = su2_system()

    def guarded(y):
        if np.any(y <= 0.0):
            seen_bad.append(y.copy())
        return base(y)

    traj = integrate(guarded, [1.0, 1.0, 1.0], IntegratorOptions(t_max=100.0))
    assert traj.stop.kind == "Collapse"
    assert not seen_bad
    assert (traj.ys > 0.0).all()


def test_blowup_detection():
    # dy/dt = y^2 blows up at t = 1/y0; the ceiling is crossed first
    traj = integrate(lambda y: y * y, [1.0],
                     IntegratorOptions(t_max=10.0, blowup_ceiling=1e6))
    assert traj.stop.kind == "Blowup"
    assert traj.stop.axis == 0
    assert traj.t_final == pytest.approx(1.0 - 1e-6, abs=1e-4)
    assert traj.y_final[0] >= 1e6


def test_max_steps_guard():
    traj = integrate(su2_system(), [2.0, 1.5, 1.0],
                     IntegratorOptions(t_max=1000.0, max_steps=10))
    assert traj.stop.kind == "MaxSteps"
    assert traj.steps_accepted == 10


def test_stop_reason_labels():
    assert str(StopReason("Collapse", 2)) == "Collapse(c)"
    assert str(StopReason("TMaxReached")) == "TMaxReached"


def test_initial_state_validation():
    with pytest.raises(ValueError):
        integrate(su2_system(), [1.0, -1.0, 1.0], IntegratorOptions(t_max=1.0))
    with pytest.raises(ValueError):
        IntegratorOptions(t_max=-1.0)
    with pytest.raises(ValueError):
        IntegratorOptions(t_max=1.0, rtol=0.0)


def test_initial_state_already_collapsed():
    traj = integrate(su2_system(), [1e-7, 1.0, 1.0], IntegratorOptions(t_max=1.0))
    assert traj.stop.kind == "Collapse"
    assert traj.stop.axis == 0
    assert traj.steps_accepted == 0


def test_dense_output_interface():
    traj = integrate(su2_system(), [1.0, 1.0, 1.0], IntegratorOptions(t_max=2.0))
    mid = traj.state_at(1.0)
    # dense output carries the cubic-Hermite interpolation error (~tol^(2/3))
    assert mid[0] == pytest.approx(np.sqrt(1.0 - 1.0 / 8.0), rel=1e-6)
    with pytest.raises(ValueError):
        traj.state_at(2.5)
    grid, states = traj.resample(100)
    assert len(grid) == 100 and states.shape == (100, 3)
    assert grid[0] == 0.0 and grid[-1] == traj.t_final
    # samples field mirrors the accepted mesh
    assert traj.samples[0] == (0.0, (1.0, 1.0, 1.0))
    assert len(traj.samples) == len(traj.ts)


def test_time_strictly_increasing():
    traj = integrate(su2_system(), [2.0, 1.5, 1.0], IntegratorOptions(t_max=100.0))
    assert (np.diff(traj.ts) > 0).all()


def test_reduced_families_integrate():
    h3 = reduced_system(GeometryFamily.from_name("h3"))
    traj = integrate(h3, [1.0], IntegratorOptions(t_max=100.0))
    assert traj.stop.kind == "Collapse"
    assert traj.t_final == pytest.approx(1.0, abs=1e-6)
    prod = reduced_system(GeometryFamily.from_name("s2xr"))
    traj = integrate(prod, [1.0, 1.0], IntegratorOptions(t_max=20.0))
    assert traj.stop.kind == "TMaxReached"
    assert traj.y_final[0] * traj.y_final[1] == pytest.approx(1.0, rel=1e-9)
