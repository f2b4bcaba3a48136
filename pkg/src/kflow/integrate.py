"""Adaptive Dormand-Prince 5(4) integration with flow-specific events.

The flow systems live on the positive orthant and typically hit a finite-time
degeneracy: one or more coefficients collapse toward zero, or grow without
bound.  The stepper therefore

* never evaluates the right-hand side at a non-positive state (offending
  steps are rejected and retried at half the size, giving a bisected
  approach to the collapse floor),
* locates collapse/blow-up crossings by bisection on the dense output to
  within 1e-10 in t,
* optionally detects equilibration: the flow has stopped (max |RHS| below
  tolerance) AND at least one coefficient pair has merged.  Detection is
  opt-in so that flat geometries report TMaxReached rather than an
  immediate equilibrium.

Dense output is 4th-order (two-point cubic Hermite) using the stored stage
derivatives, which the FSAL property provides for free.  Everything is
deterministic: identical inputs give bit-identical trajectories.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = ["IntegratorOptions", "StopReason", "Trajectory", "integrate"]


@dataclass(frozen=True)
class StopReason:
    """Why an integration terminated; axis identifies the offending coefficient."""

    kind: str  # TMaxReached | Collapse | Blowup | Equilibrated | StepUnderflow | MaxSteps
    axis: Optional[int] = None

    _AXIS_NAMES = ("a", "b", "c")

    def __str__(self) -> str:
        if self.axis is None:
            return self.kind
        return f"{self.kind}({self._AXIS_NAMES[self.axis]})"

    @property
    def is_collapse(self) -> bool:
        return self.kind == "Collapse"


@dataclass(frozen=True)
class IntegratorOptions:
    t_max: float
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 10**7
    collapse_floor: float = 1e-6
    blowup_ceiling: float = 1e9
    equilibration_tol: float = 1e-9
    detect_equilibration: bool = False
    initial_step: Optional[float] = None

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        for name in ("rtol", "atol", "collapse_floor", "blowup_ceiling", "equilibration_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive")


@dataclass
class Trajectory:
    """Accepted-step mesh of an integration plus termination metadata.

    `ts`/`ys`/`fs` hold the accepted times, states and state derivatives;
    `state_at` interpolates between mesh points with the cubic Hermite dense
    output of the integrator.
    """

    ts: np.ndarray
    ys: np.ndarray
    fs: np.ndarray
    stop: StopReason
    steps_accepted: int
    steps_rejected: int
    samples: list = field(default_factory=list)

    def __post_init__(self):
        if not self.samples:
            self.samples = [(float(t), tuple(y)) for t, y in zip(self.ts, self.ys)]

    @property
    def t_final(self) -> float:
        return float(self.ts[-1])

    @property
    def y_final(self) -> np.ndarray:
        return self.ys[-1]

    def state_at(self, t: float) -> np.ndarray:
        """Dense-output state at time t within [ts[0], ts[-1]]."""
        ts = self.ts
        if t < ts[0] - 1e-12 or t > ts[-1] + 1e-12:
            raise ValueError(f"t={t} outside trajectory range [{ts[0]}, {ts[-1]}]")
        if t <= ts[0]:
            return self.ys[0].copy()
        if t >= ts[-1]:
            return self.ys[-1].copy()
        i = bisect_right(ts, t) - 1
        i = min(max(i, 0), len(ts) - 2)
        return _hermite(t, ts[i], ts[i + 1], self.ys[i], self.ys[i + 1], self.fs[i], self.fs[i + 1])

    def resample(self, n: int):
        """(times, states) on a uniform n-point grid over the trajectory."""
        if n < 2:
            raise ValueError("need at least two samples")
        grid = np.linspace(self.ts[0], self.ts[-1], n)
        states = np.vstack([self.state_at(t) for t in grid])
        return grid, states


def _hermite(t, t0, t1, y0, y1, f0, f1):
    # Two-point cubic Hermite: O(h^4) interpolation error per step.
    h = t1 - t0
    theta = (t - t0) / h
    u = theta - 1.0
    return ((1.0 - theta) * y0 + theta * y1
            + theta * u * ((1.0 - 2.0 * theta) * (y1 - y0) + h * (u * f0 + theta * f1)))


# Dormand-Prince 5(4) tableau; row 6 equals the 5th-order weights (FSAL).
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# 5th-order minus embedded 4th-order weights (error estimator).
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_BETA = 0.04           # PI stabilization
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0
_BISECT_TOL = 1e-10    # event location tolerance in t


def _error_norm(err, y, y_new, atol, rtol):
    sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / sc) ** 2)))


def _initial_step(f, y0, f0, t_max, atol, rtol):
    """Standard two-sided estimate of a safe first step."""
    sc = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / sc) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_max)
    # keep the probe state strictly positive
    while np.any(y0 + h0 * f0 <= 0.0) and h0 > 1e-16:
        h0 *= 0.5
    f1 = f(y0 + h0 * f0)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, t_max)


def _locate_crossing(t0, t1, y0, y1, f0, f1, crossed):
    """Earliest t in (t0, t1] where `crossed(state)` first holds, by bisection."""
    lo, hi = t0, t1
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if crossed(_hermite(mid, t0, t1, y0, y1, f0, f1)):
            hi = mid
        else:
            lo = mid
    return hi


def _min_pairwise_reldiff(y) -> float:
    n = len(y)
    if n < 2:
        return math.inf
    best = math.inf
    for i in range(n):
        for j in range(i + 1, n):
            denom = max(abs(y[i]), abs(y[j]))
            if denom > 0:
                best = min(best, abs(y[i] - y[j]) / denom)
    return best


def integrate(system: Callable[[np.ndarray], np.ndarray],
              y0: Sequence[float],
              opts: IntegratorOptions) -> Trajectory:
    """Integrate an autonomous system on the positive orthant.

    Returns a Trajectory ending at the first triggered stop condition.  Local
    error per step is bounded by atol + rtol*|y|; the RHS is never evaluated
    at a non-positive state.
    """
    y = np.asarray(y0, dtype=float).copy()
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise ValueError("initial coefficients must be strictly positive and finite")

    t = 0.0
    f_cur = system(y)
    ts = [0.0]
    ys = [y.copy()]
    fs = [f_cur.copy()]
    accepted = 0
    rejected = 0
    fac_old = 1e-4

    # initial state already degenerate
    if float(np.min(y)) <= opts.collapse_floor:
        return Trajectory(np.array(ts), np.vstack(ys), np.vstack(fs),
                          StopReason("Collapse", int(np.argmin(y))), 0, 0)
    if float(np.max(y)) >= opts.blowup_ceiling:
        return Trajectory(np.array(ts), np.vstack(ys), np.vstack(fs),
                          StopReason("Blowup", int(np.argmax(y))), 0, 0)

    h = opts.initial_step if opts.initial_step is not None else _initial_step(
        system, y, f_cur, opts.t_max, opts.atol, opts.rtol)

    def finish(stop):
        return Trajectory(np.array(ts), np.vstack(ys), np.vstack(fs),
                          stop, accepted, rejected)

    k = [None] * 7
    while True:
        if accepted >= opts.max_steps:
            return finish(StopReason("MaxSteps"))
        if h < 1e-14 * max(1.0, abs(t)):
            return finish(StopReason("StepUnderflow"))
        if t + h >= opts.t_max:
            h = opts.t_max - t

        # one Dormand-Prince attempt, aborted on any non-positive stage
        k[0] = f_cur
        stage_bad = False
        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]) if a != 0.0)
            if np.any(yi <= 0.0):
                stage_bad = True
                break
            k[i] = system(yi)
        if stage_bad:
            rejected += 1
            h *= 0.5
            continue

        y_new = y + h * sum(a * k[j] for j, a in enumerate(_A[6]) if a != 0.0)
        err_vec = h * sum(e * k[j] for j, e in enumerate(_E) if e != 0.0)
        err = _error_norm(err_vec, y, y_new, opts.atol, opts.rtol)

        if not math.isfinite(err) or err > 1.0:
            rejected += 1
            fac = max(1.0 / _FAC_MAX, min(1.0 / _FAC_MIN, (err ** _EXPO) / _SAFETY))
            h = h / fac if math.isfinite(err) else 0.5 * h
            continue

        # accepted step
        t_new = t + h
        f_new = k[6]

        floor_hit = float(np.min(y_new)) <= opts.collapse_floor
        ceil_hit = float(np.max(y_new)) >= opts.blowup_ceiling
        if floor_hit or ceil_hit:
            if floor_hit:
                crossed = lambda s: float(np.min(s)) <= opts.collapse_floor
                kind = "Collapse"
            else:
                crossed = lambda s: float(np.max(s)) >= opts.blowup_ceiling
                kind = "Blowup"
            t_ev = _locate_crossing(t, t_new, y, y_new, f_cur, f_new, crossed)
            y_ev = _hermite(t_ev, t, t_new, y, y_new, f_cur, f_new)
            axis = int(np.argmin(y_ev)) if floor_hit else int(np.argmax(y_ev))
            accepted += 1
            ts.append(float(t_ev))
            ys.append(y_ev)
            fs.append(system(y_ev) if np.all(y_ev > 0.0) else f_new)
            return finish(StopReason(kind, axis))

        accepted += 1
        t, y, f_cur = t_new, y_new, f_new
        ts.append(float(t))
        ys.append(y.copy())
        fs.append(f_cur.copy())

        if opts.detect_equilibration:
            if (float(np.max(np.abs(f_cur))) < opts.equilibration_tol
                    and _min_pairwise_reldiff(y) < opts.equilibration_tol):
                return finish(StopReason("Equilibrated"))

        if t >= opts.t_max:
            return finish(StopReason("TMaxReached"))

        fac11 = err ** _EXPO if err > 0.0 else 1e-10
        fac = max(1.0 / _FAC_MAX, min(1.0 / _FAC_MIN, fac11 / (fac_old ** _BETA) / _SAFETY))
        h = h / fac
        fac_old = max(err, 1e-4)
