"""Adaptive Dormand-Prince 5(4) integration with dense output and orbit detection."""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import ModelParams, ReducedState, Regime, singular_angle
from .errors import Inconclusive, SingularityApproach, StepSizeUnderflow
from .reduced import rates_fn

GUARD_DISTANCE = 1e-12
UNDERFLOW_FACTOR = 1e-14
CLOSURE_TOL = 1e-6
FIXED_POINT_TOL = 1e-11
EDGE_TOL = 1e-6
ESCAPE_FACTOR = 10.0
OPP_THETA_WINDOW = 40.0

# Dormand & Prince (1980) tableau.
C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
B = A[6]
# b - b_hat over all seven stages (the last stage is the FSAL derivative).
E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Quartic continuous extension (Shampine 1986 / Hairer-Wanner); columns multiply x, x^2, x^3, x^4.
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


class Termination(str, enum.Enum):
    COMPLETED = "Completed"
    SINGULARITY = "SingularityApproach"
    UNDERFLOW = "StepSizeUnderflow"


@dataclass(frozen=True)
class StepInterpolant:
    t_old: float
    h: float
    y_old: np.ndarray
    q: np.ndarray  # shape (dim, 4)

    def __call__(self, t: float) -> np.ndarray:
        x = (t - self.t_old) / self.h
        return self.y_old + self.h * (self.q @ np.array([x, x * x, x**3, x**4]))


class DormandPrince:
    """Single-trajectory stepper. ``step()`` advances one accepted step.

    ``fun(t, y)`` returns the derivative as an array. A stage evaluation that
    raises an arithmetic error or returns non-finite values rejects the step
    and retries with a quarter of the step size. ``guard(y)`` is a distance to
    the nearest singularity; falling below ``GUARD_DISTANCE`` ends the run.
    """

    def __init__(self, fun, t0, y0, t_bound, rtol=1e-10, atol=1e-12, guard=None, first_step=None):
        self.fun = fun
        self.t = float(t0)
        self.y = np.array(y0, dtype=float)
        self.t_bound = float(t_bound)
        self.direction = 1.0 if t_bound >= t0 else -1.0
        self.rtol, self.atol = rtol, atol
        self.guard = guard
        self.f = np.asarray(fun(self.t, self.y), dtype=float)
        self.h_abs = first_step if first_step else self._initial_step()
        self.status: Termination | None = None
        self.t_old = None
        self.y_old = None
        self._K = np.empty((7, self.y.size))
        self.n_accepted = 0
        self.n_rejected = 0

    def _scale(self, y, y_new=None):
        mag = np.abs(y) if y_new is None else np.maximum(np.abs(y), np.abs(y_new))
        return self.atol + self.rtol * mag

    def _initial_step(self) -> float:
        scale = self._scale(self.y)
        d0 = _rms(self.y / scale)
        d1 = _rms(self.f / scale)
        h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h0 = min(h0, abs(self.t_bound - self.t))
        try:
            f1 = np.asarray(self.fun(self.t + self.direction * h0, self.y + self.direction * h0 * self.f))
            d2 = _rms((f1 - self.f) / scale) / h0
        except (ArithmeticError, ValueError):
            return h0 * 1e-3
        if not math.isfinite(d2):
            return h0 * 1e-3
        h1 = max(1e-6, h0 * 1e-3) if max(d1, d2) <= 1e-15 else (0.01 / max(d1, d2)) ** 0.2
        return min(100 * h0, h1)

    def _attempt(self, h):
        t, y, K = self.t, self.y, self._K
        K[0] = self.f
        for i in range(1, 7):
            yi = y + h * (A[i] @ K[:i])
            K[i] = self.fun(t + C[i] * h, yi)
        y_new = y + h * (B @ K[:6])
        if not np.all(np.isfinite(K)):
            raise FloatingPointError("non-finite stage")
        err = _rms(h * (E @ K) / self._scale(y, y_new))
        return y_new, err

    def step(self) -> bool:
        """Take one accepted step. Returns False once the run has finished."""
        if self.status is not None:
            return False
        remaining = abs(self.t_bound - self.t)
        if remaining == 0:
            self.status = Termination.COMPLETED
            return False
        h_abs = min(self.h_abs, remaining)
        while True:
            if h_abs < UNDERFLOW_FACTOR * max(abs(self.t), 1.0):
                self.status = Termination.UNDERFLOW
                return False
            h = self.direction * h_abs
            try:
                y_new, err = self._attempt(h)
            except (ArithmeticError, ValueError):
                h_abs *= 0.25
                self.n_rejected += 1
                continue
            if err <= 1.0:
                break
            h_abs *= max(0.2, 0.9 * err**-0.2)
            self.n_rejected += 1

        t_new = self.t + h if h_abs < remaining else self.t_bound
        self.t_old, self.y_old, self.h_last = self.t, self.y, h
        self.t, self.y = t_new, y_new
        self.f = self._K[6].copy()
        self.n_accepted += 1
        factor = 10.0 if err == 0 else min(10.0, 0.9 * err**-0.2)
        self.h_abs = h_abs * factor
        if self.guard is not None and self.guard(y_new) < GUARD_DISTANCE:
            self.status = Termination.SINGULARITY
            return True
        if self.t == self.t_bound:
            self.status = Termination.COMPLETED
        return True

    def interpolant(self) -> StepInterpolant:
        return StepInterpolant(self.t_old, self.h_last, self.y_old, self._K.T @ P)


def _rms(v) -> float:
    return math.sqrt(float(np.dot(v, v)) / v.size)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    hamiltonian_drift: float
    termination: Termination
    drifts: tuple = ()
    interpolants: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.termination is Termination.COMPLETED

    def __call__(self, t: float) -> np.ndarray:
        """Dense-output state at time ``t`` inside the integrated span."""
        starts = [p.t_old for p in self.interpolants]
        if self.times[-1] >= self.times[0]:
            i = bisect.bisect_right(starts, t) - 1
        else:
            i = bisect.bisect_right([-s for s in starts], -t) - 1
        i = min(max(i, 0), len(self.interpolants) - 1)
        return self.interpolants[i](t)


def integrate(
    field: Callable,
    state0: Sequence[float],
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    monitors: Sequence[Callable] = (),
    guard: Callable | None = None,
    t0: float = 0.0,
    strict: bool = False,
) -> Trajectory:
    """Integrate ``y' = field(t, y)`` from ``t0`` to ``t_end``.

    Each monitor ``m(y) -> float`` is evaluated at every accepted step; its
    drift is the maximum relative deviation from the initial value (absolute
    when the initial value is zero). ``hamiltonian_drift`` is the drift of the
    first monitor. With ``strict=True`` an abnormal termination raises
    ``SingularityApproach``/``StepSizeUnderflow`` carrying the partial result.
    A state where the field is below ``FIXED_POINT_TOL`` is treated as an
    equilibrium and held constant, so rounding in a computed saddle does not
    grow into a spurious departure.
    """
    if not (rtol > 0 and atol > 0):
        raise ValueError("tolerances must be positive")
    y0 = np.asarray(state0, dtype=float)
    if np.max(np.abs(field(t0, y0))) < FIXED_POINT_TOL:
        ys = np.array([y0, y0])
        drifts = tuple(0.0 for _ in monitors)
        piece = StepInterpolant(t0, (t_end - t0) or 1.0, y0, np.zeros((y0.size, P.shape[1])))
        return Trajectory(np.array([t0, float(t_end)]), ys, 0.0, Termination.COMPLETED, drifts, [piece])
    solver = DormandPrince(field, t0, state0, t_end, rtol, atol, guard)
    times, states, pieces = [solver.t], [solver.y.copy()], []
    m0 = [m(solver.y) for m in monitors]
    worst = [0.0] * len(monitors)
    while solver.step():
        times.append(solver.t)
        states.append(solver.y.copy())
        pieces.append(solver.interpolant())
        for k, m in enumerate(monitors):
            dev = abs(m(solver.y) - m0[k])
            worst[k] = max(worst[k], dev / abs(m0[k]) if m0[k] != 0 else dev)
    traj = Trajectory(
        np.array(times), np.array(states), worst[0] if worst else 0.0,
        solver.status, tuple(worst), pieces,
    )
    if strict and traj.termination is Termination.SINGULARITY:
        raise SingularityApproach(f"trajectory reached the singularity at t={solver.t!r}", traj)
    if strict and traj.termination is Termination.UNDERFLOW:
        raise StepSizeUnderflow(f"step size underflow at t={solver.t!r}", traj)
    return traj


def reduced_system(params: ModelParams):
    """``(fun, guard)`` for the reduced system in array form."""
    f = rates_fn(params)
    ts = singular_angle(params)

    def fun(t, y):
        return np.array(f(y[0], y[1]))

    def guard(y):
        dist = math.hypot(y[0] - ts, y[1])
        return min(dist, y[0]) if params.regime is Regime.OPPOSITE else min(dist, y[0], math.pi / 2 - y[0])

    return fun, guard


@dataclass
class OrbitReport:
    closed: bool
    period: float | None
    section_crossings: list
    closure_distance: float
    detail: str = ""
    encircles: bool = False


def detect_closed_orbit(
    field,
    state0: ReducedState,
    params: ModelParams,
    max_time: float = 1e4,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    closure_tol: float = CLOSURE_TOL,
) -> OrbitReport:
    """Decide by integration whether the orbit through ``state0`` is closed.

    Crossings of the axis w = 0 are refined on the dense output. The first
    crossing is the reference; the orbit is closed once a later crossing in
    the same direction lands within ``closure_tol`` of it, and the period is
    the time between the two. An orbit escapes when ``|w|`` exceeds
    ``10 (|w0| + 1)`` while still growing, or when theta reaches the edge of
    its window. ``field`` may be None to use the system given by ``params``.
    """
    fun, guard = reduced_system(params)
    if field is not None:
        fun = field
    ts = singular_angle(params)
    y0 = np.array([state0.theta, state0.w], dtype=float)
    f0 = np.asarray(fun(0.0, y0), dtype=float)
    if math.hypot(*f0) < FIXED_POINT_TOL:
        return OrbitReport(False, None, [], math.inf, "fixed point")

    w_escape = ESCAPE_FACTOR * (abs(state0.w) + 1.0)
    hi_edge = math.pi / 2 - EDGE_TOL if params.regime is Regime.SAME else OPP_THETA_WINDOW
    crossings: list[tuple[float, np.ndarray, int]] = []
    if state0.w == 0.0:
        crossings.append((0.0, y0.copy(), int(np.sign(f0[1]))))
    best = math.inf

    solver = DormandPrince(fun, 0.0, y0, max_time, rtol, atol, guard)
    while solver.step():
        w_old, w_new = solver.y_old[1], solver.y[1]
        if w_old != 0.0 and (w_old * w_new < 0 or w_new == 0.0):
            dense = solver.interpolant()
            if w_new == 0.0:
                tc = solver.t
            else:
                tc = brentq(lambda t: dense(t)[1], solver.t_old, solver.t, xtol=1e-15)
            yc = dense(tc)
            direction = 1 if w_new > w_old else -1
            if crossings and direction == crossings[0][2]:
                dist = math.hypot(yc[0] - crossings[0][1][0], yc[1] - crossings[0][1][1])
                best = min(best, dist)
                if dist < closure_tol:
                    crossings.append((tc, yc, direction))
                    sides = {np.sign(c[1][0] - ts) for c in crossings}
                    return OrbitReport(True, tc - crossings[0][0], crossings, dist,
                                       "closed orbit", encircles=len(sides) == 2)
            crossings.append((tc, yc, direction))
        theta, w = solver.y
        dw = fun(solver.t, solver.y)[1]
        if abs(w) > w_escape and w * dw > 0:
            return OrbitReport(False, None, crossings, best, "escaped in w")
        if theta < EDGE_TOL or theta > hi_edge:
            return OrbitReport(False, None, crossings, best, "escaped in theta")
    if solver.status is Termination.SINGULARITY:
        raise SingularityApproach("orbit reached the coincidence point")
    if solver.status is Termination.UNDERFLOW:
        raise StepSizeUnderflow(f"step size underflow at t={solver.t!r}")
    raise Inconclusive(f"neither closure nor escape within t={max_time!r}")
