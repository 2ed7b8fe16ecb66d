"""Phase-portrait data: Hamiltonian grids with per-cell verdicts and motion types.

Motion types follow from the level-set geometry. For fixed theta the
Hamiltonian is even and monotone in |w|, so the upper half of every orbit is
the graph of |w| over one interval of theta on which the level lies strictly
between the axis value H(theta, 0) and the large-|w| limit. Each end of that
interval is either an axis crossing (the level meets H(theta, 0)) or an escape
(the level meets the large-|w| limit, or theta runs off to infinity). Two
crossings make a closed orbit, one crossing a single passage, none a
repulsion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import opposite, same
from .core import ModelParams, ReducedState, Regime, VerdictKind, singular_angle
from .errors import InvalidInput, NotClosed
from .integrate import detect_closed_orbit
from .reduced import equilibria, hamiltonian_fn, threshold

MASK_RADIUS = 1e-3
SAME_WINDOW = ((0.0, math.pi / 2), (-3.0, 3.0))
OPP_THETA_MAX = 40.0
SCAN_POINTS = 2000
TIE_TOL = 1e-12


class Motion(str, enum.Enum):
    LEAPFROG = "leapfrog"
    SINGLE_PASSAGE = "single_passage"
    REPULSION = "repulsion"
    SEPARATRIX = "separatrix"
    SINGULAR = "singular"


@dataclass
class PortraitGrid:
    """Cell-centred samples; rows follow ``w_axis`` and columns ``theta_axis``."""

    params: ModelParams
    theta_axis: np.ndarray
    w_axis: np.ndarray
    values: np.ma.MaskedArray
    verdicts: np.ndarray
    motions: np.ndarray
    threshold: float

    def counts(self) -> dict[str, int]:
        kinds, n = np.unique(self.motions, return_counts=True)
        return {str(k): int(c) for k, c in zip(kinds, n)}


def default_window(params: ModelParams) -> tuple[tuple[float, float], tuple[float, float]]:
    if params.regime is Regime.SAME:
        return SAME_WINDOW
    return (0.0, 3 * singular_angle(params)), (-3.0, 3.0)


def _cell_axis(lo: float, hi: float, n: int) -> np.ndarray:
    # offsets from the midpoint keep a symmetric window exactly symmetric
    step = (hi - lo) / n
    return 0.5 * (lo + hi) + step * (np.arange(n) - 0.5 * (n - 1))


def hamiltonian_grid(params: ModelParams, theta_range=None, w_range=None, resolution=(400, 400)) -> PortraitGrid:
    """Hamiltonian, verdict and motion type on a ``resolution = (n_theta, n_w)`` grid."""
    nt, nw = resolution
    if nt < 2 or nw < 2:
        raise InvalidInput(f"resolution must be at least 2 per axis, got {resolution!r}")
    dt, dwr = default_window(params)
    theta_range = theta_range or dt
    w_range = w_range or dwr
    hi_theta = math.pi / 2 if params.regime is Regime.SAME else math.inf
    if not 0 <= theta_range[0] < theta_range[1] <= hi_theta or not w_range[0] < w_range[1]:
        raise InvalidInput(f"window {theta_range!r} x {w_range!r} is not inside the phase space")

    theta = _cell_axis(*theta_range, nt)
    w = _cell_axis(*w_range, nw)
    tt, ww = np.meshgrid(theta, w)
    ts = singular_angle(params)
    mask = np.hypot(tt - ts, ww) < MASK_RADIUS
    h = np.where(mask, 0.0, hamiltonian_fn(params)(tt, ww))
    values = np.ma.masked_array(h, mask=mask)

    report = equilibria(params)
    thr = threshold(report)
    verdicts = _verdicts(tt, h, params, report, thr)
    verdicts[mask] = VerdictKind.LEAPFROG.value
    motions = _motions(tt, h, verdicts, params)
    motions[mask] = Motion.SINGULAR.value
    return PortraitGrid(params, theta, w, values, verdicts, motions, thr)


def _verdicts(tt, h, params, report, thr) -> np.ndarray:
    """Vectorised form of the classifiers, including their tie handling."""
    tol = TIE_TOL * max(1.0, abs(thr))
    tie = np.abs(h - thr) <= tol
    if params.regime is Regime.SAME:
        tie |= (np.abs(tt - report.theta_star) <= TIE_TOL) | (np.abs(tt - report.theta_star2) <= TIE_TOL)
        leap = (h < thr) & (tt > report.theta_star) & (tt < report.theta_star2)
    else:
        leap = h > thr
        if report.has_equilibrium:
            leap &= (tt > report.theta_bar) & (tt < report.theta_star)
    out = np.where(leap & ~tie, VerdictKind.LEAPFROG.value, VerdictKind.NON_LEAPFROG.value)
    return out.astype(object)


def _scan_profiles(params: ModelParams):
    """Axis value and large-|w| limit sampled on a fine theta grid covering the whole domain."""
    if params.regime is Regime.SAME:
        grid = np.linspace(1e-6, math.pi / 2 - 1e-6, SCAN_POINTS)
        axis = same.hamiltonian_array(grid, 0.0, params.alpha, params.ratio, params.d)
        limit = same.potential(grid, params.ratio, params.d)
        # inside the orbit strip: axis < h < limit
        return grid, axis, limit
    grid = np.linspace(1e-6, OPP_THETA_MAX, SCAN_POINTS * 4)
    axis = opposite.hamiltonian_array(grid, 0.0, params.alpha, params.ratio, params.d)
    limit = opposite.potential(grid, params.ratio, params.d)
    # the Hamiltonian decreases in |w|; flip signs so the same test applies
    return grid, -axis, -limit


def _end_kind(inside_seq: np.ndarray, h, axis_seq, limit_seq) -> np.ndarray:
    """For each level (column of ``inside_seq``) whether the run ends on the axis (True) or escapes."""
    if inside_seq.shape[0] == 0:
        return np.zeros(inside_seq.shape[1], dtype=bool)
    outside = ~inside_seq
    first = outside.argmax(axis=0)
    hit = outside[first, np.arange(outside.shape[1])]
    return hit & (h <= axis_seq[first])


def _motions(tt, h, verdicts, params: ModelParams) -> np.ndarray:
    grid, axis, limit = _scan_profiles(params)
    sign = 1.0 if params.regime is Regime.SAME else -1.0
    out = np.empty(tt.shape, dtype=object)
    for j in range(tt.shape[1]):
        theta = tt[0, j]
        col = sign * h[:, j]
        inside = (axis[:, None] < col[None, :]) & (col[None, :] < limit[:, None])
        k = np.searchsorted(grid, theta)
        right = _end_kind(inside[k:], col, axis[k:], limit[k:])
        left = _end_kind(inside[:k][::-1], col, axis[:k][::-1], limit[:k][::-1])
        crossings = right.astype(int) + left.astype(int)
        kinds = np.where(crossings == 2, Motion.SEPARATRIX.value,
                         np.where(crossings == 1, Motion.SINGLE_PASSAGE.value, Motion.REPULSION.value))
        kinds = np.where(verdicts[:, j] == VerdictKind.LEAPFROG.value, Motion.LEAPFROG.value, kinds)
        out[:, j] = kinds
    return out


def orbit_period(state0: ReducedState, params: ModelParams, time_scale: float = 1.0, **kwargs) -> float:
    """Period of the closed orbit through ``state0`` divided by ``time_scale``.

    With the canonical time equal to ``time_scale * t`` this is the period in
    the user's time units; the default reports it in canonical time.
    """
    report = detect_closed_orbit(None, state0, params, **kwargs)
    if not report.closed:
        raise NotClosed(f"orbit through ({state0.theta!r}, {state0.w!r}) is not closed: {report.detail}")
    return report.period / time_scale
