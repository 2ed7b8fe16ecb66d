"""Full physical fields: the coaxial-circle system, its z-augmented reduction,
and two parallel straight filaments (planar point vortices).

The coaxial system is written once with the signed canonical ratio
``beta = Gamma1 / Gamma2``; the opposite-sign system is the same equations at
``beta = -gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import opposite, same
from .core import ModelParams, PhysicalState, ReducedState, Regime, reduced_to_physical
from .errors import CoincidentVortices, InvalidInput, SingularPoint

CONTACT_SQ = 1e-24
VORTEX_CONTACT = 1e-12


def physical_rates(r1: float, z1: float, r2: float, z2: float, alpha: float, beta: float):
    """Right-hand side ``(R1', z1', R2', z2')`` of the coaxial-circle system."""
    dr, w = r1 - r2, z1 - z2
    q = dr * dr + w * w
    k = alpha / (q * math.sqrt(q))
    return (
        -k * r2 * w,
        beta / r1 + k * r2 * dr,
        k * beta * r1 * w,
        1 / r2 - k * beta * r1 * dr,
    )


def field_physical(state: PhysicalState, params: ModelParams) -> tuple[float, float, float, float]:
    """Time derivative of ``(r1, z1, r2, z2)`` under the canonical parameters."""
    if (state.r1 - state.r2) ** 2 + (state.z1 - state.z2) ** 2 < CONTACT_SQ:
        raise SingularPoint("the two circles are in contact")
    return physical_rates(state.r1, state.z1, state.r2, state.z2, params.alpha, params.beta)


def physical_system(params: ModelParams):
    """``(fun, guard)`` for the 4D field in array form."""
    alpha, beta = params.alpha, params.beta

    def fun(t, y):
        return np.array(physical_rates(y[0], y[1], y[2], y[3], alpha, beta))

    def guard(y):
        return min(math.hypot(y[0] - y[2], y[1] - y[3]), y[0], y[2])

    return fun, guard


def invariant_monitor(params: ModelParams):
    """Conserved radius combination ``beta r1^2 + r2^2`` (same) or ``gamma r1^2 - r2^2`` (opposite)."""
    sign = 1.0 if params.regime is Regime.SAME else -1.0
    ratio = params.ratio
    return lambda y: ratio * y[0] ** 2 + sign * y[2] ** 2


def physical_hamiltonian(params: ModelParams):
    """Reduced Hamiltonian evaluated on a 4D state through the coordinate map."""
    mod = same if params.regime is Regime.SAME else opposite
    alpha, ratio, d = params.alpha, params.ratio, params.d
    rb = math.sqrt(ratio)

    def h(y):
        if params.regime is Regime.SAME:
            theta = math.atan2(y[2], rb * y[0])
        else:
            theta = math.asinh(y[2] / math.sqrt(d))
        return float(mod.hamiltonian_array(theta, y[1] - y[3], alpha, ratio, d))

    return h


@dataclass(frozen=True)
class AugmentedState:
    theta: float
    w: float
    z1: float
    z2: float


def augmented_rates(theta: float, w: float, params: ModelParams):
    """``(theta', w', z1', z2')``: the reduced field plus the axial velocities at the same state."""
    if params.regime is Regime.SAME:
        dtheta, dw = same.rates(theta, w, params.alpha, params.ratio, params.d)
    else:
        dtheta, dw = opposite.rates(theta, w, params.alpha, params.ratio, params.d)
    r1, r2 = _radii(theta, params)
    _, dz1, _, dz2 = physical_rates(r1, w, r2, 0.0, params.alpha, params.beta)
    return dtheta, dw, dz1, dz2


def _radii(theta, params):
    if params.regime is Regime.SAME:
        return params.d / math.sqrt(params.ratio) * math.cos(theta), params.d * math.sin(theta)
    return math.sqrt(params.d / params.ratio) * math.cosh(theta), math.sqrt(params.d) * math.sinh(theta)


def field_augmented(state: AugmentedState, params: ModelParams) -> tuple[float, float, float, float]:
    red = ReducedState(state.theta, state.w)
    # domain and singular-point checks
    if params.regime is Regime.SAME:
        same.field_same(red, params)
    else:
        opposite.field_opp(red, params)
    reduced_to_physical(red, params)
    return augmented_rates(state.theta, state.w, params)


def augmented_system(params: ModelParams):
    """``(fun, guard)`` for the augmented state ``(theta, w, z1, z2)``."""
    from .integrate import reduced_system

    _, reduced_guard = reduced_system(params)

    def fun(t, y):
        return np.array(augmented_rates(y[0], y[1], params))

    return fun, lambda y: reduced_guard(y[:2])


def augmented_to_physical(y, params: ModelParams) -> PhysicalState:
    r1, r2 = _radii(y[0], params)
    return PhysicalState(r1, y[2], r2, y[3])


# Parallel straight filaments


@dataclass(frozen=True)
class ParallelSetup:
    """Two parallel straight filaments seen in cross-section.

    Positions are planar points given as complex numbers. ``dist_d`` and
    ``center_c`` are conserved; ``center_c`` is None when the strengths cancel.
    """

    gamma1: float
    gamma2: float
    alpha: float
    p1: complex
    p2: complex

    def __post_init__(self):
        object.__setattr__(self, "p1", complex(self.p1))
        object.__setattr__(self, "p2", complex(self.p2))
        if not self.alpha > 0:
            raise InvalidInput(f"alpha must be positive, got {self.alpha!r}")
        if self.gamma1 == 0 or self.gamma2 == 0:
            raise InvalidInput("vorticity strengths must be nonzero")
        if abs(self.p1 - self.p2) < VORTEX_CONTACT:
            raise CoincidentVortices("the two filaments coincide")

    @property
    def total(self) -> float:
        return self.gamma1 + self.gamma2

    @property
    def dist_d(self) -> float:
        return abs(self.p1 - self.p2)

    @property
    def center_c(self) -> complex | None:
        if self.total == 0:
            return None
        return (self.gamma1 * self.p1 + self.gamma2 * self.p2) / self.total

    @property
    def omega(self) -> float:
        """Angular velocity of the rotation about the center of vorticity."""
        return -self.alpha * self.total / self.dist_d**3

    @property
    def w0(self) -> complex:
        return self.p1 - self.p2


def field_pointvortex(positions: tuple[complex, complex], setup: ParallelSetup) -> tuple[complex, complex]:
    """Velocities of the two filaments; the interaction decays as distance squared."""
    z1, z2 = complex(positions[0]), complex(positions[1])
    sep = z1 - z2
    dist = abs(sep)
    if dist < VORTEX_CONTACT:
        raise CoincidentVortices(f"vortex distance {dist!r} below {VORTEX_CONTACT}")
    k = -1j * setup.alpha / dist**3
    return k * setup.gamma2 * sep, -k * setup.gamma1 * sep


def pointvortex_system(setup: ParallelSetup):
    """Real-valued field on ``(x1, x2, y1, y2)`` for the integrator."""

    def fun(t, y):
        v1, v2 = field_pointvortex((complex(y[0], y[1]), complex(y[2], y[3])), setup)
        return np.array([v1.real, v1.imag, v2.real, v2.imag])

    return fun


def parallel_exact(t: float, setup: ParallelSetup) -> tuple[complex, complex]:
    """Closed-form positions: rigid rotation about C, or uniform translation when the strengths cancel."""
    c = setup.center_c
    if c is None:
        v = -1j * setup.alpha * setup.gamma2 * setup.w0 / setup.dist_d**3
        return setup.p1 + v * t, setup.p2 + v * t
    # written as an increment so that t = 0 returns the initial points exactly
    turn = complex(math.cos(setup.omega * t) - 1.0, math.sin(setup.omega * t))
    return setup.p1 + (setup.p1 - c) * turn, setup.p2 + (setup.p2 - c) * turn
