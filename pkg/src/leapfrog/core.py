"""Parameters, states and the exact maps between physical and reduced coordinates.

Two coaxial circular filaments are described physically by their radii and
axial positions ``(r1, z1, r2, z2)``. After renaming the filaments and
rescaling time so that the second strength is one, the ratio of strengths is
``beta = Gamma1 / Gamma2``. For equal signs ``beta >= 1``; for opposite signs
``beta <= -1`` and we write ``gamma = -beta``.

The conserved quantity used to eliminate one radius has a different
convention in each regime, and ``ModelParams.d`` follows it literally:

* same sign:      ``d**2 = beta * r1**2 + r2**2``
* opposite sign:  ``d    = gamma * r1**2 - r2**2``

Reduced coordinates are ``(theta, w)`` with ``w = z1 - z2`` and

* same sign:      ``r1 = d / sqrt(beta) * cos(theta)``, ``r2 = d * sin(theta)``
* opposite sign:  ``r1 = sqrt(d / gamma) * cosh(theta)``, ``r2 = sqrt(d) * sinh(theta)``
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import (
    DomainViolation,
    GammaOutOfRange,
    InfeasibleInvariant,
    InvalidInput,
    InvariantMismatch,
    OverlappingFilaments,
)

INVARIANT_RTOL = 1e-10


class Regime(str, enum.Enum):
    SAME = "same"
    OPPOSITE = "opposite"


class VerdictKind(str, enum.Enum):
    LEAPFROG = "Leapfrog"
    NON_LEAPFROG = "NonLeapfrog"
    OUT_OF_SCOPE = "OutOfTheoremScope"
    IMPOSSIBLE = "LeapfrogImpossible"


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the canonical (renamed, time-rescaled) system.

    ``ratio`` is beta in the same-sign regime and gamma in the opposite-sign
    regime; ``d`` follows the regime's convention (see module docstring).
    """

    regime: Regime
    alpha: float
    ratio: float
    d: float

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise InvalidInput(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (self.ratio >= 1 and math.isfinite(self.ratio)):
            raise InvalidInput(f"strength ratio must be >= 1, got {self.ratio!r}")
        if not (self.d > 0 and math.isfinite(self.d)):
            raise InvalidInput(f"invariant scale d must be positive, got {self.d!r}")

    @classmethod
    def same(cls, beta: float, alpha: float, d: float) -> "ModelParams":
        return cls(Regime.SAME, alpha, beta, d)

    @classmethod
    def opposite(cls, gamma: float, alpha: float, d: float) -> "ModelParams":
        return cls(Regime.OPPOSITE, alpha, gamma, d)

    @property
    def beta(self) -> float:
        """Signed strength ratio Gamma1/Gamma2 of the canonical system."""
        return self.ratio if self.regime is Regime.SAME else -self.ratio

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "alpha": self.alpha,
            "ratio": self.ratio,
            "d": self.d,
        }


@dataclass(frozen=True)
class ReducedState:
    theta: float
    w: float


@dataclass(frozen=True)
class PhysicalState:
    r1: float
    z1: float
    r2: float
    z2: float

    def check_radii(self) -> None:
        if not (self.r1 > 0 and self.r2 > 0):
            raise InvalidInput(f"radii must be positive, got r1={self.r1!r}, r2={self.r2!r}")

    def check(self) -> None:
        self.check_radii()
        if (self.r1 - self.r2) ** 2 + (self.z1 - self.z2) ** 2 <= 0:
            raise OverlappingFilaments("the two circles coincide")

    def swapped(self) -> "PhysicalState":
        return PhysicalState(self.r2, self.z2, self.r1, self.z1)

    def mirrored(self) -> "PhysicalState":
        return PhysicalState(self.r1, -self.z1, self.r2, -self.z2)


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    hamiltonian: float | None
    threshold: float | None
    detail: str = ""

    @property
    def leapfrog(self) -> bool:
        return self.kind is VerdictKind.LEAPFROG

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "hamiltonian": self.hamiltonian,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CanonicalSetup:
    """A user configuration mapped onto the canonical system.

    ``swapped`` records that the filaments were renamed, ``time_scale`` the
    factor |Gamma2| with canonical time = ``time_scale * t``, and ``mirrored``
    that the axial coordinate was negated. Mirroring replaces a time reversal:
    when the canonical second strength is negative the rescaled system runs
    backwards, and z -> -z turns it back into the forward system.
    """

    params: ModelParams
    reduced0: ReducedState
    swapped: bool
    time_scale: float
    mirrored: bool = False
    physical0: PhysicalState = field(default=None)

    def user_physical(self, phys: PhysicalState) -> PhysicalState:
        """Map a canonical physical state back to the user's labelling."""
        if self.mirrored:
            phys = phys.mirrored()
        if self.swapped:
            phys = phys.swapped()
        return phys

    def user_time(self, tau: float) -> float:
        return tau / self.time_scale

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "theta0": self.reduced0.theta,
            "w0": self.reduced0.w,
            "swapped": self.swapped,
            "mirrored": self.mirrored,
            "time_scale": self.time_scale,
        }


def invariant_value(phys: PhysicalState, regime: Regime, ratio: float) -> float:
    """``beta r1^2 + r2^2`` (equal to d**2) or ``gamma r1^2 - r2^2`` (equal to d)."""
    if regime is Regime.SAME:
        return ratio * phys.r1**2 + phys.r2**2
    return ratio * phys.r1**2 - phys.r2**2


def canonicalize(gamma1: float, gamma2: float, phys0: PhysicalState, alpha: float) -> CanonicalSetup:
    """Rename and rescale a two-filament configuration into canonical form.

    Raises ``InfeasibleInvariant`` for opposite signs with ``d <= 0``; no
    leapfrogging is possible there (``R2 >= R1`` along the whole motion, or
    the circles collide when gamma = 1 and d = 0).
    """
    if gamma1 == 0 or gamma2 == 0:
        raise InvalidInput("vorticity strengths must be nonzero")
    if not alpha > 0:
        raise InvalidInput(f"alpha must be positive, got {alpha!r}")
    phys0.check()

    ratio = gamma1 / gamma2
    swapped = abs(ratio) < 1
    if swapped:
        gamma1, gamma2 = gamma2, gamma1
        phys0 = phys0.swapped()
    mirrored = gamma2 < 0
    if mirrored:
        phys0 = phys0.mirrored()
    regime = Regime.SAME if gamma1 * gamma2 > 0 else Regime.OPPOSITE
    ratio = abs(gamma1 / gamma2)

    inv = invariant_value(phys0, regime, ratio)
    if regime is Regime.SAME:
        d = math.sqrt(inv)
    else:
        d = inv
        if d <= 0:
            raise InfeasibleInvariant(
                f"gamma*r1^2 - r2^2 = {d!r} <= 0: the outer radius never drops "
                "below the inner one, so the rings cannot pass through each other"
            )
    params = ModelParams(regime, alpha, ratio, d)
    reduced0 = physical_to_reduced(phys0, params)
    return CanonicalSetup(params, reduced0, swapped, abs(gamma2), mirrored, phys0)


def physical_to_reduced(phys: PhysicalState, params: ModelParams) -> ReducedState:
    """Exact inverse of the coordinate map; the coincidence point itself maps to (theta_singular, 0)."""
    phys.check_radii()
    inv = invariant_value(phys, params.regime, params.ratio)
    if params.regime is Regime.SAME:
        target = params.d**2
        scale = target
        theta = math.atan2(phys.r2, math.sqrt(params.ratio) * phys.r1)
    else:
        target = params.d
        # gamma r1^2 - r2^2 cancels; compare against the size of its terms
        scale = params.ratio * phys.r1**2 + phys.r2**2
        theta = math.asinh(phys.r2 / math.sqrt(params.d))
    if abs(inv - target) > INVARIANT_RTOL * scale:
        raise InvariantMismatch(
            f"conserved quantity {inv!r} does not match the parameters ({target!r})"
        )
    return ReducedState(theta, phys.z1 - phys.z2)


def reduced_to_physical(red: ReducedState, params: ModelParams) -> tuple[float, float, float]:
    """Radii and axial separation ``(r1, r2, w)`` of a reduced state."""
    theta = red.theta
    if params.regime is Regime.SAME:
        if not 0 < theta < math.pi / 2:
            raise DomainViolation(f"theta={theta!r} outside (0, pi/2)")
        r1 = params.d / math.sqrt(params.ratio) * math.cos(theta)
        r2 = params.d * math.sin(theta)
    else:
        if not (0 < theta < math.inf):
            raise DomainViolation(f"theta={theta!r} outside (0, inf)")
        r1 = math.sqrt(params.d / params.ratio) * math.cosh(theta)
        r2 = math.sqrt(params.d) * math.sinh(theta)
    return r1, r2, red.w


def singular_angle(params: ModelParams) -> float:
    """Reduced angle at which the two radii coincide."""
    if params.regime is Regime.SAME:
        return math.atan(1 / math.sqrt(params.ratio))
    if params.ratio <= 1:
        raise GammaOutOfRange("the radii never coincide when gamma = 1")
    return math.atanh(1 / math.sqrt(params.ratio))
