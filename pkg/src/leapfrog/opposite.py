"""Reduced opposite-sign system: field, Hamiltonian, critical ratio, equilibria, classifier.

Phase space is ``theta > 0``, ``w`` real, minus ``(theta_gamma, 0)``. Unlike
the same-sign case the Hamiltonian tends to ``+inf`` at the singular point and
decreases in ``|w|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import ModelParams, ReducedState, Regime, Verdict, VerdictKind, singular_angle
from .errors import (
    AlphaOutOfRange,
    DomainViolation,
    GammaOutOfRange,
    InvalidInput,
    OutOfTheoremScope,
    SingularPoint,
)

SINGULAR_RADIUS = 1e-12
BRACKET_SHRINK = 1e-9
ROOT_XTOL = 1e-14
TIE_TOL = 1e-12
ETA_BRACKET = (1 + 1e-9, 4.0)


def _check(params: ModelParams) -> None:
    if params.regime is not Regime.OPPOSITE:
        raise InvalidInput("opposite-sign routine called with same-sign parameters")
    if params.ratio <= 1:
        raise GammaOutOfRange(f"gamma={params.ratio!r} must exceed 1")


def _check_state(theta: float, w: float, params: ModelParams) -> None:
    if not 0 < theta < math.inf:
        raise DomainViolation(f"theta={theta!r} outside (0, inf)")
    if math.hypot(theta - singular_angle(params), w) < SINGULAR_RADIUS:
        raise SingularPoint(f"({theta!r}, {w!r}) is the coincidence point of the filaments")


def rates(theta: float, w: float, alpha: float, gamma: float, d: float) -> tuple[float, float]:
    """Unchecked scalar field; the integrators call this directly."""
    ch, sh = math.cosh(theta), math.sinh(theta)
    rg = math.sqrt(gamma)
    gap = ch - rg * sh
    q = d / gamma * gap * gap + w * w
    q32 = q * math.sqrt(q)
    dtheta = -alpha * rg * w / q32
    dw = -(gamma * rg / ch + 1 / sh) / math.sqrt(d) + alpha * d * (sh - rg * ch) * gap / (rg * q32)
    return dtheta, dw


def potential(theta, gamma: float, d: float):
    """Self-induction part of the Hamiltonian; increases to pi gamma^1.5 / (2 sqrt d)."""
    t = np.tanh(np.asarray(theta, dtype=float) / 2)
    return (2 * gamma**1.5 * np.arctan(t) + np.log(t)) / math.sqrt(d)


def hamiltonian_array(theta, w, alpha: float, gamma: float, d: float):
    theta = np.asarray(theta, dtype=float)
    w = np.asarray(w, dtype=float)
    rg = math.sqrt(gamma)
    gap = np.cosh(theta) - rg * np.sinh(theta)
    q = d / gamma * gap * gap + w * w
    with np.errstate(divide="ignore"):
        return potential(theta, gamma, d) + alpha * rg / np.sqrt(q)


def field_opp(state: ReducedState, params: ModelParams) -> tuple[float, float]:
    _check(params)
    _check_state(state.theta, state.w, params)
    return rates(state.theta, state.w, params.alpha, params.ratio, params.d)


def hamiltonian_opp(state: ReducedState, params: ModelParams) -> float:
    _check(params)
    _check_state(state.theta, state.w, params)
    return float(hamiltonian_array(state.theta, state.w, params.alpha, params.ratio, params.d))


def axis_rate(theta: float, params: ModelParams) -> float:
    return rates(theta, 0.0, params.alpha, params.ratio, params.d)[1]


def escape_level(params: ModelParams) -> float:
    """Limit of the Hamiltonian on the axis as theta -> inf."""
    return math.pi * params.ratio**1.5 / (2 * math.sqrt(params.d))


def critical_quartic(eta, alpha: float):
    """Quartic whose root eta* > 1 gives the critical ratio gamma* = eta*^2.

    Obtained from the cubic below evaluated at y = sqrt(gamma) = eta, which
    factors as (eta - 1) * critical_quartic(eta).
    """
    return eta**4 - eta**3 - alpha * eta**2 + eta - 1


def cubic(y, alpha: float, gamma: float):
    """Polynomial whose root in (1, sqrt(gamma)) gives the equilibrium via theta = artanh(y / sqrt(gamma))."""
    return gamma * y**3 + (1 - 2 * gamma) * y**2 + (gamma - 2) * y + 1 + alpha * y * (y - gamma)


def gamma_star(alpha: float) -> float:
    """Critical strength ratio: an equilibrium exists iff gamma > gamma_star(alpha)."""
    if not 0 < alpha < 1 / 3:
        raise AlphaOutOfRange(f"alpha={alpha!r} outside (0, 1/3)")
    eta = brentq(critical_quartic, *ETA_BRACKET, args=(alpha,), xtol=ROOT_XTOL, rtol=8.9e-16)
    return eta * eta


@dataclass(frozen=True)
class EquilibriumReportOpp:
    theta_gamma: float
    gamma_star: float
    theta_star: float | None
    theta_bar: float | None
    g_threshold: float

    @property
    def has_equilibrium(self) -> bool:
        return self.theta_star is not None

    def to_dict(self) -> dict:
        return {
            "regime": "opposite",
            "theta_gamma": self.theta_gamma,
            "gamma_star": self.gamma_star,
            "theta_star": self.theta_star,
            "theta_bar": self.theta_bar,
            "g_threshold": self.g_threshold,
        }


def equilibria_opp(params: ModelParams) -> EquilibriumReportOpp:
    _check(params)
    alpha, gamma, d = params.alpha, params.ratio, params.d
    gs = gamma_star(alpha)
    tg = singular_angle(params)
    if gamma <= gs:
        return EquilibriumReportOpp(tg, gs, None, None, escape_level(params))

    rg = math.sqrt(gamma)
    y_star = brentq(cubic, 1.0, rg, args=(alpha, gamma), xtol=ROOT_XTOL, rtol=8.9e-16)
    theta_star = math.atanh(y_star / rg)
    g_star = float(hamiltonian_array(theta_star, 0.0, alpha, gamma, d))

    excess = lambda t: float(hamiltonian_array(t, 0.0, alpha, gamma, d)) - g_star  # noqa: E731
    lo, hi = BRACKET_SHRINK, tg - BRACKET_SHRINK
    while excess(lo) >= 0 and lo > 1e-300:
        lo *= 1e-8
    theta_bar = brentq(excess, lo, hi, xtol=ROOT_XTOL, rtol=8.9e-16)
    return EquilibriumReportOpp(tg, gs, theta_star, theta_bar, g_star)


def classify_opp(state0: ReducedState, params: ModelParams, report: EquilibriumReportOpp | None = None) -> Verdict:
    """Leapfrogging test for opposite signs.

    Without an equilibrium the orbit closes iff the Hamiltonian exceeds the
    escape level; with one it must additionally start between theta_bar and
    the equilibrium and exceed the Hamiltonian there.
    """
    if params.regime is not Regime.OPPOSITE:
        raise InvalidInput("opposite-sign routine called with same-sign parameters")
    if params.ratio == 1:
        return Verdict(VerdictKind.IMPOSSIBLE, None, None, "equal and opposite strengths: r1 > r2 for all time")
    if not 0 < params.alpha < 1 / 3:
        raise OutOfTheoremScope(f"alpha={params.alpha!r} outside (0, 1/3)")
    g = hamiltonian_opp(state0, params)
    eq = report or equilibria_opp(params)
    thr = eq.g_threshold
    tol = TIE_TOL * max(1.0, abs(thr))

    if abs(g - thr) <= tol:
        return Verdict(VerdictKind.NON_LEAPFROG, g, thr, "separatrix/equilibrium-convergent")
    if g < thr:
        return Verdict(VerdictKind.NON_LEAPFROG, g, thr, "Hamiltonian below the threshold level")
    if eq.has_equilibrium and not eq.theta_bar < state0.theta < eq.theta_star:
        return Verdict(VerdictKind.NON_LEAPFROG, g, thr, "outside the strip (theta_bar, theta_star)")
    return Verdict(VerdictKind.LEAPFROG, g, thr, "closed orbit around the coincidence point")
