"""Reduced same-sign system: field, Hamiltonian, equilibria and classifier.

Phase space is ``0 < theta < pi/2``, ``w`` real, minus the singular point
``(theta_beta, 0)`` where the two circles coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import ModelParams, ReducedState, Regime, Verdict, VerdictKind, singular_angle
from .errors import AlphaOutOfRange, DomainViolation, InvalidInput, OutOfTheoremScope, SingularPoint

SINGULAR_RADIUS = 1e-12
BRACKET_SHRINK = 1e-9
ROOT_XTOL = 1e-14
TIE_TOL = 1e-12


def _check(params: ModelParams) -> None:
    if params.regime is not Regime.SAME:
        raise InvalidInput("same-sign routine called with opposite-sign parameters")


def _check_state(theta: float, w: float, params: ModelParams) -> None:
    if not 0 < theta < math.pi / 2:
        raise DomainViolation(f"theta={theta!r} outside (0, pi/2)")
    tb = singular_angle(params)
    if math.hypot(theta - tb, w) < SINGULAR_RADIUS:
        raise SingularPoint(f"({theta!r}, {w!r}) is the coincidence point of the filaments")


def rates(theta: float, w: float, alpha: float, beta: float, d: float) -> tuple[float, float]:
    """Unchecked scalar field; the integrators call this directly."""
    s, c = math.sin(theta), math.cos(theta)
    rb = math.sqrt(beta)
    gap = rb * s - c
    q = d * d / beta * gap * gap + w * w
    q32 = q * math.sqrt(q)
    dtheta = alpha * rb * w / q32
    dw = (beta * rb * s - c) / (d * s * c) - alpha * d * d * (s + rb * c) * gap / (rb * q32)
    return dtheta, dw


def potential(theta, beta: float, d: float):
    """Self-induction part of the Hamiltonian (its limit as |w| -> inf)."""
    s, c = np.sin(theta), np.cos(theta)
    b32 = beta**1.5
    return (b32 * (np.log1p(-s) - np.log1p(s)) + np.log1p(-c) - np.log1p(c)) / (2 * d)


def hamiltonian_array(theta, w, alpha: float, beta: float, d: float):
    """Vectorised Hamiltonian; returns -inf at the singular point."""
    theta = np.asarray(theta, dtype=float)
    w = np.asarray(w, dtype=float)
    rb = math.sqrt(beta)
    gap = rb * np.sin(theta) - np.cos(theta)
    q = d * d / beta * gap * gap + w * w
    with np.errstate(divide="ignore"):
        return potential(theta, beta, d) - alpha * rb / np.sqrt(q)


def field_same(state: ReducedState, params: ModelParams) -> tuple[float, float]:
    """``(dtheta/dt, dw/dt)`` of the reduced same-sign system."""
    _check(params)
    _check_state(state.theta, state.w, params)
    return rates(state.theta, state.w, params.alpha, params.ratio, params.d)


def hamiltonian_same(state: ReducedState, params: ModelParams) -> float:
    _check(params)
    _check_state(state.theta, state.w, params)
    return float(hamiltonian_array(state.theta, state.w, params.alpha, params.ratio, params.d))


def cubic(y, alpha: float, beta: float):
    """Polynomial whose root in (0, 1) gives the left equilibrium via theta = arctan(y / sqrt(beta))."""
    return beta * y**3 - (2 * beta + 1) * y**2 + (beta + 2) * y - 1 + alpha * (y * y + beta * y)


def axis_rate(theta: float, params: ModelParams) -> float:
    """``dw/dt`` on the axis w = 0."""
    return rates(theta, 0.0, params.alpha, params.ratio, params.d)[1]


@dataclass(frozen=True)
class EquilibriumReportSame:
    theta_beta: float
    theta_star: float
    theta_star2: float
    h_star: float

    def to_dict(self) -> dict:
        return {
            "regime": "same",
            "theta_beta": self.theta_beta,
            "theta_star": self.theta_star,
            "theta_star2": self.theta_star2,
            "h_star": self.h_star,
        }


def _require_alpha(alpha: float, exc) -> None:
    if not 0 < alpha < 1 / 3:
        raise exc(f"alpha={alpha!r} outside (0, 1/3)")


def equilibria_same(params: ModelParams) -> EquilibriumReportSame:
    """Locate the two saddles on the axis and the leapfrogging threshold.

    On the axis, ``dw/dt`` is negative on (0, theta*) and on
    (theta_beta, theta**) and positive on the two remaining intervals; both
    zeros are simple with positive slope. That sign pattern is checked here
    on a coarse sample.
    """
    _check(params)
    _require_alpha(params.alpha, AlphaOutOfRange)
    alpha, beta = params.alpha, params.ratio
    tb = singular_angle(params)

    y_star = brentq(cubic, 0.0, 1.0, args=(alpha, beta), xtol=ROOT_XTOL, rtol=8.9e-16)
    theta_star = math.atan(y_star / math.sqrt(beta))

    lo, hi = tb + BRACKET_SHRINK, math.pi / 2 - BRACKET_SHRINK
    f = lambda t: axis_rate(t, params)  # noqa: E731
    if not (f(lo) < 0 < f(hi)):
        raise ArithmeticError("axis rate has no sign change on (theta_beta, pi/2)")
    theta_star2 = brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=8.9e-16)

    _verify_sign_pattern(params, theta_star, tb, theta_star2)

    h1 = float(hamiltonian_array(theta_star, 0.0, alpha, beta, params.d))
    h2 = float(hamiltonian_array(theta_star2, 0.0, alpha, beta, params.d))
    return EquilibriumReportSame(tb, theta_star, theta_star2, min(h1, h2))


def _verify_sign_pattern(params, t1, tb, t2, n=25):
    intervals = [(0.0, t1, -1), (t1, tb, 1), (tb, t2, -1), (t2, math.pi / 2, 1)]
    for a, b, sign in intervals:
        for x in np.linspace(a, b, n + 2)[1:-1]:
            if np.sign(axis_rate(float(x), params)) != sign:
                raise ArithmeticError(f"unexpected sign of the axis rate at theta={x!r}")


def classify_same(state0: ReducedState, params: ModelParams, report: EquilibriumReportSame | None = None) -> Verdict:
    """Leapfrog iff theta0 lies strictly between the saddles and H < H*."""
    _check(params)
    _require_alpha(params.alpha, OutOfTheoremScope)
    h = hamiltonian_same(state0, params)
    eq = report or equilibria_same(params)
    hs = eq.h_star
    tol = TIE_TOL * max(1.0, abs(hs))
    theta = state0.theta

    if abs(h - hs) <= tol or abs(theta - eq.theta_star) <= TIE_TOL or abs(theta - eq.theta_star2) <= TIE_TOL:
        return Verdict(VerdictKind.NON_LEAPFROG, h, hs, "separatrix/equilibrium-convergent")
    if h > hs:
        return Verdict(VerdictKind.NON_LEAPFROG, h, hs, "Hamiltonian above the saddle level")
    if not eq.theta_star < theta < eq.theta_star2:
        return Verdict(VerdictKind.NON_LEAPFROG, h, hs, "outside the strip between the saddles")
    return Verdict(VerdictKind.LEAPFROG, h, hs, "closed orbit around the coincidence point")
