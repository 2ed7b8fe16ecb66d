"""Regime-agnostic entry points over the two reduced systems."""

from __future__ import annotations

from functools import partial

from . import opposite, same
from .core import ModelParams, PhysicalState, ReducedState, Regime, Verdict, VerdictKind, canonicalize
from .errors import InfeasibleInvariant


def _module(params: ModelParams):
    return same if params.regime is Regime.SAME else opposite


def field(state: ReducedState, params: ModelParams) -> tuple[float, float]:
    if params.regime is Regime.SAME:
        return same.field_same(state, params)
    return opposite.field_opp(state, params)


def hamiltonian(state: ReducedState, params: ModelParams) -> float:
    if params.regime is Regime.SAME:
        return same.hamiltonian_same(state, params)
    return opposite.hamiltonian_opp(state, params)


def equilibria(params: ModelParams):
    if params.regime is Regime.SAME:
        return same.equilibria_same(params)
    return opposite.equilibria_opp(params)


def classify(state: ReducedState, params: ModelParams, report=None) -> Verdict:
    if params.regime is Regime.SAME:
        return same.classify_same(state, params, report)
    return opposite.classify_opp(state, params, report)


def threshold(report) -> float:
    return report.h_star if isinstance(report, same.EquilibriumReportSame) else report.g_threshold


def rates_fn(params: ModelParams):
    """Unchecked scalar field ``(theta, w) -> (dtheta, dw)`` bound to ``params``."""
    return partial(_module(params).rates, alpha=params.alpha, **{_ratio_name(params): params.ratio}, d=params.d)


def hamiltonian_fn(params: ModelParams):
    """Vectorised Hamiltonian ``(theta, w) -> H`` bound to ``params``."""
    mod = _module(params)
    return partial(mod.hamiltonian_array, alpha=params.alpha, **{_ratio_name(params): params.ratio}, d=params.d)


def _ratio_name(params: ModelParams) -> str:
    return "beta" if params.regime is Regime.SAME else "gamma"


def classify_physical(gamma1: float, gamma2: float, phys: PhysicalState, alpha: float):
    """Canonicalize a physical configuration and classify it.

    Returns ``(setup, verdict)``; ``setup`` is None when the opposite-sign
    invariant rules leapfrogging out before any reduction is possible.
    """
    try:
        setup = canonicalize(gamma1, gamma2, phys, alpha)
    except InfeasibleInvariant as exc:
        return None, Verdict(VerdictKind.IMPOSSIBLE, None, None, str(exc))
    return setup, classify(setup.reduced0, setup.params)
