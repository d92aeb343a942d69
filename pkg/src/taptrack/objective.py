"""Scalar terms of the receding-horizon cost.

The window cost is the mean squared tracking error plus two behavioral
penalties: deviation from the diagonal directions (mu1) and squared
deviation of the l1 speed from its target (mu2).  Because the control
is held constant over the prediction window, both penalties collapse
from windowed averages to single-control values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import Control, HumanLikeParams, State, rollout

__all__ = ["CostBreakdown", "mse_window", "mu1", "mu2", "total_cost"]


@dataclass(frozen=True, slots=True)
class CostBreakdown:
    """The three raw cost terms and their weighted sum.

    The raw terms are kept separate so experiments can report penalty
    activity, not just totals; total is exactly
    mse + lambda1*mu1 + lambda2*mu2, with no hidden normalization.
    """

    mse: float
    mu1: float
    mu2: float
    total: float


def mse_window(predicted: Sequence[State], reference: Sequence[State]) -> float:
    """Mean squared Euclidean distance over a window of future states.

    Both sequences cover the W *future* steps; the current state is
    excluded.
    """
    if len(predicted) == 0:
        raise ValueError("window must contain at least one state")
    if len(predicted) != len(reference):
        raise ValueError(
            f"window length mismatch: {len(predicted)} predicted vs "
            f"{len(reference)} reference states"
        )
    acc = 0.0
    for s, r in zip(predicted, reference):
        dx = s.x - r.x
        dy = s.y - r.y
        acc += dx * dx + dy * dy
    return acc / len(predicted)


def mu1(u: Control) -> float:
    """Deviation from the preferred diagonal directions: | |vx| - |vy| |."""
    return abs(abs(u.vx) - abs(u.vy))


def mu2(u: Control, m: float) -> float:
    """Squared deviation of the l1 speed from the target m.

    This is the simplified negative-log-Gaussian form: the additive
    constant and the variance denominator are deliberately dropped.
    """
    if m <= 0:
        raise ValueError("speed target must be positive")
    d = u.l1() - m
    return d * d


def total_cost(
    state: State,
    u: Control,
    reference: Sequence[State],
    params: HumanLikeParams,
) -> CostBreakdown:
    """Cost of holding control u over the whole window starting at state.

    Rolls u forward for W steps and scores the result; display bounds
    are the solver's feasibility job and are not checked here.
    """
    if len(reference) != params.window:
        raise ValueError(
            f"reference window must have {params.window} states, got {len(reference)}"
        )
    predicted = rollout(state, u, params.dt, params.window)
    e = mse_window(predicted, reference)
    p1 = mu1(u)
    p2 = mu2(u, params.speed_target)
    return CostBreakdown(e, p1, p2, e + params.lambda1 * p1 + params.lambda2 * p2)
