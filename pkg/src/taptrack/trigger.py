"""Stochastic event trigger driven by an empirical inter-update CDF.

An update fires at a step when a uniform indicator d_t (drawn at the
previous update) falls below the CDF of the time elapsed since that
update, so realized inter-update intervals are distributed exactly like
the configured CDF — inverse-transform sampling in disguise, which
``next_interval`` makes explicit.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

__all__ = [
    "EmpiricalCdf",
    "TriggerState",
    "should_update",
    "next_interval",
    "default_cdf",
    "sample_indicator",
]

DEFAULT_SUPPORT = 20
DEFAULT_MEAN_STEPS = 8.0


@dataclass(frozen=True)
class EmpiricalCdf:
    """Discrete CDF of inter-update intervals on support {1..K} steps.

    values[k-1] is F(k); it must be nondecreasing within [0, 1] and
    terminate at exactly 1.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ValueError("CDF must have a nonempty support")
        prev = 0.0
        for k, v in enumerate(self.values, start=1):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"F({k})={v} lies outside [0, 1]")
            if v < prev:
                raise ValueError(f"CDF must be nondecreasing, violated at k={k}")
            prev = v
        if self.values[-1] != 1.0:
            raise ValueError("CDF must terminate at exactly 1")

    @property
    def support(self) -> int:
        return len(self.values)

    def value(self, t_event: int) -> float:
        """F(t_event); intervals beyond the support clamp to F = 1, so an
        update is always forced by step K at the latest."""
        if t_event < 1:
            raise ValueError("t_event counts from 1")
        return self.values[min(t_event, self.support) - 1]

    def probabilities(self) -> tuple[float, ...]:
        prev = 0.0
        out = []
        for v in self.values:
            out.append(v - prev)
            prev = v
        return tuple(out)

    def mean(self) -> float:
        return sum(k * p for k, p in enumerate(self.probabilities(), start=1))


@dataclass
class TriggerState:
    """Indicator drawn at the last update plus steps elapsed since it."""

    d_t: float
    t_event: int


def should_update(trigger: TriggerState, cdf: EmpiricalCdf) -> bool:
    """True iff the stochastic condition d_t <= F(t_event) holds."""
    return trigger.d_t <= cdf.value(trigger.t_event)


def next_interval(d_t: float, cdf: EmpiricalCdf) -> int:
    """Smallest k with F(k) >= d_t: the step at which the iterated
    ``should_update`` loop first fires.  Inverse-transform sampling of
    the inter-update interval; equivalent to the loop because F is
    nondecreasing."""
    if not 0.0 <= d_t <= 1.0:
        raise ValueError(f"d_t must lie in [0, 1], got {d_t!r}")
    return bisect_left(cdf.values, d_t) + 1


def default_cdf(
    support: int = DEFAULT_SUPPORT, mean_steps: float = DEFAULT_MEAN_STEPS
) -> EmpiricalCdf:
    """Synthetic stand-in for a measured inter-update interval CDF.

    A geometric distribution truncated to {1..support} and renormalized,
    with the success parameter bisected so the truncated mean equals
    ``mean_steps`` (default 8 steps, the published mean interval).  The
    measured human CDF is not public; replace this stand-in via the CDF
    file format when real data is available.  Fully deterministic:
    repeated calls reproduce the same CDF bit for bit.
    """
    if support < 2:
        raise ValueError("support must be at least 2 steps")
    if not 1.0 < mean_steps < (support + 1) / 2:
        raise ValueError(
            f"mean_steps must lie in (1, {(support + 1) / 2}) for a truncated "
            f"geometric on {{1..{support}}}"
        )

    def truncated_mean(p: float) -> float:
        weights = [(1.0 - p) ** k for k in range(support)]
        total = sum(weights)
        return sum((k + 1) * w for k, w in enumerate(weights)) / total

    # Truncated mean is continuous and strictly decreasing in p, from
    # (support+1)/2 at p->0 to 1 at p->1; bisect to float resolution.
    lo, hi = 1e-12, 1.0 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if truncated_mean(mid) > mean_steps:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)

    weights = [(1.0 - p) ** k for k in range(support)]
    total = sum(weights)
    cumulative = []
    acc = 0.0
    for w in weights:
        acc += w
        cumulative.append(acc / total)
    cumulative[-1] = 1.0
    return EmpiricalCdf(tuple(cumulative))


def sample_indicator(rng) -> float:
    """One uniform draw in [0, 1] from a seeded generator; consumes
    exactly one draw."""
    return float(rng.random())
