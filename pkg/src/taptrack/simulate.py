"""Closed-loop rollouts: baseline tracker and the human-like agent.

Each run owns a single seeded generator; at every update event the
draw order is fixed (fresh trigger indicator first, then actuation
noise on the updated component(s)), so runs are bit-reproducible from
(reference, config) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Control,
    HumanLikeParams,
    State,
    Trajectory,
    TrajectorySample,
    step,
    update_u_old,
)
from .solver import VelocityBox, baseline_step, humanlike_solve, velocity_box
from .trigger import (
    EmpiricalCdf,
    TriggerState,
    default_cdf,
    sample_indicator,
    should_update,
)

__all__ = [
    "BASELINE",
    "HUMANLIKE",
    "SimConfig",
    "EventLogEntry",
    "BatchError",
    "run_baseline",
    "run_humanlike",
    "apply_noise",
    "run_batch",
]

BASELINE = "baseline"
HUMANLIKE = "humanlike"


@dataclass(frozen=True, slots=True)
class SimConfig:
    """One closed-loop run: horizon, seed, controller constants, start
    state and controller mode.  cdf=None selects the built-in stand-in
    interval CDF."""

    steps: int
    seed: int
    params: HumanLikeParams
    initial_state: State
    mode: str
    cdf: EmpiricalCdf | None = None

    def __post_init__(self):
        if self.mode not in (BASELINE, HUMANLIKE):
            raise ValueError(f"mode must be '{BASELINE}' or '{HUMANLIKE}'")
        if self.steps < self.params.window:
            raise ValueError("steps must be at least the prediction window")
        if not self.params.bounds.contains(self.initial_state):
            raise ValueError(f"initial state {self.initial_state} is off the display")


@dataclass(frozen=True, slots=True)
class EventLogEntry:
    """One control-update event.

    d_t is the indicator freshly drawn at this event (it schedules the
    next update); t_event is the realized interval since the previous
    event, 0 for the forced event at step 0.
    """

    step: int
    d_s: int
    u_pre: Control
    u_post: Control
    d_t: float
    t_event: int


class BatchError(ValueError):
    """Aggregated per-run failures, each tagged with its run index."""

    def __init__(self, failures: list[tuple[int, Exception]]):
        self.failures = failures
        detail = "; ".join(f"run {i}: {exc}" for i, exc in failures)
        super().__init__(f"{len(failures)} batch run(s) failed: {detail}")


def _check_reference(reference: Trajectory, config: SimConfig, needed: int) -> None:
    if reference.dt != config.params.dt:
        raise ValueError(
            f"reference dt {reference.dt} does not match params dt {config.params.dt}"
        )
    if len(reference) < needed:
        raise ValueError(
            f"reference too short: {len(reference)} samples, need at least {needed}"
        )


def run_baseline(reference: Trajectory, config: SimConfig) -> Trajectory:
    """Closed loop with the per-step MSE-optimal tracker; deterministic,
    no randomness consumed.

    The final sample records the last applied control (the pointer keeps
    its velocity); its transition lies beyond the recorded horizon.
    """
    if config.mode != BASELINE:
        raise ValueError(f"config mode must be '{BASELINE}'")
    _check_reference(reference, config, config.steps)
    bounds, dt = config.params.bounds, config.params.dt
    s = config.initial_state
    u = Control(0.0, 0.0)
    samples = []
    for n in range(config.steps):
        if n < config.steps - 1:
            u = baseline_step(s, reference.samples[n + 1].state, bounds, dt)
        samples.append(TrajectorySample(n, s, u, True))
        if n < config.steps - 1:
            s = step(s, u, dt)
    return Trajectory(dt, samples)


def _updated_axes(d_s: int) -> tuple[str, ...]:
    if d_s == 1:
        return ("x",)
    if d_s == -1:
        return ("y",)
    return ()


def apply_noise(
    u: Control,
    updated_axes: tuple[str, ...],
    sigma: float,
    rng,
    box: VelocityBox,
) -> Control:
    """Gaussian actuation noise on the just-updated component(s) only.

    Each noised component is re-clamped to the velocity box of the
    current state so noise can never push the pointer off the display;
    components the solver did not update are untouched, preserving
    spatial sparsity.  Clamping (rather than resampling) keeps runs
    deterministic.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    vx, vy = u.vx, u.vy
    if "x" in updated_axes:
        vx = min(max(vx + float(rng.normal(0.0, sigma)), box.x_lo), box.x_hi)
    if "y" in updated_axes:
        vy = min(max(vy + float(rng.normal(0.0, sigma)), box.y_lo), box.y_hi)
    return Control(vx, vy)


def run_humanlike(
    reference: Trajectory, config: SimConfig
) -> tuple[Trajectory, list[EventLogEntry]]:
    """Closed loop of the event-triggered human-like controller.

    Per step: when the trigger fires (always at step 0), draw a fresh
    indicator, solve the window program, and add actuation noise to the
    updated component(s); otherwise hold the previous control.  Every
    applied control then passes through the one-step velocity box of the
    current state — a no-op away from the display edges — so the pointer
    slides along an edge instead of leaving it, even when the trigger
    sleeps longer than the solver's window.  The reference must extend
    one window past the final decision step.
    """
    if config.mode != HUMANLIKE:
        raise ValueError(f"config mode must be '{HUMANLIKE}'")
    p = config.params
    _check_reference(reference, config, config.steps + p.window)
    cdf = config.cdf if config.cdf is not None else default_cdf()
    rng = np.random.default_rng(config.seed)

    s = config.initial_state
    u_old = Control(0.0, 0.0)
    d_t = 1.0  # overwritten at step 0 before first use
    since_event = 0
    samples: list[TrajectorySample] = []
    log: list[EventLogEntry] = []
    for n in range(config.steps):
        one_step = velocity_box(s, p.bounds, 1, p.dt)
        fires = n == 0 or should_update(TriggerState(d_t, since_event), cdf)
        if fires:
            box = velocity_box(s, p.bounds, p.window, p.dt)
            d_t = sample_indicator(rng)
            window = [reference.samples[n + 1 + k].state for k in range(p.window)]
            solved = humanlike_solve(s, u_old, window, p)
            noisy = apply_noise(solved.u, _updated_axes(solved.d_s), p.sigma_eps, rng, box)
            u = one_step.clamp(noisy)
            log.append(EventLogEntry(n, solved.d_s, solved.u, u, d_t, since_event))
            since_event = 0
        else:
            u = one_step.clamp(u_old)
        samples.append(TrajectorySample(n, s, u, fires))
        u_old = update_u_old(u)
        since_event += 1
        if n < config.steps - 1:
            s = step(s, u, p.dt)
    return Trajectory(p.dt, samples), log


def run_batch(
    references: list[Trajectory], configs: list[SimConfig]
) -> list[tuple[Trajectory, list[EventLogEntry]]]:
    """Run simulations pairwise; output order always matches input order.
    Baseline runs carry an empty event log.  Failures are aggregated
    into one BatchError naming the offending run indices."""
    if len(references) != len(configs):
        raise ValueError(
            f"got {len(references)} references but {len(configs)} configs"
        )
    results: list[tuple[Trajectory, list[EventLogEntry]]] = []
    failures: list[tuple[int, Exception]] = []
    for i, (ref, cfg) in enumerate(zip(references, configs)):
        try:
            if cfg.mode == BASELINE:
                results.append((run_baseline(ref, cfg), []))
            else:
                results.append(run_humanlike(ref, cfg))
        except Exception as exc:  # noqa: BLE001 - aggregated and re-raised
            failures.append((i, exc))
    if failures:
        raise BatchError(failures)
    return results
