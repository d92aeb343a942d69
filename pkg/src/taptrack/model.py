"""Kinematic model of a velocity-controlled pointer on a bounded display.

Positions and velocities are continuous pixel coordinates; nothing is
ever rounded to integer pixels.  The y axis grows downward, matching
screen convention, and that convention carries through every feature
computed downstream.  All types are immutable values and every
operation is pure, so they are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "State",
    "Control",
    "DisplayBounds",
    "HumanLikeParams",
    "TrajectorySample",
    "Trajectory",
    "step",
    "update_u_old",
    "rollout",
]


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class State:
    """Pointer position in pixels."""

    x: float
    y: float


@dataclass(frozen=True, slots=True)
class Control:
    """Pointer velocity in pixels/second."""

    vx: float
    vy: float

    def l1(self) -> float:
        """l1 speed |vx| + |vy|."""
        return abs(self.vx) + abs(self.vy)


@dataclass(frozen=True, slots=True)
class DisplayBounds:
    """Display rectangle [0, width] x [0, height] in pixels."""

    width: float = 1920.0
    height: float = 1080.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("display bounds must have positive width and height")

    def contains(self, state: State, tol: float = 0.0) -> bool:
        return (
            -tol <= state.x <= self.width + tol
            and -tol <= state.y <= self.height + tol
        )


@dataclass(frozen=True, slots=True)
class HumanLikeParams:
    """Tuned constants of the human-like controller.

    Defaults are the tuned values: penalty weights lambda1 (diagonal
    preference) and lambda2 (speed preference), actuation noise std
    sigma_eps, a prediction window of 8 steps (matching the mean
    inter-update interval), an l1 speed target of 63.75 px/s and a
    sampling interval of 0.283 s.
    """

    lambda1: float = 32.0
    lambda2: float = 0.6
    sigma_eps: float = 2.0
    window: int = 8
    speed_target: float = 63.75
    dt: float = 0.283
    bounds: DisplayBounds = DisplayBounds()

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("penalty weights must be nonnegative")
        if self.sigma_eps < 0:
            raise ValueError("sigma_eps must be nonnegative")
        if self.window < 1:
            raise ValueError("window must be at least one step")
        if self.speed_target <= 0:
            raise ValueError("speed_target must be positive")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True, slots=True)
class TrajectorySample:
    """State at step n, the control applied over [n*dt, (n+1)*dt), and
    whether the control was updated at this step."""

    n: int
    state: State
    control: Control
    event: bool


@dataclass
class Trajectory:
    """Time-indexed pointer states with the control applied at each step.

    Treated as immutable once built; every module that emits one
    guarantees the invariants checked by :meth:`validate`.
    """

    dt: float
    samples: list[TrajectorySample]

    def __len__(self) -> int:
        return len(self.samples)

    def states(self) -> list[State]:
        return [s.state for s in self.samples]

    def controls(self) -> list[Control]:
        return [s.control for s in self.samples]

    def event_steps(self) -> list[int]:
        return [s.n for s in self.samples if s.event]

    def validate(self, tol: float = 1e-9) -> None:
        """Check the trajectory invariants; raises ValueError naming the
        first violated one."""
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not self.samples:
            raise ValueError("trajectory must have at least one sample")
        for i, sample in enumerate(self.samples):
            if sample.n != i:
                raise ValueError(
                    f"step indices must increase by 1 from 0: sample {i} has n={sample.n}"
                )
        if not self.samples[0].event:
            raise ValueError("event flag at step 0 must be true")
        for prev, cur in zip(self.samples, self.samples[1:]):
            predicted = step(prev.state, prev.control, self.dt)
            if (
                abs(predicted.x - cur.state.x) > tol
                or abs(predicted.y - cur.state.y) > tol
            ):
                raise ValueError(
                    f"self-consistency violated at step {cur.n}: "
                    f"state {cur.state} != previous state advanced by its control"
                )


def step(state: State, control: Control, dt: float) -> State:
    """Advance the pointer one sampling interval: s + u*dt, componentwise.

    Pure kinematics; keeping the pointer on the display is the
    controller's job, so no clamping happens here.
    """
    _require_finite(x=state.x, y=state.y, vx=control.vx, vy=control.vy)
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")
    return State(state.x + control.vx * dt, state.y + control.vy * dt)


def update_u_old(u: Control) -> Control:
    """Memory update for the previously applied velocity: u_old <- u."""
    return u


def rollout(state: State, control: Control, dt: float, steps: int) -> list[State]:
    """States after 1..steps applications of :func:`step` under a constant
    control."""
    if steps < 1:
        raise ValueError("rollout needs at least one step")
    out = []
    for _ in range(steps):
        state = step(state, control, dt)
        out.append(state)
    return out
