"""Exact per-step solvers for the tracking programs.

The baseline tracker has a closed form: with free per-step controls the
windowed tracking problem decomposes greedily, so steering straight at
the next reference point (clamped to the display) is globally optimal.

The human-like program is a mixed-integer piecewise-quadratic problem,
but a tiny one: the window-identity constraint makes the control a
single 2-vector and the sparsity switch d_s freezes one component, so
each integer branch reduces to minimizing a one-dimensional piecewise
quadratic over an interval.  On any piece where sign(v) and
sign(|v| - |frozen|) are constant the cost is a strictly convex
quadratic (the MSE curvature is positive), so the exact minimum is
attained at a piece stationary point, a breakpoint, or an interval
endpoint — all enumerable.  ``brute_force_solve`` is the grid oracle
the tests use to guard the enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Control, DisplayBounds, HumanLikeParams, State
from .objective import CostBreakdown, total_cost

__all__ = [
    "InfeasibleStateError",
    "VelocityBox",
    "SolveResult",
    "velocity_box",
    "baseline_step",
    "humanlike_solve",
    "brute_force_solve",
]

# Deterministic tie-break among equal-cost branches: no action first.
_DS_ORDER = (0, 1, -1)
_DEDUPE_TOL = 1e-12
# Tolerance for "the state is on the display": keeps the closed loop
# alive when float drift parks the pointer ~1e-13 px past an edge.
_STATE_TOL = 1e-9


class InfeasibleStateError(ValueError):
    """The pointer is outside the display; no control is feasible."""


@dataclass(frozen=True, slots=True)
class VelocityBox:
    """Per-axis velocity interval keeping W constant-control steps in-bounds.

    Under a constant control the motion is monotone per axis, so the
    binding display constraint is the final window step:
    lo = -x / (W*dt), hi = (width - x) / (W*dt), and likewise for y.
    """

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def contains_x(self, vx: float) -> bool:
        return self.x_lo <= vx <= self.x_hi

    def contains_y(self, vy: float) -> bool:
        return self.y_lo <= vy <= self.y_hi

    def contains(self, u: Control) -> bool:
        return self.contains_x(u.vx) and self.contains_y(u.vy)

    def clamp(self, u: Control) -> Control:
        return Control(
            min(max(u.vx, self.x_lo), self.x_hi),
            min(max(u.vy, self.y_lo), self.y_hi),
        )

    def violation(self, u: Control) -> tuple[float, float]:
        """Per-axis distance of u outside the box (0 when inside)."""
        vx = max(self.x_lo - u.vx, u.vx - self.x_hi, 0.0)
        vy = max(self.y_lo - u.vy, u.vy - self.y_hi, 0.0)
        return vx, vy


@dataclass(frozen=True, slots=True)
class SolveResult:
    """Outcome of one human-like solve: chosen sparsity switch, control,
    cost breakdown, and whether the control keeps the whole window
    in-bounds."""

    d_s: int
    u: Control
    cost: CostBreakdown
    feasible: bool


def velocity_box(
    state: State, bounds: DisplayBounds, window: int, dt: float
) -> VelocityBox:
    """Velocity box of `state`: controls inside it keep all `window`
    forward steps on the display; controls outside violate a bound at
    some step <= window."""
    if window < 1:
        raise ValueError("window must be at least one step")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not bounds.contains(state, tol=_STATE_TOL):
        raise InfeasibleStateError(f"state {state} is outside the display {bounds}")
    horizon = window * dt
    return VelocityBox(
        x_lo=(0.0 - state.x) / horizon,
        x_hi=(bounds.width - state.x) / horizon,
        y_lo=(0.0 - state.y) / horizon,
        y_hi=(bounds.height - state.y) / horizon,
    )


def baseline_step(
    state: State, ref_next: State, bounds: DisplayBounds, dt: float
) -> Control:
    """MSE-minimizing control for the next step, clamped to the display.

    Steers straight at the next reference point; clamping only binds
    when that point cannot be reached without leaving the display.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not bounds.contains(state, tol=_STATE_TOL):
        raise InfeasibleStateError(f"state {state} is outside the display {bounds}")
    vx = (ref_next.x - state.x) / dt
    vy = (ref_next.y - state.y) / dt
    vx = min(max(vx, (0.0 - state.x) / dt), (bounds.width - state.x) / dt)
    vy = min(max(vy, (0.0 - state.y) / dt), (bounds.height - state.y) / dt)
    return Control(vx, vy)


def _free_axis_minimum(
    state: State,
    box: VelocityBox,
    reference: list[State],
    params: HumanLikeParams,
    axis: str,
    frozen: float,
) -> tuple[Control, CostBreakdown]:
    """Exact minimum of the window cost over one free velocity component.

    The 1-D objective in the free component v is piecewise quadratic
    with breakpoints at v = 0 (from |v| in the l1 speed) and at
    v = +-|frozen| (from the diagonal penalty's inner kink).  Candidates
    are each piece's unconstrained stationary point (kept when it lands
    inside its piece), the breakpoints inside the box, and the box
    endpoints; all are scored with the shared cost evaluator.
    """
    w = params.window
    dt = params.dt
    if axis == "x":
        lo, hi = box.x_lo, box.x_hi
        pos = state.x
        refs = [r.x for r in reference]
    else:
        lo, hi = box.y_lo, box.y_hi
        pos = state.y
        refs = [r.y for r in reference]

    a = abs(frozen)
    times = [(k + 1) * dt for k in range(w)]
    sum_t2 = sum(t * t for t in times)
    sum_te = sum(t * (pos - r) for t, r in zip(times, refs))
    curv = sum_t2 / w + params.lambda2  # quadratic coefficient on every piece

    edges = sorted({lo, hi, *(b for b in (-a, 0.0, a) if lo < b < hi)})
    candidates = list(edges)
    for p, q in zip(edges, edges[1:]):
        mid = 0.5 * (p + q)
        s1 = 1.0 if mid >= 0.0 else -1.0
        s2 = 1.0 if abs(mid) >= a else -1.0
        linear = (
            2.0 * sum_te / w
            + params.lambda1 * s1 * s2
            + 2.0 * params.lambda2 * s1 * (a - params.speed_target)
        )
        v = -linear / (2.0 * curv)
        if p <= v <= q:
            candidates.append(v)

    candidates.sort()
    deduped = [candidates[0]]
    for v in candidates[1:]:
        if v - deduped[-1] > _DEDUPE_TOL:
            deduped.append(v)

    best_u = None
    best_cost = None
    for v in deduped:
        u = Control(v, frozen) if axis == "x" else Control(frozen, v)
        cost = total_cost(state, u, reference, params)
        if best_cost is None or cost.total < best_cost.total:
            best_u, best_cost = u, cost
    return best_u, best_cost


def _branch_violation(box: VelocityBox, u_old: Control, d_s: int) -> float:
    """Bound violation of the components a branch freezes at u_old."""
    vx, vy = box.violation(u_old)
    if d_s == 0:
        return max(vx, vy)
    if d_s == 1:  # vy frozen
        return vy
    return vx  # d_s == -1: vx frozen


def humanlike_solve(
    state: State,
    u_old: Control,
    reference: list[State],
    params: HumanLikeParams,
) -> SolveResult:
    """Exact global minimizer of the window cost over the three sparsity
    branches.

    d_s = 0 keeps u_old unchanged, d_s = +1 frees vx with vy frozen at
    its old value, d_s = -1 frees vy.  Equal-cost branches resolve
    deterministically to the earliest of (0, +1, -1).  A branch is
    feasible when its frozen component(s) sit inside the velocity box;
    if every branch is infeasible (u_old off the box on both axes), the
    least-violating branch is returned with feasible=False so the
    closed loop can keep moving at display edges.
    """
    if len(reference) != params.window:
        raise ValueError(
            f"reference window must have {params.window} states, got {len(reference)}"
        )
    if not (math.isfinite(u_old.vx) and math.isfinite(u_old.vy)):
        raise ValueError(f"u_old must be finite, got {u_old!r}")
    box = velocity_box(state, params.bounds, params.window, params.dt)

    branches: list[tuple[int, Control, CostBreakdown, float]] = []
    for d_s in _DS_ORDER:
        if d_s == 0:
            u, cost = u_old, total_cost(state, u_old, reference, params)
        elif d_s == 1:
            u, cost = _free_axis_minimum(state, box, reference, params, "x", u_old.vy)
        else:
            u, cost = _free_axis_minimum(state, box, reference, params, "y", u_old.vx)
        branches.append((d_s, u, cost, _branch_violation(box, u_old, d_s)))

    feasible = [b for b in branches if b[3] == 0.0]
    if feasible:
        best = feasible[0]
        for b in feasible[1:]:
            if b[2].total < best[2].total:
                best = b
        return SolveResult(best[0], best[1], best[2], True)

    best = branches[0]
    for b in branches[1:]:
        if b[3] < best[3]:
            best = b
    return SolveResult(best[0], best[1], best[2], False)


def _window_cost_grid(
    state: State,
    vs: np.ndarray,
    frozen: float,
    axis: str,
    reference: list[State],
    params: HumanLikeParams,
) -> np.ndarray:
    """Vectorized window cost over candidate values of one free component.

    Mirrors ``total_cost`` operation-for-operation (same rollout
    accumulation, same summation order), so each entry is bit-identical
    to the scalar evaluation at that point; the tests assert this.
    """
    if axis == "x":
        vx, vy = vs, frozen
        x, y = np.full(vs.shape, state.x), state.y
    else:
        vx, vy = frozen, vs
        x, y = state.x, np.full(vs.shape, state.y)
    dt = params.dt
    acc = np.zeros(vs.shape)
    for k in range(params.window):
        x = x + vx * dt
        y = y + vy * dt
        dx = x - reference[k].x
        dy = y - reference[k].y
        acc = acc + (dx * dx + dy * dy)
    mse = acc / params.window
    l1 = np.abs(vx) + np.abs(vy)
    p1 = np.abs(np.abs(vx) - np.abs(vy))
    d = l1 - params.speed_target
    p2 = d * d
    return mse + params.lambda1 * p1 + params.lambda2 * p2


def brute_force_solve(
    state: State,
    u_old: Control,
    reference: list[State],
    params: HumanLikeParams,
    grid_resolution: float,
) -> SolveResult:
    """Grid-search oracle for :func:`humanlike_solve`.

    Evaluates the window cost on a dense uniform grid over each branch's
    free interval (exact breakpoints and both endpoints injected) and
    returns the best point found.  Test-only: the enumerative solver
    must never report a higher cost than this, at any resolution.
    """
    if grid_resolution <= 0:
        raise ValueError("grid resolution must be positive")
    if len(reference) != params.window:
        raise ValueError(
            f"reference window must have {params.window} states, got {len(reference)}"
        )
    box = velocity_box(state, params.bounds, params.window, params.dt)

    branches: list[tuple[int, Control, CostBreakdown, float]] = []
    for d_s in _DS_ORDER:
        if d_s == 0:
            u, cost = u_old, total_cost(state, u_old, reference, params)
        else:
            axis = "x" if d_s == 1 else "y"
            frozen = u_old.vy if d_s == 1 else u_old.vx
            lo, hi = (box.x_lo, box.x_hi) if axis == "x" else (box.y_lo, box.y_hi)
            a = abs(frozen)
            extra = [b for b in (lo, hi, -a, 0.0, a) if lo <= b <= hi]
            grid = np.unique(
                np.concatenate([np.arange(lo, hi, grid_resolution), extra])
            )
            costs = _window_cost_grid(state, grid, frozen, axis, reference, params)
            v = float(grid[int(np.argmin(costs))])
            u = Control(v, frozen) if axis == "x" else Control(frozen, v)
            cost = total_cost(state, u, reference, params)
        branches.append((d_s, u, cost, _branch_violation(box, u_old, d_s)))

    feasible = [b for b in branches if b[3] == 0.0]
    if feasible:
        best = feasible[0]
        for b in feasible[1:]:
            if b[2].total < best[2].total:
                best = b
        return SolveResult(best[0], best[1], best[2], True)
    best = branches[0]
    for b in branches[1:]:
        if b[3] < best[3]:
            best = b
    return SolveResult(best[0], best[1], best[2], False)
