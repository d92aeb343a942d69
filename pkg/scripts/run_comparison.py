#!/usr/bin/env python3
"""Baseline vs human-like comparison experiment.

Generates a reference trajectory, runs 20 seeded trajectories with each
controller, and writes trajectories, event logs, feature reports and a
comparison report into the output directory.  Prints a summary table.

Usage:
    python3 scripts/run_comparison.py --out-dir runs/ [--seeds 20]
        [--speed 31] [--steps 500] [--cdf default|fast]
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from taptrack.features import (
    compute_feature_report,
    diagonal_mass,
    l1_speed_series,
    squared_error_series,
    velocity_directions,
)
from taptrack.model import HumanLikeParams, State
from taptrack.simulate import BASELINE, HUMANLIKE, SimConfig, run_baseline, run_humanlike
from taptrack.trajio import (
    ReferenceSpec,
    export_feature_report,
    generate_reference,
    save_event_log,
    save_trajectory,
)
from taptrack.trigger import EmpiricalCdf, default_cdf


def fast_cdf():
    """Uniform interval CDF on {2..6} steps: updates every 4 steps on average."""
    values = []
    acc = 0.0
    for k in range(1, 21):
        if 2 <= k <= 6:
            acc += 0.2
        values.append(min(acc, 1.0))
    values[-1] = 1.0
    return EmpiricalCdf(tuple(values))


def rectangle_reference(speed, steps, dt, width=1400.0, height=640.0):
    need = (steps + 10) * dt * speed
    loops = max(1, math.ceil(need / (2 * (width + height))))
    x0, y0 = (1920 - width) / 2, (1080 - height) / 2
    corners = [
        State(x0, y0),
        State(x0 + width, y0),
        State(x0 + width, y0 + height),
        State(x0, y0 + height),
    ]
    pts = [corners[0]]
    for i in range(loops * 4):
        pts.append(corners[(i + 1) % 4])
    spec = ReferenceSpec(
        tuple(pts), (float(speed),) * (len(pts) - 1), steps=steps + 10, dt=dt
    )
    return generate_reference(spec)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", required=True)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--speed", type=float, default=31.0)
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--cdf", choices=["default", "fast"], default="fast")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = HumanLikeParams()
    cdf = default_cdf() if args.cdf == "default" else fast_cdf()

    reference = rectangle_reference(args.speed, args.steps, params.dt)
    save_trajectory(reference, out / "reference.csv", bounds=params.bounds, mode="reference")

    sets = {}
    for mode in (BASELINE, HUMANLIKE):
        trajs = []
        for seed in range(args.seeds):
            config = SimConfig(
                steps=args.steps,
                seed=seed,
                params=params,
                initial_state=reference.samples[0].state,
                mode=mode,
                cdf=cdf,
            )
            if mode == BASELINE:
                traj = run_baseline(reference, config)
            else:
                traj, log = run_humanlike(reference, config)
                save_event_log(log, out / f"{mode}_{seed}.csv.events")
            save_trajectory(
                traj, out / f"{mode}_{seed}.csv",
                bounds=params.bounds, mode=mode, seed=seed,
            )
            trajs.append(traj)
        sets[mode] = trajs
        report = compute_feature_report(trajs, reference=reference)
        export_feature_report(report, out / f"features_{mode}.txt")

    print(f"{'':24s}{'baseline':>12s}{'human-like':>12s}")
    rows = []
    for mode in (BASELINE, HUMANLIKE):
        trajs = sets[mode]
        angles = [a for t in trajs for a in velocity_directions(t)]
        speeds = np.concatenate([l1_speed_series(t) for t in trajs])
        errors = np.concatenate([squared_error_series(t, reference) for t in trajs])
        rows.append(
            (
                diagonal_mass(angles, 15.0) if angles else float("nan"),
                float(np.mean(speeds)),
                float(np.median(errors)),
                float(np.mean(errors)),
            )
        )
    for label, idx in (
        ("diagonal mass (15 deg)", 0),
        ("mean l1 speed [px/s]", 1),
        ("median sq. error", 2),
        ("mean sq. error", 3),
    ):
        print(f"{label:24s}{rows[0][idx]:>12.3f}{rows[1][idx]:>12.3f}")
    print(f"\nwrote {2 * args.seeds + 1} trajectories and reports to {out}/")


if __name__ == "__main__":
    main()
