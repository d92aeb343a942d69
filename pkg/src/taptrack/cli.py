"""Command-line entry point: generate references, simulate controllers,
extract features, and compare trajectory sets.

Every command writes a ``<output>.manifest.json`` beside each output
echoing the full parameter set (defaults included), so any run can be
reproduced bit-for-bit from its manifest.  Exit codes: 0 success,
1 validation or computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .features import compute_feature_report, l1_speed_series
from .model import DisplayBounds, HumanLikeParams, State
from .simulate import BASELINE, HUMANLIKE, SimConfig, run_baseline, run_humanlike
from .trajio import (
    ReferenceSpec,
    export_feature_report,
    generate_reference,
    load_cdf,
    load_trajectory,
    load_trajectory_file,
    save_cdf,
    save_event_log,
    save_trajectory,
)
from .trigger import default_cdf

__all__ = ["main", "build_parser"]

ARTIFACT_VERSION = "0.1.0"


class UsageError(Exception):
    """Bad flag combination not expressible as an argparse constraint."""


def _write_manifest(out_path, command: str, parameters: dict, inputs: list, outputs: list) -> None:
    manifest = {
        "artifact_version": ARTIFACT_VERSION,
        "command": command,
        "parameters": parameters,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
    }
    Path(str(out_path) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def _parse_point(text: str) -> State:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"point must be 'x,y', got {text!r}")
    try:
        return State(float(parts[0]), float(parts[1]))
    except ValueError:
        raise UsageError(f"point must be numeric 'x,y', got {text!r}") from None


def _parse_waypoints(text: str) -> tuple[State, ...]:
    return tuple(_parse_point(part) for part in text.split(":"))


def _parse_seeds(args) -> list[int]:
    if args.seeds is not None:
        text = args.seeds
        if ".." in text:
            first, _, last = text.partition("..")
            try:
                lo, hi = int(first), int(last)
            except ValueError:
                raise UsageError(f"--seeds range must be 'a..b', got {text!r}") from None
            if hi < lo:
                raise UsageError("--seeds range must be ascending")
            return list(range(lo, hi + 1))
        try:
            return [int(s) for s in text.split(",")]
        except ValueError:
            raise UsageError(f"--seeds must be 'a..b' or a comma list, got {text!r}") from None
    if args.batch is not None:
        if args.batch < 1:
            raise UsageError("--batch must be positive")
        return list(range(args.batch))
    return [args.seed]


def cmd_gen_ref(args) -> int:
    waypoints = _parse_waypoints(args.waypoints)
    bounds = DisplayBounds(args.width, args.height)
    spec = ReferenceSpec(
        waypoints=waypoints,
        speeds=(args.speed,) * (len(waypoints) - 1),
        steps=args.steps,
        dt=args.dt,
        bounds=bounds,
    )
    traj = generate_reference(spec)
    save_trajectory(traj, args.out, bounds=bounds, mode="reference")
    _write_manifest(
        args.out,
        "gen-ref",
        {
            "waypoints": args.waypoints,
            "speed": args.speed,
            "steps": args.steps,
            "dt": args.dt,
            "width": args.width,
            "height": args.height,
        },
        inputs=[],
        outputs=[args.out],
    )
    return 0


def cmd_simulate(args) -> int:
    ref_file = load_trajectory_file(args.ref)
    reference = ref_file.trajectory
    params = HumanLikeParams(
        lambda1=args.lambda1,
        lambda2=args.lambda2,
        sigma_eps=args.sigma,
        window=args.window,
        speed_target=args.speed_target,
        dt=reference.dt,
        bounds=ref_file.bounds,
    )
    cdf = load_cdf(args.cdf) if args.cdf else None
    if args.steps is not None:
        steps = args.steps
    elif args.mode == BASELINE:
        steps = len(reference)
    else:
        steps = len(reference) - args.window
    initial = _parse_point(args.init) if args.init else reference.samples[0].state

    seeds = _parse_seeds(args)
    batch = args.seeds is not None or args.batch is not None
    if batch and "{seed}" not in args.out:
        raise UsageError("batch runs need a '{seed}' placeholder in --out")

    for seed in seeds:
        out = Path(args.out.replace("{seed}", str(seed)))
        config = SimConfig(
            steps=steps,
            seed=seed,
            params=params,
            initial_state=initial,
            mode=args.mode,
            cdf=cdf,
        )
        outputs = [out]
        if args.mode == BASELINE:
            traj = run_baseline(reference, config)
        else:
            traj, log = run_humanlike(reference, config)
            # appended suffix (like the manifest) so trajectory globs
            # such as hl_*.csv never pick up event logs
            events_out = Path(str(out) + ".events")
            save_event_log(log, events_out)
            outputs.append(events_out)
        save_trajectory(traj, out, bounds=params.bounds, mode=args.mode, seed=seed)
        _write_manifest(
            out,
            "simulate",
            {
                "mode": args.mode,
                "seed": seed,
                "steps": steps,
                "init": [initial.x, initial.y],
                "lambda1": params.lambda1,
                "lambda2": params.lambda2,
                "sigma": params.sigma_eps,
                "window": params.window,
                "speed_target": params.speed_target,
                "dt": params.dt,
                "width": params.bounds.width,
                "height": params.bounds.height,
                "cdf": args.cdf,
            },
            inputs=[args.ref] + ([args.cdf] if args.cdf else []),
            outputs=outputs,
        )
    return 0


def cmd_features(args) -> int:
    trajs = [load_trajectory(p) for p in args.traj]
    reference = load_trajectory(args.ref) if args.ref else None
    report = compute_feature_report(
        trajs,
        reference=reference,
        bins=args.bins,
        bandwidth=args.bandwidth,
        speed_floor=args.speed_floor,
        diagonal_tolerance=args.diagonal_tolerance,
    )
    export_feature_report(report, args.out)
    _write_manifest(
        args.out,
        "features",
        {
            "bins": args.bins,
            "bandwidth": args.bandwidth,
            "speed_floor": args.speed_floor,
            "diagonal_tolerance": args.diagonal_tolerance,
            "ref": args.ref,
        },
        inputs=list(args.traj) + ([args.ref] if args.ref else []),
        outputs=[args.out],
    )
    return 0


def _ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Kolmogorov-Smirnov statistic between two sample sets."""
    grid = np.union1d(a, b)
    fa = np.searchsorted(np.sort(a), grid, side="right") / a.size
    fb = np.searchsorted(np.sort(b), grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def _set_summary(lines: list[str], name: str, report) -> None:
    lines.append(f"[{name}]")
    lines.append(f"trajectories={report.n_trajectories}")
    lines.append(f"mean_l1_speed={report.mean_l1_speed!r}")
    if report.diagonal_mass_value is not None:
        lines.append(f"diagonal_mass={report.diagonal_mass_value!r}")
    if report.mean_squared_error is not None:
        lines.append(f"mean_squared_error={report.mean_squared_error!r}")
    if report.median_squared_error is not None:
        lines.append(f"median_squared_error={report.median_squared_error!r}")


def cmd_compare(args) -> int:
    trajs_a = [load_trajectory(p) for p in args.a]
    trajs_b = [load_trajectory(p) for p in args.b]
    reference = load_trajectory(args.ref) if args.ref else None
    report_a = compute_feature_report(trajs_a, reference=reference, bins=args.bins)
    report_b = compute_feature_report(trajs_b, reference=reference, bins=args.bins)

    speeds_a = np.concatenate([l1_speed_series(t) for t in trajs_a])
    speeds_b = np.concatenate([l1_speed_series(t) for t in trajs_b])

    lines = ["[meta]", f"schema=1", f"bins={args.bins}"]
    _set_summary(lines, "set_a", report_a)
    _set_summary(lines, "set_b", report_b)
    lines.append("[distances]")
    lines.append(f"speed_ks={_ks_two_sample(speeds_a, speeds_b)!r}")
    if report_a.histogram is not None and report_b.histogram is not None:
        tv = 0.5 * sum(
            abs(x - y)
            for x, y in zip(
                report_a.histogram.relative_frequencies,
                report_b.histogram.relative_frequencies,
            )
        )
        lines.append(f"direction_tv={tv!r}")
    if report_a.interval_cdf is not None and report_b.interval_cdf is not None:
        ks = max(
            abs(x - y)
            for x, y in zip(report_a.interval_cdf.values, report_b.interval_cdf.values)
        )
        lines.append(f"interval_ks={ks!r}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    _write_manifest(
        args.out,
        "compare",
        {"bins": args.bins, "ref": args.ref, "a": list(args.a), "b": list(args.b)},
        inputs=list(args.a) + list(args.b) + ([args.ref] if args.ref else []),
        outputs=[args.out],
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taptrack",
        description="Pointer-tracking simulators and behavioral feature analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-ref", help="generate a waypoint reference trajectory")
    p.add_argument("--waypoints", required=True, help="x1,y1:x2,y2:... (one = held point)")
    p.add_argument("--speed", type=float, default=63.75, help="segment speed, px/s")
    p.add_argument("--steps", type=int, required=True, help="number of samples")
    p.add_argument("--dt", type=float, default=0.283, help="sampling interval, s")
    p.add_argument("--width", type=float, default=1920.0)
    p.add_argument("--height", type=float, default=1080.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_ref)

    p = sub.add_parser("simulate", help="run a closed-loop tracking simulation")
    p.add_argument("--mode", choices=[BASELINE, HUMANLIKE], required=True)
    p.add_argument("--ref", required=True, help="reference trajectory file")
    p.add_argument("--out", required=True, help="output file; use {seed} for batches")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", help="batch seeds: 'a..b' or comma list")
    p.add_argument("--batch", type=int, help="run seeds 0..N-1")
    p.add_argument("--init", help="initial state 'x,y' (default: reference start)")
    p.add_argument("--steps", type=int, help="decision steps (default: all the reference allows)")
    p.add_argument("--lambda1", type=float, default=32.0, help="diagonal penalty weight")
    p.add_argument("--lambda2", type=float, default=0.6, help="speed penalty weight")
    p.add_argument("--sigma", type=float, default=2.0, help="actuation noise std, px/s")
    p.add_argument("--window", type=int, default=8, help="prediction window, steps")
    p.add_argument("--speed-target", type=float, default=63.75, help="l1 speed target, px/s")
    p.add_argument("--cdf", help="interval CDF file (default: built-in stand-in)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("features", help="extract pooled features from trajectories")
    p.add_argument("--traj", nargs="+", required=True)
    p.add_argument("--ref", help="reference for the error summaries")
    p.add_argument("--bins", type=int, default=8)
    p.add_argument("--bandwidth", type=float, help="KDE bandwidth (default: Silverman)")
    p.add_argument("--speed-floor", type=float, default=1e-9)
    p.add_argument("--diagonal-tolerance", type=float, default=15.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("compare", help="compare two trajectory sets")
    p.add_argument("--a", nargs="+", required=True)
    p.add_argument("--b", nargs="+", required=True)
    p.add_argument("--ref", help="reference for the error summaries")
    p.add_argument("--bins", type=int, default=8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
