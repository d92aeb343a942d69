"""File formats and synthetic reference generation.

All formats are plain decimal text, diff-able and golden-testable:

* Trajectory: ``# key=value`` header lines (dt, width, height, mode,
  schema, optional seed) followed by one ``n,t,x,y,vx,vy,event`` row
  per sample, event in {0,1}.
* Interval CDF: one line ``K``, then ``k F(k)`` for k = 1..K ascending.
* Feature report: ``[section]`` blocks of ``key=value`` pairs and
  whitespace-separated column rows, in a fixed order.
* Event log: ``# key=value`` header plus comma-separated rows.

Floats are written with ``repr`` (shortest decimal that parses back to
the identical double), so every round trip is lossless.  Loaders
enforce the full set of type invariants; downstream code never
revalidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .features import DirectionHistogram, FeatureReport, GaussianFit, Kde1D
from .model import (
    Control,
    DisplayBounds,
    State,
    Trajectory,
    TrajectorySample,
    step,
)
from .simulate import EventLogEntry
from .trigger import EmpiricalCdf

import numpy as np

__all__ = [
    "SCHEMA_VERSION",
    "FileFormatError",
    "TrajectoryFile",
    "ReferenceSpec",
    "save_trajectory",
    "load_trajectory",
    "load_trajectory_file",
    "generate_reference",
    "save_cdf",
    "load_cdf",
    "export_feature_report",
    "load_feature_report",
    "save_event_log",
]

SCHEMA_VERSION = 1
_TIME_TOL = 1e-9


class FileFormatError(ValueError):
    """Structurally malformed file; the message carries the 1-based line
    number where parsing failed."""

    def __init__(self, path, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


@dataclass
class TrajectoryFile:
    """A parsed trajectory plus its header metadata."""

    trajectory: Trajectory
    bounds: DisplayBounds
    mode: str
    seed: int | None
    schema: int


def _fmt(x: float) -> str:
    return repr(float(x))


def save_trajectory(
    traj: Trajectory,
    path,
    *,
    bounds: DisplayBounds,
    mode: str,
    seed: int | None = None,
) -> None:
    lines = [
        f"# dt={_fmt(traj.dt)}",
        f"# width={_fmt(bounds.width)}",
        f"# height={_fmt(bounds.height)}",
        f"# mode={mode}",
        f"# schema={SCHEMA_VERSION}",
    ]
    if seed is not None:
        lines.append(f"# seed={seed}")
    for s in traj.samples:
        lines.append(
            f"{s.n},{_fmt(s.n * traj.dt)},{_fmt(s.state.x)},{_fmt(s.state.y)},"
            f"{_fmt(s.control.vx)},{_fmt(s.control.vy)},{int(s.event)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory_file(path) -> TrajectoryFile:
    text = Path(path).read_text()
    header: dict[str, str] = {}
    rows: list[tuple[int, int, float, TrajectorySample]] = []
    data_started = False
    any_line = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        any_line = True
        if line.startswith("#"):
            if data_started:
                raise FileFormatError(path, line_no, "header line after data rows")
            body = line[1:].strip()
            key, sep, value = body.partition("=")
            if not sep:
                raise FileFormatError(path, line_no, "header must be '# key=value'")
            header[key.strip()] = value.strip()
            continue
        data_started = True
        parts = line.split(",")
        if len(parts) != 7:
            raise FileFormatError(
                path, line_no, f"expected 7 comma-separated fields, got {len(parts)}"
            )
        try:
            n = int(parts[0])
            t, x, y, vx, vy = (float(p) for p in parts[1:6])
        except ValueError:
            raise FileFormatError(path, line_no, "unparsable numeric field") from None
        if parts[6] not in ("0", "1"):
            raise FileFormatError(path, line_no, "event flag must be 0 or 1")
        if not all(math.isfinite(v) for v in (t, x, y, vx, vy)):
            raise FileFormatError(path, line_no, "non-finite value")
        rows.append(
            (line_no, n, t, TrajectorySample(n, State(x, y), Control(vx, vy), parts[6] == "1"))
        )

    if not any_line:
        raise FileFormatError(path, 1, "empty file")
    for key in ("dt", "width", "height", "mode", "schema"):
        if key not in header:
            raise FileFormatError(path, 1, f"missing required header key '{key}'")
    try:
        dt = float(header["dt"])
        width = float(header["width"])
        height = float(header["height"])
        schema = int(header["schema"])
        seed = int(header["seed"]) if "seed" in header else None
    except ValueError:
        raise FileFormatError(path, 1, "unparsable header value") from None
    if schema != SCHEMA_VERSION:
        raise FileFormatError(path, 1, f"unsupported schema version {schema}")
    if dt <= 0:
        raise FileFormatError(path, 1, "dt must be positive")
    if not rows:
        raise FileFormatError(path, 1, "no data rows")

    for line_no, n, t, _ in rows:
        if abs(t - n * dt) > _TIME_TOL:
            raise ValueError(
                f"{path}:{line_no}: invariant violated: t must equal n*dt "
                f"(t={t!r}, n={n})"
            )
    traj = Trajectory(dt, [r[3] for r in rows])
    traj.validate()
    return TrajectoryFile(traj, DisplayBounds(width, height), header["mode"], seed, schema)


def load_trajectory(path) -> Trajectory:
    return load_trajectory_file(path).trajectory


@dataclass(frozen=True)
class ReferenceSpec:
    """Synthetic target path: waypoints visited in order at constant
    per-segment speeds, then held at the final waypoint (the hold pads
    the controller's lookahead window).  A single waypoint is a
    held-point reference."""

    waypoints: tuple[State, ...]
    speeds: tuple[float, ...]
    steps: int
    dt: float = 0.283
    bounds: DisplayBounds = DisplayBounds()

    @property
    def kind(self) -> str:
        return "held-point" if len(self.waypoints) == 1 else "waypoints"

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not self.waypoints:
            raise ValueError("need at least one waypoint")
        if len(self.speeds) != len(self.waypoints) - 1:
            raise ValueError(
                f"need one speed per segment: {len(self.waypoints) - 1} segments, "
                f"got {len(self.speeds)} speeds"
            )
        for v in self.speeds:
            if v <= 0:
                raise ValueError("segment speeds must be positive")
        for wp in self.waypoints:
            if not self.bounds.contains(wp):
                raise ValueError(f"waypoint {wp} is off the display {self.bounds}")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError(f"zero-length segment at waypoint {a}")


def generate_reference(spec: ReferenceSpec) -> Trajectory:
    """Sample the waypoint path at dt.

    Each segment moves straight at its speed; the arrival step shortens
    the velocity so the path lands exactly on the waypoint, and after
    the final waypoint the position is held with zero velocity.
    """
    pos = spec.waypoints[0]
    seg = 0
    samples = []
    for n in range(spec.steps):
        if seg < len(spec.speeds):
            target = spec.waypoints[seg + 1]
            dx = target.x - pos.x
            dy = target.y - pos.y
            dist = math.hypot(dx, dy)
            reach = spec.speeds[seg] * spec.dt
            if dist <= reach:
                u = Control(dx / spec.dt, dy / spec.dt)
                nxt = target
                seg += 1
            else:
                scale = spec.speeds[seg] / dist
                u = Control(dx * scale, dy * scale)
                nxt = step(pos, u, spec.dt)
        else:
            u = Control(0.0, 0.0)
            nxt = pos
        samples.append(TrajectorySample(n, pos, u, n == 0))
        pos = nxt
    return Trajectory(spec.dt, samples)


def save_cdf(cdf: EmpiricalCdf, path) -> None:
    lines = [str(cdf.support)]
    for k, v in enumerate(cdf.values, start=1):
        lines.append(f"{k} {_fmt(v)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_cdf(path) -> EmpiricalCdf:
    text = Path(path).read_text()
    lines = [l for l in text.splitlines()]
    if not lines or not lines[0].strip():
        raise FileFormatError(path, 1, "missing support size")
    try:
        support = int(lines[0].strip())
    except ValueError:
        raise FileFormatError(path, 1, "support size must be an integer") from None
    if support < 1:
        raise FileFormatError(path, 1, "support size must be positive")
    rows = [l.strip() for l in lines[1:] if l.strip()]
    if len(rows) != support:
        raise FileFormatError(
            path, len(lines), f"expected {support} CDF rows, got {len(rows)}"
        )
    values = []
    prev = 0.0
    for i, row in enumerate(rows, start=1):
        line_no = i + 1
        parts = row.split()
        if len(parts) != 2:
            raise FileFormatError(path, line_no, "expected 'k F(k)'")
        try:
            k = int(parts[0])
            v = float(parts[1])
        except ValueError:
            raise FileFormatError(path, line_no, "unparsable CDF row") from None
        if k != i:
            raise FileFormatError(path, line_no, f"expected k={i}, got k={k}")
        if not 0.0 <= v <= 1.0:
            raise FileFormatError(path, line_no, f"F({k})={v} outside [0, 1]")
        if v < prev:
            raise FileFormatError(path, line_no, "CDF must be nondecreasing")
        prev = v
        values.append(v)
    if values[-1] != 1.0:
        raise FileFormatError(path, len(lines), "CDF must terminate at exactly 1")
    return EmpiricalCdf(tuple(values))


def _report_lines(report: FeatureReport) -> list[str]:
    lines = ["[meta]"]
    lines.append(f"schema={SCHEMA_VERSION}")
    lines.append(f"trajectories={report.n_trajectories}")
    lines.append(f"samples={report.n_samples}")
    lines.append(f"bins={report.bins}")
    lines.append(f"speed_floor={_fmt(report.speed_floor)}")
    lines.append(f"diagonal_tolerance={_fmt(report.diagonal_tolerance)}")

    lines.append("[summary]")
    lines.append(f"mean_l1_speed={_fmt(report.mean_l1_speed)}")
    if report.diagonal_mass_value is not None:
        lines.append(f"diagonal_mass={_fmt(report.diagonal_mass_value)}")
    if report.mean_squared_error is not None:
        lines.append(f"mean_squared_error={_fmt(report.mean_squared_error)}")
    if report.median_squared_error is not None:
        lines.append(f"median_squared_error={_fmt(report.median_squared_error)}")

    lines.append("[direction_histogram]")
    if report.histogram is None:
        lines.append("present=false")
    else:
        lines.append("present=true")
        lines.append(f"bin_width={_fmt(report.histogram.bin_width)}")
        for c, f in zip(
            report.histogram.bin_centers, report.histogram.relative_frequencies
        ):
            lines.append(f"{_fmt(c)} {_fmt(f)}")

    lines.append("[speed_kde]")
    if report.speed_kde is None:
        lines.append("present=false")
    else:
        lines.append("present=true")
        lines.append(f"bandwidth={_fmt(report.speed_kde.bandwidth)}")
        lines.append(f"sample_count={report.speed_kde.sample_count}")
        for g, d in zip(report.speed_kde.grid, report.speed_kde.density):
            lines.append(f"{_fmt(g)} {_fmt(d)}")

    lines.append("[speed_fit]")
    if report.speed_fit is None:
        lines.append("present=false")
    else:
        lines.append("present=true")
        lines.append(f"mean={_fmt(report.speed_fit.mean)}")
        lines.append(f"std={_fmt(report.speed_fit.std)}")

    lines.append("[interval_cdf]")
    if report.interval_cdf is None:
        lines.append("present=false")
    else:
        lines.append("present=true")
        for k, v in enumerate(report.interval_cdf.values, start=1):
            lines.append(f"{k} {_fmt(v)}")
    return lines


def export_feature_report(report: FeatureReport, path) -> None:
    """Write the report in a fixed field order; exporting the same report
    twice yields byte-identical files."""
    Path(path).write_text("\n".join(_report_lines(report)) + "\n")


def _parse_sections(path, text: str) -> dict[str, tuple[dict[str, str], list[list[str]]]]:
    sections: dict[str, tuple[dict[str, str], list[list[str]]]] = {}
    current: str | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            if current in sections:
                raise FileFormatError(path, line_no, f"duplicate section [{current}]")
            sections[current] = ({}, [])
        elif current is None:
            raise FileFormatError(path, line_no, "content before first section")
        elif "=" in line:
            key, _, value = line.partition("=")
            sections[current][0][key.strip()] = value.strip()
        else:
            sections[current][1].append(line.split())
    return sections


def load_feature_report(path) -> FeatureReport:
    text = Path(path).read_text()
    sections = _parse_sections(path, text)
    for name in ("meta", "summary", "direction_histogram", "speed_kde",
                 "speed_fit", "interval_cdf"):
        if name not in sections:
            raise FileFormatError(path, 1, f"missing section [{name}]")
    meta, _ = sections["meta"]
    summary, _ = sections["summary"]
    try:
        report = FeatureReport(
            n_trajectories=int(meta["trajectories"]),
            n_samples=int(meta["samples"]),
            bins=int(meta["bins"]),
            speed_floor=float(meta["speed_floor"]),
            diagonal_tolerance=float(meta["diagonal_tolerance"]),
            mean_l1_speed=float(summary["mean_l1_speed"]),
        )
    except (KeyError, ValueError) as exc:
        raise FileFormatError(path, 1, f"bad meta/summary field: {exc}") from None
    if "diagonal_mass" in summary:
        report.diagonal_mass_value = float(summary["diagonal_mass"])
    if "mean_squared_error" in summary:
        report.mean_squared_error = float(summary["mean_squared_error"])
    if "median_squared_error" in summary:
        report.median_squared_error = float(summary["median_squared_error"])

    kv, rows = sections["direction_histogram"]
    if kv.get("present") == "true":
        centers = tuple(float(r[0]) for r in rows)
        freqs = tuple(float(r[1]) for r in rows)
        report.histogram = DirectionHistogram(centers, freqs, float(kv["bin_width"]))

    kv, rows = sections["speed_kde"]
    if kv.get("present") == "true":
        report.speed_kde = Kde1D(
            sample_count=int(kv["sample_count"]),
            bandwidth=float(kv["bandwidth"]),
            grid=np.array([float(r[0]) for r in rows]),
            density=np.array([float(r[1]) for r in rows]),
        )

    kv, _ = sections["speed_fit"]
    if kv.get("present") == "true":
        report.speed_fit = GaussianFit(float(kv["mean"]), float(kv["std"]))

    kv, rows = sections["interval_cdf"]
    if kv.get("present") == "true":
        report.interval_cdf = EmpiricalCdf(tuple(float(r[1]) for r in rows))
    return report


def save_event_log(log: list[EventLogEntry], path) -> None:
    lines = [
        f"# schema={SCHEMA_VERSION}",
        "# columns=step,d_s,vx_pre,vy_pre,vx_post,vy_post,d_t,t_event",
    ]
    for e in log:
        lines.append(
            f"{e.step},{e.d_s},{_fmt(e.u_pre.vx)},{_fmt(e.u_pre.vy)},"
            f"{_fmt(e.u_post.vx)},{_fmt(e.u_post.vy)},{_fmt(e.d_t)},{e.t_event}"
        )
    Path(path).write_text("\n".join(lines) + "\n")
