"""Behavioral feature extraction from trajectories.

Covers the four feature families used to compare agents with humans:
velocity-direction histograms, l1-speed distributions (KDE plus
Gaussian fit), inter-update-interval CDFs, and squared tracking-error
series.  All angle math uses the data coordinate frame (y grows
downward), the same frame trajectories are recorded in, so human and
artificial data are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Trajectory
from .trigger import EmpiricalCdf

__all__ = [
    "DegenerateSamplesError",
    "DirectionHistogram",
    "Kde1D",
    "GaussianFit",
    "FeatureReport",
    "velocity_directions",
    "direction_histogram",
    "l1_speed_series",
    "kde",
    "gaussian_fit",
    "empirical_interval_cdf",
    "squared_error_series",
    "diagonal_mass",
    "compute_feature_report",
]

DIAGONALS_DEG = (45.0, 135.0, 225.0, 315.0)
DEFAULT_SPEED_FLOOR = 1e-9
DEFAULT_BINS = 8
DEFAULT_DIAGONAL_TOLERANCE = 15.0
KDE_GRID_POINTS = 512
INTERVAL_SUPPORT = 20


class DegenerateSamplesError(ValueError):
    """Samples have zero spread (or too few); automatic bandwidth
    selection cannot produce a density."""


@dataclass(frozen=True, slots=True)
class DirectionHistogram:
    """Circular histogram of velocity directions; frequencies sum to 1."""

    bin_centers: tuple[float, ...]
    relative_frequencies: tuple[float, ...]
    bin_width: float


@dataclass(eq=False)
class Kde1D:
    """Gaussian-kernel density estimate evaluated on a regular grid."""

    sample_count: int
    bandwidth: float
    grid: np.ndarray
    density: np.ndarray


@dataclass(frozen=True, slots=True)
class GaussianFit:
    """Maximum-likelihood Gaussian fit of raw samples (population std)."""

    mean: float
    std: float


def velocity_directions(
    traj: Trajectory, speed_floor: float = DEFAULT_SPEED_FLOOR
) -> list[float]:
    """Directions of the per-sample velocities, degrees in [0, 360).

    Samples with l1 speed at or below ``speed_floor`` carry no usable
    direction and are excluded.
    """
    if speed_floor < 0:
        raise ValueError("speed_floor must be nonnegative")
    out = []
    for sample in traj.samples:
        u = sample.control
        if u.l1() <= speed_floor:
            continue
        out.append(math.degrees(math.atan2(u.vy, u.vx)) % 360.0)
    return out


def direction_histogram(
    angles: Sequence[float], bins: int = DEFAULT_BINS
) -> DirectionHistogram:
    """Circular histogram with centers at k*(360/bins).

    Each angle lands in the bin with the nearest center; half-way ties
    go to the lower center, with the wrap at 360 handled circularly.
    """
    if bins < 1 or 360 % bins != 0:
        raise ValueError("bins must be a positive divisor of 360")
    if not angles:
        raise ValueError("cannot build a histogram from zero angles")
    width = 360.0 / bins
    counts = [0] * bins
    for a in angles:
        idx = math.ceil((a % 360.0) / width - 0.5) % bins
        counts[idx] += 1
    total = len(angles)
    return DirectionHistogram(
        bin_centers=tuple(k * width for k in range(bins)),
        relative_frequencies=tuple(c / total for c in counts),
        bin_width=width,
    )


def l1_speed_series(traj: Trajectory) -> np.ndarray:
    """Per-sample l1 speed |vx| + |vy|; zero-velocity samples included."""
    return np.array([s.control.l1() for s in traj.samples])


def kde(samples: Sequence[float], bandwidth: float | None = None) -> Kde1D:
    """Gaussian-kernel KDE on a 512-point grid spanning the samples
    plus three bandwidths on each side.

    Automatic bandwidth is Silverman's rule,
    0.9 * min(std, IQR/1.34) * n^(-1/5), which needs at least two
    samples with nonzero spread; the chosen bandwidth is always carried
    in the result so figures are reproducible.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("samples must be a nonempty 1-D collection")
    if bandwidth is None:
        if arr.size < 2:
            raise DegenerateSamplesError(
                "automatic bandwidth needs at least two samples"
            )
        std = float(np.std(arr))
        q75, q25 = np.percentile(arr, [75, 25])
        scale = min(std, (q75 - q25) / 1.34)
        h = 0.9 * scale * arr.size ** (-1.0 / 5.0)
        if h <= 0:
            raise DegenerateSamplesError(
                "samples have zero spread; pass an explicit bandwidth"
            )
    else:
        h = float(bandwidth)
        if h <= 0:
            raise ValueError("bandwidth must be positive")
    grid = np.linspace(arr.min() - 3 * h, arr.max() + 3 * h, KDE_GRID_POINTS)
    density = np.zeros(KDE_GRID_POINTS)
    norm = 1.0 / (arr.size * h * math.sqrt(2.0 * math.pi))
    # Chunked so pooled sample sets (10^5+) stay within a few MB.
    for start in range(0, arr.size, 4096):
        chunk = arr[start : start + 4096]
        z = (grid[:, None] - chunk[None, :]) / h
        density += np.exp(-0.5 * z * z).sum(axis=1)
    return Kde1D(int(arr.size), h, grid, density * norm)


def gaussian_fit(samples: Sequence[float]) -> GaussianFit:
    """Sample mean and population standard deviation of the raw samples
    (the KDE curve plays no part in the fit)."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("need at least one sample")
    return GaussianFit(float(np.mean(arr)), float(np.std(arr)))


def _update_intervals(traj: Trajectory) -> np.ndarray:
    events = traj.event_steps()
    return np.diff(np.asarray(events, dtype=int))


def _intervals_to_cdf(intervals: np.ndarray) -> EmpiricalCdf:
    kept = intervals[intervals <= INTERVAL_SUPPORT]
    if kept.size == 0:
        raise ValueError(
            f"no inter-update intervals within the {INTERVAL_SUPPORT}-step support"
        )
    values = tuple(
        float(np.count_nonzero(kept <= k)) / kept.size
        for k in range(1, INTERVAL_SUPPORT + 1)
    )
    return EmpiricalCdf(values)


def empirical_interval_cdf(traj: Trajectory) -> EmpiricalCdf:
    """CDF of inter-update intervals on support {1..20} steps.

    Intervals longer than the support are discarded, mirroring how the
    measured CDF drops its low-probability tail.
    """
    intervals = _update_intervals(traj)
    if intervals.size == 0:
        raise ValueError("need at least two update events")
    return _intervals_to_cdf(intervals)


def squared_error_series(traj: Trajectory, reference: Trajectory) -> np.ndarray:
    """Per-step squared Euclidean tracking error against the reference,
    aligned by step index; the reference may extend past the trajectory."""
    if len(reference) < len(traj):
        raise ValueError(
            f"reference has {len(reference)} samples but the trajectory has "
            f"{len(traj)}"
        )
    errs = np.empty(len(traj))
    for i, sample in enumerate(traj.samples):
        r = reference.samples[i].state
        dx = sample.state.x - r.x
        dy = sample.state.y - r.y
        errs[i] = dx * dx + dy * dy
    return errs


def diagonal_mass(angles: Sequence[float], tolerance: float) -> float:
    """Fraction of angles within ``tolerance`` degrees (circularly) of a
    diagonal direction 45/135/225/315."""
    if not 0.0 < tolerance <= 22.5:
        raise ValueError("tolerance must lie in (0, 22.5] degrees")
    if not angles:
        raise ValueError("cannot compute diagonal mass of zero angles")
    hits = 0
    for a in angles:
        if min(_circular_distance(a, d) for d in DIAGONALS_DEG) <= tolerance:
            hits += 1
    return hits / len(angles)


def _circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


@dataclass(eq=False)
class FeatureReport:
    """Pooled behavioral features of a trajectory set.

    Blocks that cannot be computed (no nonzero velocities, degenerate
    speeds, no intervals, no reference) are None rather than zero-filled.
    """

    n_trajectories: int
    n_samples: int
    bins: int
    speed_floor: float
    diagonal_tolerance: float
    mean_l1_speed: float
    histogram: DirectionHistogram | None = None
    diagonal_mass_value: float | None = None
    speed_kde: Kde1D | None = None
    speed_fit: GaussianFit | None = None
    interval_cdf: EmpiricalCdf | None = None
    mean_squared_error: float | None = None
    median_squared_error: float | None = None


def compute_feature_report(
    trajs: Sequence[Trajectory],
    reference: Trajectory | None = None,
    bins: int = DEFAULT_BINS,
    bandwidth: float | None = None,
    speed_floor: float = DEFAULT_SPEED_FLOOR,
    diagonal_tolerance: float = DEFAULT_DIAGONAL_TOLERANCE,
) -> FeatureReport:
    """Pool features across a trajectory set (and optional reference for
    the error summaries)."""
    if not trajs:
        raise ValueError("need at least one trajectory")

    angles: list[float] = []
    speeds: list[np.ndarray] = []
    intervals: list[np.ndarray] = []
    for traj in trajs:
        angles.extend(velocity_directions(traj, speed_floor))
        speeds.append(l1_speed_series(traj))
        intervals.append(_update_intervals(traj))
    pooled_speeds = np.concatenate(speeds)
    pooled_intervals = np.concatenate(intervals) if intervals else np.array([], int)

    report = FeatureReport(
        n_trajectories=len(trajs),
        n_samples=int(pooled_speeds.size),
        bins=bins,
        speed_floor=speed_floor,
        diagonal_tolerance=diagonal_tolerance,
        mean_l1_speed=float(np.mean(pooled_speeds)),
    )
    if angles:
        report.histogram = direction_histogram(angles, bins)
        report.diagonal_mass_value = diagonal_mass(angles, diagonal_tolerance)
    try:
        report.speed_kde = kde(pooled_speeds, bandwidth)
    except DegenerateSamplesError:
        report.speed_kde = None
    report.speed_fit = gaussian_fit(pooled_speeds)
    if pooled_intervals.size:
        try:
            report.interval_cdf = _intervals_to_cdf(pooled_intervals)
        except ValueError:
            report.interval_cdf = None
    if reference is not None:
        errors = np.concatenate(
            [squared_error_series(t, reference) for t in trajs]
        )
        report.mean_squared_error = float(np.mean(errors))
        report.median_squared_error = float(np.median(errors))
    return report
