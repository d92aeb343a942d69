"""Receding-horizon pointer tracking with human-like tapping behavior.

A baseline tracker that follows a reference exactly, a human-like
controller that reproduces the behavioral signatures of rhythm-tapping
pointer control (diagonal direction preference, preferred l1 speed,
one-axis-at-a-time updates at stochastically triggered instants), and
the feature pipeline that measures those signatures on any trajectory.
"""

from .model import (
    Control,
    DisplayBounds,
    HumanLikeParams,
    State,
    Trajectory,
    TrajectorySample,
    rollout,
    step,
    update_u_old,
)
from .objective import CostBreakdown, mse_window, mu1, mu2, total_cost
from .solver import (
    InfeasibleStateError,
    SolveResult,
    VelocityBox,
    baseline_step,
    brute_force_solve,
    humanlike_solve,
    velocity_box,
)
from .trigger import (
    EmpiricalCdf,
    TriggerState,
    default_cdf,
    next_interval,
    sample_indicator,
    should_update,
)
from .simulate import (
    BASELINE,
    BatchError,
    EventLogEntry,
    HUMANLIKE,
    SimConfig,
    apply_noise,
    run_baseline,
    run_batch,
    run_humanlike,
)
from .features import (
    DegenerateSamplesError,
    DirectionHistogram,
    FeatureReport,
    GaussianFit,
    Kde1D,
    compute_feature_report,
    diagonal_mass,
    direction_histogram,
    empirical_interval_cdf,
    gaussian_fit,
    kde,
    l1_speed_series,
    squared_error_series,
    velocity_directions,
)
from .trajio import (
    FileFormatError,
    ReferenceSpec,
    TrajectoryFile,
    export_feature_report,
    generate_reference,
    load_cdf,
    load_feature_report,
    load_trajectory,
    load_trajectory_file,
    save_cdf,
    save_event_log,
    save_trajectory,
)

__version__ = "0.1.0"
