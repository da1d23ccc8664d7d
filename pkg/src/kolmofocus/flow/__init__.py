"""Numerical Filippov flow, half-return maps and limit-cycle experiments."""

from .integrator import FlowOptions, IntegrationError, NonMonodromicError, SigmaEvent, Trajectory, integrate
from .returnmap import (
    CrossingLimitCycle,
    NotCrossingError,
    ReturnMapper,
    ReturnMapSample,
    default_u_grid,
    find_crossing_cycles,
    half_return_maps,
)
from .unfolding import (
    StagedResult,
    StageFailure,
    UnfoldingFamily,
    continuous_family,
    family_for,
    hopf_experiment,
    order_three_family,
    pseudo_hopf_homothety,
    reversed_homothety,
    staged_unfolding,
    three_cycle_experiment,
    verify_no_sliding_near,
)
from .export import cycles_csv, read_csv_rows, trajectory_csv
from ..pwfield.scenarios import build_continuous_system
