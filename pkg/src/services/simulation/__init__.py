"""Grid simulator for u_t = k∗u − u + f(u)."""
from src.services.simulation.fronts import (
    check_symmetry_monotone,
    estimate_speeds,
    fit_for,
    front_positions,
    hair_trigger_time,
)
from src.services.simulation.initial import BumpData, ExponentialData, InitialData, PlateauData, TableData
from src.services.simulation.operator import DiscreteOperator, discretize, stencil_weights
from src.services.simulation.runner import default_dt, run, validate_config
from src.services.simulation.stepper import step
from src.services.simulation.types import (
    FrontTrace,
    ProbeSample,
    SimConfig,
    SimResult,
    SimState,
    SpeedFit,
    SymmetrySample,
)

__all__ = [
    "check_symmetry_monotone",
    "estimate_speeds",
    "fit_for",
    "front_positions",
    "hair_trigger_time",
    "BumpData",
    "ExponentialData",
    "InitialData",
    "PlateauData",
    "TableData",
    "DiscreteOperator",
    "discretize",
    "stencil_weights",
    "default_dt",
    "run",
    "validate_config",
    "step",
    "FrontTrace",
    "ProbeSample",
    "SimConfig",
    "SimResult",
    "SimState",
    "SpeedFit",
    "SymmetrySample",
]
