"""
Simulation runner.

Integrates u_t = K∗u − u + f(u) with fixed-step RK4 from t = 0 to T,
recording fronts, probe values and shape diagnostics at every output time.
"""
import math
from typing import Optional

import numpy as np
from loguru import logger

from src.config.settings import get_settings
from src.models.model import KppModel
from src.services.simulation.fronts import check_symmetry_monotone, estimate_speeds, front_positions
from src.services.simulation.initial import ExponentialData
from src.services.simulation.operator import DiscreteOperator, discretize
from src.services.simulation.stepper import step
from src.services.simulation.types import (
    FrontTrace,
    ProbeSample,
    SimConfig,
    SimResult,
    SimState,
    SymmetrySample,
)
from src.utils.errors import ConfigError, FrontNearBoundaryError, InsufficientDataError


def default_dt(model: KppModel) -> float:
    """0.1·min(1, 1/L_f)."""
    return 0.1 * min(1.0, 1.0 / model.reaction.lipschitz_bound())


def validate_config(model: KppModel, config: SimConfig) -> float:
    """
    Check the grid, stability bound and initial datum; return the time step.

    Raises:
        ConfigError: For an empty domain, bad Δx/Δt/T or thresholds outside (0, 1)
        TruncationError: If an exponential datum is cut inside the domain
    """
    if not config.x_max > config.x_min:
        raise ConfigError(f"simulate.domain must satisfy x_min < x_max (got [{config.x_min}, {config.x_max}])")
    if not config.dx > 0:
        raise ConfigError(f"simulate.dx must be positive (got {config.dx})")
    if not config.t_final > 0:
        raise ConfigError(f"simulate.t_final must be positive (got {config.t_final})")
    if not config.output_every > 0:
        raise ConfigError(f"simulate.output_every must be positive (got {config.output_every})")
    if not config.omegas or any(not 0 < omega < 1 for omega in config.omegas):
        raise ConfigError(f"simulate.omegas must lie in (0, 1) (got {list(config.omegas)})")

    lipschitz = model.reaction.lipschitz_bound()
    dt = default_dt(model) if config.dt is None else config.dt
    limit = 0.5 / (1.0 + lipschitz)
    if not 0 < dt <= limit:
        raise ConfigError(f"simulate.dt={dt} outside (0, {limit:.6g}], the stability bound for L_f={lipschitz:.6g}")

    if isinstance(config.initial, ExponentialData):
        config.initial.check_truncation(config.x_min, config.x_max)
    return dt


def _check_boundary(config: SimConfig, time: float, omega: float, left: float, right: float, margin: float) -> None:
    for name, position in (("left", left), ("right", right)):
        if position is None:
            continue
        distance = min(position - config.x_min, config.x_max - position)
        if distance < margin:
            raise FrontNearBoundaryError(
                f"{name} front at ω={omega} is {distance:.4g} from the domain edge at t={time:.6g} "
                f"(needs ≥ {margin:.4g}); enlarge the domain or shorten the run"
            )


def _probe(config: SimConfig, state: SimState) -> ProbeSample:
    x, u = state.x, state.values
    ball = np.abs(x - config.probe_x) <= config.probe_radius
    ball_min = float(np.min(u[ball])) if np.any(ball) else math.nan
    return ProbeSample(
        time=state.time,
        center_value=float(np.interp(config.probe_x, x, u)),
        ball_min=ball_min,
    )


def run(
    model: KppModel,
    config: SimConfig,
    operator: Optional[DiscreteOperator] = None,
    fit: bool = True,
) -> SimResult:
    """
    Integrate one run.

    Args:
        model: Kernel and reaction
        config: Grid, time stepping and outputs
        operator: Prebuilt operator for the same kernel and Δx
        fit: Fit front speeds at the end; skipped silently if the trace is too short

    Raises:
        BlowUpError: If a step leaves [0, 1]
        FrontNearBoundaryError: If a front comes within 10 kernel half-widths of an edge
    """
    dt = validate_config(model, config)
    operator = operator or discretize(model, config)
    margin = get_settings().FRONT_MARGIN_HALF_WIDTHS * operator.half_width

    x = config.grid()
    state = SimState(time=0.0, x=x, values=np.clip(config.initial.sample(x), 0.0, 1.0))
    steps = int(round(config.t_final / dt))
    cadence = max(1, int(round(config.output_every / dt)))
    snapshot_steps = {int(round(t / dt)): t for t in config.snapshot_times}

    result = SimResult(
        config=config,
        dt=dt,
        method=operator.method,
        trace=FrontTrace(omegas=tuple(config.omegas)),
        final=state,
    )
    logger.info(
        f"Simulating {x.size} cells on [{config.x_min}, {config.x_max}], Δt={dt}, {steps} steps, "
        f"{operator.weights.size}-cell {operator.method} stencil"
    )

    for n in range(steps + 1):
        if n > 0:
            state = step(state, operator, model.reaction, dt)
            state.time = n * dt
        if n in snapshot_steps:
            result.snapshots[snapshot_steps[n]] = state.values.copy()
        if n % cadence and n != steps:
            continue

        fronts = [front_positions(state, omega) for omega in config.omegas]
        if config.check_boundary:
            for omega, (left, right) in zip(config.omegas, fronts):
                _check_boundary(config, state.time, omega, left, right, margin)
        result.trace.append(state.time, fronts)
        result.probes.append(_probe(config, state))
        if config.symmetry_center is not None:
            asymmetry, violation = check_symmetry_monotone(state, config.symmetry_center)
            result.symmetry.append(SymmetrySample(state.time, asymmetry, violation))

    result.final = state
    if fit:
        try:
            result.fits = estimate_speeds(result.trace, config.fit_window_fraction)
        except InsufficientDataError as e:
            logger.warning(f"Speed fit skipped: {e}")
    logger.info(f"Run finished at t={state.time:.6g} with {state.clamp_count} clamp(s)")
    return result
