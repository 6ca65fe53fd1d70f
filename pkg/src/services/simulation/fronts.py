"""
Level-set fronts, empirical speeds and shape diagnostics.
"""
import math
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.stats import linregress

from src.services.simulation.types import FrontTrace, SimResult, SimState, SpeedFit
from src.utils.errors import InsufficientDataError, RangeError

MIN_FIT_SAMPLES = 10


def front_positions(state: SimState, omega: float) -> Tuple[Optional[float], Optional[float]]:
    """
    Outermost crossings of level ω, linearly interpolated between cells.

    Returns (None, None) when no cell reaches ω. A level set touching the
    grid edge reports the edge node.
    """
    if not 0 < omega < 1:
        raise RangeError(f"ω must lie in (0, 1) (got {omega})")
    x, u = state.x, state.values
    above = np.flatnonzero(u >= omega)
    if above.size == 0:
        return None, None

    first, last = int(above[0]), int(above[-1])
    if first == 0:
        left = float(x[0])
    else:
        a, b = u[first - 1], u[first]
        left = float(x[first - 1] + (omega - a) / (b - a) * (x[first] - x[first - 1]))
    if last == u.size - 1:
        right = float(x[-1])
    else:
        a, b = u[last], u[last + 1]
        right = float(x[last] + (a - omega) / (a - b) * (x[last + 1] - x[last]))
    return left, right


def _fit(times: np.ndarray, positions: np.ndarray, omega: float, side: str, window: Tuple[float, float]) -> SpeedFit:
    mask = (times >= window[0]) & (times <= window[1]) & np.isfinite(positions)
    t, x = times[mask], positions[mask]
    if t.size < MIN_FIT_SAMPLES:
        raise InsufficientDataError(
            f"{side} front at ω={omega}: {t.size} sample(s) in fit window {window}, need {MIN_FIT_SAMPLES}"
        )
    fit = linregress(t, x)
    residuals = x - (fit.intercept + fit.slope * t)
    return SpeedFit(
        omega=omega,
        side=side,
        speed=float(fit.slope),
        stderr=float(fit.stderr),
        intercept=float(fit.intercept),
        window=window,
        samples=int(t.size),
        residual=float(np.sqrt(np.mean(residuals ** 2))),
    )


def estimate_speeds(trace: FrontTrace, fit_window_fraction: float = 0.5) -> List[SpeedFit]:
    """
    Least-squares slopes of x_l(t) and x_r(t) over the last fraction of the run.

    Raises:
        InsufficientDataError: If a front has fewer than 10 samples in the window
    """
    if not 0 < fit_window_fraction <= 1:
        raise RangeError(f"fit window fraction must lie in (0, 1] (got {fit_window_fraction})")
    fits: List[SpeedFit] = []
    for omega in trace.omegas:
        times, left, right = trace.series(omega)
        start, end = float(times[0]), float(times[-1])
        window = (end - fit_window_fraction * (end - start), end)
        for side, positions in (("left", left), ("right", right)):
            fits.append(_fit(times, positions, omega, side, window))
    for fit in fits:
        logger.info(f"Fitted {fit.side} speed at ω={fit.omega}: {fit.speed:.6g} ± {fit.stderr:.2g}")
    return fits


def check_symmetry_monotone(state: SimState, center: float) -> Tuple[float, float]:
    """
    Max |u(x) − u(2·center − x)| and max increase of u along x ≥ center.

    The center is snapped to the nearest grid node.
    """
    x, u = state.x, state.values
    dx = float(x[1] - x[0])
    k0 = int(round((center - float(x[0])) / dx))
    k0 = min(max(k0, 0), u.size - 1)
    reach = min(k0, u.size - 1 - k0)
    right = u[k0:k0 + reach + 1]
    left = u[k0 - reach:k0 + 1][::-1]
    asymmetry = float(np.max(np.abs(right - left))) if reach else 0.0
    increments = np.diff(u[k0:])
    violation = float(max(0.0, np.max(increments))) if increments.size else 0.0
    return asymmetry, violation


def hair_trigger_time(result: SimResult, omega: float) -> Optional[float]:
    """First output time at which u ≥ ω on the whole probe ball, None if never."""
    for sample in result.probes:
        if sample.ball_min >= omega:
            return sample.time
    return None


def fit_for(fits: List[SpeedFit], omega: float, side: str) -> Optional[SpeedFit]:
    for fit in fits:
        if fit.side == side and math.isclose(fit.omega, omega):
            return fit
    return None
