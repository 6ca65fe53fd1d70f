"""
Classical 4-stage Runge-Kutta step for u_t = K∗u − u + f(u).
"""
import numpy as np
from loguru import logger

from src.models.reaction import ReactionKPP
from src.services.simulation.operator import DiscreteOperator
from src.services.simulation.types import SimState
from src.utils.errors import BlowUpError

BLOW_UP_TOL = 1e-6
CLAMP_TOL = 1e-12


def rhs(u: np.ndarray, operator: DiscreteOperator, f: ReactionKPP) -> np.ndarray:
    return operator.apply(u) + f(u)


def step(state: SimState, operator: DiscreteOperator, f: ReactionKPP, dt: float) -> SimState:
    """
    Advance one step of size dt.

    Values are clamped to [0, 1]; clamps larger than roundoff are counted.

    Raises:
        BlowUpError: If any value leaves [−1e-6, 1 + 1e-6]
    """
    u = state.values
    k1 = rhs(u, operator, f)
    k2 = rhs(u + 0.5 * dt * k1, operator, f)
    k3 = rhs(u + 0.5 * dt * k2, operator, f)
    k4 = rhs(u + dt * k3, operator, f)
    new = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    low, high = float(np.min(new)), float(np.max(new))
    if low < -BLOW_UP_TOL or high > 1.0 + BLOW_UP_TOL or not np.all(np.isfinite(new)):
        raise BlowUpError(
            f"values left [0, 1] at t={state.time + dt:.6g}: min={low:.3e}, max={high:.17g}"
        )

    clamps = int(np.count_nonzero((new < -CLAMP_TOL) | (new > 1.0 + CLAMP_TOL)))
    if clamps:
        logger.warning(f"Clamped {clamps} value(s) at t={state.time + dt:.6g}")
    np.clip(new, 0.0, 1.0, out=new)
    return SimState(time=state.time + dt, x=state.x, values=new, clamp_count=state.clamp_count + clamps)
