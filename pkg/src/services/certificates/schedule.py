"""
Forward-backward composition of two lower solutions.

A lower solution moving at c1 on [0, κτ] followed by one moving at c2 on
[κτ, τ] certifies positivity at κc1τ + (1 − κ)c2τ.
"""
import math
from dataclasses import dataclass
from typing import Optional

from src.utils.errors import RangeError


@dataclass(frozen=True)
class Schedule:
    """Switch time, terminal position and phase-2 shift of a composition."""
    switch_time: float
    terminal_position: float
    xi2: Optional[float] = None


def forward_backward_schedule(
    c1: float,
    c2: float,
    kappa: float,
    tau: float,
    rho2: Optional[float] = None,
    z2: Optional[float] = None,
) -> Schedule:
    """
    Args:
        c1: Phase-1 speed
        c2: Phase-2 speed, c2 ≤ c1
        kappa: Fraction of τ spent in phase 1
        tau: Total time
        rho2: Exponent scale of the phase-2 lower solution (for ξ₂)
        z2: Point of the phase-2 H to anchor (for ξ₂), e.g. its peak

    Raises:
        RangeError: If c2 > c1, κ ∉ [0, 1] or τ ≤ 0
    """
    if c2 > c1:
        raise RangeError(f"c2={c2} must not exceed c1={c1}")
    if not 0 <= kappa <= 1:
        raise RangeError(f"κ must lie in [0, 1] (got {kappa})")
    if not tau > 0:
        raise RangeError(f"τ must be positive (got {tau})")

    switch = kappa * tau
    terminal = kappa * c1 * tau + (1.0 - kappa) * c2 * tau
    xi2 = None
    if rho2 is not None and z2 is not None:
        xi2 = (c1 - c2) * kappa * tau + math.log(z2) / rho2
    return Schedule(switch_time=switch, terminal_position=terminal, xi2=xi2)
