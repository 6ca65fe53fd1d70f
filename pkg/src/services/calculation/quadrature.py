"""
Adaptive quadrature wrapper.

Thin layer over scipy.integrate.quad that applies the toolkit tolerances
and turns non-convergence into QuadratureError instead of a warning.
"""
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from loguru import logger

from src.config.settings import get_settings
from src.utils.errors import QuadratureError


def integrate(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    points: Optional[Sequence[float]] = None,
    epsabs: Optional[float] = None,
    epsrel: Optional[float] = None,
    limit: Optional[int] = None,
) -> float:
    """
    Integrate a scalar function over a finite interval.

    Args:
        func: Integrand
        lower: Lower limit
        upper: Upper limit
        points: Interior break points (kinks, discontinuities)
        epsabs: Absolute tolerance, defaults to QUAD_EPSABS
        epsrel: Relative tolerance, defaults to QUAD_EPSREL
        limit: Subinterval budget, defaults to QUAD_LIMIT

    Returns:
        Value of the integral

    Raises:
        QuadratureError: If the adaptive scheme reports non-convergence
    """
    settings = get_settings()
    if upper <= lower:
        return 0.0

    inner: Optional[list] = None
    if points is not None:
        inner = sorted({float(p) for p in points if lower < p < upper})
        if not inner:
            inner = None

    budget = limit or settings.QUAD_LIMIT
    if inner is not None:
        budget = max(budget, 4 * len(inner) + 50)

    result = quad(
        func,
        lower,
        upper,
        points=inner,
        epsabs=settings.QUAD_EPSABS if epsabs is None else epsabs,
        epsrel=settings.QUAD_EPSREL if epsrel is None else epsrel,
        limit=budget,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        logger.debug(f"quad on [{lower}, {upper}] stopped early: {result[3]}")
        raise QuadratureError(
            f"Quadrature on [{lower:.6g}, {upper:.6g}] did not converge "
            f"(estimate {value:.6g}, error {abserr:.3g})"
        )
    if not np.isfinite(value):
        raise QuadratureError(f"Quadrature on [{lower:.6g}, {upper:.6g}] returned {value}")
    return float(value)
