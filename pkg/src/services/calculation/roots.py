"""
Scalar root finding: bracket expansion plus Brent or bisection refinement.

Speeds and decay rates are zeros of functions that are only known to change
sign somewhere on a half-line (or on an interval ending at an exponential
abscissa). The helpers here find a bracket by doubling and refine it.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from scipy.optimize import bisect, brentq
from loguru import logger

from src.config.settings import get_settings
from src.utils.errors import BracketNotFoundError


@dataclass(frozen=True)
class RootResult:
    """Refined root with its convergence metadata."""
    root: float
    bracket: Tuple[float, float]
    iterations: int
    expansions: int = 0

    @property
    def bracket_width(self) -> float:
        return abs(self.bracket[1] - self.bracket[0])


def _sign(value: float) -> float:
    """Sign with overflow (inf, nan) read as the positive far side."""
    if math.isnan(value):
        return 1.0
    return 1.0 if value > 0 else (-1.0 if value < 0 else 0.0)


def _step_out(point: float, limit: float) -> float:
    """Next probe away from zero: double, or halve the gap to a finite limit."""
    if math.isinf(limit):
        return 2.0 * point
    return point + 0.5 * (limit - point)


def bracket_on_ray(
    func: Callable[[float], float],
    start: float,
    limit: float,
    max_doublings: Optional[int] = None,
) -> Tuple[float, float, int]:
    """
    Bracket the sign change of a function on the ray between 0 and `limit`.

    The function must be negative next to zero and positive next to `limit`.
    Probing starts at `start` (same sign as `limit`); the probe moves toward
    zero by halving or toward `limit` by doubling until the sign flips.

    Args:
        func: Function with a single sign change on the ray
        start: First probe, e.g. 1.0 or -1.0
        limit: Ray end, +inf/-inf or a finite abscissa
        max_doublings: Expansion budget, defaults to MAX_DOUBLINGS

    Returns:
        (inner, outer, expansions) with func(inner) < 0 < func(outer)

    Raises:
        BracketNotFoundError: If the budget runs out
    """
    budget = max_doublings or get_settings().MAX_DOUBLINGS
    probe = start
    if not math.isinf(limit) and abs(probe) >= abs(limit):
        probe = 0.5 * limit

    expansions = 0
    if _sign(func(probe)) > 0:
        outer, inner = probe, 0.5 * probe
        while _sign(func(inner)) >= 0:
            expansions += 1
            if expansions > budget:
                raise BracketNotFoundError(
                    f"No sign change between 0 and {outer:.6g} after {budget} halvings"
                )
            outer, inner = inner, 0.5 * inner
        logger.debug(f"Ray bracket [{inner:.6g}, {outer:.6g}] after {expansions} halvings")
        return inner, outer, expansions

    inner = probe
    while True:
        expansions += 1
        if expansions > budget:
            raise BracketNotFoundError(
                f"No sign change toward {limit} after {budget} doublings from {start}"
            )
        outer = _step_out(inner, limit)
        if outer == inner:
            raise BracketNotFoundError(f"Bracket expansion stalled at {inner:.17g}")
        if _sign(func(outer)) > 0:
            logger.debug(f"Ray bracket [{inner:.6g}, {outer:.6g}] after {expansions} doublings")
            return inner, outer, expansions
        inner = outer


def bracket_increasing(
    func: Callable[[float], float],
    lower_limit: float,
    upper_limit: float,
    max_doublings: Optional[int] = None,
) -> Tuple[float, float, int]:
    """
    Bracket the zero of an increasing function on (lower_limit, upper_limit).

    The search starts at 0 and walks toward the side where the zero must lie.

    Returns:
        (lo, hi, expansions) with func(lo) <= 0 <= func(hi)

    Raises:
        BracketNotFoundError: If the budget runs out
    """
    budget = max_doublings or get_settings().MAX_DOUBLINGS
    value = func(0.0)
    if value == 0.0:
        return 0.0, 0.0, 0

    expansions = 0
    if value < 0:
        lo, hi = 0.0, 1.0
        if not math.isinf(upper_limit) and hi >= upper_limit:
            hi = 0.5 * upper_limit
        while func(hi) < 0:
            expansions += 1
            if expansions > budget:
                raise BracketNotFoundError(f"No zero below {upper_limit} after {budget} doublings")
            lo, hi = hi, _step_out(hi, upper_limit)
        return lo, hi, expansions

    lo, hi = -1.0, 0.0
    if not math.isinf(lower_limit) and lo <= lower_limit:
        lo = 0.5 * lower_limit
    while func(lo) > 0:
        expansions += 1
        if expansions > budget:
            raise BracketNotFoundError(f"No zero above {lower_limit} after {budget} doublings")
        lo, hi = _step_out(lo, lower_limit), lo
    return lo, hi, expansions


def brent_root(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: Optional[float] = None,
    expansions: int = 0,
) -> RootResult:
    """
    Refine a bracketed root with Brent's hybrid bisection/secant method.

    Args:
        func: Function changing sign on [lo, hi]
        lo: Bracket end
        hi: Other bracket end
        xtol: Interval tolerance, defaults to ROOT_XTOL

    Returns:
        RootResult with the root and iteration count
    """
    if lo == hi:
        return RootResult(root=lo, bracket=(lo, hi), iterations=0, expansions=expansions)
    a, b = min(lo, hi), max(lo, hi)
    root, info = brentq(
        func, a, b,
        xtol=xtol or get_settings().ROOT_XTOL,
        rtol=4 * 2.220446049250313e-16,
        maxiter=500,
        full_output=True,
    )
    return RootResult(root=float(root), bracket=(a, b), iterations=info.iterations, expansions=expansions)


def bisection_root(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: Optional[float] = None,
) -> RootResult:
    """
    Refine a bracketed root by plain bisection.

    Used where the function is extremely flat near the bracket ends and
    interpolation steps are unreliable.
    """
    a, b = min(lo, hi), max(lo, hi)
    root, info = bisect(
        func, a, b,
        xtol=xtol or get_settings().BISECTION_XTOL,
        maxiter=400,
        full_output=True,
    )
    return RootResult(root=float(root), bracket=(a, b), iterations=info.iterations)
