"""
Pointwise residual u_t − k∗u + u − f(u) of an analytic profile.

u_t is a central difference in t, k∗u is adaptive quadrature of the kernel
against the profile with the profile's kinks passed as break points.
Points within one grid cell of a kink are skipped.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.config.settings import get_settings
from src.models.model import KppModel
from src.services.calculation.quadrature import integrate
from src.services.certificates.profiles import Profile

Frame = Tuple[float, np.ndarray]


@dataclass(frozen=True)
class ResidualReport:
    """Extremal residuals over a verification grid."""
    max_residual: float
    min_residual: float
    argmax: Tuple[float, float]
    argmin: Tuple[float, float]
    evaluated: int
    excluded: int

    def holds_for(self, kind: str, tol: float) -> bool:
        """Lower kinds need residual ≤ tol, upper kinds residual ≥ −tol."""
        if kind.endswith("lower"):
            return self.max_residual <= tol
        return self.min_residual >= -tol


def convolve_at(model: KppModel, profile: Profile, t: float, x: float, tail_mass: Optional[float] = None) -> float:
    """(k∗u)(t, x) = ∫ k(y) u(t, x − y) dy."""
    kernel = model.kernel
    lo, hi = kernel.truncation_bounds(tail_mass or get_settings().RESIDUAL_TAIL_MASS)
    support = profile.support(t)
    if support is not None:
        lo = max(lo, x - support[1])
        hi = min(hi, x - support[0])
        if hi <= lo:
            return 0.0
    points = kernel.breakpoints() + [x - kink for kink in profile.kinks(t)]

    def integrand(y: float) -> float:
        return float(kernel.density(y)) * float(profile.value(t, x - y))

    return integrate(integrand, lo, hi, points=points)


def residual_at(model: KppModel, profile: Profile, t: float, x: float, step: Optional[float] = None) -> float:
    """u_t − k∗u + u − f(u) at one point."""
    h = step or get_settings().RESIDUAL_STEP
    u = float(profile.value(t, x))
    u_t = (float(profile.value(t + h, x)) - float(profile.value(t - h, x))) / (2.0 * h)
    return u_t - convolve_at(model, profile, t, x) + u - float(model.reaction(u))


def _frame_points(profile: Profile, frames: Sequence[Frame]) -> Tuple[List[Tuple[float, float]], int]:
    points: List[Tuple[float, float]] = []
    excluded = 0
    for t, xs in frames:
        xs = np.asarray(xs, dtype=float)
        cell = float(np.min(np.diff(xs))) if xs.size > 1 else 0.0
        kinks = np.asarray(profile.kinks(t), dtype=float)
        for x in xs:
            if kinks.size and np.min(np.abs(kinks - x)) <= cell:
                excluded += 1
                continue
            points.append((float(t), float(x)))
    return points, excluded


def residual_on_frames(
    model: KppModel,
    profile: Profile,
    frames: Sequence[Frame],
    step: Optional[float] = None,
    workers: Optional[int] = None,
) -> ResidualReport:
    """
    Extremal residuals over per-time x grids.

    Rows are split into contiguous chunks, one per worker, and reduced in
    grid order so the result does not depend on the worker count.
    """
    points, excluded = _frame_points(profile, frames)
    workers = workers or get_settings().RESIDUAL_WORKERS

    def evaluate(chunk: List[Tuple[float, float]]) -> List[float]:
        return [residual_at(model, profile, t, x, step) for t, x in chunk]

    if workers > 1 and len(points) > workers:
        size = math.ceil(len(points) / workers)
        chunks = [points[i:i + size] for i in range(0, len(points), size)]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            values = [v for part in executor.map(evaluate, chunks) for v in part]
    else:
        values = evaluate(points)

    if not values:
        logger.warning("Residual grid has no points outside kink neighborhoods")
        return ResidualReport(0.0, 0.0, (math.nan, math.nan), (math.nan, math.nan), 0, excluded)

    array = np.asarray(values)
    i_max, i_min = int(np.argmax(array)), int(np.argmin(array))
    report = ResidualReport(
        max_residual=float(array[i_max]),
        min_residual=float(array[i_min]),
        argmax=points[i_max],
        argmin=points[i_min],
        evaluated=len(values),
        excluded=excluded,
    )
    logger.debug(
        f"Residual over {report.evaluated} points ({excluded} near kinks): "
        f"max={report.max_residual:.3e} at {report.argmax}, min={report.min_residual:.3e} at {report.argmin}"
    )
    return report


def residual(
    model: KppModel,
    profile: Profile,
    t_grid: Sequence[float],
    x_grid: Sequence[float],
    step: Optional[float] = None,
    workers: Optional[int] = None,
) -> ResidualReport:
    """Extremal residuals of a profile over t_grid × x_grid."""
    xs = np.asarray(x_grid, dtype=float)
    return residual_on_frames(model, profile, [(float(t), xs) for t in t_grid], step, workers)


def standard_frames(
    model: KppModel,
    profile: Profile,
    times: Sequence[float] = (0.0, 0.5, 1.0),
    points: int = 401,
    margin: float = 5.0,
) -> List[Frame]:
    """
    Verification grids following the profile in time.

    Compactly supported profiles get their support widened by a quarter on
    each side, at a spacing of at most 1e-3 of the support width. Other
    profiles get a window reaching `margin` beyond their outermost kinks.
    """
    frames: List[Frame] = []
    for t in times:
        support = profile.support(t)
        if support is not None:
            lo, hi = support
            width = hi - lo
            count = max(points, int(math.ceil(1.5 * width / (1e-3 * width))) + 1)
            xs = np.linspace(lo - 0.25 * width, hi + 0.25 * width, count)
        else:
            kinks = profile.kinks(t) or [0.0]
            xs = np.linspace(min(kinks) - margin, max(kinks) + margin, points)
        frames.append((float(t), xs))
    return frames
