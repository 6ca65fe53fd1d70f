"""
Discretization of k∗u − u on a uniform grid.

Kernel weights are cell masses cdf((j + ½)Δx) − cdf((j − ½)Δx) over a
symmetric stencil, renormalized to sum to 1. Values beyond the grid are
extended by the nearest boundary value.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger
from scipy.signal import fftconvolve

from src.config.settings import get_settings
from src.models.kernel import Kernel
from src.models.model import KppModel
from src.services.simulation.types import SimConfig
from src.utils.errors import ConfigError, TruncationError


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Stencil weights w_j at offsets jΔx, j = −J..J."""
    weights: np.ndarray
    dx: float
    method: str             # "direct" | "fft"

    @property
    def reach(self) -> int:
        """J, cells on each side of the center."""
        return (self.weights.size - 1) // 2

    @property
    def offsets(self) -> np.ndarray:
        return self.dx * np.arange(-self.reach, self.reach + 1)

    @property
    def half_width(self) -> float:
        """√3 × standard deviation of the weights; the half-width for a uniform kernel."""
        y = self.offsets
        mean = float(np.dot(self.weights, y))
        variance = float(np.dot(self.weights, (y - mean) ** 2))
        return math.sqrt(3.0 * variance)

    def convolve(self, u: np.ndarray, method: Optional[str] = None) -> np.ndarray:
        """(K∗u)_i = Σ_j w_j u_{i−j} with edge extension."""
        padded = np.pad(u, self.reach, mode="edge")
        if (method or self.method) == "fft":
            return fftconvolve(padded, self.weights, mode="valid")
        return np.convolve(padded, self.weights, mode="valid")

    def apply(self, u: np.ndarray) -> np.ndarray:
        """K∗u − u."""
        return self.convolve(u) - u


def stencil_weights(kernel: Kernel, dx: float, tail_mass: Optional[float] = None) -> np.ndarray:
    """Cell masses of k over the smallest symmetric stencil holding all but `tail_mass`."""
    tail_mass = get_settings().KERNEL_TAIL_MASS if tail_mass is None else tail_mass
    lo, hi = kernel.truncation_bounds(tail_mass)
    reach = max(0, int(math.ceil(max(-lo, hi) / dx - 0.5)))
    edges = dx * (np.arange(-reach, reach + 2) - 0.5)
    weights = np.diff(kernel.cdf(edges))
    weights = np.clip(weights, 0.0, None)
    if kernel.is_symmetric():
        weights = 0.5 * (weights + weights[::-1])
    return weights / weights.sum()


def discretize(model: KppModel, config: SimConfig) -> DiscreteOperator:
    """
    Build the discrete operator for a run.

    Raises:
        TruncationError: If kernel mass beyond ±(x_max − x_min) exceeds the tail tolerance
        ConfigError: For an unknown convolution method
    """
    settings = get_settings()
    kernel = model.kernel
    weights = stencil_weights(kernel, config.dx)
    reach = (weights.size - 1) // 2
    if reach * config.dx > config.length:
        outside = kernel.mass_outside(-config.length, config.length)
        if outside > settings.KERNEL_TAIL_MASS:
            raise TruncationError(
                f"kernel mass {outside:.3e} lies beyond ±{config.length:.6g}, the widest offset the grid represents"
            )

    if config.method == "auto":
        method = "direct" if weights.size <= settings.DIRECT_STENCIL_MAX else "fft"
    elif config.method in ("direct", "fft"):
        method = config.method
    else:
        raise ConfigError(f"simulate.method must be auto, direct or fft (got {config.method!r})")

    operator = DiscreteOperator(weights=weights, dx=config.dx, method=method)
    logger.debug(f"Stencil: {weights.size} cells, Δx={config.dx}, {method} convolution")
    return operator
