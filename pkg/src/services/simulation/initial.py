"""
Initial data for the grid simulator.
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from src.utils.errors import ConfigError, TruncationError

# Smallest positive normal double; exponential data below it are cut to 0.
MACHINE_ZERO = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class BumpData:
    """height·(1 − ((x − center)/half_width)²)₊, symmetric and decreasing away from center."""
    center: float = 0.0
    half_width: float = 1.0
    height: float = 1.0

    kind = "bump"

    def sample(self, x: np.ndarray) -> np.ndarray:
        s = (np.asarray(x, dtype=float) - self.center) / self.half_width
        return self.height * np.maximum(0.0, 1.0 - s * s)


@dataclass(frozen=True)
class ExponentialData:
    """min(1, amplitude·e^{−λ|x − center|}), cut to 0 below `floor`."""
    lam: float
    amplitude: float = 1.0
    center: float = 0.0
    floor: float = MACHINE_ZERO

    kind = "exponential"

    @property
    def truncation_radius(self) -> float:
        """Distance from center beyond which the datum is cut to 0."""
        return math.log(self.amplitude / self.floor) / self.lam

    def sample(self, x: np.ndarray) -> np.ndarray:
        distance = np.abs(np.asarray(x, dtype=float) - self.center)
        values = np.minimum(1.0, self.amplitude * np.exp(-self.lam * distance))
        values[distance > self.truncation_radius] = 0.0
        return values

    def check_truncation(self, x_min: float, x_max: float) -> None:
        """
        Raises:
            TruncationError: If the cut lies inside the domain
        """
        reach = max(x_max - self.center, self.center - x_min)
        if self.truncation_radius < reach:
            raise TruncationError(
                f"exponential datum is cut at distance {self.truncation_radius:.6g} from its center, "
                f"inside the domain (needs ≥ {reach:.6g})"
            )


@dataclass(frozen=True)
class PlateauData:
    """Constant datum."""
    level: float

    kind = "plateau"

    def sample(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(x, dtype=float), self.level)


@dataclass(frozen=True, eq=False)
class TableData:
    """Piecewise-linear datum through (x, u) nodes, 0 outside."""
    xs: Tuple[float, ...]
    us: Tuple[float, ...]
    source: Optional[str] = None

    kind = "table"

    @classmethod
    def from_points(cls, xs: Sequence[float], us: Sequence[float], source: Optional[str] = None) -> "TableData":
        xs = np.asarray(xs, dtype=float)
        us = np.asarray(us, dtype=float)
        if xs.ndim != 1 or xs.shape != us.shape or xs.size < 2:
            raise ConfigError("initial table needs at least two (x, u) rows")
        if np.any(np.diff(xs) <= 0):
            raise ConfigError("initial table x column must be strictly increasing")
        if np.any(us < 0) or np.any(us > 1):
            raise ConfigError("initial table u column must lie in [0, 1]")
        return cls(tuple(xs.tolist()), tuple(us.tolist()), source)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TableData":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"initial table not found: {path}")
        try:
            data = np.loadtxt(path, dtype=float, ndmin=2)
        except ValueError as e:
            raise ConfigError(f"initial table is not numeric two-column text: {e}") from e
        if data.shape[1] != 2:
            raise ConfigError(f"initial table must have two columns (got {data.shape[1]})")
        logger.debug(f"Loaded {data.shape[0]} initial-table rows from {path}")
        return cls.from_points(data[:, 0], data[:, 1], source=str(path))

    def sample(self, x: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.xs, self.us, left=0.0, right=0.0)


InitialData = Union[BumpData, ExponentialData, PlateauData, TableData]
