"""
Data types of the grid simulator.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from src.services.simulation.initial import InitialData


@dataclass(frozen=True)
class SimConfig:
    """Grid, time stepping, initial datum and outputs of one run."""
    x_min: float
    x_max: float
    dx: float
    t_final: float
    initial: InitialData
    dt: Optional[float] = None          # None: 0.1·min(1, 1/L_f)
    omegas: Tuple[float, ...] = (0.5,)  # level thresholds in (0, 1)
    output_every: float = 1.0           # time between trace rows
    snapshot_times: Tuple[float, ...] = ()
    probe_x: float = 0.0
    probe_radius: float = 1.0
    symmetry_center: Optional[float] = None
    check_boundary: bool = True
    fit_window_fraction: float = 0.5
    method: str = "auto"                # "auto" | "direct" | "fft"

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def cells(self) -> int:
        return int(round(self.length / self.dx)) + 1

    def grid(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.cells)


@dataclass
class SimState:
    """Time and grid values, each in [0, 1]."""
    time: float
    x: np.ndarray
    values: np.ndarray
    clamp_count: int = 0

    def copy(self) -> "SimState":
        return SimState(self.time, self.x, self.values.copy(), self.clamp_count)


@dataclass
class FrontTrace:
    """
    Level-set boundaries per output time and threshold.

    Missing boundaries are NaN.
    """
    omegas: Tuple[float, ...]
    times: List[float] = field(default_factory=list)
    x_left: List[List[float]] = field(default_factory=list)
    x_right: List[List[float]] = field(default_factory=list)

    def append(self, time: float, fronts: List[Tuple[Optional[float], Optional[float]]]) -> None:
        self.times.append(time)
        self.x_left.append([math.nan if lo is None else lo for lo, _ in fronts])
        self.x_right.append([math.nan if hi is None else hi for _, hi in fronts])

    def series(self, omega: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(times, x_left, x_right) for one threshold."""
        j = self.omegas.index(omega)
        left = np.array([row[j] for row in self.x_left], dtype=float)
        right = np.array([row[j] for row in self.x_right], dtype=float)
        return np.asarray(self.times, dtype=float), left, right

    def rows(self) -> Iterator[Tuple[float, float, float, float]]:
        """Rows (t, omega, x_left, x_right) in time-major order."""
        for i, t in enumerate(self.times):
            for j, omega in enumerate(self.omegas):
                yield t, omega, self.x_left[i][j], self.x_right[i][j]


@dataclass(frozen=True)
class SpeedFit:
    """Least-squares front speed over a fit window."""
    omega: float
    side: str               # "left" | "right"
    speed: float
    stderr: float
    intercept: float
    window: Tuple[float, float]
    samples: int
    residual: float         # RMS of the fit residuals


@dataclass(frozen=True)
class ProbeSample:
    """u at the probe point and its minimum over the probe ball."""
    time: float
    center_value: float
    ball_min: float


@dataclass(frozen=True)
class SymmetrySample:
    time: float
    asymmetry: float
    monotone_violation: float


@dataclass
class SimResult:
    """Everything one run produces."""
    config: SimConfig
    dt: float
    method: str
    trace: FrontTrace
    final: SimState
    snapshots: Dict[float, np.ndarray] = field(default_factory=dict)
    probes: List[ProbeSample] = field(default_factory=list)
    symmetry: List[SymmetrySample] = field(default_factory=list)
    fits: List[SpeedFit] = field(default_factory=list)

    @property
    def clamp_count(self) -> int:
        return self.final.clamp_count
