"""
Space-time profiles checked against u_t = k∗u − u + f(u).
"""
from dataclasses import dataclass
from typing import List, Optional, Protocol, Tuple

import numpy as np


class Profile(Protocol):
    """Analytic profile (t, x) ↦ u in [0, 1]."""

    def value(self, t: float, x) -> np.ndarray:
        ...

    def kinks(self, t: float) -> List[float]:
        """Points where u is not differentiable in x at time t."""
        ...

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        """Closed interval outside which u vanishes, or None for the whole line."""
        ...


@dataclass(frozen=True)
class ConstantProfile:
    """u ≡ level."""
    level: float

    def value(self, t: float, x) -> np.ndarray:
        return np.full(np.shape(x), self.level, dtype=float)

    def kinks(self, t: float) -> List[float]:
        return []

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        return None
