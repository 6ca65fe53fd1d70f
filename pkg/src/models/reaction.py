"""
KPP reaction terms.

A reaction is monostable of KPP type: f(0) = f(1) = 0, f > 0 on (0, 1) and
f(u) ≤ f'(0)u. Only sampled evaluation is available for custom evaluators,
so the hypotheses are checked on a grid.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from src.config.settings import get_settings
from src.models.kernel import Hypothesis, ValidationResult, Violation
from src.utils.errors import InvalidModelError


class ReactionFamily(str, Enum):
    """Family tag of a reaction."""
    LOGISTIC = "logistic"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ReactionKPP:
    """Reaction term f with its declared derivative at zero."""
    evaluator: Callable[[np.ndarray], np.ndarray]
    f0: float
    family: ReactionFamily = ReactionFamily.CUSTOM
    name: str = "custom"
    rate: Optional[float] = None
    exponent: Optional[float] = None

    def __post_init__(self):
        if not (self.f0 > 0 and math.isfinite(self.f0)):
            raise InvalidModelError(f"reaction f'(0) must be positive (got {self.f0})")

    def __call__(self, u):
        return self.evaluator(np.asarray(u, dtype=float))

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def logistic(cls, rate: float = 1.0) -> "ReactionKPP":
        """f(u) = r·u(1 − u)."""
        if not rate > 0:
            raise InvalidModelError(f"reaction.rate must be positive (got {rate})")
        return cls(
            evaluator=lambda u: rate * u * (1.0 - u),
            f0=rate,
            family=ReactionFamily.LOGISTIC,
            name="logistic",
            rate=rate,
        )

    @classmethod
    def sine(cls, amplitude: float = 1.0) -> "ReactionKPP":
        """f(u) = a·sin(πu), f'(0) = aπ."""
        if not amplitude > 0:
            raise InvalidModelError(f"reaction.rate must be positive (got {amplitude})")
        return cls(
            evaluator=lambda u: amplitude * np.sin(np.pi * u),
            f0=amplitude * math.pi,
            name="sine",
            rate=amplitude,
        )

    @classmethod
    def generalized_logistic(cls, rate: float = 1.0, exponent: float = 1.0) -> "ReactionKPP":
        """f(u) = r·u(1 − u^m), f'(0) = r."""
        if not rate > 0:
            raise InvalidModelError(f"reaction.rate must be positive (got {rate})")
        if not exponent > 0:
            raise InvalidModelError(f"reaction.exponent must be positive (got {exponent})")
        return cls(
            evaluator=lambda u: rate * u * (1.0 - np.power(u, exponent)),
            f0=rate,
            name="generalized-logistic",
            rate=rate,
            exponent=exponent,
        )

    @classmethod
    def custom(cls, evaluator: Callable[[np.ndarray], np.ndarray], f0: float, name: str = "custom") -> "ReactionKPP":
        return cls(evaluator=evaluator, f0=f0, name=name)

    # ------------------------------------------------------------------
    # Sampled properties
    # ------------------------------------------------------------------

    def lipschitz_bound(self, samples: Optional[int] = None) -> float:
        """Sampled bound on |f'| over [0, 1]."""
        samples = samples or get_settings().REACTION_SAMPLES
        u = np.linspace(0.0, 1.0, samples + 1)
        slopes = np.abs(np.diff(self(u))) / np.diff(u)
        return float(max(np.max(slopes), self.f0))

    def kpp_threshold(self, slope: float, upper: float = 1.0, samples: Optional[int] = None) -> float:
        """
        Largest p ≤ upper with f(u) ≥ slope·u on the sampled part of (0, p].

        The scan is geometric from 1e-12 so thresholds far below the grid
        spacing of a linear grid are still resolved. Returns 0 when the
        bound already fails at the first sample.
        """
        samples = samples or get_settings().REACTION_SAMPLES
        grid = np.geomspace(1e-12, upper, samples)
        holds = self(grid) >= slope * grid
        failing = np.nonzero(~holds)[0]
        if failing.size == 0:
            return float(upper)
        first = int(failing[0])
        return float(grid[first - 1]) if first > 0 else 0.0

    def power_bound(self, delta: float, upper: float, samples: Optional[int] = None) -> float:
        """
        Smallest sampled M with f(u) ≥ f'(0)u − M u^{1+δ} on (0, upper].

        The grid starts at 1e-6·upper; below that f'(0)u − f(u) is lost to
        rounding and the quotient is noise.
        """
        samples = samples or get_settings().REACTION_SAMPLES
        grid = np.geomspace(1e-6 * upper, upper, samples)
        deficit = (self.f0 * grid - self(grid)) / np.power(grid, 1.0 + delta)
        return float(max(np.max(deficit), 0.0))

    def validate(self, samples: Optional[int] = None) -> ValidationResult:
        """
        Check f(0) = f(1) = 0, positivity and the KPP bound on a sample grid.

        Violations are returned, never raised.
        """
        samples = samples or get_settings().REACTION_SAMPLES
        if samples < 2:
            raise InvalidModelError(f"samples must be at least 2 (got {samples})")
        result = ValidationResult()

        ends = self(np.array([0.0, 1.0]))
        for point, value in zip((0.0, 1.0), ends):
            if abs(float(value)) > 1e-12:
                result.violations.append(
                    Violation(Hypothesis.ENDPOINTS, f"f({point:g}) = {float(value):.6g} is not 0", point)
                )

        u = np.linspace(0.0, 1.0, samples + 2)[1:-1]
        values = self(u)

        nonpositive = np.nonzero(values <= 0)[0]
        if nonpositive.size:
            i = int(nonpositive[0])
            result.violations.append(
                Violation(Hypothesis.POSITIVE, f"f({u[i]:.6g}) = {values[i]:.6g} is not positive", float(u[i]))
            )

        excess = values - self.f0 * u
        bad = excess > 1e-12 * np.maximum(1.0, self.f0 * u)
        if np.any(bad):
            i = int(np.argmax(np.where(bad, excess, -np.inf)))
            result.violations.append(
                Violation(
                    Hypothesis.KPP_BOUND,
                    f"f({u[i]:.6g}) = {values[i]:.6g} exceeds f'(0)u = {self.f0 * u[i]:.6g}",
                    float(u[i]),
                )
            )
        return result


def validate_reaction(f: ReactionKPP, samples: Optional[int] = None) -> ValidationResult:
    """Violated reaction hypotheses, if any."""
    return f.validate(samples)
