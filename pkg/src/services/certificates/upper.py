"""
Upper solutions.

Compact data: min{1, Γ₀e^{λ_r*(−x + c_r*t)}, Γ₀e^{λ_l*(−x + c_l*t)}}.
Exponential data (symmetric kernels): min{1, Γ₀e^{λ(−|x| + c(λ)t)}}.

On every exponential branch the residual equals f'(0)u − f(u) ≥ 0 and on
the plateau it equals 1 − k∗u ≥ 0.
"""
import math
from dataclasses import dataclass
from typing import ClassVar, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.models.model import KppModel
from src.services.analysis.speeds import c_of_lambda, extremal_speeds
from src.utils.errors import PreconditionError, RangeError


@dataclass(frozen=True)
class UpperSolutionSpec:
    """Upper solution travelling with the spreading speeds."""
    gamma: float
    gamma0: float
    lambda_left: float
    lambda_right: float
    c_left: float
    c_right: float

    kind: ClassVar[str] = "upper"

    def value(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        log_gamma = math.log(self.gamma0)
        right = log_gamma + self.lambda_right * (-x + self.c_right * t)
        left = log_gamma + self.lambda_left * (-x + self.c_left * t)
        return np.exp(np.minimum(0.0, np.minimum(right, left)))

    def kinks(self, t: float) -> List[float]:
        log_gamma = math.log(self.gamma0)
        return [
            self.c_left * t + log_gamma / self.lambda_left,
            self.c_right * t + log_gamma / self.lambda_right,
        ]

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        return None


def build_upper_solution(model: KppModel, gamma: float) -> UpperSolutionSpec:
    """
    Upper solution dominating initial data bounded by Γ·e^{−λ_r* x} and Γ·e^{−λ_l* x}.

    Raises:
        RangeError: If Γ ≤ 0
    """
    if not gamma > 0:
        raise RangeError(f"Γ must be positive (got {gamma})")
    speeds = extremal_speeds(model.kernel, model.f0)
    spec = UpperSolutionSpec(
        gamma=gamma,
        gamma0=max(1.0, gamma),
        lambda_left=speeds.lambda_left,
        lambda_right=speeds.lambda_right,
        c_left=speeds.c_left,
        c_right=speeds.c_right,
    )
    logger.info(f"Upper solution: Γ₀={spec.gamma0:.6g}, c_l*={spec.c_left:.6g}, c_r*={spec.c_right:.6g}")
    return spec


def dominates(spec: UpperSolutionSpec, x, u0) -> bool:
    """Whether the profile at t = 0 lies above sampled initial data."""
    return bool(np.all(spec.value(0.0, x) >= np.asarray(u0, dtype=float)))


@dataclass(frozen=True)
class ExpUpperSolutionSpec:
    """Upper solution min{1, Γ₀e^{λ(−|x| + c(λ)t)}}."""
    lam: float
    c: float
    gamma: float
    gamma0: float

    kind: ClassVar[str] = "exp-upper"

    def value(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        exponent = math.log(self.gamma0) + self.lam * (-np.abs(x) + self.c * t)
        return np.exp(np.minimum(0.0, exponent))

    def kinks(self, t: float) -> List[float]:
        edge = self.c * t + math.log(self.gamma0) / self.lam
        return [-edge, 0.0, edge]

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        return None


def build_exp_upper_solution(model: KppModel, lam: float, gamma: float = 1.0) -> ExpUpperSolutionSpec:
    """
    Upper solution for initial data bounded by Γe^{−λ|x|}.

    Raises:
        PreconditionError: If the kernel is not symmetric
        RangeError: If λ or Γ is not positive
    """
    if not lam > 0:
        raise RangeError(f"λ must be positive (got {lam})")
    if not gamma > 0:
        raise RangeError(f"Γ must be positive (got {gamma})")
    if not model.kernel.is_symmetric():
        raise PreconditionError("exponential upper solution needs a symmetric kernel")
    return ExpUpperSolutionSpec(lam=lam, c=c_of_lambda(model, lam), gamma=gamma, gamma0=max(1.0, gamma))
