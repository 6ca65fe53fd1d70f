"""
Spreading speeds and the kernel asymmetry index.

For a decay rate λ ≠ 0 the linearized front speed is

    c(λ) = (M(λ) − 1 + f'(0)) / λ,

and the right/left spreading speeds are c_r* = inf over λ > 0 and
c_l* = sup over λ < 0. Both extrema are attained at the unique zero of

    λ² c'(λ) = λ M'(λ) − (M(λ) − 1 + f'(0)),

which is negative next to λ = 0 and positive next to the abscissas.
At the zero, c = M'.
"""
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from src.config.settings import get_settings
from src.models.kernel import Kernel
from src.models.model import KppModel
from src.services.calculation.quadrature import integrate
from src.services.calculation.roots import (
    RootResult,
    bracket_increasing,
    bracket_on_ray,
    brent_root,
)
from src.utils.errors import DomainError, PreconditionError


class SignCase(str, Enum):
    """The five sign patterns of (c_l*, c_r*)."""
    I = "i"      # E > f'(0):  0 < c_l* < c_r*
    II = "ii"    # E = f'(0):  0 = c_l* < c_r*
    III = "iii"  # |E| < f'(0): c_l* < 0 < c_r*
    IV = "iv"    # E = −f'(0): c_l* < c_r* = 0
    V = "v"      # E < −f'(0): c_l* < c_r* < 0

    @property
    def signs(self) -> Tuple[int, int]:
        """Predicted (sign c_l*, sign c_r*)."""
        return {
            SignCase.I: (1, 1),
            SignCase.II: (0, 1),
            SignCase.III: (-1, 1),
            SignCase.IV: (-1, 0),
            SignCase.V: (-1, -1),
        }[self]


@dataclass(frozen=True)
class ExtremalSpeeds:
    """c_l*, c_r* and their decay rates for one growth rate."""
    c_left: float
    c_right: float
    lambda_left: float
    lambda_right: float
    left_root: RootResult
    right_root: RootResult


@dataclass(frozen=True)
class SpeedReport:
    """Spreading speeds, asymmetry and sign classification of a model."""
    c_left: float
    c_right: float
    lambda_left: float
    lambda_right: float
    lambda_k: float
    first_moment: float
    asymmetry: float
    f0: float
    classification: SignCase
    iterations_left: int
    iterations_right: int
    bracket_width_left: float
    bracket_width_right: float
    expansions_left: int
    expansions_right: int

    def as_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["classification"] = self.classification.value
        return data

    def sign_pattern_matches(self, tol: float = 1e-6) -> bool:
        """Whether the computed speeds have the signs the classification predicts."""
        def sign(value: float) -> int:
            return 0 if abs(value) <= tol else (1 if value > 0 else -1)
        return (sign(self.c_left), sign(self.c_right)) == self.classification.signs


# ============================================================================
# c(λ) AND ITS CRITICAL POINTS
# ============================================================================

def _c(kernel: Kernel, f0: float, lam: float) -> float:
    if lam == 0.0:
        raise DomainError("c(λ) is undefined at λ = 0")
    return (kernel.mgf(lam) - 1.0 + f0) / lam


def _scaled_c_prime(kernel: Kernel, f0: float, lam: float) -> float:
    """λ²c'(λ); overflow is reported as +inf (the far side of the sign change)."""
    try:
        value = lam * kernel.mgf_prime(lam) - (kernel.mgf(lam) - 1.0 + f0)
    except OverflowError:
        return math.inf
    return value


def c_of_lambda(model: KppModel, lam: float) -> float:
    """
    Front speed c(λ) of the exponential profile e^{−λx}.

    Raises:
        DomainError: At λ = 0 or outside the exponential abscissas
    """
    return _c(model.kernel, model.f0, lam)


def c_prime(model: KppModel, lam: float) -> float:
    """Derivative c'(λ)."""
    if lam == 0.0:
        raise DomainError("c'(λ) is undefined at λ = 0")
    return _scaled_c_prime(model.kernel, model.f0, lam) / (lam * lam)


def extremal_speeds(kernel: Kernel, f0: float) -> ExtremalSpeeds:
    """
    c_l*, c_r* for an arbitrary linear growth rate f0 > 0.

    Raises:
        BracketNotFoundError: If expansion exceeds the doubling budget
    """
    lam_minus, lam_plus = kernel.exp_abscissas()

    def right(lam: float) -> float:
        return _scaled_c_prime(kernel, f0, lam)

    def left(lam: float) -> float:
        # λ²c' is positive toward λ⁻ and negative next to 0 on the left ray too
        return _scaled_c_prime(kernel, f0, lam)

    inner, outer, expansions = bracket_on_ray(right, 1.0, lam_plus)
    right_root = brent_root(right, inner, outer, expansions=expansions)
    inner, outer, expansions = bracket_on_ray(left, -1.0, lam_minus)
    left_root = brent_root(left, inner, outer, expansions=expansions)

    lam_r, lam_l = right_root.root, left_root.root
    logger.debug(f"λ_r*={lam_r:.17g} ({right_root.iterations} it), λ_l*={lam_l:.17g} ({left_root.iterations} it)")
    return ExtremalSpeeds(
        c_left=_c(kernel, f0, lam_l),
        c_right=_c(kernel, f0, lam_r),
        lambda_left=lam_l,
        lambda_right=lam_r,
        left_root=left_root,
        right_root=right_root,
    )


def lambda_stars(model: KppModel) -> Tuple[float, float]:
    """(λ_l*, λ_r*), the unique critical points of c on each half-axis."""
    speeds = extremal_speeds(model.kernel, model.f0)
    return speeds.lambda_left, speeds.lambda_right


# ============================================================================
# ASYMMETRY
# ============================================================================

def minimizing_rate(kernel: Kernel) -> float:
    """
    λ(k), the zero of M' (the minimizer of M).

    Returns ±inf for kernels carrying all mass on one half-axis, where M is
    monotone and its infimum is approached at the end of the axis.
    """
    if kernel.mass_left() <= 0.0:
        return -math.inf
    if kernel.mass_right() <= 0.0:
        return math.inf
    lam_minus, lam_plus = kernel.exp_abscissas()
    lo, hi, expansions = bracket_increasing(kernel.mgf_prime, lam_minus, lam_plus)
    return brent_root(kernel.mgf_prime, lo, hi, expansions=expansions).root


def asymmetry_E(kernel: Kernel) -> float:
    """
    E(k) = −sign(λ(k))·(1 − M(λ(k))) in [−1, 1].

    Zero when |J(k)| ≤ SYMMETRY_TOL. One-sided kernels give ±1 with the
    sign of J(k).
    """
    if kernel.mass_right() <= 0.0:
        return -1.0
    if kernel.mass_left() <= 0.0:
        return 1.0
    if kernel.is_symmetric():
        return 0.0
    lam_k = minimizing_rate(kernel)
    value = -math.copysign(1.0, lam_k) * (1.0 - kernel.mgf(lam_k))
    return float(np.clip(value, -1.0, 1.0))


def odd_moment_asymmetry(kernel: Kernel, order: int = 3) -> float:
    """
    ∫ k(x) x^N dx for odd N, an alternative skewness measure.

    Raises:
        DomainError: For even orders
    """
    if order < 1 or order % 2 == 0:
        raise DomainError(f"odd moment order must be a positive odd integer (got {order})")
    lo, hi = kernel.truncation_bounds(get_settings().RESIDUAL_TAIL_MASS)
    points = [p for p in kernel.breakpoints() if lo < p < hi]
    if lo < 0.0 < hi:
        points.append(0.0)
    return integrate(lambda x: float(kernel.density(x)) * x ** order, lo, hi, points=points)


def classify(E: float, f0: float, tol: Optional[float] = None) -> SignCase:
    """Sign case of (c_l*, c_r*) from E(k) and f'(0)."""
    tol = get_settings().CLASSIFY_TOL if tol is None else tol
    if abs(E - f0) <= tol:
        return SignCase.II
    if abs(E + f0) <= tol:
        return SignCase.IV
    if E > f0:
        return SignCase.I
    if E < -f0:
        return SignCase.V
    return SignCase.III


# ============================================================================
# REPORTS
# ============================================================================

def spreading_speeds(model: KppModel, tol: Optional[float] = None) -> SpeedReport:
    """Full speed report of a model."""
    speeds = extremal_speeds(model.kernel, model.f0)
    E = asymmetry_E(model.kernel)
    lam_k = 0.0 if E == 0.0 else minimizing_rate(model.kernel)
    case = classify(E, model.f0, tol)
    report = SpeedReport(
        c_left=speeds.c_left,
        c_right=speeds.c_right,
        lambda_left=speeds.lambda_left,
        lambda_right=speeds.lambda_right,
        lambda_k=lam_k,
        first_moment=model.kernel.first_moment(),
        asymmetry=E,
        f0=model.f0,
        classification=case,
        iterations_left=speeds.left_root.iterations,
        iterations_right=speeds.right_root.iterations,
        bracket_width_left=speeds.left_root.bracket_width,
        bracket_width_right=speeds.right_root.bracket_width,
        expansions_left=speeds.left_root.expansions,
        expansions_right=speeds.right_root.expansions,
    )
    logger.info(
        f"Speeds: c_l*={report.c_left:.10g}, c_r*={report.c_right:.10g}, "
        f"E={E:.10g}, case {case.value}"
    )
    return report


def exp_decay_speed(model: KppModel, lam: float) -> float:
    """
    Spreading speed of initial data decaying like e^{−λ|x|}.

    c(λ) for λ below λ*, c* from λ* on.

    Raises:
        DomainError: If λ ≤ 0
        PreconditionError: If the kernel is not symmetric and nonincreasing on (0, ∞)
    """
    if not lam > 0:
        raise DomainError(f"decay rate must be positive (got {lam})")
    if not model.kernel.is_symmetric():
        raise PreconditionError(f"kernel is not symmetric (J = {model.kernel.first_moment():.3g})")
    if not model.kernel.is_nonincreasing_on_positive():
        raise PreconditionError("kernel density increases somewhere on (0, ∞)")
    speeds = extremal_speeds(model.kernel, model.f0)
    if lam >= speeds.lambda_right:
        return speeds.c_right
    return c_of_lambda(model, lam)


def skewness_premise(k1: Kernel, k2: Kernel, samples: Optional[int] = None) -> bool:
    """
    True when k1 ≥ k2 on (0, ∞) and k1 ≤ k2 on (−∞, 0), checked on a dense
    grid plus every knot and support end of both kernels.
    """
    samples = samples or get_settings().MONOTONE_SAMPLES
    tail = get_settings().KERNEL_TAIL_MASS
    lo = min(k1.truncation_bounds(tail)[0], k2.truncation_bounds(tail)[0])
    hi = max(k1.truncation_bounds(tail)[1], k2.truncation_bounds(tail)[1])
    knots = [p for p in k1.breakpoints() + k2.breakpoints() if math.isfinite(p)]
    grid = np.unique(np.concatenate([np.linspace(lo, hi, samples), np.asarray(knots, dtype=float)]))

    d1, d2 = k1.density(grid), k2.density(grid)
    slack = 1e-14 * max(float(np.max(d1)), float(np.max(d2)))
    right = grid > 0
    left = grid < 0
    return bool(np.all(d1[right] >= d2[right] - slack) and np.all(d1[left] <= d2[left] + slack))
