"""
Closed-form asymmetry laws for the normal and uniform families.

Normal kernel N(α, σ): with r = α/√(2σ), E = sign(r)(1 − e^{−r²}), so the
sign cases switch at r* = √(−ln(1 − f'(0))) when f'(0) < 1.

Uniform kernel on [b, a] with θ = −a/b: the minimizer of M is z(θ)/b where
z(θ) solves ω(z) = ω(−θz) with ω(x) = (x − 1)e^x, and
E = sign(θ − 1)(1 − e^{z}/(1 + θz)). For θ ≥ 1 the bracketed quantity is
q(θ), increasing from q(1) = 0 toward 1.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from src.services.calculation.roots import bisection_root
from src.utils.errors import DomainError


@dataclass(frozen=True)
class UniformCaseResult:
    """Asymmetry data of one uniform kernel."""
    theta: float
    z: float
    asymmetry: float
    skew_ratio: float
    theta_star: Optional[float] = None
    r_star: Optional[float] = None


@dataclass(frozen=True)
class UniformThreshold:
    """θ* with q(θ*) = f'(0) and the matching r* = (θ* − 1)/(θ* + 1)."""
    theta_star: float
    r_star: float


# ============================================================================
# NORMAL FAMILY
# ============================================================================

def normal_E(r: float) -> float:
    """sign(r)(1 − e^{−r²})."""
    if r == 0:
        return 0.0
    return math.copysign(1.0, r) * -math.expm1(-r * r)


def normal_r_star(f0: float) -> Optional[float]:
    """
    Positive r with normal_E(r) = f0, or None when f0 ≥ 1.

    Raises:
        DomainError: If f0 ≤ 0
    """
    if not f0 > 0:
        raise DomainError(f"f'(0) must be positive (got {f0})")
    if f0 >= 1:
        return None
    return math.sqrt(-math.log1p(-f0))


# ============================================================================
# UNIFORM FAMILY
# ============================================================================

def omega(x: float) -> float:
    """(x − 1)e^x."""
    return (x - 1.0) * math.exp(x)


def _omega_gap(z: float, theta: float) -> float:
    """ω(z) − ω(−θz), increasing in z on the bracket."""
    return (z - 1.0) * math.exp(z) + (theta * z + 1.0) * math.exp(-theta * z)


def _omega_gap_reduced(z: float, theta: float, terms: int = 25) -> float:
    """
    (ω(z) − ω(−θz))/z² by its power series.

    Near θ = 1 the gap itself is O((θ − 1)³) and drowns in roundoff; the
    reduced series keeps full relative precision.
    """
    log_theta = math.log(theta)
    total = 0.0
    power = 1.0
    factorial = 1.0
    for m in range(2, terms + 2):
        if m > 2:
            power *= z
            factorial *= m - 2
        if m % 2 == 0:
            coefficient = -math.expm1(m * log_theta)
        else:
            coefficient = 1.0 + math.exp(m * log_theta)
        total += coefficient * power / (factorial * m)
    return total


def uniform_z(theta: float) -> float:
    """
    z(θ), the solution of ω(z) = ω(−θz) other than z = 0.

    Bracket: (1 − 1/θ, 1) for θ > 1, (−1/θ, 1 − 1/θ) for θ < 1; z(1) = 0.

    Raises:
        DomainError: If θ ≤ 0
    """
    if not theta > 0:
        raise DomainError(f"θ must be positive (got {theta})")
    if abs(theta - 1.0) < 1e-8:
        return 0.0
    if theta > 1:
        lo, hi = 1.0 - 1.0 / theta, 1.0
    else:
        lo, hi = -1.0 / theta, 1.0 - 1.0 / theta
    if abs(theta - 1.0) < 1e-2:
        return bisection_root(lambda z: _omega_gap_reduced(z, theta), lo, hi).root
    return bisection_root(lambda z: _omega_gap(z, theta), lo, hi).root


def uniform_z_prime(theta: float) -> float:
    """
    z'(θ) = z(z − 1) / ((θ + 1)(1 − 1/θ − z)).

    Raises:
        DomainError: At θ = 1, where the formula is 0/0
    """
    if not theta > 0:
        raise DomainError(f"θ must be positive (got {theta})")
    if abs(theta - 1.0) < 1e-8:
        raise DomainError("z'(θ) formula is singular at θ = 1")
    z = uniform_z(theta)
    return z * (z - 1.0) / ((theta + 1.0) * (1.0 - 1.0 / theta - z))


def _inner_gap(theta: float, z: float) -> float:
    """1 − e^z/(1 + θz)."""
    return 1.0 - math.exp(z) / (1.0 + theta * z)


def uniform_q(theta: float) -> float:
    """
    q(θ) = 1 − e^{z(θ)}/(1 + θz(θ)) for θ ≥ 1.

    Raises:
        DomainError: If θ < 1
    """
    if theta < 1.0:
        raise DomainError(f"q is defined for θ ≥ 1 (got {theta})")
    return _inner_gap(theta, uniform_z(theta))


def uniform_E(a: float, b: float) -> float:
    """
    E of the uniform kernel on [b, a].

    Raises:
        DomainError: Unless a > 0 > b
    """
    if not (a > 0 > b):
        raise DomainError(f"uniform case study needs a > 0 > b (got a={a}, b={b})")
    theta = -a / b
    z = uniform_z(theta)
    if z == 0.0:
        return 0.0
    return math.copysign(1.0, theta - 1.0) * _inner_gap(theta, z)


def uniform_theta_star(f0: float) -> Optional[UniformThreshold]:
    """
    θ* > 1 with q(θ*) = f0, or None when f0 ≥ 1.

    Raises:
        DomainError: If f0 ≤ 0
    """
    if not f0 > 0:
        raise DomainError(f"f'(0) must be positive (got {f0})")
    if f0 >= 1:
        return None

    lo, hi = 1.0 + 1e-9, 2.0
    while uniform_q(hi) <= f0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise DomainError(f"q never reaches f'(0)={f0}")
    root = bisection_root(lambda t: uniform_q(t) - f0, lo, hi).root
    logger.debug(f"θ*={root:.17g} for f'(0)={f0}")
    return UniformThreshold(theta_star=root, r_star=(root - 1.0) / (root + 1.0))


def uniform_case(a: float, b: float, f0: Optional[float] = None) -> UniformCaseResult:
    """All uniform-family quantities for one kernel, with thresholds when f0 is given."""
    theta = -a / b
    threshold = uniform_theta_star(f0) if f0 is not None else None
    return UniformCaseResult(
        theta=theta,
        z=uniform_z(theta),
        asymmetry=uniform_E(a, b),
        skew_ratio=(a + b) / (a - b),
        theta_star=threshold.theta_star if threshold else None,
        r_star=threshold.r_star if threshold else None,
    )


def uniform_from_skew(r: float, half_width: float = 1.0) -> Tuple[float, float]:
    """(b, a) of the uniform kernel with skew ratio r = (a + b)/(a − b) and a − b = 2·half_width."""
    if not -1 < r < 1:
        raise DomainError(f"uniform skew ratio must lie in (−1, 1) (got {r})")
    return half_width * (r - 1.0), half_width * (r + 1.0)


# ============================================================================
# SWEEPS
# ============================================================================

def normal_sweep(r_min: float, r_max: float, r_step: float) -> List[Tuple[float, float]]:
    """(r, E) rows over an evenly spaced r grid."""
    count = int(round((r_max - r_min) / r_step)) + 1
    rs = np.round(np.linspace(r_min, r_max, count), 12)
    return [(float(r), normal_E(float(r))) for r in rs]


def uniform_sweep(theta_min: float, theta_max: float, count: int) -> List[Tuple[float, float, float, float, float]]:
    """
    (θ, z, q, E, r) rows over a logarithmic θ grid.

    q is taken at max(θ, 1/θ), so |E| = q on every row.
    """
    rows = []
    for theta in np.geomspace(theta_min, theta_max, count):
        theta = float(theta)
        z = uniform_z(theta)
        q = uniform_q(max(theta, 1.0 / theta))
        E = uniform_E(theta, -1.0)
        rows.append((theta, z, q, E, (theta - 1.0) / (theta + 1.0)))
    return rows


def threshold_sweep(f0_values: List[float]) -> List[Tuple[float, Optional[float], Optional[float], Optional[float]]]:
    """(f0, r*_normal, θ*, r*_uniform) rows."""
    rows = []
    for f0 in f0_values:
        threshold = uniform_theta_star(f0)
        rows.append((
            f0,
            normal_r_star(f0),
            threshold.theta_star if threshold else None,
            threshold.r_star if threshold else None,
        ))
    return rows
