"""
Dispersal kernels.

A kernel is a probability density k on the line with a finite exponential
moment on both sides, M(λ) = ∫ k(x) e^{λx} dx for λ in (λ⁻, λ⁺), λ⁻ < 0 < λ⁺.

Families:
- normal(α, σ): mean α, variance σ
- uniform(b, a): constant 1/(a − b) on [b, a]
- asymmetric-exponential(θ_l, θ_r): C e^{θ_l x} on x < 0, C e^{−θ_r x} on x ≥ 0
- tabulated: continuous piecewise-linear density, zero outside the table

Every family has a closed-form M and M'; `mgf_quadrature` integrates the
same moments numerically and serves as an independent check.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import ClassVar, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import ndtr, ndtri
from loguru import logger

from src.config.settings import get_settings
from src.services.calculation.quadrature import integrate
from src.utils.errors import DomainError, InvalidModelError

ArrayLike = Union[float, Sequence[float], np.ndarray]


class KernelFamily(str, Enum):
    """Family tag of a kernel."""
    NORMAL = "normal"
    UNIFORM = "uniform"
    ASYMMETRIC_EXPONENTIAL = "asymmetric-exponential"
    TABULATED = "tabulated"


class Hypothesis(str, Enum):
    """Model hypothesis a validation check refers to."""
    NONNEGATIVE = "nonnegative"
    MASS = "mass"
    K1 = "K1"
    K2 = "K2"
    ENDPOINTS = "H-endpoints"
    POSITIVE = "H-positive"
    KPP_BOUND = "H-kpp-bound"


@dataclass(frozen=True)
class Violation:
    """Single violated hypothesis."""
    hypothesis: Hypothesis
    message: str
    location: Optional[float] = None


@dataclass
class ValidationResult:
    """Outcome of validating a kernel or a reaction."""
    violations: List[Violation] = field(default_factory=list)
    correction: Optional[float] = None  # tabulated renormalization factor

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> List[str]:
        return [f"{v.hypothesis.value}: {v.message}" for v in self.violations]


# ============================================================================
# TILTED MOMENTS
# ============================================================================

def _tilted_moments(u: np.ndarray, order: int) -> List[np.ndarray]:
    """
    I_m(u) = ∫_0^1 t^m e^{ut} dt for m = 0..order.

    Series for |u| < 1, upward recurrence I_m = (e^u − m I_{m−1}) / u otherwise.
    """
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1.0
    safe = np.where(small, 1.0, u)
    eu = np.exp(u)

    result: List[np.ndarray] = []
    previous = np.expm1(safe) / safe
    for m in range(order + 1):
        if m > 0:
            previous = (eu - m * previous) / safe
        series = np.zeros_like(u)
        term = np.ones_like(u)
        for n in range(30):
            if n > 0:
                term = term * u / n
            series = series + term / (n + m + 1)
        result.append(np.where(small, series, previous))
    return result


# ============================================================================
# BASE CLASS
# ============================================================================

class Kernel(ABC):
    """Probability density with finite two-sided exponential moments."""

    family: ClassVar[KernelFamily]

    @abstractmethod
    def density(self, x: ArrayLike) -> np.ndarray:
        """Evaluate k(x) ≥ 0."""

    @abstractmethod
    def cdf(self, x: ArrayLike) -> np.ndarray:
        """Evaluate ∫_{-∞}^x k."""

    @abstractmethod
    def exp_abscissas(self) -> Tuple[float, float]:
        """Open interval (λ⁻, λ⁺) where M is finite; ends may be infinite."""

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """Closed hull of the support; ends may be infinite."""

    @abstractmethod
    def reflect(self) -> "Kernel":
        """Kernel x ↦ k(−x), staying in the same family."""

    @abstractmethod
    def _mgf(self, lam: float) -> float:
        """Closed-form M(λ) for λ inside the abscissas."""

    @abstractmethod
    def _mgf_prime(self, lam: float) -> float:
        """Closed-form M'(λ) for λ inside the abscissas."""

    @abstractmethod
    def _tilted_window(self, lam: float) -> Tuple[float, float]:
        """Finite interval carrying all but a negligible part of k(x)e^{λx}."""

    @abstractmethod
    def to_params(self) -> dict:
        """Family tag and parameters, as written to config and certificate files."""

    def breakpoints(self) -> List[float]:
        """Points where k is not smooth."""
        return []

    # ------------------------------------------------------------------
    # Moments
    # ------------------------------------------------------------------

    def check_domain(self, lam: float) -> None:
        """
        Raises:
            DomainError: If λ is outside (λ⁻, λ⁺)
        """
        lo, hi = self.exp_abscissas()
        if not (lo < lam < hi) or not math.isfinite(lam):
            raise DomainError(f"λ={lam:.17g} outside exponential abscissas ({lo}, {hi})")

    def mgf(self, lam: float) -> float:
        """
        Moment generating function M(λ) = ∫ k(x) e^{λx} dx.

        Raises:
            DomainError: If λ is outside (λ⁻, λ⁺)
        """
        self.check_domain(lam)
        if lam == 0.0:
            return 1.0
        return float(self._mgf(lam))

    def mgf_prime(self, lam: float) -> float:
        """
        Derivative M'(λ) = ∫ k(x) e^{λx} x dx; at λ = 0 this is J(k).

        Raises:
            DomainError: If λ is outside (λ⁻, λ⁺)
        """
        self.check_domain(lam)
        return float(self._mgf_prime(lam))

    def mgf_quadrature(self, lam: float, order: int = 0) -> float:
        """
        ∫ k(x) e^{λx} x^order dx by adaptive quadrature.

        Raises:
            DomainError: If λ is outside (λ⁻, λ⁺)
            QuadratureError: If quadrature does not converge
        """
        self.check_domain(lam)
        lo, hi = self._tilted_window(lam)
        points = [p for p in self.breakpoints() if lo < p < hi]

        def integrand(x: float) -> float:
            return float(self.density(x)) * math.exp(lam * x) * x ** order

        return integrate(integrand, lo, hi, points=points)

    def first_moment(self) -> float:
        """J(k) = ∫ k(x) x dx."""
        return self.mgf_prime(0.0)

    # ------------------------------------------------------------------
    # Mass bookkeeping
    # ------------------------------------------------------------------

    def mass_left(self) -> float:
        """Mass on (−∞, 0)."""
        return float(self.cdf(0.0))

    def mass_right(self) -> float:
        """Mass on (0, ∞)."""
        return 1.0 - float(self.cdf(0.0))

    def mass_outside(self, lo: float, hi: float) -> float:
        """Mass outside [lo, hi]."""
        return float(self.cdf(lo)) + (1.0 - float(self.cdf(hi)))

    def truncation_bounds(self, tail_mass: float) -> Tuple[float, float]:
        """
        Finite interval outside which at most `tail_mass` of k lies.

        Compactly supported kernels return their support.
        """
        return self.support()

    def is_symmetric(self, tol: Optional[float] = None) -> bool:
        """|J(k)| within tolerance."""
        tol = get_settings().SYMMETRY_TOL if tol is None else tol
        return abs(self.first_moment()) <= tol

    def is_nonincreasing_on_positive(self, samples: Optional[int] = None) -> bool:
        """Sampled check that k does not increase on (0, ∞)."""
        samples = samples or get_settings().MONOTONE_SAMPLES
        _, hi = self.truncation_bounds(get_settings().KERNEL_TAIL_MASS)
        if hi <= 0:
            return True
        grid = np.linspace(0.0, hi, samples + 1)[1:]
        knots = [p for p in self.breakpoints() if 0 < p <= hi]
        grid = np.unique(np.concatenate([grid, np.asarray(knots, dtype=float)]))
        values = self.density(grid)
        scale = max(float(np.max(values)), 1e-300)
        return bool(np.all(np.diff(values) <= 1e-12 * scale))

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def validate(self) -> ValidationResult:
        """Check nonnegativity, mass, (K1) and (K2); violations are returned, never raised."""
        result = ValidationResult()
        self._validate_density(result)

        mass = 1.0 - self.mass_outside(-math.inf, math.inf)
        if abs(mass - 1.0) > 1e-10:
            result.violations.append(
                Violation(Hypothesis.MASS, f"total mass {mass:.17g} differs from 1")
            )

        lam_minus, lam_plus = self.exp_abscissas()
        if not (lam_minus < 0.0 < lam_plus):
            result.violations.append(
                Violation(Hypothesis.K1, f"abscissas ({lam_minus}, {lam_plus}) do not straddle 0")
            )

        if self.mass_right() <= 0.0:
            result.violations.append(
                Violation(Hypothesis.K2, "density vanishes on (0, ∞)")
            )
        if self.mass_left() <= 0.0:
            result.violations.append(
                Violation(Hypothesis.K2, "density vanishes on (−∞, 0)")
            )
        return result

    def _validate_density(self, result: ValidationResult) -> None:
        pass


# ============================================================================
# PARAMETRIC FAMILIES
# ============================================================================

@dataclass(frozen=True)
class NormalKernel(Kernel):
    """Gaussian kernel with mean α and variance σ."""
    mean: float = 0.0
    variance: float = 1.0

    family: ClassVar[KernelFamily] = KernelFamily.NORMAL

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise InvalidModelError("kernel.mean and kernel.variance must be finite")
        if self.variance <= 0:
            raise InvalidModelError(f"kernel.variance must be positive (got {self.variance})")

    def density(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(-((x - self.mean) ** 2) / (2 * self.variance)) / math.sqrt(2 * math.pi * self.variance)

    def cdf(self, x: ArrayLike) -> np.ndarray:
        return ndtr((np.asarray(x, dtype=float) - self.mean) / math.sqrt(self.variance))

    def exp_abscissas(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def reflect(self) -> "NormalKernel":
        return NormalKernel(mean=-self.mean, variance=self.variance)

    def truncation_bounds(self, tail_mass: float) -> Tuple[float, float]:
        half = -float(ndtri(tail_mass / 2)) * math.sqrt(self.variance)
        return self.mean - half, self.mean + half

    def _mgf(self, lam: float) -> float:
        return math.exp(self.mean * lam + 0.5 * self.variance * lam * lam)

    def _mgf_prime(self, lam: float) -> float:
        return (self.mean + self.variance * lam) * self._mgf(lam)

    def _tilted_window(self, lam: float) -> Tuple[float, float]:
        center = self.mean + self.variance * lam
        half = 40.0 * math.sqrt(self.variance)
        return center - half, center + half

    @property
    def skew_ratio(self) -> float:
        """r = α/√(2σ), the parameter of the normal asymmetry law."""
        return self.mean / math.sqrt(2 * self.variance)

    def to_params(self) -> dict:
        return {"family": self.family.value, "mean": self.mean, "variance": self.variance}


@dataclass(frozen=True)
class UniformKernel(Kernel):
    """Uniform kernel on [b, a]."""
    b: float = -1.0
    a: float = 1.0

    family: ClassVar[KernelFamily] = KernelFamily.UNIFORM

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidModelError("kernel.a and kernel.b must be finite")
        if self.b >= self.a:
            raise InvalidModelError(f"kernel.b must be below kernel.a (got b={self.b}, a={self.a})")

    @property
    def width(self) -> float:
        return self.a - self.b

    def density(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.b) & (x <= self.a), 1.0 / self.width, 0.0)

    def cdf(self, x: ArrayLike) -> np.ndarray:
        return np.clip((np.asarray(x, dtype=float) - self.b) / self.width, 0.0, 1.0)

    def exp_abscissas(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def support(self) -> Tuple[float, float]:
        return self.b, self.a

    def breakpoints(self) -> List[float]:
        return [self.b, self.a]

    def reflect(self) -> "UniformKernel":
        return UniformKernel(b=-self.a, a=-self.b)

    def _mgf(self, lam: float) -> float:
        i0, = _tilted_moments(np.array(self.width * lam), 0)
        return math.exp(self.b * lam) * float(i0)

    def _mgf_prime(self, lam: float) -> float:
        i0, i1 = _tilted_moments(np.array(self.width * lam), 1)
        return math.exp(self.b * lam) * (self.b * float(i0) + self.width * float(i1))

    def _tilted_window(self, lam: float) -> Tuple[float, float]:
        return self.b, self.a

    @property
    def theta(self) -> float:
        """θ = −a/b for b < 0."""
        return -self.a / self.b

    @property
    def skew_ratio(self) -> float:
        """r = (a + b)/(a − b)."""
        return (self.a + self.b) / self.width

    def to_params(self) -> dict:
        return {"family": self.family.value, "b": self.b, "a": self.a}


@dataclass(frozen=True)
class AsymmetricExponentialKernel(Kernel):
    """Two-sided exponential kernel with left rate θ_l and right rate θ_r."""
    theta_left: float = 1.0
    theta_right: float = 1.0

    family: ClassVar[KernelFamily] = KernelFamily.ASYMMETRIC_EXPONENTIAL

    def __post_init__(self):
        if not (self.theta_left > 0 and math.isfinite(self.theta_left)):
            raise InvalidModelError(f"kernel.theta_left must be positive (got {self.theta_left})")
        if not (self.theta_right > 0 and math.isfinite(self.theta_right)):
            raise InvalidModelError(f"kernel.theta_right must be positive (got {self.theta_right})")

    @property
    def peak(self) -> float:
        """C = θ_l θ_r / (θ_l + θ_r), the density at 0."""
        return self.theta_left * self.theta_right / (self.theta_left + self.theta_right)

    def density(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        exponent = np.where(x >= 0, -self.theta_right * x, self.theta_left * x)
        return self.peak * np.exp(exponent)

    def cdf(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        left = self.peak / self.theta_left * np.exp(self.theta_left * np.minimum(x, 0.0))
        right = 1.0 - self.peak / self.theta_right * np.exp(-self.theta_right * np.maximum(x, 0.0))
        return np.where(x < 0, left, right)

    def exp_abscissas(self) -> Tuple[float, float]:
        return -self.theta_left, self.theta_right

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def breakpoints(self) -> List[float]:
        return [0.0]

    def reflect(self) -> "AsymmetricExponentialKernel":
        return AsymmetricExponentialKernel(theta_left=self.theta_right, theta_right=self.theta_left)

    def truncation_bounds(self, tail_mass: float) -> Tuple[float, float]:
        half_tail = tail_mass / 2
        right = max(0.0, math.log(self.peak / (self.theta_right * half_tail)) / self.theta_right)
        left = max(0.0, math.log(self.peak / (self.theta_left * half_tail)) / self.theta_left)
        return -left, right

    def _mgf(self, lam: float) -> float:
        return self.theta_left * self.theta_right / ((self.theta_right - lam) * (self.theta_left + lam))

    def _mgf_prime(self, lam: float) -> float:
        return self._mgf(lam) * (1.0 / (self.theta_right - lam) - 1.0 / (self.theta_left + lam))

    def _tilted_window(self, lam: float) -> Tuple[float, float]:
        return -60.0 / (self.theta_left + lam), 60.0 / (self.theta_right - lam)

    def to_params(self) -> dict:
        return {
            "family": self.family.value,
            "theta_left": self.theta_left,
            "theta_right": self.theta_right,
        }


# ============================================================================
# TABULATED
# ============================================================================

@dataclass(frozen=True, eq=False)
class TabulatedKernel(Kernel):
    """
    Continuous piecewise-linear density through (x_i, y_i), zero outside.

    The table is renormalized to unit mass at construction; the factor
    applied is kept in `correction`. Drift above RENORMALIZATION_LIMIT is
    rejected.
    """
    xs: np.ndarray
    ys: np.ndarray
    correction: float = 1.0
    source: Optional[str] = None

    family: ClassVar[KernelFamily] = KernelFamily.TABULATED

    @classmethod
    def from_points(cls, xs: Sequence[float], ys: Sequence[float], source: Optional[str] = None) -> "TabulatedKernel":
        """
        Build a kernel from raw knots, renormalizing the mass.

        Raises:
            InvalidModelError: On malformed tables or mass drift beyond the limit
        """
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise InvalidModelError("kernel.table needs at least two (x, density) rows")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidModelError("kernel.table contains non-finite values")
        if np.any(np.diff(x) <= 0):
            raise InvalidModelError("kernel.table abscissas must be strictly increasing")

        mass = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))
        limit = get_settings().RENORMALIZATION_LIMIT
        if not mass > 0 or abs(mass - 1.0) > limit:
            raise InvalidModelError(
                f"kernel.table mass {mass:.6g} deviates from 1 by more than {limit:.0%}"
            )
        correction = 1.0 / mass
        if abs(mass - 1.0) > 1e-10:
            logger.warning(f"Tabulated kernel renormalized by factor {correction:.17g}")
        return cls(xs=x, ys=y * correction, correction=correction, source=source)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TabulatedKernel":
        """
        Load a two-column (x, density) text file.

        Raises:
            InvalidModelError: If the file is missing or malformed
        """
        path = Path(path)
        if not path.exists():
            raise InvalidModelError(f"kernel.table file not found: {path}")
        try:
            data = np.loadtxt(path, dtype=float, ndmin=2)
        except ValueError as e:
            raise InvalidModelError(f"kernel.table is not numeric two-column text: {e}") from e
        if data.shape[1] != 2:
            raise InvalidModelError(f"kernel.table must have two columns (got {data.shape[1]})")
        return cls.from_points(data[:, 0], data[:, 1], source=str(path))

    def density(self, x: ArrayLike) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys, left=0.0, right=0.0)

    def cdf(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        cells = 0.5 * (self.ys[1:] + self.ys[:-1]) * np.diff(self.xs)
        cumulative = np.concatenate([[0.0], np.cumsum(cells)])
        clipped = np.clip(x, self.xs[0], self.xs[-1])
        idx = np.clip(np.searchsorted(self.xs, clipped, side="right") - 1, 0, self.xs.size - 2)
        partial = 0.5 * (self.ys[idx] + self.density(clipped)) * (clipped - self.xs[idx])
        return cumulative[idx] + partial

    def exp_abscissas(self) -> Tuple[float, float]:
        return -math.inf, math.inf

    def support(self) -> Tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def breakpoints(self) -> List[float]:
        return [float(v) for v in self.xs]

    def reflect(self) -> "TabulatedKernel":
        return TabulatedKernel(xs=-self.xs[::-1].copy(), ys=self.ys[::-1].copy(), correction=self.correction)

    def _cell_moments(self, lam: float) -> Tuple[float, float]:
        """Exact ∫ k e^{λx} and ∫ k x e^{λx}, cell by cell."""
        x0 = self.xs[:-1]
        h = np.diff(self.xs)
        y0, y1 = self.ys[:-1], self.ys[1:]
        i0, i1, i2 = _tilted_moments(lam * h, 2)
        scale = h * np.exp(lam * x0)
        base = y0 * (i0 - i1) + y1 * i1
        first = y0 * (i1 - i2) + y1 * i2
        m0 = float(np.sum(scale * base))
        m1 = float(np.sum(scale * (x0 * base + h * first)))
        return m0, m1

    def _mgf(self, lam: float) -> float:
        return self._cell_moments(lam)[0]

    def _mgf_prime(self, lam: float) -> float:
        return self._cell_moments(lam)[1]

    def _tilted_window(self, lam: float) -> Tuple[float, float]:
        return self.support()

    def _validate_density(self, result: ValidationResult) -> None:
        result.correction = self.correction
        negative = np.nonzero(self.ys < 0)[0]
        if negative.size:
            i = int(negative[0])
            result.violations.append(
                Violation(Hypothesis.NONNEGATIVE, f"negative density {self.ys[i]:.6g}", float(self.xs[i]))
            )

    def to_params(self) -> dict:
        return {
            "family": self.family.value,
            "xs": [float(v) for v in self.xs],
            "ys": [float(v) for v in self.ys],
            "correction": self.correction,
        }


# ============================================================================
# MODULE-LEVEL OPERATIONS
# ============================================================================

def kernel_density(k: Kernel, x: ArrayLike) -> np.ndarray:
    """k(x)."""
    return k.density(x)


def mgf(k: Kernel, lam: float) -> float:
    """M(λ)."""
    return k.mgf(lam)


def mgf_prime(k: Kernel, lam: float) -> float:
    """M'(λ)."""
    return k.mgf_prime(lam)


def exp_abscissas(k: Kernel) -> Tuple[float, float]:
    """(λ⁻, λ⁺)."""
    return k.exp_abscissas()


def validate_kernel(k: Kernel) -> ValidationResult:
    """Violated kernel hypotheses, if any."""
    return k.validate()


def reflect(k: Kernel) -> Kernel:
    """Kernel x ↦ k(−x)."""
    return k.reflect()


def kernel_from_params(params: dict) -> Kernel:
    """
    Rebuild a kernel from `Kernel.to_params()` output.

    Raises:
        InvalidModelError: For unknown families or bad parameters
    """
    family = params.get("family")
    if family == KernelFamily.NORMAL.value:
        return NormalKernel(mean=float(params["mean"]), variance=float(params["variance"]))
    if family == KernelFamily.UNIFORM.value:
        return UniformKernel(b=float(params["b"]), a=float(params["a"]))
    if family == KernelFamily.ASYMMETRIC_EXPONENTIAL.value:
        return AsymmetricExponentialKernel(
            theta_left=float(params["theta_left"]),
            theta_right=float(params["theta_right"]),
        )
    if family == KernelFamily.TABULATED.value:
        kernel = TabulatedKernel.from_points(params["xs"], params["ys"])
        # stored ys are already normalized; keep the factor from the original table
        correction = float(params.get("correction", 1.0)) * kernel.correction
        return TabulatedKernel(xs=kernel.xs, ys=kernel.ys, correction=correction)
    raise InvalidModelError(f"kernel.family unknown: {family!r}")
