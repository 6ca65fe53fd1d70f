"""
Lower solutions.

Compact lower solution (spreading at speed c slightly below c_r*, or above
c_l* on the left side):

    u(t, x) = max{0, H(e^{ρ(−x + ct + ξ)})}

built from the zeros α, β and the maximizer γ of the concave function

    G_η(c, λ) = cλ − M(λ) + 1 − f'(0) + η.

Exponential-data lower solution, for λ in (0, λ_r*):

    u(t, x) = max{0, g(a·e^{λ(−x + c(λ)t)})},  g(z) = z − L z^{1+δ}.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from loguru import logger

from src.config.settings import get_settings
from src.models.model import KppModel
from src.services.analysis.speeds import c_of_lambda, extremal_speeds
from src.services.calculation.roots import bracket_increasing, brent_root
from src.services.certificates.auxiliary import HProfile, h_profile
from src.services.certificates.residual import residual_on_frames
from src.utils.errors import (
    BracketNotFoundError,
    DegenerateRootError,
    InfeasibleWidthError,
    NoRootError,
    RangeError,
)


class Side(str, Enum):
    """Direction a lower solution travels relative to the spreading interval."""
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class GRoots:
    """Zeros α, β of G_η(c, ·) and its maximizer γ between them."""
    alpha: float
    gamma: float
    beta: float
    g_max: float


# ============================================================================
# G_η AND η(ε)
# ============================================================================

def G_eta(model: KppModel, eta: float, c: float, lam: float) -> float:
    """
    cλ − M(λ) + 1 − f'(0) + η.

    Raises:
        DomainError: If λ is outside the exponential abscissas
    """
    return c * lam - model.kernel.mgf(lam) + 1.0 - model.f0 + eta


def _G_or_minus_inf(model: KppModel, eta: float, c: float, lam: float) -> float:
    try:
        return G_eta(model, eta, c, lam)
    except OverflowError:
        return -math.inf


def shifted_speed(model: KppModel, eta: float, side: Side) -> float:
    """c_r*(η) or c_l*(η): the spreading speed with f'(0) replaced by f'(0) − η."""
    speeds = extremal_speeds(model.kernel, model.f0 - eta)
    return speeds.c_right if side == Side.RIGHT else speeds.c_left


def eta_for_epsilon(model: KppModel, epsilon: float, side: Side) -> float:
    """
    η with c_r*(η) = c_r* − ε (right) or c_l*(η) = c_l* + ε (left).

    Raises:
        RangeError: If ε ∉ (0, (c_r* − c_l*)/2) or η would reach f'(0)
    """
    side = Side(side)
    speeds = extremal_speeds(model.kernel, model.f0)
    half_gap = 0.5 * (speeds.c_right - speeds.c_left)
    if not 0 < epsilon < half_gap:
        raise RangeError(f"ε must lie in (0, {half_gap:.6g}) (got {epsilon})")

    sign = 1.0 if side == Side.RIGHT else -1.0
    target = speeds.c_right - epsilon if side == Side.RIGHT else speeds.c_left + epsilon
    limit = model.kernel.first_moment()
    if sign * (target - limit) <= 0:
        raise RangeError(f"ε={epsilon} too large: η would reach f'(0) (limit speed {limit:.6g})")

    def gap(eta: float) -> float:
        return sign * (shifted_speed(model, eta, side) - target)

    eta_high = 0.5 * model.f0
    for _ in range(60):
        if gap(eta_high) < 0:
            break
        eta_high = model.f0 - 0.5 * (model.f0 - eta_high)
    else:
        raise RangeError(f"ε={epsilon} too large: η would reach f'(0)")

    eta = brentq(gap, 0.0, eta_high, xtol=1e-15, rtol=4 * 2.220446049250313e-16, maxiter=500)
    logger.debug(f"η={eta:.17g} for ε={epsilon} on the {side.value} side")
    return float(eta)


def g_roots(model: KppModel, eta: float, c: float, side: Side) -> GRoots:
    """
    α < γ < β (right) or β < γ < α (left) with G(α) = G(β) = 0, γ = argmax G.

    Raises:
        NoRootError: If c is outside the admissible band
        DegenerateRootError: If G touches zero only at γ
    """
    side = Side(side)
    kernel = model.kernel
    if not 0 < eta < model.f0:
        raise NoRootError(f"η must lie in (0, f'(0)) (got {eta})")
    speeds = extremal_speeds(kernel, model.f0)
    if side == Side.RIGHT and not c < speeds.c_right:
        raise NoRootError(f"c={c:.6g} must stay below c_r*={speeds.c_right:.6g}")
    if side == Side.LEFT and not c > speeds.c_left:
        raise NoRootError(f"c={c:.6g} must stay above c_l*={speeds.c_left:.6g}")

    lam_minus, lam_plus = kernel.exp_abscissas()
    try:
        lo, hi, expansions = bracket_increasing(lambda lam: kernel.mgf_prime(lam) - c, lam_minus, lam_plus)
    except BracketNotFoundError as e:
        raise NoRootError(f"M'(λ) never reaches c={c:.6g}") from e
    gamma = brent_root(lambda lam: kernel.mgf_prime(lam) - c, lo, hi, expansions=expansions).root

    if side == Side.RIGHT and gamma <= 0:
        raise NoRootError(f"c={c:.6g} is not above J(k); G has no zeros on (0, λ⁺)")
    if side == Side.LEFT and gamma >= 0:
        raise NoRootError(f"c={c:.6g} is not below J(k); G has no zeros on (λ⁻, 0)")

    g_max = G_eta(model, eta, c, gamma)
    tol = get_settings().DEGENERATE_TOL
    if abs(g_max) <= tol:
        raise DegenerateRootError(f"G_η(c, ·) is tangent to zero at γ={gamma:.10g}")
    if g_max < 0:
        raise NoRootError(f"c={c:.6g} is outside the band where G_η(c, ·) has two zeros")

    def G(lam: float) -> float:
        return _G_or_minus_inf(model, eta, c, lam)

    alpha = brent_root(G, 0.0, gamma).root
    limit = lam_plus if side == Side.RIGHT else lam_minus
    step = max(abs(gamma), 1.0)
    far = gamma
    for _ in range(get_settings().MAX_DOUBLINGS):
        if math.isinf(limit):
            probe = gamma + math.copysign(step, gamma)
            step *= 2.0
        else:
            probe = far + 0.5 * (limit - far)
        if G(probe) < 0:
            break
        far = probe
    else:
        raise NoRootError("G_η(c, ·) stays positive up to the exponential abscissa")
    beta = brent_root(G, far, probe).root

    logger.debug(f"G roots: α={alpha:.10g}, γ={gamma:.10g}, β={beta:.10g}, max G={g_max:.6g}")
    return GRoots(alpha=alpha, gamma=gamma, beta=beta, g_max=g_max)


# ============================================================================
# COMPACT LOWER SOLUTION
# ============================================================================

@dataclass(frozen=True)
class LowerSolutionSpec:
    """Compactly supported lower solution max{0, H(e^{ρ(−x + ct + ξ)})}."""
    side: str
    c: float
    eta: float
    epsilon: float
    r: float
    alpha: float
    gamma: float
    beta: float
    rho: float
    delta: float
    A: float
    B: float
    D: float
    mu: float
    nu: float
    z0: float
    h_max: float
    xi: float
    p1: float
    p2: float
    m_delta: float

    kind: ClassVar[str] = "lower"

    @property
    def h(self) -> HProfile:
        return HProfile(
            A=self.A, B=self.B, D=self.D, delta=self.delta,
            mu=self.mu, nu=self.nu, z0=self.z0, h_max=self.h_max,
        )

    @property
    def width(self) -> float:
        """x-width of the support, |ln ν − ln μ| / |ρ|."""
        return abs(math.log(self.nu) - math.log(self.mu)) / abs(self.rho)

    def value(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = self.rho * (-x + self.c * t + self.xi)
        inside = (s > math.log(self.mu)) & (s < math.log(self.nu))
        out = np.zeros_like(x)
        if np.any(inside):
            out[inside] = np.maximum(self.h.value_log(s[inside]), 0.0)
        return out

    def kinks(self, t: float) -> List[float]:
        shift = self.c * t + self.xi
        return sorted([shift - math.log(self.mu) / self.rho, shift - math.log(self.nu) / self.rho])

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        lo, hi = self.kinks(t)
        return lo, hi


# Candidate supports and heights, tried widest and tallest first.
_WIDTH_FRACTIONS = (1.0, 0.75, 0.5)
_HEIGHT_FRACTIONS = (1.0, 0.25, 0.0625, 0.015625)
_SEARCH_POINTS = 401
_RESIDUAL_SLACK = 1e-9


def _shaped_profile(A: float, delta: float, log_ratio: float, height: float) -> HProfile:
    """
    H with leading coefficient A, ln ν − ln μ = log_ratio and peak `height`.

    With w = z^δ, H = B z^{1−δ}(w − t)(qt − w) for q = e^{δ·log_ratio}; the
    unit profile t = 1 fixes the shape and t rescales the height.
    """
    q = math.exp(delta * log_ratio)
    B0 = A / (1.0 + q)
    D0 = A * q / (1.0 + q)
    unit = h_profile(A, B0, D0, delta)
    t = (height / unit.h_max) ** delta
    return h_profile(A, B0 / t, D0 * t, delta)


def _lower_residual_max(model: KppModel, spec: "LowerSolutionSpec") -> float:
    """Largest residual of a lower solution on one widened frame at t = 0."""
    lo, hi = spec.support(0.0)
    width = hi - lo
    xs = np.linspace(lo - 0.25 * width, hi + 0.25 * width, _SEARCH_POINTS)
    return residual_on_frames(model, spec, [(0.0, xs)], workers=1).max_residual


def build_lower_solution(
    model: KppModel,
    c: float,
    side: Side,
    epsilon: float,
    r: float,
    p1: Optional[float] = None,
    xi: Optional[float] = None,
    eta: Optional[float] = None,
) -> LowerSolutionSpec:
    """
    Compact lower solution travelling at speed c.

    A and the exponents come from G_η; B and D are chosen over a small set
    of support widths (at most r/2) and heights (at most p₂) until the
    residual is nonpositive on the support. The profile is a travelling
    wave, so one frame at t = 0 decides the sign for all t.

    Args:
        model: Kernel and reaction
        c: Speed, in (c_r*(η), c_r*) for the right side
        side: "right" or "left"
        epsilon: Speed margin defining η
        r: Half-width; the support is at most r/2 wide
        p1: Floor of the initial datum, caps p₂ (default 1)
        xi: Shift; defaults to the midpoint of its admissible window
        eta: Shared η of a right/left pair; defaults to η(ε) of this side

    Raises:
        RangeError: For bad ε, r, η or a reaction without a positive threshold p₂
        NoRootError, DegenerateRootError: From g_roots
        InfeasibleWidthError: If no candidate support has a nonpositive residual
    """
    side = Side(side)
    if not r > 0:
        raise RangeError(f"r must be positive (got {r})")
    p1 = 1.0 if p1 is None else p1
    if not 0 < p1 <= 1:
        raise RangeError(f"p1 must lie in (0, 1] (got {p1})")

    if eta is None:
        eta = eta_for_epsilon(model, epsilon, side)
    elif not 0 < eta < model.f0:
        raise RangeError(f"η must lie in (0, f'(0)) (got {eta})")
    roots = g_roots(model, eta, c, side)
    rho = 0.5 * (roots.beta + roots.gamma)
    delta = (roots.beta - roots.gamma) / (roots.beta + roots.gamma)

    p2 = model.reaction.kpp_threshold(model.f0 - 0.5 * eta, upper=p1)
    if not p2 > 0:
        raise RangeError(f"f(u) ≥ (f'(0) − η/2)u fails at every sampled u (η={eta:.6g})")

    g_rho = G_eta(model, eta, c, rho)
    m_delta = 0.5 * eta * p2 ** (-delta)
    A = (g_rho / m_delta) ** (1.0 / delta)

    worst = math.inf
    for width_fraction in _WIDTH_FRACTIONS:
        log_ratio = abs(rho) * 0.5 * r * width_fraction
        for height_fraction in _HEIGHT_FRACTIONS:
            height = p2 * height_fraction
            try:
                profile = _shaped_profile(A, delta, log_ratio, height)
            except (OverflowError, ZeroDivisionError, RangeError) as e:
                logger.debug(f"Skipping width {width_fraction}, height {height_fraction}: {e}")
                continue

            shift = xi if xi is not None else 0.5 * (math.log(profile.mu) + math.log(profile.nu)) / rho
            spec = LowerSolutionSpec(
                side=side.value, c=c, eta=eta, epsilon=epsilon, r=r,
                alpha=roots.alpha, gamma=roots.gamma, beta=roots.beta,
                rho=rho, delta=delta, A=A, B=profile.B, D=profile.D,
                mu=profile.mu, nu=profile.nu, z0=profile.z0, h_max=profile.h_max,
                xi=shift, p1=p1, p2=p2, m_delta=m_delta,
            )
            peak = _lower_residual_max(model, spec)
            worst = min(worst, peak / spec.h_max)
            if peak <= _RESIDUAL_SLACK * spec.h_max:
                logger.info(
                    f"Lower solution ({side.value}): c={c:.6g}, η={eta:.6g}, ρ={rho:.6g}, δ={delta:.6g}, "
                    f"H^max={spec.h_max:.3g}, width={spec.width:.4g}, residual max={peak:.3e}"
                )
                return spec
            logger.debug(
                f"Width {spec.width:.4g}, height {spec.h_max:.3g}: residual max {peak:.3e} is positive"
            )

    raise InfeasibleWidthError(
        f"no lower solution with support width ≤ r/2={0.5 * r:.6g} and a nonpositive residual at c={c:.6g} "
        f"(best relative residual {worst:.3e}); increase r or move c towards c*(η)"
    )


def xi_window(spec: LowerSolutionSpec) -> Tuple[float, float]:
    """Shifts keeping the support inside [−r, r] at t = 0."""
    ends = sorted([
        -spec.r + math.log(spec.nu) / spec.rho,
        spec.r + math.log(spec.mu) / spec.rho,
    ])
    return ends[0], ends[1]


def support_radius(right: LowerSolutionSpec, left: LowerSolutionSpec) -> float:
    """2(r₁ + r₂) from the support widths of a right and a left lower solution."""
    return 2.0 * (right.width + left.width)


# ============================================================================
# EXPONENTIAL-DATA LOWER SOLUTION
# ============================================================================

@dataclass(frozen=True)
class ExpLowerSolutionSpec:
    """Lower solution max{0, g(a·e^{λ(−x + ct)})} for data decaying like e^{−λx}."""
    lam: float
    c: float
    delta: float
    L: float
    amplitude: float
    p: float
    power_bound: float
    g_shifted: float

    kind: ClassVar[str] = "exp-lower"

    def value(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = math.log(self.amplitude) + self.lam * (-x + self.c * t)
        out = np.exp(s) * (1.0 - self.L * np.exp(self.delta * s))
        return np.maximum(out, 0.0)

    def kinks(self, t: float) -> List[float]:
        return [self.c * t + (math.log(self.amplitude) + math.log(self.L) / self.delta) / self.lam]

    def support(self, t: float) -> Optional[Tuple[float, float]]:
        return None


def _speed_return_ratio(model: KppModel, lam: float, lam_star: float) -> float:
    """s > 1 with c(λs) = c(λ); c dips below c(λ) until λ* and climbs back after."""
    _, lam_plus = model.kernel.exp_abscissas()
    c_lam = c_of_lambda(model, lam)

    def gap(s: float) -> float:
        try:
            return c_of_lambda(model, lam * s) - c_lam
        except OverflowError:
            return math.inf

    inner = lam_star / lam
    outer = inner
    for _ in range(get_settings().MAX_DOUBLINGS):
        if math.isinf(lam_plus):
            outer = 2.0 * outer
        else:
            outer = outer + 0.5 * (lam_plus / lam - outer)
        if gap(outer) > 0:
            break
        inner = outer
    else:
        raise BracketNotFoundError("c(λ) does not return to c(λ₀) before the abscissa")

    # overflowed probe: pull it back until c is finite again
    for _ in range(200):
        value = gap(outer)
        if math.isfinite(value):
            break
        middle = 0.5 * (inner + outer)
        if gap(middle) > 0:
            outer = middle
        else:
            inner = middle
    return brent_root(gap, inner, outer).root


def build_exp_lower_solution(
    model: KppModel,
    lam: float,
    amplitude: float = 1.0,
    p: float = 0.1,
    delta: Optional[float] = None,
) -> ExpLowerSolutionSpec:
    """
    Lower solution for initial data bounded below by a·e^{−λx} on the right.

    Args:
        model: Kernel and reaction
        lam: Decay rate in (0, λ_r*)
        amplitude: Coefficient a of the exponential
        p: Height cap; the profile never exceeds p
        delta: Exponent spread; defaults to min(1/2, δ_λ/2) with c(λ(1 + δ_λ)) = c(λ)

    Raises:
        RangeError: If λ, a, p or δ is out of range
    """
    speeds = extremal_speeds(model.kernel, model.f0)
    if not 0 < lam < speeds.lambda_right:
        raise RangeError(f"λ must lie in (0, λ_r*={speeds.lambda_right:.6g}) (got {lam})")
    if not amplitude > 0:
        raise RangeError(f"amplitude must be positive (got {amplitude})")
    if not 0 < p <= 1:
        raise RangeError(f"p must lie in (0, 1] (got {p})")

    c = c_of_lambda(model, lam)
    delta_lam = _speed_return_ratio(model, lam, speeds.lambda_right) - 1.0
    if delta is None:
        delta = min(0.5, 0.5 * delta_lam)
    if not 0 < delta < min(1.0, delta_lam):
        raise RangeError(f"δ must lie in (0, {min(1.0, delta_lam):.6g}) (got {delta})")

    g_shifted = G_eta(model, 0.0, c, lam * (1.0 + delta))
    power_bound = model.reaction.power_bound(delta, p) * (1.0 + 1e-9)
    L = max(
        p ** (-delta),
        amplitude ** (-delta) * math.exp(lam * delta),
        power_bound / g_shifted,
    )
    spec = ExpLowerSolutionSpec(
        lam=lam, c=c, delta=delta, L=L, amplitude=amplitude, p=p,
        power_bound=power_bound, g_shifted=g_shifted,
    )
    logger.info(f"Exponential lower solution: λ={lam:.6g}, c(λ)={c:.6g}, δ={delta:.6g}, L={L:.6g}")
    return spec
