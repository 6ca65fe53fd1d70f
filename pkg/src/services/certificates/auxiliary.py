"""
The compactly supported auxiliary H(z) = Az − Bz^{1+δ} − Dz^{1−δ}.

For B in (0, A²/(4D)) the function is positive exactly on (μ, ν) with

    μ, ν = [(A ∓ √(A² − 4BD)) / (2B)]^{1/δ},

and peaks at z₀ with z₀^δ = (A + √(A² − 4BD(1 − δ²))) / (2B(1 + δ)).
The peak height decreases strictly in B and vanishes at B = A²/(4D),
where μ = ν = z₀.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from loguru import logger

from src.config.settings import get_settings
from src.utils.errors import HeightUnreachableError, RangeError


@dataclass(frozen=True)
class HProfile:
    """H with its support roots and peak."""
    A: float
    B: float
    D: float
    delta: float
    mu: float
    nu: float
    z0: float
    h_max: float

    @property
    def log_width(self) -> float:
        """ln ν − ln μ."""
        return math.log(self.nu) - math.log(self.mu)

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return self.A * z - self.B * z ** (1.0 + self.delta) - self.D * z ** (1.0 - self.delta)

    def value_log(self, s):
        """H(e^s), evaluated without forming z^{1±δ} separately."""
        s = np.asarray(s, dtype=float)
        w = np.exp(self.delta * s)
        return np.exp((1.0 - self.delta) * s) * (self.A * w - self.B * w * w - self.D)

    def term_scale(self, z: float) -> float:
        """Sum of the magnitudes of the three terms at z."""
        return self.A * z + self.B * z ** (1.0 + self.delta) + self.D * z ** (1.0 - self.delta)


def degenerate_B(A: float, D: float) -> float:
    """A²/(4D), the B at which the support collapses."""
    return A * A / (4.0 * D)


def h_profile(A: float, B: float, D: float, delta: float) -> HProfile:
    """
    Roots, peak and height of H for given coefficients.

    Raises:
        RangeError: If a coefficient is not positive, δ ∉ (0, 1) or B > A²/(4D)
    """
    if not (A > 0 and B > 0 and D > 0):
        raise RangeError(f"H needs positive coefficients (A={A}, B={B}, D={D})")
    if not 0 < delta < 1:
        raise RangeError(f"δ must lie in (0, 1) (got {delta})")

    disc = A * A - 4.0 * B * D
    if disc < 0:
        if disc > -1e-12 * A * A:
            disc = 0.0
        else:
            raise RangeError(f"B={B:.17g} exceeds A²/(4D)={degenerate_B(A, D):.17g}")
    root = math.sqrt(disc)
    w_low = 2.0 * D / (A + root)
    w_high = (A + root) / (2.0 * B)
    w_peak = (A + math.sqrt(A * A - 4.0 * B * D * (1.0 - delta * delta))) / (2.0 * B * (1.0 + delta))

    z0 = w_peak ** (1.0 / delta)
    h_max = z0 ** (1.0 - delta) * (A * w_peak - B * w_peak * w_peak - D)
    return HProfile(
        A=A, B=B, D=D, delta=delta,
        mu=w_low ** (1.0 / delta),
        nu=w_high ** (1.0 / delta),
        z0=z0,
        h_max=max(h_max, 0.0),
    )


def solve_B_for_height(A: float, D: float, delta: float, p: float, max_halvings: Optional[int] = None) -> HProfile:
    """
    B in (0, A²/(4D)) with peak height H(z₀) = p.

    Raises:
        HeightUnreachableError: If p ≤ 0 or no B below the budget reaches p
    """
    if not p > 0:
        raise HeightUnreachableError(f"target height must be positive (got {p})")
    budget = max_halvings or get_settings().MAX_DOUBLINGS
    b_max = degenerate_B(A, D)

    def excess(B: float) -> float:
        return h_profile(A, B, D, delta).h_max - p

    b_low = 0.5 * b_max
    halvings = 0
    while excess(b_low) < 0:
        halvings += 1
        if halvings > budget or b_low == 0.0:
            raise HeightUnreachableError(
                f"height {p:.6g} not reached for B down to {b_low:.3g} (A={A:.6g}, D={D:.6g}, δ={delta:.6g})"
            )
        b_low *= 0.5

    B = brentq(excess, b_low, b_max, xtol=1e-16 * b_max, rtol=4 * 2.220446049250313e-16, maxiter=500)
    profile = h_profile(A, B, D, delta)
    if abs(profile.h_max - p) > 1e-12 * max(1.0, p):
        logger.warning(f"H^max={profile.h_max:.17g} misses target {p:.17g} by {abs(profile.h_max - p):.3g}")
    return profile
