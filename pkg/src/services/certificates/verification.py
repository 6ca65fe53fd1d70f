"""
Replay checks for certificates.

Each certificate is re-checked against the model it claims to certify:
structural identities first (roots of G, roots and peak of H, height and
width constraints, recorded speeds), then the residual sign on the
standard verification grid.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from loguru import logger

from src.models.model import KppModel
from src.services.analysis.speeds import c_of_lambda, extremal_speeds
from src.services.certificates.auxiliary import degenerate_B, h_profile
from src.services.certificates.lower import G_eta, ExpLowerSolutionSpec, LowerSolutionSpec
from src.services.certificates.records import CertificateSpec
from src.services.certificates.residual import (
    Frame,
    ResidualReport,
    residual_on_frames,
    standard_frames,
)
from src.services.certificates.upper import ExpUpperSolutionSpec, UpperSolutionSpec
from src.utils.errors import KppError


@dataclass
class VerificationReport:
    """Structural violations and residual extremes of one certificate."""
    kind: str
    violations: List[str] = field(default_factory=list)
    residual: Optional[ResidualReport] = None
    tolerance: float = 1e-6

    @property
    def residual_ok(self) -> bool:
        return self.residual is not None and self.residual.holds_for(self.kind, self.tolerance)

    @property
    def passed(self) -> bool:
        return not self.violations and self.residual_ok


def _close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


# ============================================================================
# STRUCTURAL CHECKS
# ============================================================================

def _check_lower(model: KppModel, spec: LowerSolutionSpec) -> List[str]:
    problems: List[str] = []
    if not (spec.A > 0 and spec.B > 0 and spec.D > 0):
        problems.append("coefficients A, B, D must be positive")
        return problems
    if not spec.B < degenerate_B(spec.A, spec.D):
        problems.append(f"B={spec.B:.17g} is not below A²/(4D)={degenerate_B(spec.A, spec.D):.17g}")
    if not 0 < spec.delta < 1:
        problems.append(f"δ={spec.delta} outside (0, 1)")
        return problems

    h = spec.h
    for name, z in (("μ", spec.mu), ("ν", spec.nu)):
        if abs(float(h.value(z))) > 1e-10 * h.term_scale(z):
            problems.append(f"H({name}) = {float(h.value(z)):.3e} is not 0")
    if abs(float(h.value(spec.z0)) - spec.h_max) > 1e-10 * max(1.0, h.term_scale(spec.z0)):
        problems.append(f"H(z₀) = {float(h.value(spec.z0)):.17g} differs from H^max = {spec.h_max:.17g}")
    if not spec.mu < spec.z0 < spec.nu:
        problems.append("peak z₀ is not inside (μ, ν)")
    if spec.B < degenerate_B(spec.A, spec.D):
        fresh = h_profile(spec.A, spec.B, spec.D, spec.delta)
        if not _close(fresh.h_max, spec.h_max, 1e-10):
            problems.append(f"recomputed H^max {fresh.h_max:.17g} differs from recorded {spec.h_max:.17g}")
    if spec.h_max > spec.p2 * (1.0 + 1e-10):
        problems.append(f"H^max={spec.h_max:.6g} exceeds p₂={spec.p2:.6g}")
    if spec.p2 > spec.p1 * (1.0 + 1e-12):
        problems.append(f"p₂={spec.p2:.6g} exceeds p₁={spec.p1:.6g}")
    if spec.width > 0.5 * spec.r * (1.0 + 1e-9):
        problems.append(f"support width {spec.width:.6g} exceeds r/2={0.5 * spec.r:.6g}")

    try:
        for name, lam in (("α", spec.alpha), ("β", spec.beta)):
            value = G_eta(model, spec.eta, spec.c, lam)
            if abs(value) > 1e-8:
                problems.append(f"G_η(c, {name}) = {value:.3e} is not 0 for this model")
        if not G_eta(model, spec.eta, spec.c, spec.gamma) > 0:
            problems.append("G_η(c, γ) is not positive for this model")
    except KppError as e:
        problems.append(f"G_η cannot be evaluated: {e}")

    expected_rho = 0.5 * (spec.beta + spec.gamma)
    if not _close(spec.rho, expected_rho, 1e-12):
        problems.append(f"ρ={spec.rho:.17g} is not (β + γ)/2")
    return problems


def _check_upper(model: KppModel, spec: UpperSolutionSpec) -> List[str]:
    problems: List[str] = []
    if spec.gamma0 < max(1.0, spec.gamma):
        problems.append(f"Γ₀={spec.gamma0:.6g} is below max(1, Γ)={max(1.0, spec.gamma):.6g}")
    speeds = extremal_speeds(model.kernel, model.f0)
    recorded = (spec.lambda_left, spec.lambda_right, spec.c_left, spec.c_right)
    computed = (speeds.lambda_left, speeds.lambda_right, speeds.c_left, speeds.c_right)
    for name, a, b in zip(("λ_l*", "λ_r*", "c_l*", "c_r*"), recorded, computed):
        if not _close(a, b, 1e-8):
            problems.append(f"recorded {name}={a:.17g} differs from model value {b:.17g}")
    return problems


def _check_exp_lower(model: KppModel, spec: ExpLowerSolutionSpec) -> List[str]:
    problems: List[str] = []
    speeds = extremal_speeds(model.kernel, model.f0)
    if not 0 < spec.lam < speeds.lambda_right:
        problems.append(f"λ={spec.lam} outside (0, λ_r*={speeds.lambda_right:.6g})")
        return problems
    if not _close(spec.c, c_of_lambda(model, spec.lam), 1e-10):
        problems.append(f"c={spec.c:.17g} is not c(λ) for this model")
    if not 0 < spec.delta < 1:
        problems.append(f"δ={spec.delta} outside (0, 1)")
        return problems
    g_shifted = G_eta(model, 0.0, spec.c, spec.lam * (1.0 + spec.delta))
    if not g_shifted > 0:
        problems.append("G(c(λ), λ(1 + δ)) is not positive")
        return problems
    required = max(
        spec.p ** (-spec.delta),
        spec.amplitude ** (-spec.delta) * math.exp(spec.lam * spec.delta),
        model.reaction.power_bound(spec.delta, spec.p) / g_shifted,
    )
    if spec.L < required * (1.0 - 1e-12):
        problems.append(f"L={spec.L:.6g} is below the required {required:.6g}")
    return problems


def _check_exp_upper(model: KppModel, spec: ExpUpperSolutionSpec) -> List[str]:
    problems: List[str] = []
    if not model.kernel.is_symmetric():
        problems.append("kernel is not symmetric")
    if spec.gamma0 < max(1.0, spec.gamma):
        problems.append(f"Γ₀={spec.gamma0:.6g} is below max(1, Γ)")
    if not _close(spec.c, c_of_lambda(model, spec.lam), 1e-10):
        problems.append(f"c={spec.c:.17g} is not c(λ) for this model")
    return problems


_CHECKS = {
    "lower": _check_lower,
    "upper": _check_upper,
    "exp-lower": _check_exp_lower,
    "exp-upper": _check_exp_upper,
}


def verify_certificate(
    model: KppModel,
    spec: CertificateSpec,
    tolerance: float = 1e-6,
    frames: Optional[Sequence[Frame]] = None,
    times: Sequence[float] = (0.0, 0.5, 1.0),
    workers: Optional[int] = None,
) -> VerificationReport:
    """
    Structural checks plus residual sign of one certificate.

    Violations are collected in the report, never raised.
    """
    report = VerificationReport(kind=spec.kind, tolerance=tolerance)
    report.violations.extend(_CHECKS[spec.kind](model, spec))
    report.residual = residual_on_frames(
        model, spec, frames or standard_frames(model, spec, times), workers=workers
    )
    if not report.residual_ok:
        bound = report.residual.max_residual if spec.kind.endswith("lower") else report.residual.min_residual
        report.violations.append(f"residual {bound:.3e} has the wrong sign beyond {tolerance:g}")
    level = "info" if report.passed else "warning"
    getattr(logger, level)(
        f"Certificate {spec.kind}: {'passed' if report.passed else 'FAILED'} "
        f"(max={report.residual.max_residual:.3e}, min={report.residual.min_residual:.3e}, "
        f"{len(report.violations)} violation(s))"
    )
    return report
