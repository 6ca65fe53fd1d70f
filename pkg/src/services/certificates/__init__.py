"""Lower and upper solutions, their residuals and certificate files."""
from src.services.certificates.auxiliary import HProfile, h_profile, solve_B_for_height
from src.services.certificates.lower import (
    ExpLowerSolutionSpec,
    GRoots,
    LowerSolutionSpec,
    Side,
    build_exp_lower_solution,
    build_lower_solution,
    eta_for_epsilon,
    g_roots,
    support_radius,
    xi_window,
)
from src.services.certificates.profiles import ConstantProfile, Profile
from src.services.certificates.records import (
    CertificateFile,
    CertificateSpec,
    load_certificates,
    save_certificates,
    specs_of,
)
from src.services.certificates.residual import ResidualReport, residual, residual_at, standard_frames
from src.services.certificates.schedule import Schedule, forward_backward_schedule
from src.services.certificates.upper import (
    ExpUpperSolutionSpec,
    UpperSolutionSpec,
    build_exp_upper_solution,
    build_upper_solution,
    dominates,
)
from src.services.certificates.verification import VerificationReport, verify_certificate

__all__ = [
    "HProfile",
    "h_profile",
    "solve_B_for_height",
    "ExpLowerSolutionSpec",
    "GRoots",
    "LowerSolutionSpec",
    "Side",
    "build_exp_lower_solution",
    "build_lower_solution",
    "eta_for_epsilon",
    "g_roots",
    "support_radius",
    "xi_window",
    "ConstantProfile",
    "Profile",
    "CertificateFile",
    "CertificateSpec",
    "load_certificates",
    "save_certificates",
    "specs_of",
    "ResidualReport",
    "residual",
    "residual_at",
    "standard_frames",
    "Schedule",
    "forward_backward_schedule",
    "ExpUpperSolutionSpec",
    "UpperSolutionSpec",
    "build_exp_upper_solution",
    "build_upper_solution",
    "dominates",
    "VerificationReport",
    "verify_certificate",
]
