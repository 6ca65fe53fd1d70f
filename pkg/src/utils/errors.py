"""
Exception hierarchy.

Every error carries the process exit code used by the entry point:
2 for configuration problems, 3 for numerical failures, 4 for failed
verification.
"""


class KppError(Exception):
    """Base class for all toolkit errors."""
    exit_code: int = 1


# ============================================================================
# CONFIGURATION
# ============================================================================

class ConfigError(KppError):
    """Raised when a run config is malformed or references missing files."""
    exit_code = 2


class InvalidModelError(ConfigError):
    """Raised when kernel or reaction parameters cannot define a model."""
    pass


# ============================================================================
# NUMERICS
# ============================================================================

class NumericalError(KppError):
    """Base class for failures inside a numerical procedure."""
    exit_code = 3


class DomainError(NumericalError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class QuadratureError(NumericalError):
    """Raised when adaptive quadrature does not reach its tolerance."""
    pass


class BracketNotFoundError(NumericalError):
    """Raised when bracket expansion exhausts its doubling budget."""
    pass


class PreconditionError(NumericalError):
    """Raised when a hypothesis required by an operation does not hold."""
    pass


class RangeError(NumericalError):
    """Raised when a parameter is outside the range an operation supports."""
    pass


class NoRootError(NumericalError):
    """Raised when a speed lies outside the band where G has two zeros."""
    pass


class DegenerateRootError(NumericalError):
    """Raised when the two zeros of G coincide."""
    pass


class HeightUnreachableError(NumericalError):
    """Raised when no B produces the requested height of H."""
    pass


class InfeasibleWidthError(NumericalError):
    """Raised when no B satisfies both the height and the width constraint."""
    pass


class TruncationError(NumericalError):
    """Raised when a kernel or an initial datum does not fit the grid."""
    pass


class BlowUpError(NumericalError):
    """Raised when the time integrator leaves [0, 1] beyond roundoff."""
    pass


class InsufficientDataError(NumericalError):
    """Raised when a speed fit has too few samples."""
    pass


class FrontNearBoundaryError(NumericalError):
    """Raised when a tracked front comes too close to the domain edge."""
    pass


# ============================================================================
# VERIFICATION
# ============================================================================

class VerificationError(KppError):
    """Raised when a certificate fails its residual or structural checks."""
    exit_code = 4
