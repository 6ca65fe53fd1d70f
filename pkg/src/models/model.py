"""
Kernel and reaction pair defining u_t = k∗u − u + f(u).
"""
from dataclasses import dataclass

from src.models.kernel import Kernel, ValidationResult
from src.models.reaction import ReactionKPP
from src.utils.errors import InvalidModelError


@dataclass(frozen=True)
class KppModel:
    """Nonlocal dispersal Fisher-KPP model."""
    kernel: Kernel
    reaction: ReactionKPP

    @property
    def f0(self) -> float:
        return self.reaction.f0

    def validate(self) -> ValidationResult:
        """Kernel and reaction violations together."""
        kernel_result = self.kernel.validate()
        reaction_result = self.reaction.validate()
        return ValidationResult(
            violations=kernel_result.violations + reaction_result.violations,
            correction=kernel_result.correction,
        )

    def require_valid(self) -> "KppModel":
        """
        Raises:
            InvalidModelError: Listing every violated hypothesis
        """
        result = self.validate()
        if not result.ok:
            raise InvalidModelError("; ".join(result.messages()))
        return self
