"""Kernels, reactions and the model they define."""
from src.models.kernel import (
    AsymmetricExponentialKernel,
    Hypothesis,
    Kernel,
    KernelFamily,
    NormalKernel,
    TabulatedKernel,
    UniformKernel,
    ValidationResult,
    Violation,
    exp_abscissas,
    kernel_density,
    kernel_from_params,
    mgf,
    mgf_prime,
    reflect,
    validate_kernel,
)
from src.models.reaction import ReactionFamily, ReactionKPP, validate_reaction
from src.models.model import KppModel

__all__ = [
    "AsymmetricExponentialKernel",
    "Hypothesis",
    "Kernel",
    "KernelFamily",
    "NormalKernel",
    "TabulatedKernel",
    "UniformKernel",
    "ValidationResult",
    "Violation",
    "exp_abscissas",
    "kernel_density",
    "kernel_from_params",
    "mgf",
    "mgf_prime",
    "reflect",
    "validate_kernel",
    "ReactionFamily",
    "ReactionKPP",
    "validate_reaction",
    "KppModel",
]
