"""
Toolkit settings loaded from environment and .env file.

Numerical tolerances live here so that every module reads the same values
and a run can tighten them without touching code.
"""
from pydantic_settings import BaseSettings
from pydantic import Field, field_validator
from functools import lru_cache


class Settings(BaseSettings):
    """Main toolkit settings."""

    # Logging
    LOG_LEVEL: str = Field(default="INFO", description="Minimum level for stderr and file sinks")
    LOG_FILE: str = Field(default="logs/kpp_{time}.log", description="Loguru file sink pattern")
    LOG_ROTATION: str = Field(default="1 day", description="Log file rotation")
    LOG_RETENTION: str = Field(default="7 days", description="Log file retention")

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Accept lowercase level names."""
        return str(v).upper()

    # Quadrature
    QUAD_EPSABS: float = Field(default=1e-12, description="Absolute tolerance of adaptive quadrature")
    QUAD_EPSREL: float = Field(default=1e-10, description="Relative tolerance of adaptive quadrature")
    QUAD_LIMIT: int = Field(default=200, description="Maximum subintervals of adaptive quadrature")

    # Root finding
    ROOT_XTOL: float = Field(default=1e-14, description="Interval tolerance of Brent refinement")
    BISECTION_XTOL: float = Field(default=1e-13, description="Interval width of bisection roots")
    MAX_DOUBLINGS: int = Field(default=1000, description="Bracket expansion budget")

    # Classification and sampling
    CLASSIFY_TOL: float = Field(default=1e-9, description="Equality band for cases ii and iv")
    SYMMETRY_TOL: float = Field(default=1e-12, description="|J(k)| below which a kernel is symmetric")
    DEGENERATE_TOL: float = Field(default=1e-10, description="max G below which roots are a double root")
    REACTION_SAMPLES: int = Field(default=10_000, description="Grid size for sampled reaction checks")
    MONOTONE_SAMPLES: int = Field(default=10_000, description="Grid size for kernel monotonicity checks")
    RENORMALIZATION_LIMIT: float = Field(default=0.2, description="Largest accepted tabulated mass drift")

    # Kernel truncation
    KERNEL_TAIL_MASS: float = Field(default=1e-12, description="Kernel mass allowed outside the grid stencil")
    RESIDUAL_TAIL_MASS: float = Field(default=1e-14, description="Kernel mass dropped by residual quadrature")

    # Simulation
    DIRECT_STENCIL_MAX: int = Field(default=512, description="Largest stencil convolved by direct sum")
    FRONT_MARGIN_HALF_WIDTHS: float = Field(default=10.0, description="Front distance to edge, in kernel half-widths")

    # Certificates
    RESIDUAL_STEP: float = Field(default=1e-6, description="Central difference step for u_t")
    RESIDUAL_WORKERS: int = Field(default=1, description="Threads evaluating residual grid rows")

    # Output
    CSV_DIGITS: int = Field(default=17, description="Significant digits of floats in CSV output")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "KPP_"
        extra = "ignore"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
