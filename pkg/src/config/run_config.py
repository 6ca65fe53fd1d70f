"""
Run configuration files.

A run config is a TOML file with a top-level `command`, the model sections
[kernel] and [reaction], and one section per command:

    command = "speeds"
    output_dir = "output/speeds"

    [kernel]
    family = "uniform"
    b = -1.0
    a = 1.0

    [reaction]
    family = "logistic"
    rate = 1.0

`--set section.key=value` overrides are parsed as TOML values and merged
before validation. Validation failures become ConfigError naming the dotted
field, e.g. `kernel.a`.
"""
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.models.kernel import (
    AsymmetricExponentialKernel,
    Kernel,
    NormalKernel,
    TabulatedKernel,
    UniformKernel,
)
from src.models.model import KppModel
from src.models.reaction import ReactionKPP
from src.services.simulation.initial import (
    BumpData,
    ExponentialData,
    InitialData,
    PlateauData,
    TableData,
)
from src.services.simulation.types import SimConfig
from src.utils.errors import ConfigError

Command = Literal["speeds", "casestudy", "simulate", "certify", "verify"]


class Section(BaseModel):
    """Base of every config section: unknown keys are errors."""
    model_config = ConfigDict(extra="forbid")


def _existing_file(value: Optional[str]) -> Optional[str]:
    if value is not None and not Path(value).is_file():
        raise ValueError(f"file not found: {value}")
    return value


# ============================================================================
# MODEL
# ============================================================================

class KernelSection(Section):
    family: Literal["normal", "uniform", "asymmetric-exponential", "tabulated"]
    mean: float = 0.0
    variance: float = Field(default=1.0, gt=0)
    b: float = Field(default=-1.0, lt=0)
    a: float = Field(default=1.0, gt=0)
    theta_left: float = Field(default=1.0, gt=0)
    theta_right: float = Field(default=1.0, gt=0)
    table: Optional[str] = None

    @field_validator("table")
    @classmethod
    def table_exists(cls, v: Optional[str]) -> Optional[str]:
        return _existing_file(v)

    @model_validator(mode="after")
    def table_for_tabulated(self) -> "KernelSection":
        if self.family == "tabulated" and self.table is None:
            raise ValueError("kernel.table is required for the tabulated family")
        return self

    def build(self) -> Kernel:
        if self.family == "normal":
            return NormalKernel(mean=self.mean, variance=self.variance)
        if self.family == "uniform":
            return UniformKernel(b=self.b, a=self.a)
        if self.family == "asymmetric-exponential":
            return AsymmetricExponentialKernel(theta_left=self.theta_left, theta_right=self.theta_right)
        return TabulatedKernel.from_file(self.table)


class ReactionSection(Section):
    family: Literal["logistic", "sine", "generalized-logistic"] = "logistic"
    rate: float = Field(default=1.0, gt=0)
    exponent: float = Field(default=1.0, gt=0)

    def build(self) -> ReactionKPP:
        if self.family == "sine":
            return ReactionKPP.sine(self.rate)
        if self.family == "generalized-logistic":
            return ReactionKPP.generalized_logistic(self.rate, self.exponent)
        return ReactionKPP.logistic(self.rate)


class ModelSection(Section):
    kernel: KernelSection
    reaction: ReactionSection = Field(default_factory=ReactionSection)

    def build_model(self) -> KppModel:
        """
        Raises:
            InvalidModelError: If the parameters violate the model hypotheses
        """
        return KppModel(kernel=self.kernel.build(), reaction=self.reaction.build()).require_valid()


# ============================================================================
# COMMAND SECTIONS
# ============================================================================

class SpeedsSection(Section):
    classify_tol: Optional[float] = Field(default=None, gt=0)
    odd_moment_order: int = Field(default=3, ge=1)
    c_table: List[float] = Field(default_factory=list)       # λ values tabulated as c(λ)
    exp_decay_rates: List[float] = Field(default_factory=list)

    @field_validator("odd_moment_order")
    @classmethod
    def odd(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("must be odd")
        return v


class CaseStudySection(Section):
    r_min: float = -2.0
    r_max: float = 2.0
    r_step: float = Field(default=0.1, gt=0)
    theta_min: float = Field(default=0.25, gt=0)
    theta_max: float = Field(default=4.0, gt=0)
    theta_count: int = Field(default=50, ge=2)
    f0_values: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])

    @field_validator("f0_values")
    @classmethod
    def positive_rates(cls, v: List[float]) -> List[float]:
        if any(f0 <= 0 for f0 in v):
            raise ValueError("every f'(0) must be positive")
        return v


class InitialSection(Section):
    kind: Literal["bump", "exponential", "plateau", "table"] = "bump"
    center: float = 0.0
    half_width: float = Field(default=1.0, gt=0)
    height: float = Field(default=1.0, gt=0, le=1)
    lam: Optional[float] = Field(default=None, gt=0)
    amplitude: float = Field(default=1.0, gt=0)
    level: Optional[float] = Field(default=None, gt=0, le=1)
    table: Optional[str] = None

    @field_validator("table")
    @classmethod
    def table_exists(cls, v: Optional[str]) -> Optional[str]:
        return _existing_file(v)

    @model_validator(mode="after")
    def required_parameters(self) -> "InitialSection":
        needed = {"exponential": "lam", "plateau": "level", "table": "table"}.get(self.kind)
        if needed and getattr(self, needed) is None:
            raise ValueError(f"simulate.initial.{needed} is required for kind={self.kind!r}")
        return self

    def build(self) -> InitialData:
        if self.kind == "exponential":
            return ExponentialData(lam=self.lam, amplitude=self.amplitude, center=self.center)
        if self.kind == "plateau":
            return PlateauData(level=self.level)
        if self.kind == "table":
            return TableData.from_file(self.table)
        return BumpData(center=self.center, half_width=self.half_width, height=self.height)


class SimulateSection(Section):
    domain: Tuple[float, float] = (-300.0, 300.0)
    dx: float = Field(default=0.1, gt=0)
    dt: Optional[float] = Field(default=None, gt=0)
    t_final: float = Field(default=120.0, gt=0)
    omegas: List[float] = Field(default_factory=lambda: [0.5], min_length=1)
    output_every: float = Field(default=1.0, gt=0)
    snapshot_times: List[float] = Field(default_factory=list)
    probe_x: float = 0.0
    probe_radius: float = Field(default=1.0, ge=0)
    symmetry_center: Optional[float] = None
    check_boundary: bool = True
    fit_window_fraction: float = Field(default=0.5, gt=0, le=1)
    method: Literal["auto", "direct", "fft"] = "auto"
    hair_trigger_omega: Optional[float] = Field(default=None, gt=0, lt=1)
    fit_speeds: bool = True
    initial: InitialSection = Field(default_factory=InitialSection)

    @field_validator("omegas")
    @classmethod
    def thresholds_inside(cls, v: List[float]) -> List[float]:
        if any(not 0 < omega < 1 for omega in v):
            raise ValueError("every ω must lie in (0, 1)")
        return v

    @field_validator("domain")
    @classmethod
    def ordered(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if not v[0] < v[1]:
            raise ValueError("must satisfy x_min < x_max")
        return v

    def to_sim_config(self) -> SimConfig:
        return SimConfig(
            x_min=self.domain[0],
            x_max=self.domain[1],
            dx=self.dx,
            t_final=self.t_final,
            initial=self.initial.build(),
            dt=self.dt,
            omegas=tuple(self.omegas),
            output_every=self.output_every,
            snapshot_times=tuple(self.snapshot_times),
            probe_x=self.probe_x,
            probe_radius=self.probe_radius,
            symmetry_center=self.symmetry_center,
            check_boundary=self.check_boundary,
            fit_window_fraction=self.fit_window_fraction,
            method=self.method,
        )


class CertifySection(Section):
    epsilon: float = Field(default=0.1, gt=0)
    r: float = Field(default=120.0, gt=0)
    p1: float = Field(default=1.0, gt=0, le=1)
    sides: List[Literal["right", "left"]] = Field(default_factory=lambda: ["right", "left"])
    speed_fraction: float = Field(default=0.1, gt=0, lt=1)  # c between c*(η) and c*
    upper_gamma: Optional[float] = Field(default=1.0, gt=0)
    exp_lambdas: List[float] = Field(default_factory=list)
    exp_amplitude: float = Field(default=1.0, gt=0)
    exp_p: float = Field(default=0.1, gt=0, le=1)
    exp_upper: bool = False
    schedule_kappas: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    schedule_tau: float = Field(default=1.0, gt=0)
    tolerance: float = Field(default=1e-6, gt=0)
    times: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0], min_length=1)
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("schedule_kappas")
    @classmethod
    def fractions(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= kappa <= 1.0 for kappa in v):
            raise ValueError("every κ must lie in [0, 1]")
        return v


class VerifySection(Section):
    certificate: Optional[str] = None
    tolerance: float = Field(default=1e-6, gt=0)
    times: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0], min_length=1)
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("certificate")
    @classmethod
    def certificate_exists(cls, v: Optional[str]) -> Optional[str]:
        return _existing_file(v)


class RunConfig(ModelSection):
    """One command with its model and parameters."""
    command: Command
    output_dir: str = "output"
    speeds: SpeedsSection = Field(default_factory=SpeedsSection)
    casestudy: CaseStudySection = Field(default_factory=CaseStudySection)
    simulate: SimulateSection = Field(default_factory=SimulateSection)
    certify: CertifySection = Field(default_factory=CertifySection)
    verify: VerifySection = Field(default_factory=VerifySection)

    @model_validator(mode="after")
    def certificate_for_verify(self) -> "RunConfig":
        if self.command == "verify" and self.verify.certificate is None:
            raise ValueError("verify.certificate is required for command 'verify'")
        return self


# ============================================================================
# LOADING
# ============================================================================

def parse_override(item: str) -> Tuple[List[str], Any]:
    """
    Split `a.b.c=value` into a key path and a TOML-parsed value.

    Values that are not valid TOML are kept as raw strings.

    Raises:
        ConfigError: If the item has no `=` or an empty key
    """
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"--set expects section.key=value (got {item!r})")
    try:
        value = tomllib.loads(f"value = {raw.strip()}")["value"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key.split("."), value


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    for item in overrides:
        path, value = parse_override(item)
        node = data
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"--set {item!r}: {part} is not a section")
            node = child
        node[path[-1]] = value
        logger.debug(f"Override {'.'.join(path)} = {value!r}")
    return data


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        field = ".".join(str(p) for p in item["loc"])
        parts.append(f"{field}: {item['msg']}" if field else item["msg"])
    return "; ".join(parts)


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    Raises:
        ConfigError: Naming the first offending dotted field
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid config: {_describe(e)}") from e


def load_run_config(path: Union[str, Path], overrides: Sequence[str] = ()) -> RunConfig:
    """
    Read, override and validate a TOML run config.

    Raises:
        ConfigError: If the file is missing, not TOML or fails validation
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path} is not valid TOML: {e}") from e
    config = parse_run_config(apply_overrides(data, overrides))
    logger.info(f"Loaded {config.command} config from {path}")
    return config
