"""
Certificate files.

A certificate file is JSON holding the model parameters and a list of
certificate records, one per lower or upper solution. Records carry every
field of the corresponding spec dataclass, so a file replays exactly.
"""
from dataclasses import asdict
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError
from loguru import logger

from src.services.certificates.lower import ExpLowerSolutionSpec, LowerSolutionSpec
from src.services.certificates.upper import ExpUpperSolutionSpec, UpperSolutionSpec
from src.utils.errors import ConfigError

CertificateSpec = Union[LowerSolutionSpec, UpperSolutionSpec, ExpLowerSolutionSpec, ExpUpperSolutionSpec]


class LowerRecord(BaseModel):
    kind: Literal["lower"] = "lower"
    side: Literal["right", "left"]
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


class UpperRecord(BaseModel):
    kind: Literal["upper"] = "upper"
    gamma: float
    gamma0: float
    lambda_left: float
    lambda_right: float
    c_left: float
    c_right: float


class ExpLowerRecord(BaseModel):
    kind: Literal["exp-lower"] = "exp-lower"
    lam: float
    c: float
    delta: float
    L: float
    amplitude: float
    p: float
    power_bound: float
    g_shifted: float


class ExpUpperRecord(BaseModel):
    kind: Literal["exp-upper"] = "exp-upper"
    lam: float
    c: float
    gamma: float
    gamma0: float


CertificateRecord = Annotated[
    Union[LowerRecord, UpperRecord, ExpLowerRecord, ExpUpperRecord],
    Field(discriminator="kind"),
]

_SPEC_TYPES = {
    "lower": LowerSolutionSpec,
    "upper": UpperSolutionSpec,
    "exp-lower": ExpLowerSolutionSpec,
    "exp-upper": ExpUpperSolutionSpec,
}

_RECORD_TYPES = {
    "lower": LowerRecord,
    "upper": UpperRecord,
    "exp-lower": ExpLowerRecord,
    "exp-upper": ExpUpperRecord,
}


class CertificateFile(BaseModel):
    """Model parameters plus certificate records."""
    version: int = 1
    kernel: Dict[str, Any]
    reaction: Dict[str, Any]
    certificates: List[CertificateRecord] = Field(default_factory=list)


def to_record(spec: CertificateSpec) -> BaseModel:
    return _RECORD_TYPES[spec.kind](**asdict(spec))


def to_spec(record: BaseModel) -> CertificateSpec:
    data = record.model_dump()
    kind = data.pop("kind")
    return _SPEC_TYPES[kind](**data)


def save_certificates(
    path: Union[str, Path],
    kernel_params: Dict[str, Any],
    reaction_params: Dict[str, Any],
    specs: List[CertificateSpec],
) -> Path:
    """Write a certificate file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bundle = CertificateFile(
        kernel=kernel_params,
        reaction=reaction_params,
        certificates=[to_record(spec) for spec in specs],
    )
    path.write_text(bundle.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(specs)} certificate(s) to {path}")
    return path


def load_certificates(path: Union[str, Path]) -> CertificateFile:
    """
    Read a certificate file.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"verify.certificate file not found: {path}")
    try:
        return CertificateFile.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ConfigError(f"verify.certificate is malformed: {e}") from e


def specs_of(bundle: CertificateFile) -> List[CertificateSpec]:
    return [to_spec(record) for record in bundle.certificates]


def reaction_params(reaction) -> Dict[str, Optional[float]]:
    """Reaction family and parameters as stored in a certificate file."""
    return {
        "name": reaction.name,
        "f0": reaction.f0,
        "rate": reaction.rate,
        "exponent": reaction.exponent,
    }
