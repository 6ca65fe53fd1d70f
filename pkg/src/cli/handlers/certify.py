"""
certify command: build lower and upper solutions, save them and replay
their residuals.
"""
from pathlib import Path
from typing import List, Sequence

from loguru import logger

from src.cli.router import CommandResult, CommandRouter
from src.config.run_config import RunConfig
from src.services.analysis.speeds import extremal_speeds
from src.services.certificates.lower import (
    LowerSolutionSpec,
    Side,
    build_exp_lower_solution,
    build_lower_solution,
    eta_for_epsilon,
    shifted_speed,
    support_radius,
)
from src.services.certificates.records import CertificateSpec, reaction_params, save_certificates
from src.services.certificates.schedule import forward_backward_schedule
from src.services.certificates.upper import build_exp_upper_solution, build_upper_solution
from src.services.certificates.verification import VerificationReport, verify_certificate
from src.utils.csv_output import write_csv
from src.utils.errors import VerificationError

router = CommandRouter()

REPORT_HEADER = [
    "index", "kind", "side", "passed", "max_residual", "min_residual",
    "argmax_t", "argmax_x", "argmin_t", "argmin_x", "evaluated", "excluded", "violations",
]


def report_rows(specs: Sequence[CertificateSpec], reports: Sequence[VerificationReport]):
    for index, (spec, report) in enumerate(zip(specs, reports)):
        residual = report.residual
        yield (
            index,
            spec.kind,
            getattr(spec, "side", None),
            report.passed,
            residual.max_residual,
            residual.min_residual,
            residual.argmax[0],
            residual.argmax[1],
            residual.argmin[0],
            residual.argmin[1],
            residual.evaluated,
            residual.excluded,
            " | ".join(report.violations),
        )


def raise_on_failures(reports: Sequence[VerificationReport]) -> None:
    failed = [i for i, report in enumerate(reports) if not report.passed]
    if failed:
        raise VerificationError(f"{len(failed)} of {len(reports)} certificate(s) failed: indices {failed}")


SCHEDULE_HEADER = ["kappa", "switch_time", "terminal_position", "xi2"]


def schedule_rows(right: LowerSolutionSpec, left: LowerSolutionSpec, kappas: Sequence[float], tau: float):
    """Right-moving phase first, then the slower left-side solution anchored at its peak."""
    for kappa in kappas:
        schedule = forward_backward_schedule(right.c, left.c, kappa, tau, rho2=left.rho, z2=left.z0)
        yield kappa, schedule.switch_time, schedule.terminal_position, schedule.xi2


@router.command("certify")
def cmd_certify(config: RunConfig, output_dir: Path) -> CommandResult:
    model = config.build_model()
    section = config.certify
    speeds = extremal_speeds(model.kernel, model.f0)

    specs: List[CertificateSpec] = []
    lowers = {}
    sides = [Side(name) for name in section.sides]
    if sides:
        # one η for both sides so the pair shares its shifted reaction
        eta = min(eta_for_epsilon(model, section.epsilon, side) for side in sides)
        logger.info(f"Shared η={eta:.6g} for sides {[side.value for side in sides]}")
    for side in sides:
        slow = shifted_speed(model, eta, side)
        star = speeds.c_right if side == Side.RIGHT else speeds.c_left
        c = slow + section.speed_fraction * (star - slow)
        lowers[side] = build_lower_solution(model, c, side, section.epsilon, section.r, p1=section.p1, eta=eta)
        specs.append(lowers[side])
    if section.upper_gamma is not None:
        specs.append(build_upper_solution(model, section.upper_gamma))
    for lam in section.exp_lambdas:
        specs.append(build_exp_lower_solution(model, lam, section.exp_amplitude, section.exp_p))
        if section.exp_upper:
            specs.append(build_exp_upper_solution(model, lam, section.exp_amplitude))

    result = CommandResult(command="certify")
    result.outputs.append(save_certificates(
        output_dir / "certificates.json",
        model.kernel.to_params(),
        reaction_params(model.reaction),
        specs,
    ))

    reports = [
        verify_certificate(model, spec, section.tolerance, times=section.times, workers=section.workers)
        for spec in specs
    ]
    result.outputs.append(write_csv(output_dir / "residuals.csv", REPORT_HEADER, report_rows(specs, reports)))

    result.summary = {"certificates": len(specs), "passed": sum(r.passed for r in reports)}
    if Side.RIGHT in lowers and Side.LEFT in lowers:
        result.summary["support_radius"] = support_radius(lowers[Side.RIGHT], lowers[Side.LEFT])
        logger.info(f"Support radius 2(r₁ + r₂) = {result.summary['support_radius']:.6g}")
        result.outputs.append(write_csv(
            output_dir / "schedule.csv",
            SCHEDULE_HEADER,
            schedule_rows(lowers[Side.RIGHT], lowers[Side.LEFT], section.schedule_kappas, section.schedule_tau),
        ))
    raise_on_failures(reports)
    return result
