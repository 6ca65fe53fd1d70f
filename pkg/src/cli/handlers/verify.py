"""
verify command: replay a certificate file against the configured model.
"""
from pathlib import Path

from loguru import logger

from src.cli.handlers.certify import REPORT_HEADER, raise_on_failures, report_rows
from src.cli.router import CommandResult, CommandRouter
from src.config.run_config import RunConfig
from src.services.certificates.records import load_certificates, reaction_params, specs_of
from src.services.certificates.verification import verify_certificate
from src.utils.csv_output import write_csv

router = CommandRouter()


@router.command("verify")
def cmd_verify(config: RunConfig, output_dir: Path) -> CommandResult:
    model = config.build_model()
    section = config.verify
    bundle = load_certificates(section.certificate)
    if bundle.kernel != model.kernel.to_params():
        logger.warning(f"Certificate kernel {bundle.kernel} differs from the configured kernel")
    if bundle.reaction != reaction_params(model.reaction):
        logger.warning(f"Certificate reaction {bundle.reaction} differs from the configured reaction")

    specs = specs_of(bundle)
    reports = [
        verify_certificate(model, spec, section.tolerance, times=section.times, workers=section.workers)
        for spec in specs
    ]
    result = CommandResult(
        command="verify",
        outputs=[write_csv(output_dir / "verify.csv", REPORT_HEADER, report_rows(specs, reports))],
        summary={"certificates": len(specs), "passed": sum(r.passed for r in reports)},
    )
    raise_on_failures(reports)
    return result
