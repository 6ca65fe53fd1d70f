"""
speeds command: spreading speeds, asymmetry and sign case of one model.
"""
from pathlib import Path

from loguru import logger

from src.cli.router import CommandResult, CommandRouter
from src.config.run_config import RunConfig
from src.services.analysis.speeds import (
    c_of_lambda,
    c_prime,
    exp_decay_speed,
    odd_moment_asymmetry,
    spreading_speeds,
)
from src.utils.csv_output import write_csv, write_key_values

router = CommandRouter()


@router.command("speeds")
def cmd_speeds(config: RunConfig, output_dir: Path) -> CommandResult:
    """Write speeds.txt and speeds.csv, plus c(λ) and exponential-data tables when requested."""
    model = config.build_model()
    section = config.speeds
    report = spreading_speeds(model, section.classify_tol)

    values = {"kernel": model.kernel.family.value, "reaction": model.reaction.name}
    values.update(report.as_dict())
    values[f"odd_moment_{section.odd_moment_order}"] = odd_moment_asymmetry(model.kernel, section.odd_moment_order)
    values["sign_pattern_matches"] = report.sign_pattern_matches()

    result = CommandResult(command="speeds")
    result.outputs.append(write_key_values(output_dir / "speeds.txt", values))
    result.outputs.append(write_csv(output_dir / "speeds.csv", list(values), [list(values.values())]))

    if section.c_table:
        rows = [(lam, c_of_lambda(model, lam), c_prime(model, lam)) for lam in section.c_table]
        result.outputs.append(write_csv(output_dir / "c_lambda.csv", ["lambda", "c", "c_prime"], rows))
    if section.exp_decay_rates:
        rows = [(lam, exp_decay_speed(model, lam)) for lam in section.exp_decay_rates]
        result.outputs.append(write_csv(output_dir / "exp_decay.csv", ["lambda", "speed"], rows))

    if not report.sign_pattern_matches():
        logger.warning(f"Speed signs ({report.c_left:.3g}, {report.c_right:.3g}) differ from case {report.classification.value}")
    result.summary = {
        "c_left": report.c_left,
        "c_right": report.c_right,
        "asymmetry": report.asymmetry,
        "classification": report.classification.value,
    }
    return result
