"""
casestudy command: normal and uniform asymmetry sweeps and thresholds.
"""
from pathlib import Path

from src.cli.router import CommandResult, CommandRouter
from src.config.run_config import RunConfig
from src.services.analysis.case_studies import normal_sweep, threshold_sweep, uniform_sweep
from src.utils.csv_output import write_csv

router = CommandRouter()


@router.command("casestudy")
def cmd_casestudy(config: RunConfig, output_dir: Path) -> CommandResult:
    section = config.casestudy
    normal_rows = normal_sweep(section.r_min, section.r_max, section.r_step)
    uniform_rows = uniform_sweep(section.theta_min, section.theta_max, section.theta_count)
    threshold_rows = threshold_sweep(section.f0_values)

    return CommandResult(
        command="casestudy",
        outputs=[
            write_csv(output_dir / "normal_sweep.csv", ["r", "E"], normal_rows),
            write_csv(output_dir / "uniform_sweep.csv", ["theta", "z", "q", "E", "r"], uniform_rows),
            write_csv(
                output_dir / "thresholds.csv",
                ["f0", "r_star_normal", "theta_star", "r_star_uniform"],
                threshold_rows,
            ),
        ],
        summary={
            "normal_rows": len(normal_rows),
            "uniform_rows": len(uniform_rows),
            "threshold_rows": len(threshold_rows),
        },
    )
