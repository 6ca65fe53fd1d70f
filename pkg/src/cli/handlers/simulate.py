"""
simulate command: one grid run, its front trace, fitted speeds and the
comparison with the analytic speeds.
"""
import math
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger

from src.cli.router import CommandResult, CommandRouter
from src.config.run_config import RunConfig
from src.models.model import KppModel
from src.services.analysis.speeds import exp_decay_speed, spreading_speeds
from src.services.simulation.fronts import estimate_speeds, hair_trigger_time
from src.services.simulation.initial import ExponentialData
from src.services.simulation.runner import run
from src.services.simulation.types import SimResult
from src.utils.csv_output import write_csv, write_key_values
from src.utils.errors import PreconditionError

router = CommandRouter()


def _relative_error(fitted: float, exact: Optional[float]) -> Optional[float]:
    if exact is None or exact == 0.0:
        return None
    return abs(fitted - exact) / abs(exact)


def comparison_block(model: KppModel, result: SimResult) -> Dict[str, Any]:
    """Analytic speeds next to the fitted ones, with relative errors."""
    report = spreading_speeds(model)
    block: Dict[str, Any] = {
        "c_left_star": report.c_left,
        "c_right_star": report.c_right,
        "classification": report.classification.value,
    }

    predicted_right = report.c_right
    predicted_left = report.c_left
    initial = result.config.initial
    if isinstance(initial, ExponentialData):
        try:
            predicted_right = exp_decay_speed(model, initial.lam)
            predicted_left = -predicted_right
            block["exp_decay_speed"] = predicted_right
        except PreconditionError as e:
            logger.warning(f"No exponential-data speed law for this kernel: {e}")

    for fit in result.fits:
        exact = predicted_right if fit.side == "right" else predicted_left
        prefix = f"{fit.side}_omega_{fit.omega:g}"
        block[f"{prefix}_fitted"] = fit.speed
        block[f"{prefix}_stderr"] = fit.stderr
        block[f"{prefix}_relative_error"] = _relative_error(fit.speed, exact)

    last = result.probes[-1] if result.probes else None
    block["probe_value_final"] = last.center_value if last else None
    block["probe_ball_min_final"] = last.ball_min if last else None
    block["clamp_count"] = result.clamp_count
    block["dt"] = result.dt
    block["convolution"] = result.method
    return block


@router.command("simulate")
def cmd_simulate(config: RunConfig, output_dir: Path) -> CommandResult:
    model = config.build_model()
    section = config.simulate
    sim_config = section.to_sim_config()
    result = run(model, sim_config, fit=False)

    command = CommandResult(command="simulate")
    command.outputs.append(
        write_csv(output_dir / "trace.csv", ["t", "omega", "x_left", "x_right"], result.trace.rows())
    )
    command.outputs.append(write_csv(
        output_dir / "probes.csv",
        ["t", "u_probe", "ball_min"],
        [(p.time, p.center_value, p.ball_min) for p in result.probes],
    ))
    for t, values in sorted(result.snapshots.items()):
        command.outputs.append(
            write_csv(output_dir / f"snapshot_t{t:g}.csv", ["x", "u"], zip(result.final.x, values))
        )
    if result.symmetry:
        command.outputs.append(write_csv(
            output_dir / "symmetry.csv",
            ["t", "asymmetry", "monotone_violation"],
            [(s.time, s.asymmetry, s.monotone_violation) for s in result.symmetry],
        ))

    if section.fit_speeds:
        result.fits = estimate_speeds(result.trace, sim_config.fit_window_fraction)
        command.outputs.append(write_csv(
            output_dir / "fits.csv",
            ["omega", "side", "speed", "stderr", "intercept", "window_start", "window_end", "samples", "residual"],
            [
                (f.omega, f.side, f.speed, f.stderr, f.intercept, f.window[0], f.window[1], f.samples, f.residual)
                for f in result.fits
            ],
        ))

    block = comparison_block(model, result)
    if section.hair_trigger_omega is not None:
        block["hair_trigger_time"] = hair_trigger_time(result, section.hair_trigger_omega)
    command.outputs.append(write_key_values(output_dir / "comparison.txt", block))

    command.summary = {key: value for key, value in block.items() if not (isinstance(value, float) and math.isnan(value))}
    return command
