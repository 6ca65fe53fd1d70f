"""
Main entry point.
Run: python -m src.main CONFIG [--set section.key=value ...] [--output-dir DIR]
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from loguru import logger

from src.cli.app import run_command
from src.config.run_config import load_run_config
from src.config.settings import get_settings
from src.utils.errors import KppError


def configure_logging() -> None:
    """stderr plus a rotating file sink, both at LOG_LEVEL."""
    settings = get_settings()
    logger.remove()
    logger.add(sys.stderr, level=settings.LOG_LEVEL)
    logger.add(
        settings.LOG_FILE,
        rotation=settings.LOG_ROTATION,
        retention=settings.LOG_RETENTION,
        level=settings.LOG_LEVEL,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="Spreading speeds, case studies, simulations and certificates for nonlocal KPP equations.",
    )
    parser.add_argument("config", help="TOML run config")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override one config value (repeatable)",
    )
    parser.add_argument("--output-dir", help="Override output_dir")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; return its exit code."""
    args = build_parser().parse_args(argv)
    configure_logging()

    overrides = list(args.overrides)
    if args.output_dir:
        overrides.append(f"output_dir={args.output_dir!r}")

    try:
        config = load_run_config(args.config, overrides)
        result = run_command(config)
    except KppError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    for path in result.outputs:
        logger.info(f"Output: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
