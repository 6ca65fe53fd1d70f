"""
Application assembly.
"""
from src.cli.handlers import casestudy, certify, simulate, speeds, verify
from src.cli.router import CommandApp, CommandResult
from src.config.run_config import RunConfig


def create_app() -> CommandApp:
    """Create the application with every command router included."""
    app = CommandApp()
    app.include_router(speeds.router)
    app.include_router(casestudy.router)
    app.include_router(simulate.router)
    app.include_router(certify.router)
    app.include_router(verify.router)
    return app


def run_command(config: RunConfig) -> CommandResult:
    return create_app().dispatch(config)
