"""
Command routing.

Each handler module owns a CommandRouter and registers its command on it;
the application includes every router and dispatches a validated RunConfig
to the matching handler.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List

from loguru import logger

from src.config.run_config import RunConfig
from src.utils.errors import ConfigError


@dataclass
class CommandResult:
    """Files written and headline values of one command."""
    command: str
    outputs: List[Path] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


Handler = Callable[[RunConfig, Path], CommandResult]


class CommandRouter:
    """Collects handlers registered with @router.command(name)."""

    def __init__(self):
        self.handlers: Dict[str, Handler] = {}

    def command(self, name: str) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self.handlers:
                raise ValueError(f"Command {name!r} registered twice")
            self.handlers[name] = handler
            return handler
        return register


class CommandApp:
    """Dispatches run configs to the handlers of the included routers."""

    def __init__(self):
        self._handlers: Dict[str, Handler] = {}

    def include_router(self, router: CommandRouter) -> None:
        for name, handler in router.handlers.items():
            if name in self._handlers:
                raise ValueError(f"Command {name!r} registered twice")
            self._handlers[name] = handler

    @property
    def commands(self) -> List[str]:
        return sorted(self._handlers)

    def dispatch(self, config: RunConfig) -> CommandResult:
        """
        Run the handler for config.command.

        Raises:
            ConfigError: If no handler is registered for the command
        """
        handler = self._handlers.get(config.command)
        if handler is None:
            raise ConfigError(f"command {config.command!r} has no handler")
        output_dir = Path(config.output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        logger.info(f"Running {config.command} into {output_dir}")
        result = handler(config, output_dir)
        logger.info(f"{config.command} finished: {len(result.outputs)} file(s) written")
        return result
