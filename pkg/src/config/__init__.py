"""Configuration module. Run configs live in src.config.run_config."""
from src.config.settings import Settings, get_settings

__all__ = [
    "Settings",
    "get_settings",
]
