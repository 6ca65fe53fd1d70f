"""Command handlers."""
from src.cli.handlers import casestudy, certify, simulate, speeds, verify

__all__ = ["casestudy", "certify", "simulate", "speeds", "verify"]
