"""
Deterministic CSV and key-value writers.

Floats are written with CSV_DIGITS significant digits; None and NaN become
empty fields.
"""
import csv
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from loguru import logger

from src.config.settings import get_settings


def format_value(value: Any, digits: Optional[int] = None) -> str:
    """Render one cell."""
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        digits = digits or get_settings().CSV_DIGITS
        return f"{value:.{digits}g}"
    return str(value)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a header row followed by formatted rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} row(s) to {path}")
    return path


def write_key_values(path: Union[str, Path], values: Mapping[str, Any]) -> Path:
    """Write `key = value` lines in mapping order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key} = {format_value(value)}" for key, value in values.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
