"""CSV loading with schema checks; missing columns fail by name."""

from __future__ import annotations

from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    pass


def find_input(dirs: list[Path], name: str) -> Path:
    for d in dirs:
        path = Path(d) / name
        if path.is_file():
            return path
    searched = ", ".join(str(d) for d in dirs)
    raise SchemaError(f"required input {name!r} not found in: {searched}")


def load_columns(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    """Read a headed CSV into named float arrays (strings stay strings)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].strip():
        raise SchemaError(f"{path}: empty CSV")
    header = lines[0].split(",")
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows")
    raw = [line.split(",") for line in lines[1:] if line]
    out: dict[str, np.ndarray] = {}
    for col in required:
        i = header.index(col)
        values = [row[i] for row in raw]
        try:
            out[col] = np.array([float(v) if v != "" else np.nan for v in values])
        except ValueError:
            out[col] = np.array(values, dtype=object)
    return out
