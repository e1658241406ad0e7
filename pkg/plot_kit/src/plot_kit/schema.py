"""Readers for the simulator's CSV/JSON file contract.

Trajectory tables carry one row per sampled time; spectrum tables carry one
row per labeled level.  Optional cells (the transmon occupation of a
two-level run, the gap of the last level in a branch) may be empty and read
as NaN.  Any missing or malformed column raises :class:`SchemaError` naming
the offending column.
"""

import csv
import json
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = (
    "t",
    "kappa_t",
    "alpha_re",
    "alpha_im",
    "photon_number",
    "real_quadrature",
    "abs_c_u",
    "transmon_occupation",
    "trace_error",
)
SPECTRUM_COLUMNS = (
    "branch",
    "n",
    "energy",
    "gap_to_next",
    "label_overlap",
    "transmon_occupation",
)

# columns where an empty cell is part of the contract
_OPTIONAL = {"transmon_occupation", "gap_to_next"}


class SchemaError(ValueError):
    """A run file does not match the expected schema."""


def _read_table(path, expected, numeric):
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header {list(expected)}")
    header = rows[0]
    for col in expected:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    extra = set(header) - set(expected)
    if extra:
        raise SchemaError(f"{path}: unexpected column {sorted(extra)[0]!r}")
    idx = {col: header.index(col) for col in expected}
    table = {}
    for col in expected:
        cells = []
        for r, row in enumerate(rows[1:], start=2):
            if len(row) != len(header):
                raise SchemaError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
            cells.append(row[idx[col]])
        if col not in numeric:
            table[col] = np.array(cells, dtype=object)
            continue
        values = np.empty(len(cells))
        for i, cell in enumerate(cells):
            if cell == "" and col in _OPTIONAL:
                values[i] = np.nan
                continue
            try:
                values[i] = float(cell)
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: column {col!r}, row {i + 2}: not a number: {cell!r}"
                ) from exc
        table[col] = values
    return table


def load_trajectory(path) -> dict:
    """Columns of one trajectory.csv as float arrays (NaN for empty cells)."""
    return _read_table(path, TRAJECTORY_COLUMNS, set(TRAJECTORY_COLUMNS))


def load_spectrum(path) -> dict:
    """Columns of one spectrum.csv; 'branch' stays as strings."""
    return _read_table(path, SPECTRUM_COLUMNS, set(SPECTRUM_COLUMNS) - {"branch"})


def load_index(run_dir) -> dict:
    """preset_index.json of a preset run directory."""
    path = Path(run_dir) / "preset_index.json"
    try:
        with open(path) as fh:
            index = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from exc
    if "runs" not in index:
        raise SchemaError(f"{path}: missing column 'runs'")
    return index
