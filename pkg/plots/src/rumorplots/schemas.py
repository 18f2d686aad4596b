"""Readers for the documented CSV schemas, with column-level error messages."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

AGGREGATE_COLUMNS = ("t", "R_frac", "T_frac")
SUMMARY_COLUMNS = ("combo", "s_q1", "s_q2", "verdict", "outcome_linear",
                   "outcome_exact", "deviation")


class SchemaError(ValueError):
    """An input file does not match its documented schema."""


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file")
    return rows[0], rows[1:]


def _check_header(path, header: list[str], expected: tuple[str, ...]) -> None:
    missing = [c for c in expected if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column {missing[0]!r} "
                          f"(header was {header})")
    if list(header) != list(expected):
        raise SchemaError(f"{path}: columns must be {','.join(expected)}, "
                          f"got {','.join(header)}")


def read_aggregate(path) -> dict[str, np.ndarray]:
    """An aggregate trajectory: columns t, R_frac, T_frac."""
    header, rows = _read_rows(path)
    _check_header(path, header, AGGREGATE_COLUMNS)
    if not rows:
        raise SchemaError(f"{path}: no rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})")
    return {name: data[:, k] for k, name in enumerate(AGGREGATE_COLUMNS)}


def read_summary(path) -> dict[str, np.ndarray]:
    """A sweep summary; deviation/outcome_exact may be empty per row."""
    header, rows = _read_rows(path)
    _check_header(path, header, SUMMARY_COLUMNS)
    if not rows:
        raise SchemaError(f"{path}: no rows")
    out = {name: [] for name in SUMMARY_COLUMNS}
    for row in rows:
        if len(row) != len(SUMMARY_COLUMNS):
            raise SchemaError(f"{path}: row has {len(row)} fields, "
                              f"expected {len(SUMMARY_COLUMNS)}")
        for name, value in zip(SUMMARY_COLUMNS, row):
            out[name].append(value)
    try:
        combo = np.array([int(v) for v in out["combo"]])
        s_q1 = np.array([float(v) for v in out["s_q1"]])
        s_q2 = np.array([float(v) for v in out["s_q2"]])
        deviation = np.array([float(v) if v else np.nan
                              for v in out["deviation"]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})")
    return {"combo": combo, "s_q1": s_q1, "s_q2": s_q2,
            "verdict": np.array(out["verdict"]),
            "outcome_linear": np.array(out["outcome_linear"]),
            "outcome_exact": np.array(out["outcome_exact"]),
            "deviation": deviation}
