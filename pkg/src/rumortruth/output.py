"""CSV emission/ingestion for trajectory data.

Two schemas, both with 9 significant digits:
  per-node:   t,node,U,R,Q,T      (one row per time point and node)
  aggregate:  t,R_frac,T_frac     (one row per time point)
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import ParameterError


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def write_marginal_csv(path, tgrid, U, R, Q, T) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "node", "U", "R", "Q", "T"])
        for ti, t in enumerate(tgrid):
            for i in range(U.shape[1]):
                w.writerow([_fmt(t), i, _fmt(U[ti, i]), _fmt(R[ti, i]),
                            _fmt(Q[ti, i]), _fmt(T[ti, i])])


def write_aggregate_csv(path, tgrid, rfrac, tfrac) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "R_frac", "T_frac"])
        for ti, t in enumerate(tgrid):
            w.writerow([_fmt(t), _fmt(rfrac[ti]), _fmt(tfrac[ti])])


def read_aggregate_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"trajectory file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "R_frac", "T_frac"]:
        raise ParameterError(f"bad aggregate CSV header in {path}: {rows[:1]}")
    data = np.asarray(rows[1:], dtype=float)
    if data.size == 0:
        raise ParameterError(f"no data rows in {path}")
    return data[:, 0], data[:, 1], data[:, 2]
