"""Bit-stable CSV output plus the JSON metadata sidecar.

Floats are printed with 17 significant digits so that parsing an emitted
file recovers every value exactly; re-running the same resolved config
yields byte-identical files (no timestamps or environment data are written).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .entanglement import LINEAR_ENTROPY_NORM
from .errors import ValidationError
from .protocols import CoolingResult, EnsembleResult, Trajectory, energy_series

TRAJECTORY_COLUMNS = (
    ["t", "x", "p"]
    + [f"{part}_c{i}" for i in range(1, 5) for part in ("re", "im")]
    + ["concurrence", "e_cl", "e_qm", "e_hyb", "e_pert", "e_total", "constraint"]
)

ENSEMBLE_COLUMNS = (
    ["t", "concurrence", "linear_entropy", "purity"]
    + [f"{part}_rho_{i}{j}" for i in range(1, 5) for j in range(1, 5)
       for part in ("re", "im")]
)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_rows(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _trajectory_rows(traj: Trajectory):
    e = energy_series(traj)
    conc = traj.concurrence_series()
    cons = traj.constraint_series()
    c = traj.c
    cols = [traj.t, traj.x, traj.p]
    for i in range(4):
        cols.append(c[:, i].real)
        cols.append(c[:, i].imag)
    cols += [conc, e.e_cl, e.e_qm, e.e_hyb, e.e_pert, e.e_total, cons]
    return np.column_stack(cols)


def _ensemble_rows(res: EnsembleResult):
    cols = [res.t, res.concurrence, res.linear_entropy, res.purity]
    for i in range(4):
        for j in range(4):
            cols.append(res.rho_bar[:, i, j].real)
            cols.append(res.rho_bar[:, i, j].imag)
    return np.column_stack(cols)


def write_series(result, path, metadata=None):
    """Write a trajectory/ensemble result as CSV with a metadata sidecar.

    ``metadata`` is an arbitrary JSON-serializable mapping (normally the
    resolved config plus the experiment name); it is written next to the CSV
    as ``<path>.meta.json``.
    """
    if isinstance(result, CoolingResult):
        result = result.trajectory
    if isinstance(result, Trajectory):
        if len(result) == 0:
            raise ValidationError("refusing to write an empty trajectory")
        header, rows = TRAJECTORY_COLUMNS, _trajectory_rows(result)
        kind = "trajectory"
    elif isinstance(result, EnsembleResult):
        if len(result.t) == 0:
            raise ValidationError("refusing to write an empty ensemble result")
        header, rows = ENSEMBLE_COLUMNS, _ensemble_rows(result)
        kind = "ensemble"
    else:
        raise ValidationError(f"cannot serialize result of type {type(result)!r}")

    path = Path(path)
    if path.parent and not path.parent.exists():
        raise ValidationError(f"output directory does not exist: {path.parent}")
    _write_rows(path, header, rows)

    meta = {
        "format": kind,
        "columns": header,
        "rows": int(rows.shape[0]),
        "linear_entropy_normalization": LINEAR_ENTROPY_NORM,
    }
    if metadata:
        meta.update(metadata)
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def sidecar_path(csv_path) -> Path:
    return Path(str(csv_path) + ".meta.json")


def read_series(path):
    """Parse a CSV written by write_series into {column: ndarray}."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValidationError(f"empty CSV file: {path}")
    header = lines[0].split(",")
    data = np.array([[float(tok) for tok in line.split(",")] for line in lines[1:]])
    if data.size == 0:
        raise ValidationError(f"CSV file has no data rows: {path}")
    return {name: data[:, k] for k, name in enumerate(header)}
