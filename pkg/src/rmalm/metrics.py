"""Per-iteration metrics, solve traces, and their CSV serialization.

The CSV schema is fixed (`CSV_COLUMNS`, version `SCHEMA_VERSION`): one
row per recorded outer iteration with the iteration index, cumulative
inner-iteration count, objective value, average and maximum constraint
violation, squared distances to a reference primal/dual solution (NaN
when no reference is known), and wall-clock seconds since the solve
started. Values are written with 17 significant digits so a read-write
round trip reproduces every float bit-exactly; reruns with equal seeds
produce byte-identical files except for the wall-time column.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .exceptions import DataError

SCHEMA_VERSION = 1
CSV_COLUMNS = ("k", "cum_inner", "obj", "avg_viol", "max_viol",
               "dist_sq_x", "dist_sq_y", "wall_time_s")


@dataclass(frozen=True)
class MetricsRow:
    """Metrics recorded for one outer iteration."""

    k: int
    cum_inner: int
    obj: float
    avg_viol: float
    max_viol: float
    dist_sq_x: float = math.nan
    dist_sq_y: float = math.nan
    wall_time_s: float = 0.0


@dataclass
class SolveTrace:
    """Full record of one solver run.

    ``rows`` always starts with the initial point (iteration 0). When the
    solver was asked to store iterates, ``xs`` holds the primal iterate
    behind each row. Baseline solvers that also track a running average
    fill ``avg_rows``/``avg_xs`` with the same layout.
    """

    rows: List[MetricsRow] = field(default_factory=list)
    xs: Optional[List[np.ndarray]] = None
    avg_rows: Optional[List[MetricsRow]] = None
    avg_xs: Optional[List[np.ndarray]] = None
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    cum_inner: int = 0


def _fmt(value) -> str:
    return format(float(value), ".17g")


def write_metrics_csv(path, rows):
    """Write metrics rows to ``path`` in the fixed schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                int(row.k), int(row.cum_inner), _fmt(row.obj), _fmt(row.avg_viol),
                _fmt(row.max_viol), _fmt(row.dist_sq_x), _fmt(row.dist_sq_y),
                _fmt(row.wall_time_s),
            ])


def read_metrics_csv(path):
    """Read metrics rows written by `write_metrics_csv`.

    Raises `DataError` when the header does not match the fixed schema.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"metrics file {path} is empty") from None
        if tuple(header) != CSV_COLUMNS:
            raise DataError(
                f"metrics file {path} has columns {header}, expected {list(CSV_COLUMNS)}"
            )
        rows = []
        for line_no, rec in enumerate(reader, start=2):
            if len(rec) != len(CSV_COLUMNS):
                raise DataError(f"metrics file {path}: row {line_no} has {len(rec)} fields")
            try:
                rows.append(MetricsRow(
                    k=int(rec[0]), cum_inner=int(rec[1]), obj=float(rec[2]),
                    avg_viol=float(rec[3]), max_viol=float(rec[4]),
                    dist_sq_x=float(rec[5]), dist_sq_y=float(rec[6]),
                    wall_time_s=float(rec[7]),
                ))
            except ValueError as exc:
                raise DataError(f"metrics file {path}: row {line_no}: {exc}") from None
    return rows


def write_manifest(path, payload: dict):
    """Write the sidecar manifest that makes a metrics file reproducible."""
    payload = dict(payload)
    payload.setdefault("schema_version", SCHEMA_VERSION)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_row(problem, x, k, cum_inner, wall_time_s, objective_fn=None,
             x_ref=None, y_ref=None, y=None):
    """Evaluate one metrics row at the iterate ``x``.

    ``objective_fn`` overrides the exact objective (needed for
    expectation-form problems); distance columns stay NaN without
    reference solutions.
    """
    if objective_fn is None:
        obj = problem.objective(x)
    else:
        obj = float(objective_fn(x))
    avg_v, max_v = problem.violations(x)
    dist_x = math.nan if x_ref is None else float(np.sum((x - x_ref) ** 2))
    dist_y = math.nan
    if y_ref is not None and y is not None:
        dist_y = float(np.sum((y - y_ref) ** 2))
    return MetricsRow(k=k, cum_inner=cum_inner, obj=obj, avg_viol=avg_v,
                      max_viol=max_v, dist_sq_x=dist_x, dist_sq_y=dist_y,
                      wall_time_s=wall_time_s)
