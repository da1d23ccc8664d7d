"""CSV writers for trajectories and cycle tables."""

from __future__ import annotations

import csv
import io
from typing import Iterable

from .integrator import Trajectory
from .returnmap import CrossingLimitCycle

TRAJECTORY_COLUMNS = ("t", "x", "y", "zone")
CYCLE_COLUMNS = ("u_star", "period", "residual", "stability", "amplitude")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for t, x, y, z in traj.rows():
        w.writerow((_fmt(t), _fmt(x), _fmt(y), z))
    return buf.getvalue()


def cycles_csv(cycles: Iterable[CrossingLimitCycle]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CYCLE_COLUMNS)
    for c in cycles:
        w.writerow((_fmt(c.u_star), _fmt(c.period), _fmt(c.residual), c.stability, _fmt(c.amplitude)))
    return buf.getvalue()


def read_csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
