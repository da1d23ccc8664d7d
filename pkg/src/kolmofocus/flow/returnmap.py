"""Half-return maps on Σ and detection of crossing limit cycles."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..pwfield.fields import PiecewiseKolmogorovSystem, PolyVectorField
from .integrator import (
    Z1,
    Z2,
    FlowOptions,
    NonMonodromicError,
    Trajectory,
    _arrival,
    _run_zone,
    _Zones,
)


class NotCrossingError(ValueError):
    """The requested Σ point is not in the crossing region."""


@dataclass(frozen=True)
class ReturnMapSample:
    """Half-return maps from ``(sigma_x, u)``.

    ``pi1`` is where the forward orbit first meets Σ again and ``pi2inv``
    where the backward orbit does, both as Σ ordinates. ``delta`` is
    ``pi1 - pi2inv``: the radial difference ``Pi_2^{-1}(r) - Pi_1(r)``
    with ``r`` measured from the focus, so near a weak focus it starts with
    ``-V_j (u - 1)**j``. ``t1``/``t2`` are the two passage times.
    """

    u: float
    pi1: float
    pi2inv: float
    delta: float
    t1: float
    t2: float
    forward_zone: str


def _as_two_zone(sys) -> PiecewiseKolmogorovSystem:
    if isinstance(sys, PolyVectorField):
        return PiecewiseKolmogorovSystem(sys, sys)
    return sys


class ReturnMapper:
    """Reusable evaluator of the half-return maps of one system about one focus."""

    def __init__(self, sys, focus=(1.0, 1.0), opts: FlowOptions | None = None):
        self.sys = _as_two_zone(sys)
        self.opts = opts or FlowOptions()
        self.focus = (float(focus[0]), float(focus[1]))
        self.zones = _Zones(self.sys, (float(self.sys.sigma_x), self.focus[1]))

    def _half(self, zone: str, Y: float, direction: int, scale: float):
        zones, opts = self.zones, self.opts
        run = _run_zone(zones, zone, 0.0, np.array([zones.s, Y]), direction * opts.max_time, opts, None, opts.bbox, scale)
        if run.status == "box":
            raise NonMonodromicError(f"non-monodromic at this amplitude: orbit left the box from u={Y + self.zones.origin[1]:.12g}")
        if run.status != "sigma":
            raise NonMonodromicError(f"non-monodromic at this amplitude: no return to Σ within t={opts.max_time}")
        return run.t, run.z[1]

    def sample(self, u: float) -> ReturnMapSample:
        zones = self.zones
        Y = float(u) - zones.origin[1]
        a, b = zones.normal(Z1, Y), zones.normal(Z2, Y)
        if not a * b > 0:
            raise NotCrossingError(f"({zones.sigma}, {u}) is not a crossing point of Σ")
        fwd, bwd = (Z1, Z2) if a < 0 else (Z2, Z1)
        scale = max(abs(Y), 1e-9)
        t1, y1 = self._half(fwd, Y, 1, scale)
        t2, y2 = self._half(bwd, Y, -1, scale)
        oy = zones.origin[1]
        pi1, pi2inv = y1 + oy, y2 + oy
        # radial convention: subtract in shifted coordinates to keep small differences exact
        delta = (y1 - y2) if Y > 0 else (y2 - y1)
        return ReturnMapSample(float(u), pi1, pi2inv, delta, t1, -t2, fwd)

    def delta(self, u: float) -> float:
        return self.sample(u).delta

    def full_return(self, u: float, traj: Trajectory | None = None) -> tuple[float, float]:
        """Ordinate after one full turn from ``(sigma_x, u)`` and the time it took."""
        zones, opts = self.zones, self.opts
        Y = float(u) - zones.origin[1]
        a = zones.normal(Z1, Y)
        zone = Z1 if a < 0 else Z2
        scale = max(abs(Y), 1e-9)
        t = 0.0
        z = np.array([zones.s, Y])
        for _ in range(2):
            run = _run_zone(zones, zone, t, z, t + opts.max_time, opts, traj, opts.bbox, scale)
            if run.status != "sigma":
                raise NonMonodromicError("orbit did not return to Σ")
            t, z = run.t, np.array([zones.s, run.z[1]])
            if _arrival(zones, zone, z[1]) != "crossing":
                raise NonMonodromicError("orbit met Σ outside the crossing region")
            zone = Z2 if zone == Z1 else Z1
        return z[1] + zones.origin[1], t


def half_return_maps(sys, u: float, opts: FlowOptions | None = None, focus=(1.0, 1.0)) -> ReturnMapSample:
    """Forward half map through the zone entered first and backward map through the other."""
    return ReturnMapper(sys, focus, opts).sample(u)


@dataclass(frozen=True)
class CrossingLimitCycle:
    u_star: float
    period: float
    residual: float
    stability: str
    amplitude: float
    closure: float


def _safe_delta(mapper: ReturnMapper, u: float) -> float | None:
    try:
        return mapper.delta(u)
    except (NotCrossingError, NonMonodromicError):
        return None


def default_u_grid(focus_y: float = 1.0, r_min: float = 1e-6, r_max: float = 0.2, grid_n: int = 60) -> np.ndarray:
    """Log-spaced Σ ordinates above the focus; nested small cycles live on many scales."""
    return focus_y + np.geomspace(r_min, r_max, grid_n)


def find_crossing_cycles(
    sys,
    u_range: tuple[float, float] | None = None,
    grid_n: int = 60,
    opts: FlowOptions | None = None,
    focus=(1.0, 1.0),
    grid: np.ndarray | None = None,
    workers: int = 1,
    noise_floor: float = 100.0,
) -> list[CrossingLimitCycle]:
    """Sign changes of ``delta`` on a grid above the focus, refined by Brent's method.

    ``u_range`` bounds the grid (log spacing in ``u - focus_y``); a custom
    grid may be given instead. Samples that are not crossing points or
    that fail to return are skipped, and a bracket is only formed by two
    consecutive valid samples. Values below ``noise_floor * int_tol * (u - focus_y)``
    count as zero and cannot open a bracket.
    """
    mapper = ReturnMapper(sys, focus, opts)
    fy = mapper.focus[1]
    if grid is None:
        lo, hi = u_range if u_range is not None else (fy + 1e-6, fy + 0.2)
        grid = default_u_grid(fy, lo - fy, hi - fy, grid_n)
    grid = np.sort(np.asarray(grid, dtype=float))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            values = list(ex.map(lambda u: _safe_delta(mapper, u), grid))
    else:
        values = [_safe_delta(mapper, u) for u in grid]
    cycles: list[CrossingLimitCycle] = []
    prev = None
    for u, d in zip(grid, values):
        if d is None:
            prev = None
            continue
        if abs(d) <= noise_floor * mapper.opts.int_tol * abs(u - fy):
            # indistinguishable from integration error: neither sign
            continue
        if prev is not None and prev[1] * d < 0:
            cyc = _refine(mapper, prev[0], u, prev[1], d)
            if cyc is not None and all(abs(cyc.u_star - c.u_star) > 1e-12 * max(1.0, abs(c.u_star)) for c in cycles):
                cycles.append(cyc)
        prev = (u, d)
    return sorted(cycles, key=lambda c: c.u_star)


def _refine(mapper: ReturnMapper, a: float, b: float, da: float, db: float) -> CrossingLimitCycle | None:
    try:
        u_star = brentq(mapper.delta, a, b, xtol=1e-15 * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps, maxiter=200)
    except (NotCrossingError, NonMonodromicError):
        return None
    residual = abs(mapper.delta(u_star))
    # delta increasing through zero: orbits inside drift outward, outside drift inward
    stability = "stable" if db > da else "unstable"
    traj = Trajectory()
    u_back, period = mapper.full_return(u_star, traj)
    fx, fy = mapper.focus
    amplitude = max(math.hypot(x - fx, y - fy) for x, y in zip(traj.x, traj.y))
    return CrossingLimitCycle(u_star, period, residual, stability, amplitude, abs(u_back - u_star))
