"""Adaptive integration of two-zone Filippov systems with Σ event location and sliding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853
from scipy.optimize import brentq

from ..pwfield.fields import NumericField, PiecewiseKolmogorovSystem, PolyVectorField

Z1, Z2, SLIDE = "Z1", "Z2", "sliding"


class IntegrationError(RuntimeError):
    """The integrator could not continue (step underflow, degenerate tangency)."""


class NonMonodromicError(IntegrationError):
    """An orbit left the bounding box or never came back to Σ."""


@dataclass(frozen=True)
class FlowOptions:
    """Tolerances and limits shared by the integrator, return maps and cycle search.

    ``bbox`` is ``(x0, x1, y0, y1)`` in original coordinates; half-return maps
    treat leaving it as non-monodromic behaviour. ``max_step`` caps the solver
    step, which only matters for how densely trajectories are sampled.
    """

    int_tol: float = 1e-12
    loc_tol: float = 1e-13
    cycle_tol: float = 1e-10
    bbox: tuple[float, float, float, float] = (-1.0, 10.0, -1.0, 10.0)
    max_time: float = 200.0
    min_step: float = 1e-14
    max_step: float = np.inf

    def __post_init__(self):
        for name in ("int_tol", "loc_tol", "cycle_tol", "max_time"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SigmaEvent:
    t: float
    x: float
    y: float
    kind: str
    residual: float
    before: str
    after: str


@dataclass
class Trajectory:
    """Time-ordered samples ``(t, x, y, zone)`` plus the Σ events met on the way."""

    t: list[float] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    y: list[float] = field(default_factory=list)
    zone: list[str] = field(default_factory=list)
    events: list[SigmaEvent] = field(default_factory=list)
    left_first_quadrant: bool = False

    def append(self, t, x, y, zone):
        self.t.append(float(t))
        self.x.append(float(x))
        self.y.append(float(y))
        self.zone.append(zone)
        if x < 0 or y < 0:
            self.left_first_quadrant = True

    @property
    def end(self) -> tuple[float, float]:
        return self.x[-1], self.y[-1]

    def __len__(self):
        return len(self.t)

    def rows(self):
        return zip(self.t, self.x, self.y, self.zone)


# -- numeric helpers -------------------------------------------------------------


class _Zones:
    """Float evaluators of both zones in coordinates centred at ``origin``."""

    def __init__(self, sys: PiecewiseKolmogorovSystem | PolyVectorField, origin):
        if isinstance(sys, PolyVectorField):
            self.smooth = True
            self.sigma = math.inf
            f1 = f2 = NumericField.from_field(sys, *origin)
        else:
            self.smooth = False
            self.sigma = float(sys.sigma_x)
            if sys.Z1 is sys.Z2:
                f1 = f2 = NumericField.from_field(sys.Z1, *origin)
            else:
                f1 = NumericField.from_field(sys.Z1, *origin)
                f2 = NumericField.from_field(sys.Z2, *origin)
        self.fields = {Z1: f1, Z2: f2}
        self.origin = f1.origin
        # Σ in shifted coordinates
        self.s = self.sigma - self.origin[0]

    def normal(self, zone: str, Y: float) -> float:
        return self.fields[zone].value(self.s, Y)[0]

    def tangential(self, zone: str, Y: float) -> float:
        return self.fields[zone].value(self.s, Y)[1]


def _side(zone: str) -> int:
    return -1 if zone == Z1 else 1


def _make_solver(fld: NumericField, t0, z0, t_bound, opts: FlowOptions, scale: float):
    rhs = fld.rhs()
    atol = opts.int_tol * max(scale, 1e-6)
    return DOP853(rhs, t0, np.asarray(z0, dtype=float), t_bound, rtol=opts.int_tol, atol=atol, max_step=opts.max_step)


@dataclass
class _ZoneRun:
    status: str  # "sigma", "time", "box"
    t: float
    z: np.ndarray


def _run_zone(zones: _Zones, zone: str, t0, z0, t_end, opts: FlowOptions, traj: Trajectory | None, box, scale):
    """Integrate one zone from ``t0`` until Σ is crossed, ``t_end`` or the box is left.

    Times may run backwards (``t_end < t0``). The state is in shifted
    coordinates; samples go to ``traj`` in original coordinates.
    """
    fld = zones.fields[zone]
    ox, oy = zones.origin
    side = _side(zone)
    s = zones.s
    solver = _make_solver(fld, t0, z0, t_end, opts, scale)
    first = True
    while True:
        if solver.status != "running":
            return _ZoneRun("time", solver.t, solver.y.copy())
        t_prev, z_prev = solver.t, solver.y.copy()
        msg = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integrator failed in {zone} at t={t_prev:.6g}: {msg}")
        h = abs(solver.t - t_prev)
        if h < opts.min_step * max(1.0, abs(solver.t)) and solver.status == "running":
            raise IntegrationError(
                f"step-size underflow ({h:.3g}) in {zone} at ({z_prev[0] + ox:.15g}, {z_prev[1] + oy:.15g});"
                " likely a degenerate tangency"
            )
        z = solver.y
        crossed = not zones.smooth and side * (z[0] - s) < 0
        if crossed and not (first and abs(z_prev[0] - s) == 0 and side * (z[0] - s) >= -opts.loc_tol):
            dense = solver.dense_output()
            a, b = sorted((t_prev, solver.t))
            ga, gb = dense(a)[0] - s, dense(b)[0] - s
            if ga == 0.0:
                tc = a
            elif gb == 0.0:
                tc = b
            elif ga * gb < 0:
                tc = brentq(lambda tt: dense(tt)[0] - s, a, b, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
            else:
                tc = solver.t
            zc = dense(tc)
            if traj is not None:
                traj.append(tc, zc[0] + ox, zc[1] + oy, zone)
            return _ZoneRun("sigma", tc, zc)
        first = False
        if box is not None and _outside(box, z[0] + ox, z[1] + oy) > 0:
            # cut the step where the orbit leaves the box
            dense = solver.dense_output()

            def g(tt):
                zz = dense(tt)
                return _outside(box, zz[0] + ox, zz[1] + oy)

            tb = solver.t
            if g(t_prev) <= 0:
                tb = brentq(g, t_prev, solver.t, xtol=1e-15, maxiter=200)
            zb = dense(tb)
            if traj is not None:
                traj.append(tb, zb[0] + ox, zb[1] + oy, zone)
            return _ZoneRun("box", tb, zb)
        if traj is not None:
            traj.append(solver.t, z[0] + ox, z[1] + oy, zone)


def _outside(box, X: float, Y: float) -> float:
    """Positive outside the box, nonpositive inside."""
    return max(box[0] - X, X - box[1], box[2] - Y, Y - box[3])


def _slide(zones: _Zones, t0, Y0, t_end, opts: FlowOptions, traj: Trajectory | None):
    """Follow the Filippov sliding field along Σ until a tangency ends the segment."""
    ox, oy = zones.origin

    def normals(Y):
        return zones.normal(Z1, Y), zones.normal(Z2, Y)

    def vy(t, z):
        a, b = normals(z[0])
        lam = b / (b - a)
        return np.array([lam * zones.tangential(Z1, z[0]) + (1 - lam) * zones.tangential(Z2, z[0])])

    a0, b0 = normals(Y0)
    kind = "sliding" if a0 > 0 else "escaping"
    solver = DOP853(vy, t0, np.array([Y0]), t_end, rtol=opts.int_tol, atol=opts.int_tol * 1e-3, max_step=opts.max_step)
    while solver.status == "running":
        t_prev, y_prev = solver.t, solver.y[0]
        solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"sliding integration failed at y={y_prev + oy:.15g}")
        a, b = normals(solver.y[0])
        if a * b >= 0:
            dense = solver.dense_output()
            which = 0 if a0 * a <= 0 else 1

            def g(tt, which=which):
                return normals(dense(tt)[0])[which]

            lo, hi = sorted((t_prev, solver.t))
            if g(lo) * g(hi) < 0:
                tc = brentq(g, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
            else:
                tc = solver.t
            Yc = dense(tc)[0]
            if traj is not None:
                traj.append(tc, zones.sigma, Yc + oy, SLIDE)
            a, b = normals(Yc)
            # the surviving component decides the exit side
            other = b if which == 0 else a
            if other == 0:
                raise IntegrationError(f"degenerate tangency: both fields tangent to Σ at y={Yc + oy:.15g}")
            exit_zone = Z2 if other > 0 else Z1
            vx, vy_exit = zones.fields[exit_zone].value(zones.s, Yc)
            if math.hypot(vx, vy_exit) <= 1e-10 * (1.0 + abs(other)):
                # the segment ends at an equilibrium of the exit field: the orbit stays there
                if traj is not None:
                    traj.append(t_end, zones.sigma, Yc + oy, SLIDE)
                return t_end, Yc, "rest", kind
            return tc, Yc, exit_zone, kind
        if traj is not None:
            traj.append(solver.t, zones.sigma, solver.y[0] + oy, SLIDE)
    return solver.t, solver.y[0], None, kind


def _arrival(zones: _Zones, from_zone: str, Y: float) -> str:
    """Filippov decision at a Σ hit: cross, keep grazing, or start sliding."""
    a, b = zones.normal(Z1, Y), zones.normal(Z2, Y)
    if a * b > 0:
        return "crossing"
    if a * b < 0:
        return "sliding" if a > 0 else "escaping"
    own = a if from_zone == Z1 else b
    return "graze" if own == 0 else "crossing"


# -- public API ------------------------------------------------------------------


def integrate(sys, x0, T: float, opts: FlowOptions | None = None, origin=None, box=None) -> Trajectory:
    """Filippov trajectory from ``x0`` over time ``T`` (negative ``T`` runs backwards
    inside the zones; sliding is only followed forward in time).

    With ``box = (x0, x1, y0, y1)`` the integration stops once the orbit
    leaves it.

    Σ hits are located by root finding on the dense output; crossing points
    switch zone, sliding points follow the convex-combination field until a
    tangency releases the orbit into the zone its field points to.
    """
    opts = opts or FlowOptions()
    if origin is None:
        origin = (float(sys.sigma_x), 1.0) if isinstance(sys, PiecewiseKolmogorovSystem) else (0.0, 0.0)
    zones = _Zones(sys, origin)
    ox, oy = zones.origin
    traj = Trajectory()
    t, t_end = 0.0, float(T)
    z = np.array([float(x0[0]) - ox, float(x0[1]) - oy])
    scale = max(abs(z[0]), abs(z[1]), 1e-3)
    if zones.smooth:
        zone = Z1
    elif z[0] < zones.s:
        zone = Z1
    elif z[0] > zones.s:
        zone = Z2
    else:
        zone = _start_on_sigma(zones, z[1], T)
    traj.append(t, z[0] + ox, z[1] + oy, zone)
    guard = 0
    while (t_end - t) * (1 if T >= 0 else -1) > 0:
        guard += 1
        if guard > 100000:
            raise IntegrationError("too many Σ events (chattering?)")
        if zone == SLIDE:
            if T < 0:
                raise IntegrationError("backward integration along a sliding segment is not unique")
            t, Y, nxt, kind = _slide(zones, t, z[1], t_end, opts, traj)
            z = np.array([zones.s, Y])
            if nxt is None:
                break
            if nxt == "rest":
                traj.events.append(SigmaEvent(t, zones.sigma, Y + oy, "boundary equilibrium", 0.0, SLIDE, SLIDE))
                break
            traj.events.append(SigmaEvent(t, zones.sigma, Y + oy, "release", 0.0, SLIDE, nxt))
            zone = nxt
            continue
        run = _run_zone(zones, zone, t, z, t_end, opts, traj, box, scale)
        t, z = run.t, run.z
        if run.status != "sigma":
            break
        residual = abs(z[0] - zones.s)
        z = np.array([zones.s, z[1]])
        sign = 1 if T >= 0 else -1
        kind = _arrival(zones, zone, z[1]) if sign > 0 else _arrival_backward(zones, zone, z[1])
        if kind == "crossing":
            nxt = Z2 if zone == Z1 else Z1
        elif kind == "graze":
            nxt = zone
        elif kind in ("sliding", "escaping") and sign > 0:
            nxt = SLIDE
        else:
            nxt = Z2 if zone == Z1 else Z1
        traj.events.append(SigmaEvent(t, zones.sigma, z[1] + oy, kind, residual, zone, nxt))
        zone = nxt
    return traj


def _arrival_backward(zones: _Zones, from_zone: str, Y: float) -> str:
    a, b = zones.normal(Z1, Y), zones.normal(Z2, Y)
    return "crossing" if a * b > 0 else ("graze" if (a if from_zone == Z1 else b) == 0 else "crossing")


def _start_on_sigma(zones: _Zones, Y: float, T: float) -> str:
    a, b = zones.normal(Z1, Y), zones.normal(Z2, Y)
    sign = 1 if T >= 0 else -1
    a, b = a * sign, b * sign
    if a > 0 and b > 0:
        return Z2
    if a < 0 and b < 0:
        return Z1
    if a * b < 0:
        return SLIDE
    if a == 0 and b == 0:
        raise IntegrationError(f"degenerate tangency at the start point y={Y + zones.origin[1]:.15g}")
    # one field tangent: follow the one that moves off Σ
    return Z2 if (b > 0 or a > 0) else Z1
