"""Staged unfoldings of a weak focus: degenerate Hopf steps plus the homothety step."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from ..algebra import ExactScalar, Poly2, as_exact
from ..lyapunov.series import piecewise_lyapunov, smooth_lyapunov
from ..pwfield.fields import PiecewiseKolmogorovSystem, PolyVectorField
from ..pwfield.presets import Preset
from ..pwfield.scenarios import (
    MonodromyKnobs,
    build_competition,
    build_continuous_system,
    build_facilitation,
    continuous_weak_focus_params,
    monodromy_conditions_competition,
    monodromy_conditions_facilitation,
)
from .integrator import FlowOptions
from .returnmap import CrossingLimitCycle, default_u_grid, find_crossing_cycles


def pseudo_hopf_homothety(Z: PolyVectorField, eps) -> PolyVectorField:
    """The field seen in the dilated coordinates ``X = (1 + eps) x``.

    ``Z_eps(X) = (1 + eps) Z(X / (1 + eps))``: equilibria move from ``p``
    to ``(1 + eps) p`` and the Kolmogorov form survives because each
    component keeps its factor ``x`` or ``y``.
    """
    eps = as_exact(eps)
    if (eps + 1).sign() <= 0:
        raise ValueError("homothety needs eps > -1")
    if not eps:
        return Z
    c = 1 + eps
    px, py = Poly2.x() * (1 / c), Poly2.y() * (1 / c)
    return PolyVectorField(Z.P.compose(px, py) * c, Z.Q.compose(px, py) * c, kolmogorov=Z.kolmogorov)


def verify_no_sliding_near(sys: PiecewiseKolmogorovSystem, p, window: float = 0.1, samples: int = 401) -> bool:
    """True iff every non-tangential Σ point with ``|y - p| <= window`` is a crossing point.

    Besides a uniform grid, one sample is taken inside each interval cut
    out by the real zeros of the two normal components, so short sliding
    segments are not missed.
    """
    yc = float(p[1]) if isinstance(p, tuple) else float(p)
    s = sys.sigma_x
    lo, hi = yc - window, yc + window
    cuts = {lo, hi}
    for fld in (sys.Z1, sys.Z2):
        coeffs = _univariate_y(fld.P.restrict_x(s))
        if any(coeffs):
            for r in np.roots(coeffs[::-1]) if len(coeffs) > 1 else []:
                if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and lo < r.real < hi:
                    cuts.add(float(r.real))
    pts = sorted(cuts)
    probes = list(np.linspace(lo, hi, samples)) + [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    P1, P2 = sys.Z1.P, sys.Z2.P
    sf = float(s)
    for y in probes:
        a, b = P1(sf, float(y)), P2(sf, float(y))
        scale = max(abs(a), abs(b), 1e-300)
        if abs(a) <= 1e-14 * scale or abs(b) <= 1e-14 * scale:
            continue
        if a * b < 0:
            return False
    return True


def _univariate_y(p: Poly2) -> list[float]:
    deg = max((j for (_, j) in p.coeffs), default=0)
    out = [0.0] * (deg + 1)
    for (i, j), v in p.coeffs.items():
        out[j] += float(v)
    return out


# -- unfolding families ------------------------------------------------------------


@dataclass(frozen=True)
class UnfoldingFamily:
    """Two-parameter family around a weak focus at (1, 1).

    ``build(delta, trace)`` returns the system with the order-two knob
    moved by ``delta`` and the trace knob set to ``trace``;
    ``trace_zones`` says how many zones carry the trace so that the first
    quantity is ``exp(pi tau1) - exp(-pi tau2)`` with ``tau = trace / 2``.
    """

    name: str
    knob: str
    build: Callable[[ExactScalar, ExactScalar], PiecewiseKolmogorovSystem]
    trace_zones: tuple[int, ...]


def order_three_family(preset: Preset) -> UnfoldingFamily:
    """Perturb ``e2`` and re-solve the facilitation monodromy conditions; trace on ``Z2``."""
    p1, p2 = preset.params1, preset.params2
    if p2 is None:
        raise ValueError("needs a two-zone preset")
    z1 = build_competition(monodromy_conditions_competition(p1.k, p1.n, p1.e))

    def build(delta, trace):
        params = monodromy_conditions_facilitation(p2.k, p2.n, p2.e + as_exact(delta), MonodromyKnobs(t=as_exact(trace)))
        return PiecewiseKolmogorovSystem(z1, build_facilitation(params))

    return UnfoldingFamily(preset.name, "e2", build, (2,))


def continuous_family(k1, k2, n2, e) -> UnfoldingFamily:
    """Continuous pair: perturb ``n2`` (``n1`` follows) and put the same trace in both zones."""

    def build(delta, trace):
        a, b = continuous_weak_focus_params(k1, k2, as_exact(n2) + as_exact(delta), e, as_exact(trace))
        return build_continuous_system(a, b)

    return UnfoldingFamily("continuous", "n2", build, (1, 2))


def family_for(preset: Preset) -> UnfoldingFamily:
    if preset.name == "continuous-C":
        x = preset.extra
        return continuous_family(x["k1"], x["k2"], x["n2"], x["e"])
    return order_three_family(preset)


# -- staged experiment -------------------------------------------------------------


class StageFailure(RuntimeError):
    def __init__(self, stage: int, tried: list[float], found: int, expected: int):
        self.stage, self.tried, self.found, self.expected = stage, tried, found, expected
        mags = ", ".join(f"{m:.0e}" for m in tried)
        super().__init__(f"stage {stage} did not add a cycle ({found} found, {expected} expected); tried magnitudes {mags}")


@dataclass
class StageRecord:
    stage: int
    magnitude: float
    signed_value: float
    tried: list[float]
    cycles: list[CrossingLimitCycle]
    note: str = ""


@dataclass
class StagedResult:
    family: str
    stages: list[StageRecord] = field(default_factory=list)
    system: PiecewiseKolmogorovSystem | None = None
    V: tuple = ()
    stage2_system: PiecewiseKolmogorovSystem | None = None
    grid: np.ndarray | None = None

    @property
    def cycles(self) -> list[CrossingLimitCycle]:
        return self.stages[-1].cycles if self.stages else []


def _exact_from_float(v: float) -> ExactScalar:
    return ExactScalar(Fraction(repr(float(v))))


def _sign(v) -> int:
    f = float(v)
    return (f > 0) - (f < 0)


def staged_unfolding(
    family: UnfoldingFamily,
    n_stages: int = 3,
    eps=(1e-2, 1e-4, 1e-6),
    homothety_sign: int = 1,
    opts: FlowOptions | None = None,
    grid_n: int = 60,
    r_range=(1e-7, 0.15),
    retries: int = 4,
    strict: bool = True,
) -> StagedResult:
    """Add one small crossing cycle per stage.

    Stage 1 moves the order-two knob so that ``V2 V3 < 0``; stage 2 sets
    the trace against ``V2``; stage 3 applies the homothety to ``Z1``
    (positive ``eps`` by default). Each stage retries with the magnitude
    divided by ten until it adds exactly one cycle. With ``strict`` a
    stage that never succeeds raises ``StageFailure``; otherwise the last
    attempt is kept and recorded.
    """
    opts = opts or FlowOptions()
    grid = default_u_grid(1.0, r_range[0], r_range[1], grid_n)
    result = StagedResult(family.name, grid=grid)
    zero = ExactScalar(0)
    delta = zero
    sys = family.build(zero, zero)

    def search(s):
        return find_crossing_cycles(s, grid=grid, opts=opts)

    if n_stages >= 1:
        tried, mag = [], eps[0]
        for _ in range(retries + 1):
            tried.append(mag)
            d = _exact_from_float(mag)
            V = piecewise_lyapunov(family.build(d, zero), K=3).V
            if _sign(V[1]) * _sign(V[2]) > 0:
                d = -d
                V = piecewise_lyapunov(family.build(d, zero), K=3).V
            cand = family.build(d, zero)
            cycles = search(cand)
            if len(cycles) == 1 or len(tried) == retries + 1:
                break
            mag /= 10
        _check(strict, 1, tried, cycles, 1)
        delta, sys = d, cand
        result.V = V
        result.stages.append(StageRecord(1, mag, float(d), tried, cycles, f"{family.knob} += {d}"))
    if n_stages >= 2:
        v2 = result.V[1] if result.V else piecewise_lyapunov(sys, K=2).V[1]
        direction = -_sign(v2)
        tried, mag = [], eps[1]
        for _ in range(retries + 1):
            tried.append(mag)
            t = _exact_from_float(mag) * direction
            cand = family.build(delta, t)
            cycles = search(cand)
            if len(cycles) == 2 or len(tried) == retries + 1:
                break
            mag /= 10
        _check(strict, 2, tried, cycles, 2)
        sys = cand
        result.stages.append(StageRecord(2, mag, float(t), tried, cycles, f"trace = {t}"))
    stage2 = sys
    if n_stages >= 3:
        tried, mag = [], eps[2]
        base = sys
        expected = 3 if homothety_sign > 0 else None
        for _ in range(retries + 1):
            tried.append(mag)
            e3 = _exact_from_float(mag) * homothety_sign
            cand = PiecewiseKolmogorovSystem(pseudo_hopf_homothety(base.Z1, e3), base.Z2, base.sigma_x)
            cycles = search(cand)
            if expected is None or len(cycles) == expected or len(tried) == retries + 1:
                break
            mag /= 10
        if expected is not None:
            _check(strict, 3, tried, cycles, expected)
        sys = cand
        result.stages.append(StageRecord(3, mag, float(e3), tried, cycles, f"homothety on Z1, eps = {e3}"))
    result.system = sys
    result.stage2_system = stage2
    return result


def _check(strict: bool, stage: int, tried, cycles, expected: int):
    if strict and len(cycles) != expected:
        raise StageFailure(stage, tried, len(cycles), expected)


def reversed_homothety(result: StagedResult, opts: FlowOptions | None = None) -> list[CrossingLimitCycle]:
    """Cycles after the last homothety step is replayed with the opposite sign, same magnitude."""
    if len(result.stages) < 3:
        raise ValueError("needs a completed homothety stage")
    base = result.stage2_system
    e3 = -_exact_from_float(result.stages[2].signed_value)
    sys = PiecewiseKolmogorovSystem(pseudo_hopf_homothety(base.Z1, e3), base.Z2, base.sigma_x)
    return find_crossing_cycles(sys, grid=result.grid, opts=opts)


def three_cycle_experiment(preset: Preset, eps=(1e-2, 1e-4, 1e-6), opts: FlowOptions | None = None, **kw) -> StagedResult:
    """Three nested crossing cycles from an unstable order-three focus."""
    fam = family_for(preset)
    V = piecewise_lyapunov(fam.build(ExactScalar(0), ExactScalar(0)), K=3).V
    if V[0] or V[1] or _sign(V[2]) <= 0:
        raise ValueError("base must have V1 = V2 = 0 and V3 > 0")
    return staged_unfolding(fam, 3, eps, opts=opts, **kw)


def hopf_experiment(preset: Preset, t2, opts: FlowOptions | None = None, grid_n: int = 60, r_range=(1e-4, 0.3)):
    """Smooth facilitation field with trace ``t2`` at (1, 1); returns the crossing cycles found."""
    p = preset.params1
    params = monodromy_conditions_facilitation(p.k, p.n, p.e, MonodromyKnobs(t=_exact_from_float(t2) if isinstance(t2, float) else as_exact(t2)))
    fld = build_facilitation(params)
    grid = default_u_grid(1.0, r_range[0], r_range[1], grid_n)
    return find_crossing_cycles(fld, grid=grid, opts=opts)


def smooth_v3(preset: Preset):
    return smooth_lyapunov(preset.zone1, K=3)[3]
