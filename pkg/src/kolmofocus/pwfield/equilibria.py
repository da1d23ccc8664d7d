"""Equilibria of Kolmogorov fields: exact where a closed form exists, numeric otherwise."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..algebra import ExactScalar, Poly2, as_exact
from .fields import PolyVectorField


@dataclass(frozen=True)
class Equilibrium:
    point: tuple
    eigenvalues: tuple[complex, complex]
    tag: str
    trace: object
    det: object
    exact: bool

    @property
    def exact_eigenvalues(self):
        """Eigenvalues as ExactScalar when the discriminant is a square in the field."""
        if not self.exact:
            return None
        disc = self.trace * self.trace - 4 * self.det
        root = disc.sqrt_exact() if disc.sign() >= 0 else None
        if root is None:
            return None
        return ((self.trace + root) / 2, (self.trace - root) / 2)


def _sign(v) -> int:
    if isinstance(v, ExactScalar):
        return v.sign()
    return (v > 0) - (v < 0)


def classify(trace, det) -> str:
    sd, st = _sign(det), _sign(trace)
    if sd == 0:
        return "degenerate"
    if sd < 0:
        return "saddle"
    disc = trace * trace - 4 * det
    if _sign(disc) < 0:
        if st == 0:
            return "center candidate"
        return "stable focus" if st < 0 else "unstable focus"
    if st == 0:
        return "degenerate"
    return "stable node" if st < 0 else "unstable node"


def _eigs_float(tr: float, det: float) -> tuple[complex, complex]:
    r = cmath.sqrt(tr * tr - 4 * det)
    a, b = (tr + r) / 2, (tr - r) / 2
    return (complex(a), complex(b))


def _univariate(p: Poly2, var: str) -> list[ExactScalar]:
    """Coefficients (low to high) of a polynomial known to depend on one variable."""
    idx = 0 if var == "x" else 1
    deg = max((m[idx] for m in p.coeffs), default=0)
    out = [ExactScalar(0)] * (deg + 1)
    for m, v in p.coeffs.items():
        if m[1 - idx]:
            raise ValueError("polynomial depends on both variables")
        out[m[idx]] = out[m[idx]] + v
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def _real_roots(coeffs: list[ExactScalar]) -> tuple[list, bool] | None:
    """Real roots, exact for degree <= 2 with a square discriminant.

    Returns ``None`` for the zero polynomial (every value is a root).
    """
    if all(not c for c in coeffs):
        return None
    if len(coeffs) == 1:
        return [], True
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]], True
    if len(coeffs) == 3:
        c, b, a = coeffs
        disc = b * b - 4 * a * c
        s = disc.sign()
        if s < 0:
            return [], True
        if s == 0:
            return [-b / (2 * a)], True
        root = disc.sqrt_exact()
        if root is not None:
            return [(-b + root) / (2 * a), (-b - root) / (2 * a)], True
    r = np.roots([float(c) for c in reversed(coeffs)])
    return [float(v.real) for v in r if abs(v.imag) < 1e-12 * max(1.0, abs(v))], False


def _solve_interior(f: Poly2, g: Poly2) -> tuple[list[tuple], bool] | None:
    """Solve f = g = 0 when one of them is linear in y (the scenario shapes)."""
    for a, b in ((g, f), (f, g)):
        if a.degree <= 1 and a.coeff(0, 1):
            # y = -(a00 + a10 x) / a01
            a01 = a.coeff(0, 1)
            ypoly = Poly2({(0, 0): -a.coeff(0, 0) / a01, (1, 0): -a.coeff(1, 0) / a01})
            reduced = b.compose(Poly2.x(), ypoly)
            roots = _real_roots(_univariate(reduced, "x"))
            if roots is None:
                return None
            xs, exact = roots
            pts = []
            for x in xs:
                if exact:
                    pts.append((x, ypoly(x, ExactScalar(0))))
                else:
                    pts.append((x, ypoly(float(x), 0.0)))
            return pts, exact
        if a.degree <= 1 and not a.coeff(0, 1) and a.coeff(1, 0):
            x0 = -a.coeff(0, 0) / a.coeff(1, 0)
            reduced = b.restrict_x(x0)
            roots = _real_roots(_univariate(reduced, "y"))
            if roots is None:
                return None
            ys, exact = roots
            return [(x0 if exact else float(x0), y) for y in ys], exact
    return None


def _numeric_fallback(fld: PolyVectorField, bbox, grid: int, tol: float) -> list[tuple[float, float]]:
    from scipy.optimize import root

    P, Q = fld.P, fld.Q
    Px, Py, Qx, Qy = P.dx(), P.dy(), Q.dx(), Q.dy()

    def fun(z):
        return [P(float(z[0]), float(z[1])), Q(float(z[0]), float(z[1]))]

    def jac(z):
        x, y = float(z[0]), float(z[1])
        return [[Px(x, y), Py(x, y)], [Qx(x, y), Qy(x, y)]]

    x0, x1, y0, y1 = bbox
    found: list[tuple[float, float]] = []
    for xs in np.linspace(x0, x1, grid):
        for ys in np.linspace(y0, y1, grid):
            sol = root(fun, [xs, ys], jac=jac, tol=tol)
            if not sol.success or max(abs(v) for v in fun(sol.x)) > math.sqrt(tol):
                continue
            p = (float(sol.x[0]), float(sol.x[1]))
            if all(math.hypot(p[0] - q[0], p[1] - q[1]) >= 1e-7 for q in found):
                found.append(p)
    return found


def equilibria(fld: PolyVectorField, *, bbox=(-5.0, 5.0, -5.0, 5.0), grid: int = 12, tol: float = 1e-13) -> list[Equilibrium]:
    """All equilibria with Jacobian eigenvalues and a type tag.

    Kolmogorov fields whose per-capita rates are at most linear in one
    variable are solved exactly (origin, axis points, interior points);
    anything else falls back to multistart Newton inside ``bbox``.
    """
    pts: list[tuple[tuple, bool]] = []
    if fld.kolmogorov:
        f, g = fld.f, fld.g
        pts.append(((ExactScalar(0), ExactScalar(0)), True))
        # y axis: x = 0, g(0, y) = 0 with y != 0
        r = _real_roots(_univariate(g.restrict_x(0), "y"))
        if r is not None:
            for y in r[0]:
                if y:
                    pts.append(((ExactScalar(0), y) if r[1] else (0.0, y), r[1]))
        # x axis: y = 0, f(x, 0) = 0 with x != 0
        r = _real_roots(_univariate(f.restrict_y(0), "x"))
        if r is not None:
            for x in r[0]:
                if x:
                    pts.append(((x, ExactScalar(0)) if r[1] else (x, 0.0), r[1]))
        inner = _solve_interior(f, g)
        if inner is None:
            raise ValueError("interior equilibria form a continuum or need the numeric fallback")
        for p in inner[0]:
            if _sign(p[0]) != 0 and _sign(p[1]) != 0:
                pts.append((p, inner[1]))
    else:
        pts = [(p, False) for p in _numeric_fallback(fld, bbox, grid, tol)]

    out = []
    seen = set()
    for p, exact in pts:
        key = (round(float(p[0]), 10), round(float(p[1]), 10))
        if key in seen:
            continue
        seen.add(key)
        if exact:
            tr, det = fld.trace_det(*p)
            eig = _eigs_float(float(tr), float(det))
        else:
            x, y = float(p[0]), float(p[1])
            J = [[fld.P.dx()(x, y), fld.P.dy()(x, y)], [fld.Q.dx()(x, y), fld.Q.dy()(x, y)]]
            tr, det = J[0][0] + J[1][1], J[0][0] * J[1][1] - J[0][1] * J[1][0]
            eig = _eigs_float(tr, det)
            # float classification: snap tiny values
            scale = max(1.0, abs(tr), abs(det))
            tr = 0.0 if abs(tr) < 1e-10 * scale else tr
            det = 0.0 if abs(det) < 1e-10 * scale else det
        out.append(Equilibrium(point=p, eigenvalues=eig, tag=classify(tr, det), trace=tr, det=det, exact=exact))
    return out


def facilitation_coexistence_equilibria(x0, x1) -> dict[str, tuple[ExactScalar, ExactScalar]]:
    """Closed-form equilibria of the centred facilitation field parametrised by its x-axis roots."""
    x0, x1 = as_exact(x0), as_exact(x1)
    den = 2 * x0 * x1 - x0 - x1
    zero = ExactScalar(0)
    return {
        "origin": (zero, zero),
        "r+": (x0, zero),
        "r-": (x1, zero),
        "c": (zero, 2 * x0 * x1 / den),
        "rc+": (ExactScalar(1), ExactScalar(1)),
        "rc-": (x0 * x1 * (x0 + x1 - 2) / den, -(x0 * x1 * (x0 - x1) ** 2) / (den * den)),
    }
