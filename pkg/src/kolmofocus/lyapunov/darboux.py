"""Darboux first integrals and Σ-first-integral center certificates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ..algebra import ExactScalar, Poly2, as_exact
from ..pwfield.fields import PiecewiseKolmogorovSystem, PolyVectorField


@dataclass(frozen=True)
class DarbouxCertificate:
    """First integral ``H = A x^B y^C`` with integrating factor ``W = x^D y^E``."""

    A: Poly2
    B: ExactScalar
    C: ExactScalar
    D: ExactScalar
    E: ExactScalar

    def __post_init__(self):
        for name in "BCDE":
            object.__setattr__(self, name, as_exact(getattr(self, name)))

    def H(self, x: float, y: float) -> float:
        return self.A(float(x), float(y)) * float(x) ** float(self.B) * float(y) ** float(self.C)


@dataclass(frozen=True)
class SigmaCenterCertificate:
    """Per-zone certificates whose restrictions to Σ are ``gamma_i * Hhat(u)``.

    ``Hhat(u) = hhat_poly(u) * u**hhat_exp`` with ``hhat_poly`` stored as a
    polynomial in ``y``.
    """

    zone1: DarbouxCertificate
    zone2: DarbouxCertificate
    gamma1: ExactScalar
    gamma2: ExactScalar
    hhat_poly: Poly2
    hhat_exp: ExactScalar

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "hhat_exp"):
            object.__setattr__(self, name, as_exact(getattr(self, name)))

    @classmethod
    def single_zone(cls, cert: DarbouxCertificate, sigma_x=1) -> SigmaCenterCertificate:
        """Certificate for ``Z1 = Z2`` sharing one Darboux integral."""
        if as_exact(sigma_x) != 1:
            raise ValueError("restriction to Σ needs sigma_x = 1")
        return cls(cert, cert, ExactScalar(1), ExactScalar(1), cert.A.restrict_x(1), cert.C)


def darboux_residuals(fld: PolyVectorField, cert: DarbouxCertificate) -> tuple[Poly2, Poly2]:
    """Residual polynomials of the two identities that make ``cert`` valid.

    First: ``A_x x f + A_y y g + A (B f + C g)`` (log-derivative of H along
    the flow, divided by ``H/A``). Second: ``div Z + D f + E g`` (divergence
    of ``W Z`` divided by ``W``). Both vanish identically for a valid
    certificate.
    """
    if not fld.kolmogorov:
        raise ValueError("Darboux check needs a Kolmogorov field x f, y g")
    f, g = fld.f, fld.g
    A = cert.A
    x, y = Poly2.x(), Poly2.y()
    flow_A = A.dx() * x * f + A.dy() * y * g
    log_res = flow_A + A * (f * cert.B + g * cert.C)
    div = fld.P.dx() + fld.Q.dy()
    div_res = div + f * cert.D + g * cert.E
    return log_res, div_res


def verify_darboux(fld: PolyVectorField, cert: DarbouxCertificate, focus=(1, 1)) -> bool:
    """True iff both certificate identities hold as exact polynomial identities.

    A warning is emitted when ``A`` vanishes at ``focus``: the identity
    still holds, but ``H`` is then singular at the focus and needs a change
    of variables before it describes the nearby level curves.
    """
    log_res, div_res = darboux_residuals(fld, cert)
    ok = not log_res and not div_res
    if ok and focus is not None:
        a0 = cert.A(as_exact(focus[0]), as_exact(focus[1]))
        if not a0:
            warnings.warn("A vanishes at the focus; H = A x^B y^C is singular there")
    return ok


def verify_sigma_center(sys: PiecewiseKolmogorovSystem, cert: SigmaCenterCertificate) -> bool:
    """Both zone integrals pass and restrict on Σ to multiples of one Ĥ(u)."""
    if not (verify_darboux(sys.Z1, cert.zone1, None) and verify_darboux(sys.Z2, cert.zone2, None)):
        return False
    return not sigma_restriction_mismatches(sys, cert)


def sigma_restriction_mismatches(sys: PiecewiseKolmogorovSystem, cert: SigmaCenterCertificate) -> list[str]:
    """Human-readable list of the Σ-restriction conditions that fail."""
    out = []
    s = sys.sigma_x
    for i, zc, gamma in ((1, cert.zone1, cert.gamma1), (2, cert.zone2, cert.gamma2)):
        if not gamma:
            out.append(f"gamma{i} = 0")
            continue
        factor = gamma
        if s != 1:
            # s**B must stay in the coefficient field
            if zc.B.b or zc.B.a.denominator != 1:
                out.append(f"sigma_x**B{i} is not exact")
                continue
            factor = gamma / s ** int(zc.B.a)
        diff = zc.A.restrict_x(s) - cert.hhat_poly * factor
        if diff:
            out.append(f"A{i}(sigma, u) - gamma{i} Hhat(u) = {diff}")
        if zc.C != cert.hhat_exp:
            out.append(f"C{i} = {zc.C} differs from the Hhat exponent {cert.hhat_exp}")
    return out


# -- certificates for the scenario families ------------------------------------

def competition_certificate(k1, n1, e1) -> DarbouxCertificate:
    """Darboux integral of the competition field centred at (1, 1) with unit knobs."""
    k1, n1, e1 = map(as_exact, (k1, n1, e1))
    m = k1 * n1
    q = m * m + e1 * m + 1
    A = Poly2({(1, 0): m * q, (0, 1): e1 * m * (m + e1), (0, 0): -(m + e1) * q})
    return DarbouxCertificate(
        A=A,
        B=m * q / e1,
        C=m * (m + e1),
        D=(m**3 + e1 * m * m + m - e1) / e1,
        E=m * m + e1 * m - 1,
    )


def _fac_den(k2, n2):
    return (8 * n2 * n2 - 6 * n2 + 1) * k2 * k2 + 2


def facilitation_certificate(k2, n2) -> DarbouxCertificate:
    """Darboux integral of the facilitation field at a center (e2 on the center curve)."""
    k2, n2 = as_exact(k2), as_exact(n2)
    L = _fac_den(k2, n2)
    c = 2 * n2 - 1
    x = Poly2.x()
    A = (x * n2 - 1) * x * (2 * L) + Poly2.y() * (k2 * k2 * c * c) + (2 * c * k2 * k2 * n2 + 2)
    return DarbouxCertificate(
        A=A,
        B=-2,
        C=-c * k2 * k2 / L,
        D=-3,
        E=-2 * (4 * k2 * k2 * n2 * n2 - 2 * k2 * k2 * n2 + 1) / L,
    )


def piecewise_center_certificate(k1, n1, k2, n2) -> SigmaCenterCertificate:
    """Σ-first integral of the two-zone center (both closed-form conditions zero)."""
    k1, n1, k2, n2 = map(as_exact, (k1, n1, k2, n2))
    L = _fac_den(k2, n2)
    c = 2 * n2 - 1
    m2 = k1 * k1 * n1 * n1  # (k1 n1)^2
    K = k2 * k2
    q = c * c * K + 1
    M = (8 * n2 * n2 - 6 * n2 + 1) * m2 * K + 2 * m2 + c * K
    A1 = Poly2({(1, 0): 2 * m2 * q * L, (0, 1): K * c * M, (0, 0): 2 * K * c * q})
    z1 = DarbouxCertificate(
        A=A1,
        B=-2 * m2 * q / M,
        C=-c * K / L,
        D=-((16 * n2 * n2 - 14 * n2 + 3) * m2 * K + 4 * m2 + c * K) / M,
        E=-2 * (2 * c * K * n2 + 1) / L,
    )
    x = Poly2.x()
    A2 = (x * n2 - 1) * x * L + Poly2.y() * (c * c * K / 2) + (c * K * n2 + 1)
    z2 = DarbouxCertificate(A=A2, B=-2, C=(1 - 2 * n2) * K / (2 + (8 * n2 * n2 - 6 * n2 + 1) * K), D=-3, E=-2 * (2 * c * K * n2 + 1) / L)
    u = Poly2.y()
    hhat = (u + (4 * n2 - 2)) * (c * K / 2) + 1
    gamma1 = (2 * m2 * (4 * n2 - 1) * c + 4 * n2 - 2) * K + 4 * m2
    gamma2 = c
    return SigmaCenterCertificate(z1, z2, gamma1, gamma2, hhat, (1 - 2 * n2) * K / L)
