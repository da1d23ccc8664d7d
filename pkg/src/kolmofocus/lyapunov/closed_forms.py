"""Closed-form center conditions for the competition/facilitation pair."""

from __future__ import annotations

from ..algebra import ExactScalar, as_exact


def hat_v2(k1, n1, e1, k2, n2, e2) -> ExactScalar:
    """Quadratic-order center quantity of the two-zone system at (1, 1)."""
    k1, n1, e1, k2, n2, e2 = map(as_exact, (k1, n1, e1, k2, n2, e2))
    m1, m2 = k1 * n1, k2 * n2
    return 4 * (e2 + m2 - k2) * m2 - (m1 + e1) * m1 + (k2 - e2) * k2


def hat_v3(k2, n2, e2) -> ExactScalar:
    """Cubic-order center quantity of the facilitation field at (1, 1).

    The ``k**3`` coefficient is ``(2n - 1)**3``; this is the factor the
    facilitation Darboux integral actually requires.
    """
    k, n, e = as_exact(k2), as_exact(n2), as_exact(e2)
    c = 2 * n - 1
    return k**3 * c**3 + k * k * e * (8 * n * n - 6 * n + 1) + k * c + 2 * e


def hat_v3_as_printed(k2, n2, e2) -> ExactScalar:
    """The same quantity with ``8n^3 - 12n^2 - 6n - 1`` as the ``k**3`` coefficient.

    Kept for comparison only: it does not vanish on the certified centers.
    """
    k, n, e = as_exact(k2), as_exact(n2), as_exact(e2)
    return k**3 * (8 * n**3 - 12 * n * n - 6 * n - 1) + k * k * e * (8 * n * n - 6 * n + 1) + k * (2 * n - 1) + 2 * e


def center_e2(k2, n2) -> ExactScalar:
    """The e2 that makes ``hat_v3`` vanish (it is linear in e2)."""
    k, n = as_exact(k2), as_exact(n2)
    c = 2 * n - 1
    den = k * k * (8 * n * n - 6 * n + 1) + 2
    if not den:
        raise ZeroDivisionError("hat_v3 does not depend on e2 here")
    return -k * c * (k * k * c * c + 1) / den


def center_e1(k1, n1, k2, n2, e2) -> ExactScalar:
    """The e1 that makes ``hat_v2`` vanish (linear in e1 once k1 n1 is fixed)."""
    k1, n1, k2, n2, e2 = map(as_exact, (k1, n1, k2, n2, e2))
    m1 = k1 * n1
    if not m1:
        raise ZeroDivisionError("k1 n1 = 0: hat_v2 does not depend on e1")
    rest = 4 * (e2 + k2 * n2 - k2) * k2 * n2 + (k2 - e2) * k2
    return rest / m1 - m1


def smooth_v1(tau: float) -> float:
    import math

    return math.expm1(2 * math.pi * tau)


def piecewise_v1(tau1: float, tau2: float) -> float:
    import math

    return math.exp(math.pi * tau1) - math.exp(-math.pi * tau2)
