"""Lyapunov quantities by exact series recurrences, closed forms and center certificates."""

from .closed_forms import center_e1, center_e2, hat_v2, hat_v3, hat_v3_as_printed, piecewise_v1, smooth_v1
from .darboux import (
    DarbouxCertificate,
    SigmaCenterCertificate,
    competition_certificate,
    darboux_residuals,
    facilitation_certificate,
    piecewise_center_certificate,
    sigma_restriction_mismatches,
    verify_darboux,
    verify_sigma_center,
)
from .normal_form import AffineChange, NormalFormSystem, NormalizationError, normalize_at_weak_focus, normalize_piecewise
from .series import (
    DEFAULT_ORDER,
    LyapunovExpansion,
    half_return_series,
    piecewise_lyapunov,
    polar_expansion,
    radial_coefficients,
    smooth_lyapunov,
)
