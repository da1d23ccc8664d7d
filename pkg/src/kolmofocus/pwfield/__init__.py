"""Piecewise Kolmogorov fields: scenario builders, equilibria, Σ classification."""

from .fields import NumericField, PiecewiseKolmogorovSystem, PolyVectorField
from .scenarios import (
    MonodromyKnobs,
    ScenarioParams,
    build_competition,
    build_facilitation,
    facilitation_boundary_roots,
    facilitation_center_from_roots,
    monodromy_conditions_competition,
    monodromy_conditions_facilitation,
    saddle_node_threshold,
)
from .equilibria import Equilibrium, classify, equilibria, facilitation_coexistence_equilibria
from .sigma import (
    CROSSING,
    ESCAPING,
    SLIDING,
    TANGENTIAL,
    SigmaPointClass,
    classify_sigma_point,
    fold_type,
    satisfies_no_sliding_set,
    sliding_vector_field,
)
from .scenarios import (
    build_continuous_system,
    continuity_failures,
    continuous_params,
    continuous_weak_focus_params,
)
from .presets import PRESETS, Preset, get_preset
