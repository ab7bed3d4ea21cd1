"""Fourier dimension experiments for dyadic measures and digit-block sets."""

__version__ = "0.1.0"

from .measures import (
    AtomicMeasure,
    CantorMeasure,
    CylinderSet,
    DyadicMeasure,
    delta,
    dyadic_pushforward,
    lebesgue,
    lebesgue_on,
    load_measure,
    normalize,
    refine,
    restrict,
)
from .fourier import (
    DecayReport,
    ResolutionWarning,
    batch_integer_transform,
    estimate_decay,
    fourier_transform,
    sup_abs_transform,
)
from .energy import (
    EnergyResult,
    energy_cell_lower_bound,
    riesz_energy,
    verify_energy_dominates_bound,
)
from .lemma import (
    duality_lower_bound,
    infsup_bound,
    minimize_sup_transform,
    pulse_sum_bound,
)
from .construction import (
    DigitBlockSpec,
    SpecError,
    classify_f,
    cylinder_decompose,
    default_spec,
    dichotomy,
    energy_branch_bound,
    mass_of_f_infinite_bound,
    stage_masses,
    validate_parameters,
    witness_frequency_bound,
)
