"""Nonadiabatic dressed states of a driven, damped two-level system.

Closed-form dressed-state quantities along a time grid, their overlaps and
transition probability, bare-basis amplitude reconstruction, and an
independent Schrodinger integrator for cross-validation, plus scenario
files, sweeps and a CLI.
"""

from ._kernels import BACKEND
from .errors import (
    BranchAmbiguity,
    ConfigError,
    DegenerateRabi,
    EnvelopeUnderflow,
    NadsError,
    NumericalError,
    ParseError,
    RatioUndefined,
    StepUnderflow,
    ValidationError,
)
from .field_model import (
    OMEGA_FLOOR,
    Chirp,
    ConstantEnvelope,
    EnvelopeSample,
    FieldModel,
    GaussianEnvelope,
    SechEnvelope,
    SystemParams,
    field_value,
    phase_at,
    rabi_at,
)
from .nads_core import (
    NadsSnapshot,
    SnapshotSeries,
    detuning,
    lambdas,
    mixing_functions,
    nads_frequencies,
    nonadiabatic_detuning,
    nonadiabatic_rabi,
    snapshot_series,
)
from .overlap_transitions import (
    OverlapSet,
    ReconstructedAmplitudes,
    overlap_ee,
    overlap_ee_expanded,
    overlap_eg,
    overlap_eg_expanded,
    overlap_ge,
    overlap_gg,
    overlap_gg_expanded,
    overlaps,
    reconstruct_bare_amplitudes,
    transition_probability,
    transition_probability_via_overlaps,
)
from .scenario import (
    Scenario,
    SweepAxis,
    SweepSpec,
    axis_values,
    list_shipped,
    load_scenario,
    load_shipped,
    parse_axis,
    scenario_from_dict,
    serialize,
    shipped_path,
)
from .tdse import (
    Trajectory,
    evolve,
    lz_oracle,
    lz_survival,
    propagate_fixed,
    rabi_oracle,
    rhs,
)
from .validation import CheckResult, run_all

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BranchAmbiguity",
    "CheckResult",
    "Chirp",
    "ConfigError",
    "ConstantEnvelope",
    "DegenerateRabi",
    "EnvelopeSample",
    "EnvelopeUnderflow",
    "FieldModel",
    "GaussianEnvelope",
    "NadsError",
    "NadsSnapshot",
    "NumericalError",
    "OMEGA_FLOOR",
    "OverlapSet",
    "ParseError",
    "RatioUndefined",
    "ReconstructedAmplitudes",
    "Scenario",
    "SechEnvelope",
    "SnapshotSeries",
    "StepUnderflow",
    "SweepAxis",
    "SweepSpec",
    "SystemParams",
    "Trajectory",
    "ValidationError",
    "axis_values",
    "detuning",
    "evolve",
    "field_value",
    "lambdas",
    "list_shipped",
    "load_scenario",
    "load_shipped",
    "lz_oracle",
    "lz_survival",
    "mixing_functions",
    "nads_frequencies",
    "nonadiabatic_detuning",
    "nonadiabatic_rabi",
    "overlap_ee",
    "overlap_ee_expanded",
    "overlap_eg",
    "overlap_eg_expanded",
    "overlap_ge",
    "overlap_gg",
    "overlap_gg_expanded",
    "overlaps",
    "parse_axis",
    "phase_at",
    "propagate_fixed",
    "rabi_at",
    "rabi_oracle",
    "reconstruct_bare_amplitudes",
    "rhs",
    "run_all",
    "scenario_from_dict",
    "serialize",
    "shipped_path",
    "snapshot_series",
    "transition_probability",
    "transition_probability_via_overlaps",
    "__version__",
]
