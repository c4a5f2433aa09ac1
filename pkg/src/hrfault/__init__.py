"""High-resolution frequency estimation for generator fault signatures."""

__version__ = "0.1.0"

from .faults import (  # noqa: E402
    FaultKind,
    FaultScenario,
    MachineParams,
    Tone,
    bearing_freqs,
    broken_rotor_freqs,
    canonical_scenarios,
    eccentricity_freqs,
    misalignment_freqs,
    scenario_by_name,
)
from .synthesis import SampleWindow, SignalSpec, scenario_to_spec, synthesize  # noqa: E402
from .estimators import METHODS, EstimateSet, EstimatorConfig, estimate, estimate_amplitudes  # noqa: E402
from .benchmark import SweepPlan, SweepResult, default_reference_plan, run_sweep  # noqa: E402

__all__ = [
    "FaultKind", "FaultScenario", "MachineParams", "Tone",
    "bearing_freqs", "broken_rotor_freqs", "canonical_scenarios", "eccentricity_freqs",
    "misalignment_freqs", "scenario_by_name",
    "SampleWindow", "SignalSpec", "scenario_to_spec", "synthesize",
    "METHODS", "EstimateSet", "EstimatorConfig", "estimate", "estimate_amplitudes",
    "SweepPlan", "SweepResult", "default_reference_plan", "run_sweep",
]
