"""Adiabatic ground-state preparation on a statevector simulator.

Prepares ground states by slowly ramping an initial Hamiltonian into a
target, holds the result under the constant target while measuring
observables (exactly or with shot noise), and diagnoses the residual
excited-state weight from the oscillation it leaves in the record: the
oscillation variance yields the excitation probability, which in turn
corrects the systematic bias it imprints on time-averaged expectations.
"""

from __future__ import annotations

from .analyze import (
    OscillationStats,
    VacuumDiagnosis,
    diagnose_anticommuting,
    diagnose_general,
    oscillation_stats,
    predicted_series,
)
from .config import PRESETS, ConfigError, ExperimentConfig, OutputOptions, preset_config
from .evolve import (
    INTEGRATORS,
    ResidualDecomposition,
    decompose,
    evolve_exact,
    exact_midpoint_step,
    initial_state,
    run_adiabatic,
    superposition_state,
    trotter2_step,
)
from .linalg import EigenSystem, apply, eig_hermitian, expm_minus_i
from .measure import (
    ShotSampler,
    TimeSeries,
    expectation,
    heisenberg_z_closed_form,
    hold_series,
    sample_expectation,
    shot_std,
)
from .model import (
    AdiabaticSchedule,
    HermitianOperator,
    ModelSpec,
    hamiltonian_at,
    model_one,
    model_two,
    observable_from_label,
    pauli,
    spectral_gap_at,
)
from .runner import RunResult, run_experiment, run_and_write, sweep

__version__ = "0.1.0"

__all__ = [
    "AdiabaticSchedule",
    "ConfigError",
    "EigenSystem",
    "ExperimentConfig",
    "HermitianOperator",
    "INTEGRATORS",
    "ModelSpec",
    "OscillationStats",
    "OutputOptions",
    "PRESETS",
    "ResidualDecomposition",
    "RunResult",
    "ShotSampler",
    "TimeSeries",
    "VacuumDiagnosis",
    "apply",
    "decompose",
    "diagnose_anticommuting",
    "diagnose_general",
    "eig_hermitian",
    "evolve_exact",
    "exact_midpoint_step",
    "expectation",
    "expm_minus_i",
    "hamiltonian_at",
    "heisenberg_z_closed_form",
    "hold_series",
    "initial_state",
    "model_one",
    "model_two",
    "observable_from_label",
    "oscillation_stats",
    "pauli",
    "predicted_series",
    "preset_config",
    "run_adiabatic",
    "run_and_write",
    "run_experiment",
    "sample_expectation",
    "shot_std",
    "spectral_gap_at",
    "superposition_state",
    "sweep",
    "trotter2_step",
]
