"""Coupled-microcavity Ising simulator.

A driven two-level atom in each cavity of a coupled chain, with photon
hopping between neighbors, reduces in the strong-drive dispersive regime
to an Ising sigma^z sigma^z model in the dressed basis. This package
builds both descriptions, evolves them, calibrates the effective rate
from full dynamics, and generates and verifies cluster states with the
resulting phase gate.

Units are GHz for rates and ns for times (hbar = 1).
"""

from .errors import (CalibrationError, ConfigError, ConvergenceError,
                     EvolutionError, RegimeError, SizeLimitError)
from .hilbert import (CavityMode, DensityMatrix, LinearOp, QuantumState,
                      Qubit, SpaceLayout, apply, destroy, embed_local,
                      fidelity, partial_trace, von_neumann_entropy)
from .dynamics import (ComparisonReport, EvolutionSpec, Observable,
                       TimeSeries, compare_runs, evolve, expm_propagator,
                       propagator, sample_states)
from .model import (JzCalibration, KMode, KSpectrum, ModelParams,
                    build_ising_hamiltonian, build_lab_hamiltonian,
                    build_rotating_hamiltonian, build_rwa_hamiltonian,
                    calibrate_jz, calibrate_jz_report, cavity_dispersion,
                    chain_bonds, dressed_basis_transform, effective_jz,
                    ground_vacuum_state, hopping_matrix, ising_diagonal)
from .cluster import (GhzEquivalence, LocalUnitarySearch, PhaseGateSpec,
                      StabilizerReport, apply_local_unitaries,
                      canonical_cluster_state, find_local_unitaries,
                      generate_cluster_state, ghz_equivalence_check,
                      ghz_state, ising_unitary, local_corrections,
                      phase_gate_unitary, stabilizer_expectations,
                      stabilizer_report, su2_unitary)
from .experiments import (ClusterReport, ConvergenceCheck, RunReport,
                          ScenarioConfig, SweepPoint, reference_config,
                          reference_params, run_cluster, run_comparison,
                          run_single, run_sweep, sweep_table)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError", "ConfigError", "ConvergenceError", "EvolutionError",
    "RegimeError", "SizeLimitError",
    "CavityMode", "DensityMatrix", "LinearOp", "QuantumState", "Qubit",
    "SpaceLayout", "apply", "destroy", "embed_local", "fidelity",
    "partial_trace", "von_neumann_entropy",
    "ComparisonReport", "EvolutionSpec", "Observable", "TimeSeries",
    "compare_runs", "evolve", "expm_propagator", "propagator", "sample_states",
    "JzCalibration", "KMode", "KSpectrum", "ModelParams",
    "build_ising_hamiltonian", "build_lab_hamiltonian",
    "build_rotating_hamiltonian", "build_rwa_hamiltonian", "calibrate_jz",
    "calibrate_jz_report", "cavity_dispersion", "chain_bonds",
    "dressed_basis_transform", "effective_jz", "ground_vacuum_state",
    "hopping_matrix", "ising_diagonal",
    "GhzEquivalence", "LocalUnitarySearch", "PhaseGateSpec",
    "StabilizerReport", "apply_local_unitaries", "canonical_cluster_state",
    "find_local_unitaries", "generate_cluster_state", "ghz_equivalence_check",
    "ghz_state", "ising_unitary", "local_corrections", "phase_gate_unitary",
    "stabilizer_expectations", "stabilizer_report", "su2_unitary",
    "ClusterReport", "ConvergenceCheck", "RunReport", "ScenarioConfig",
    "SweepPoint", "reference_config", "reference_params", "run_cluster",
    "run_comparison", "run_single", "run_sweep", "sweep_table",
    "__version__",
]
