"""Exact linear-algebra laboratory for variable-time search compositions.

Modules:

* linalg       -- tolerance policy, projectors, reflections, unitary spectra
* subroutines  -- variable-time subroutines, stopping profiles, generators
* grover       -- amplitude-rotation loop with per-query weight accounting
* instances    -- two-reflection instances (unit-cost and variable-time
                  query variants), history states, witnesses, weight regimes
* phase        -- spectral decision engine and phase-register simulation
* bounds       -- search cost-bound expressions and comparison tables
* harness      -- reproducible experiment runner
* cli          -- command-line interface
"""

from .linalg import (DEFAULT_TOL, DIM_CAP, DimensionCapError, NonUnitaryError,
                     Projector, SpectralDecomposition, TolerancePolicy,
                     cluster_phases, orthonormalize, projector_from_set,
                     reflection, unitarity_residual, unitary_eig)
from .subroutines import (BlockSchedule, StoppingProfile, SubroutineSpec,
                          ZeroErrorViolation, build_block_subroutine,
                          cascade_profile, profile_moments, random_subroutine,
                          run_block_algorithm, run_subroutine,
                          stopping_profile, validate)
from .grover import (AverageQueryCost, CostProfile, OracleSpec,
                     QueryWeightTable, average_query_cost, closed_form_weights,
                     grover_state, iteration_count, lagrange_cos_sum,
                     query_weights, success_probability)
from .instances import (GeneralBasis, HistoryTriple, NegativeWitness,
                        PEInstance, PositiveWitness, REGIMES, SimpleBasis,
                        Weights, WitnessReport, build_general_instance,
                        build_simple_instance, general_negative_witness,
                        general_positive_witness, history_states,
                        regime_parameters, simple_witnesses, verify_witnesses)
from .phase import (Decision, QPEOutcome, decide, qpe_kernel, qpe_simulate,
                    qpe_zero_prediction, register_bits_for,
                    verify_reflection_factorization, zero_phase_overlap)
from .bounds import (BOUND_KINDS, ComparisonReport, CostReport,
                     PromiseDescriptor, bound, compare_table, full_report)
from .harness import (EXPERIMENT_KINDS, ExperimentConfig, ResultSet, emit,
                      run_experiment)

__version__ = "0.1.0"

__all__ = [
    "AverageQueryCost", "BOUND_KINDS", "BlockSchedule", "ComparisonReport",
    "CostProfile", "CostReport", "DEFAULT_TOL", "DIM_CAP", "Decision",
    "DimensionCapError", "EXPERIMENT_KINDS", "ExperimentConfig",
    "GeneralBasis", "HistoryTriple", "NegativeWitness", "NonUnitaryError",
    "OracleSpec", "PEInstance", "PositiveWitness", "Projector",
    "PromiseDescriptor", "QPEOutcome", "QueryWeightTable", "REGIMES",
    "ResultSet", "SimpleBasis", "SpectralDecomposition", "StoppingProfile",
    "SubroutineSpec", "TolerancePolicy", "Weights", "WitnessReport",
    "ZeroErrorViolation", "average_query_cost", "bound",
    "build_block_subroutine", "build_general_instance",
    "build_simple_instance", "cascade_profile", "closed_form_weights",
    "cluster_phases", "compare_table", "decide", "emit", "full_report",
    "general_negative_witness", "general_positive_witness", "grover_state",
    "history_states", "iteration_count", "lagrange_cos_sum", "orthonormalize",
    "profile_moments", "projector_from_set", "qpe_kernel", "qpe_simulate",
    "qpe_zero_prediction", "query_weights", "random_subroutine",
    "reflection", "regime_parameters", "register_bits_for",
    "run_block_algorithm", "run_experiment", "run_subroutine",
    "simple_witnesses", "stopping_profile", "success_probability",
    "unitarity_residual", "unitary_eig", "validate",
    "verify_reflection_factorization", "verify_witnesses",
    "zero_phase_overlap",
]
