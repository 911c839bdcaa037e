# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Exact statevector simulation of the quantum linear system solver.

The pipeline prepares the right-hand side through a vector oracle, runs phase
estimation of `exp(iH·t0/T)` with an exact or product formula backend,
rotates an ancilla by `C/λ̃`, and uncomputes the clock. Readout happens
through the swap test, amplitude estimation, moments of diagonal observables
and single entries of the solution.
"""

from ._evolution import (
    Evolution,
    ExactEvolution,
    TrotterEvolution,
    evolve_exact,
    evolve_trotter,
    exponential_count,
    exponentials_per_step,
    suzuki_exponential_bound,
)
from ._oracles import (
    DilatedProblem,
    VectorOracle,
    embed_system,
    load_vector,
    prepare_dilated_oracles,
    prepare_entangled_state,
)
from ._phase_estimation import (
    ControlledUnitary,
    HamiltonianUnitary,
    grid_eigenvalues,
    phase_estimation,
    signed_clock_values,
)
from ._qlsa import (
    Backend,
    QlsaDiagnostics,
    QlsaParams,
    QlsaResult,
    eigenvalue_inversion,
    make_evolution,
    run_qlsa,
    solution_component,
    solution_fidelity,
    solution_vector,
)
from ._readout import (
    AmplitudeEstimate,
    PipelineAmplitudes,
    amplitude_estimate,
    entry_probability,
    estimate_amplitudes,
    estimate_pipeline_amplitudes,
    estimation_bound,
    grover_amplitude_estimate,
    moment_estimate,
    solution_entry,
    swap_test,
)
from ._registers import QueryCounter, Register, RegisterLayout, StateVector

__all__ = [
    "AmplitudeEstimate",
    "Backend",
    "ControlledUnitary",
    "DilatedProblem",
    "Evolution",
    "ExactEvolution",
    "HamiltonianUnitary",
    "PipelineAmplitudes",
    "QlsaDiagnostics",
    "QlsaParams",
    "QlsaResult",
    "QueryCounter",
    "Register",
    "RegisterLayout",
    "StateVector",
    "TrotterEvolution",
    "VectorOracle",
    "amplitude_estimate",
    "eigenvalue_inversion",
    "embed_system",
    "entry_probability",
    "estimate_amplitudes",
    "estimate_pipeline_amplitudes",
    "estimation_bound",
    "evolve_exact",
    "evolve_trotter",
    "exponential_count",
    "exponentials_per_step",
    "grid_eigenvalues",
    "grover_amplitude_estimate",
    "load_vector",
    "make_evolution",
    "moment_estimate",
    "phase_estimation",
    "prepare_dilated_oracles",
    "prepare_entangled_state",
    "run_qlsa",
    "signed_clock_values",
    "solution_component",
    "solution_entry",
    "solution_fidelity",
    "solution_vector",
    "suzuki_exponential_bound",
    "swap_test",
]
