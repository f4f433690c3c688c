"""Finite imaginary-time evolution for diagonal Pauli-Z PUBO Hamiltonians."""
from .errors import ResourceError, UnreachableError, ValidationError
from .pauli_model import (
    PauliHamiltonian,
    PauliTerm,
    PuboPolynomial,
    Spectrum,
    energy,
    l1_norm,
    limit_projector_rank,
    maxcut_hamiltonian,
    spectrum,
    to_hamiltonian,
)
from .state_prep import (
    QuantumState,
    WarmStartSpec,
    ground_overlap,
    uniform_state,
    warm_overlap_closed_form,
    warm_start,
)
from .lcu_engine import analytic_outcome, build_lcu_program, run_gate_level, sample_shots
from .fpaa_engine import amplify, amplify_lcu, analytic_pl, chebyshev_t, phase_schedule
from .planner import beta_star, envelope, gap_bound_f, make_plan, plan_queries

BENCHMARK_MAXCUT_EDGES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]

__version__ = "0.1.0"
