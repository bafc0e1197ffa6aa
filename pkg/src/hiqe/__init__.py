"""Hamiltonian inverse engineering for single-qubit gates, Deutsch and Grover.

Design a unitary path ``U(t)`` from parameter schedules, recover the
Hamiltonian ``H = i dU/dt U^dagger`` and integrate it back to confirm the
designed dynamics.
"""

from .dynamics import IntegratorConfig, Trajectory, population, propagate, propagator
from .extraction import (
    ExtractionConfig,
    PathHamiltonian,
    closed_form_deutsch,
    closed_form_eq8,
    closed_form_grover,
    coefficient_series,
    hamiltonian_fd,
    path_hamiltonian,
)
from .kernels import BACKEND
from .linalg import (
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    PauliCoefficients,
    apply,
    dagger,
    fidelity,
    matmul,
    pauli_decompose,
)
from .protocols import (
    BooleanFunction,
    GroverInstance,
    deutsch_run,
    epsilon_probability_check,
    grover_alpha,
    grover_full_run,
    grover_reduced_run,
    grover_target_angle,
    hadamard_step,
)
from .schedules import BoundarySpec, Schedule, check_boundaries
from .synthesis import FrameParams, UnitaryPath, evolved_amplitudes, frame_states, unitary_at, validate_path

__version__ = "0.1.0"
