"""End-to-end Deutsch and Grover runs built from designed unitary paths."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .dynamics import IntegratorConfig, PauliHamiltonian, population, propagate, propagator
from .extraction import ExtractionConfig, PathHamiltonian, path_hamiltonian
from .linalg import KET_0, KET_MINUS, KET_PLUS, fidelity
from .schedules import BoundarySpec, Schedule, check_boundaries
from .synthesis import FrameParams, UnitaryPath, validate_path

DEUTSCH_MODES = ("phase_ramp", "rotation_paper_literal")
THETA_MODES = ("constant", "linear")
MAX_QUBITS = 10


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class BooleanFunction:
    f0: int
    f1: int

    def __post_init__(self):
        if self.f0 not in (0, 1) or self.f1 not in (0, 1):
            raise ProtocolError("function values must be bits")

    @classmethod
    def parse(cls, text: str) -> "BooleanFunction":
        """Accept ``"01"``, ``"0,1"`` or ``"0 1"``."""
        bits = [c for c in str(text) if c in "01"]
        if len(bits) != 2 or any(c not in "01, " for c in str(text)):
            raise ProtocolError(f"cannot parse boolean function from {text!r}")
        return cls(int(bits[0]), int(bits[1]))

    @property
    def is_constant(self) -> bool:
        return self.f0 == self.f1

    @property
    def is_balanced(self) -> bool:
        return not self.is_constant

    @property
    def label(self) -> str:
        return f"{self.f0}{self.f1}"


@dataclass
class DeutschReport:
    mode: str
    f: str
    final_state: np.ndarray
    p_plus: float
    p_minus: float
    verdict: str
    verdict_correct: bool
    hadamard_fidelity: float
    oracle_identity_at_zero: bool
    output_state_fidelity: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["final_state"] = [[float(z.real), float(z.imag)] for z in self.final_state]
        return d


@dataclass(frozen=True)
class GroverInstance:
    n_qubits: int
    marked_index: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ProtocolError(f"n_qubits must lie in [1, {MAX_QUBITS}]")
        if not 0 <= self.marked_index < self.N:
            raise ProtocolError(f"marked_index {self.marked_index} out of range for N={self.N}")

    @property
    def N(self) -> int:
        return 2**self.n_qubits

    def marked_state(self) -> np.ndarray:
        v = np.zeros(self.N, dtype=np.complex128)
        v[self.marked_index] = 1.0
        return v

    def unmarked_state(self) -> np.ndarray:
        v = np.full(self.N, 1.0 / math.sqrt(self.N - 1), dtype=np.complex128)
        v[self.marked_index] = 0.0
        return v

    def input_state(self) -> np.ndarray:
        return np.full(self.N, 1.0 / math.sqrt(self.N), dtype=np.complex128)


@dataclass
class GroverReport:
    N: int
    alpha: float
    theta_tau: float
    epsilon: float
    predicted_p: float
    integrated_p: float
    mode: str
    theta_mode: str
    p_initial: float
    max_leakage: float = 0.0
    p_trajectory: Optional[list] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return asdict(self)


def hadamard_hamiltonian(phi: Schedule) -> PauliHamiltonian:
    """``phi'(t)/(2 sqrt 2) (sigma_z + sigma_x)``, i.e. ``wx = wz = phi'/sqrt 2``."""

    def coeffs(t):
        w = phi.derivative(t) / math.sqrt(2)
        zero = np.zeros_like(t)
        return zero, w, zero, w

    return PauliHamiltonian(coeffs)


def hadamard_step(tau: float, phi_schedule: Schedule, cfg: IntegratorConfig | None = None):
    """Drive ``|0>`` with the Hadamard Hamiltonian; returns (state, fidelity to ``|+>``)."""
    if not check_boundaries(phi_schedule, BoundarySpec(0.0, math.pi)):
        raise ProtocolError("Hadamard schedule must satisfy phi(0) = 0 and phi(tau) = pi")
    if phi_schedule.tau != tau:
        raise ProtocolError("schedule tau does not match the run tau")
    traj = propagate(hadamard_hamiltonian(phi_schedule), KET_0, tau, cfg)
    state = traj.final_state
    return state, fidelity(state, KET_PLUS)


def deutsch_oracle_path(f: BooleanFunction, tau: float, mode: str = "phase_ramp") -> UnitaryPath:
    """Unitary path implementing the phase oracle ``|n> -> (-1)^f(n) |n>``.

    ``phase_ramp`` keeps the frame fixed and ramps each phase from 0 to
    ``pi f(n)``, so ``U(0) = 1``. ``rotation_paper_literal`` holds the phases
    at ``pi f(n)`` and rotates ``theta`` from 0 to ``pi``.
    """
    zero = Schedule.constant(0.0, tau)
    if mode == "phase_ramp":
        return UnitaryPath(
            FrameParams(zero, zero),
            Schedule.linear(0.0, math.pi * f.f0, tau),
            Schedule.linear(0.0, math.pi * f.f1, tau),
        )
    if mode == "rotation_paper_literal":
        return UnitaryPath(
            FrameParams(Schedule.linear(0.0, math.pi, tau), zero),
            Schedule.constant(math.pi * f.f0, tau),
            Schedule.constant(math.pi * f.f1, tau),
        )
    raise ProtocolError(f"unknown Deutsch mode {mode!r}; choose from {DEUTSCH_MODES}")


def deutsch_run(f: BooleanFunction, tau: float = 1.0, cfg: IntegratorConfig | None = None,
                mode: str = "phase_ramp", extraction: ExtractionConfig | None = None) -> DeutschReport:
    if mode not in DEUTSCH_MODES:
        raise ProtocolError(f"unknown Deutsch mode {mode!r}; choose from {DEUTSCH_MODES}")
    if not (math.isfinite(tau) and tau > 0):
        raise ProtocolError("tau must be positive")
    cfg = cfg or IntegratorConfig()
    path = deutsch_oracle_path(f, tau, mode)
    at_zero = validate_path(path).identity_at_zero
    if mode == "phase_ramp" and not at_zero:
        raise ProtocolError("phase_ramp oracle path must start at the identity")

    plus_state, had_fid = hadamard_step(tau, Schedule.linear(0.0, math.pi, tau), cfg)
    final = propagate(PathHamiltonian(path, extraction), plus_state, tau, cfg).final_state
    p_plus, p_minus = fidelity(final, KET_PLUS), fidelity(final, KET_MINUS)
    total = p_plus + p_minus
    p_plus, p_minus = p_plus / total, p_minus / total
    verdict = "constant" if p_plus >= p_minus else "balanced"
    expected = np.array([(-1) ** f.f0, (-1) ** f.f1]) / math.sqrt(2)
    return DeutschReport(
        mode=mode,
        f=f.label,
        final_state=final,
        p_plus=p_plus,
        p_minus=p_minus,
        verdict=verdict,
        verdict_correct=(verdict == "constant") == f.is_constant,
        hadamard_fidelity=had_fid,
        oracle_identity_at_zero=at_zero,
        output_state_fidelity=fidelity(final, expected),
    )


def grover_alpha(N: int) -> float:
    if N < 2:
        raise ProtocolError("N must be at least 2")
    return math.asin(1.0 / math.sqrt(N))


def grover_target_angle(N: int, a: int = 0) -> float:
    return (a + 0.5) * math.pi + grover_alpha(N)


def epsilon_probability_check(alpha: float, theta_tau: float):
    """Return ``(epsilon, sin^2(alpha - theta_tau), 1 - epsilon^2)``.

    ``epsilon = alpha - theta_tau - pi/2`` is reduced modulo pi into
    ``[-pi/2, pi/2)``, the branch on which the quadratic law applies.
    """
    eps = math.remainder(alpha - theta_tau - 0.5 * math.pi, math.pi)
    if eps == 0.5 * math.pi:
        eps = -eps
    eps += 0.0  # no negative zero in reports
    exact = math.sin(alpha - theta_tau) ** 2
    return eps, exact, 1.0 - eps * eps


def grover_path(theta_tau: float, tau: float, theta_mode: str = "constant", basis_labels=None) -> UnitaryPath:
    if theta_mode == "constant":
        theta = Schedule.constant(theta_tau, tau)
    elif theta_mode == "linear":
        theta = Schedule.linear(0.0, theta_tau, tau)
    else:
        raise ProtocolError(f"unknown theta mode {theta_mode!r}; choose from {THETA_MODES}")
    frame = FrameParams(theta, Schedule.constant(0.0, tau))
    return UnitaryPath.gauge(frame, Schedule.linear(0.0, math.pi, tau), basis_labels)


def grover_reduced_run(N: int, theta_tau: float, tau: float = 1.0, cfg: IntegratorConfig | None = None,
                       theta_mode: str = "constant", extraction: ExtractionConfig | None = None) -> GroverReport:
    """Two-level Grover run in the ordered basis ``(|m_perp>, |m>)``."""
    alpha = grover_alpha(N)
    path = grover_path(theta_tau, tau, theta_mode)
    psi0 = np.array([math.cos(alpha), math.sin(alpha)], dtype=np.complex128)
    traj = propagate(PathHamiltonian(path, extraction), psi0, tau, cfg)
    eps, predicted, _ = epsilon_probability_check(alpha, theta_tau)
    return GroverReport(
        N=N,
        alpha=alpha,
        theta_tau=theta_tau,
        epsilon=eps,
        predicted_p=predicted,
        integrated_p=min(1.0, float(abs(traj.final_state[1]) ** 2)),
        mode="reduced",
        theta_mode=theta_mode,
        p_initial=float(abs(psi0[1]) ** 2),
    )


def grover_full_run(inst: GroverInstance, theta_tau: float, tau: float = 1.0, cfg: IntegratorConfig | None = None,
                    theta_mode: str = "constant", extraction: ExtractionConfig | None = None) -> GroverReport:
    """Grover run on the full ``N = 2^n`` register starting from the uniform superposition."""
    marked, unmarked = inst.marked_state(), inst.unmarked_state()
    path = grover_path(theta_tau, tau, theta_mode, basis_labels=(unmarked, marked))
    ham = path_hamiltonian(path, extraction)
    traj = propagate(ham, inst.input_state(), tau, cfg)
    p_m = population(traj, marked)
    v = path.isometry()
    outside = traj.states - (traj.states @ np.conj(v)) @ v.T
    leakage = np.sum(np.abs(outside) ** 2, axis=1)
    alpha = grover_alpha(inst.N)
    eps, predicted, _ = epsilon_probability_check(alpha, theta_tau)
    return GroverReport(
        N=inst.N,
        alpha=alpha,
        theta_tau=theta_tau,
        epsilon=eps,
        predicted_p=predicted,
        integrated_p=float(p_m[-1]),
        mode="full_register",
        theta_mode=theta_mode,
        p_initial=float(p_m[0]),
        max_leakage=float(np.max(leakage)),
        p_trajectory=[float(p) for p in p_m],
    )


def oracle_propagator(f: BooleanFunction, tau: float, mode: str, cfg: IntegratorConfig | None = None,
                      extraction: ExtractionConfig | None = None) -> np.ndarray:
    """Time-ordered propagator of the finite-difference oracle Hamiltonian."""
    return propagator(PathHamiltonian(deutsch_oracle_path(f, tau, mode), extraction), tau, cfg)
