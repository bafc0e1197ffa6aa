"""Fixed-step integration of ``i d|psi>/dt = H(t)|psi>`` (hbar = 1).

Two schemes are provided. ``exp_midpoint`` multiplies exact exponentials of
the midpoint Hamiltonian and is unitary per step; ``rk4`` is the classic
fourth-order Runge-Kutta method. The stepping loops live in :mod:`hiqe.kernels`.

A Hamiltonian is any callable ``t -> (d, d) array``. Objects that also define
``sample(times) -> (K, d, d)`` are sampled in one vectorized call. An
:class:`EmbeddedHamiltonian` (a 2x2 generator acting inside a two-dimensional
subspace of a larger space) is integrated in O(d) work per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .linalg import DimensionError, NORM_TOL, dagger, hermitian_defect, pauli_compose, pauli_components

METHODS = ("rk4", "exp_midpoint")
HERMITIAN_SAMPLE_TOL = 1e-8


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "exp_midpoint"
    steps: int = 4096
    record_every: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown integrator {self.method!r}; choose from {METHODS}")
        if int(self.steps) != self.steps or self.steps < 16:
            raise ValueError("steps must be an integer >= 16")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError("record_every must be a positive integer")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))


class PauliHamiltonian:
    """2x2 Hamiltonian given by vectorized Pauli-coefficient functions.

    ``coefficients(times)`` returns the four arrays ``(omega0, wx, wy, wz)``.
    """

    def __init__(self, coefficients: Callable):
        self.coefficients = coefficients

    def sample(self, times):
        times = np.asarray(times, dtype=np.float64)
        return pauli_compose(*self.coefficients(times))

    def __call__(self, t):
        return self.sample(np.asarray([t], dtype=np.float64))[0]


class ConstantHamiltonian:
    def __init__(self, h):
        self.h = np.asarray(h, dtype=np.complex128)

    def sample(self, times):
        return np.broadcast_to(self.h, (len(times),) + self.h.shape).copy()

    def __call__(self, t):
        return self.h.copy()


class EmbeddedHamiltonian:
    """A 2x2 generator ``block`` acting on ``span(isometry columns)``.

    As a dense operator this is ``V h(t) V^dagger``; it vanishes on the
    orthogonal complement.
    """

    def __init__(self, block, isometry):
        v = np.ascontiguousarray(isometry, dtype=np.complex128)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DimensionError("isometry must have shape (dim, 2)")
        self.block = block
        self.isometry = v

    @property
    def dim(self) -> int:
        return self.isometry.shape[0]

    def sample_block(self, times):
        return sample_hamiltonian(self.block, times)

    def sample(self, times):
        v = self.isometry
        return v @ self.sample_block(times) @ dagger(v)

    def __call__(self, t):
        return self.sample(np.asarray([t], dtype=np.float64))[0]


def sample_hamiltonian(h_of_t, times) -> np.ndarray:
    times = np.asarray(times, dtype=np.float64)
    if hasattr(h_of_t, "sample"):
        hs = np.asarray(h_of_t.sample(times), dtype=np.complex128)
    else:
        hs = np.stack([np.asarray(h_of_t(t), dtype=np.complex128) for t in times])
    if not np.all(np.isfinite(hs)):
        raise IntegrationError("Hamiltonian sample is not finite")
    defect = hermitian_defect(hs)
    if defect > HERMITIAN_SAMPLE_TOL:
        raise IntegrationError(f"Hamiltonian sample is not Hermitian (max deviation {defect:.3e})")
    return np.ascontiguousarray(hs)


def su2_exponential(hs, dt) -> np.ndarray:
    """Exact ``exp(-i H dt)`` for a stack of 2x2 Hermitian ``H``.

    Uses ``exp(-i(a + b n.sigma)dt) = e^{-i a dt}(cos(|b|dt) - i sin(|b|dt) n.sigma)``.
    """
    comps = pauli_components(hs) * 0.5
    a = comps[..., 0]
    b = comps[..., 1:]
    norm_b = np.linalg.norm(b, axis=-1)
    angle = norm_b * dt
    # sin(angle)/|b| with the removable singularity at |b| = 0
    safe = np.where(norm_b > 0.0, norm_b, 1.0)
    sinc = np.where(norm_b > 0.0, np.sin(angle) / safe, dt)
    c = np.cos(angle)
    out = np.empty(hs.shape, dtype=np.complex128)
    out[..., 0, 0] = c - 1j * sinc * b[..., 2]
    out[..., 1, 1] = c + 1j * sinc * b[..., 2]
    out[..., 0, 1] = -1j * sinc * (b[..., 0] - 1j * b[..., 1])
    out[..., 1, 0] = -1j * sinc * (b[..., 0] + 1j * b[..., 1])
    return np.exp(-1j * a * dt)[..., None, None] * out


def hermitian_exponential(h, dt) -> np.ndarray:
    """``exp(-i H dt)`` for a Hermitian matrix of any size."""
    if h.shape[-1] == 2:
        return su2_exponential(h, dt)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * dt)[..., None, :]) @ dagger(v)


def _grid(tau, cfg):
    if not (np.isfinite(tau) and tau > 0):
        raise ValueError("tau must be positive")
    n = cfg.steps
    dt = tau / n
    times = np.linspace(0.0, tau, n + 1)
    if cfg.method == "exp_midpoint":
        nodes = (times[:-1] + times[1:]) / 2
    else:
        nodes = np.linspace(0.0, tau, 2 * n + 1)
    return times, nodes, dt


def _record_times(times, n_steps, record_every):
    idx = np.arange(0, n_steps + 1, record_every)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    return times[idx]


def _integrate_block(h_of_t, x0, tau, cfg, record_every):
    """Integrate a ``(d, m)`` block; returns record times and ``(R, d, m)`` states."""
    times, nodes, dt = _grid(tau, cfg)
    d = x0.shape[0]
    if d == 2 or cfg.method == "rk4":
        hs = sample_hamiltonian(h_of_t, nodes)
        if hs.shape[1:] != (d, d):
            raise DimensionError(f"Hamiltonian has shape {hs.shape[1:]}, state has dim {d}")
        if cfg.method == "exp_midpoint":
            states = kernels.evolve_block(np.ascontiguousarray(su2_exponential(hs, dt)), x0, record_every)
        else:
            states = kernels.rk4_block(hs, x0, dt, record_every)
    else:
        # dense d > 2: one eigendecomposition per step, numpy does the work
        x = x0.copy()
        records = [x.copy()]
        for k, t in enumerate(nodes, start=1):
            h = sample_hamiltonian(h_of_t, [t])[0]
            if h.shape != (d, d):
                raise DimensionError(f"Hamiltonian has shape {h.shape}, state has dim {d}")
            x = hermitian_exponential(h, dt) @ x
            if k % record_every == 0 or k == cfg.steps:
                records.append(x.copy())
        states = np.stack(records)
    if not np.all(np.isfinite(states)):
        raise IntegrationError("integration produced non-finite amplitudes")
    return _record_times(times, cfg.steps, record_every), states


def _integrate_embedded(h: EmbeddedHamiltonian, psi0, tau, cfg):
    times, nodes, dt = _grid(tau, cfg)
    blocks = h.sample_block(nodes)
    if blocks.shape[1:] != (2, 2):
        raise DimensionError("embedded block must be 2x2")
    if cfg.method == "exp_midpoint":
        steps = np.ascontiguousarray(su2_exponential(blocks, dt))
        states = kernels.evolve_embedded(steps, h.isometry, psi0, cfg.record_every)
    else:
        states = kernels.rk4_embedded(blocks, h.isometry, psi0, dt, cfg.record_every)
    if not np.all(np.isfinite(states)):
        raise IntegrationError("integration produced non-finite amplitudes")
    return _record_times(times, cfg.steps, cfg.record_every), states


def propagate(h_of_t, psi0, tau: float, cfg: IntegratorConfig | None = None) -> Trajectory:
    cfg = cfg or IntegratorConfig()
    psi0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    if psi0.ndim != 1:
        raise DimensionError("initial state must be a vector")
    if abs(np.linalg.norm(psi0) ** 2 - 1.0) > NORM_TOL:
        raise ValueError("initial state is not normalized")
    if isinstance(h_of_t, EmbeddedHamiltonian):
        if h_of_t.dim != psi0.shape[0]:
            raise DimensionError(f"Hamiltonian dim {h_of_t.dim} does not match state dim {psi0.shape[0]}")
        times, states = _integrate_embedded(h_of_t, psi0, tau, cfg)
    else:
        times, states = _integrate_block(h_of_t, psi0[:, None], tau, cfg, cfg.record_every)
        states = states[:, :, 0]
    norms = np.linalg.norm(states, axis=1)
    return Trajectory(times=times, states=states, norms=norms)


def propagator(h_of_t, tau: float, cfg: IntegratorConfig | None = None, dim: int = 2) -> np.ndarray:
    """Time-ordered solution operator over ``[0, tau]``.

    ``dim`` is needed only for plain callables of dimension other than 2.
    """
    cfg = cfg or IntegratorConfig()
    if isinstance(h_of_t, EmbeddedHamiltonian):
        reduced = propagator(h_of_t.block, tau, cfg)
        v = h_of_t.isometry
        return np.eye(h_of_t.dim, dtype=np.complex128) + v @ (reduced - np.eye(2)) @ dagger(v)
    eye = np.eye(dim, dtype=np.complex128)
    _, states = _integrate_block(h_of_t, eye, tau, cfg, cfg.steps)
    return states[-1]


def population(trajectory: Trajectory, basis_state) -> np.ndarray:
    b = np.asarray(basis_state, dtype=np.complex128)
    if b.ndim != 1 or b.shape[0] != trajectory.states.shape[1]:
        raise DimensionError("basis state dimension does not match the trajectory")
    return np.clip(np.abs(trajectory.states @ np.conj(b)) ** 2, 0.0, 1.0)
