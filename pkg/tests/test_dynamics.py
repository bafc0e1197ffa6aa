import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from hiqe.dynamics import (
    ConstantHamiltonian,
    EmbeddedHamiltonian,
    IntegrationError,
    IntegratorConfig,
    PauliHamiltonian,
    hermitian_exponential,
    population,
    propagate,
    propagator,
    su2_exponential,
)
from hiqe.extraction import path_hamiltonian
from hiqe.linalg import DimensionError, KET_0, KET_1, KET_MINUS, KET_PLUS, SIGMA_Y, fidelity
from hiqe.protocols import hadamard_hamiltonian
from hiqe.schedules import Schedule
from hiqe.synthesis import UnitaryPath, unitary_at

from conftest import random_hermitian, random_path

PI = math.pi
TAU = 1.0


def test_zero_hamiltonian_is_identity():
    h = ConstantHamiltonian(np.zeros((2, 2)))
    traj = propagate(h, KET_PLUS, TAU)
    assert np.array_equal(traj.final_state, KET_PLUS)
    assert np.array_equal(propagator(h, TAU), np.eye(2))


@pytest.mark.parametrize("method", ["exp_midpoint", "rk4"])
def test_sigma_y_half_turn(method):
    traj = propagate(ConstantHamiltonian(PI / TAU * SIGMA_Y), KET_PLUS, TAU, IntegratorConfig(method))
    assert_allclose(traj.final_state, -KET_PLUS, atol=1e-10)
    assert fidelity(traj.final_state, KET_PLUS) >= 1 - 1e-12
    assert fidelity(traj.final_state, KET_MINUS) <= 1e-12


def test_hadamard_generator():
    h = hadamard_hamiltonian(Schedule.linear(0, PI, TAU))
    traj = propagate(h, KET_0, TAU)
    assert fidelity(traj.final_state, KET_PLUS) >= 1 - 1e-10
    assert abs(population(traj, KET_1)[-1] - 0.5) <= 1e-10


def test_trajectory_shape_and_records():
    h = ConstantHamiltonian(SIGMA_Y)
    traj = propagate(h, KET_0, 2.0, IntegratorConfig(steps=100, record_every=7))
    assert traj.times[0] == 0.0 and traj.times[-1] == 2.0
    assert np.all(np.diff(traj.times) > 0)
    assert len(traj.times) == len(traj.states) == len(traj.norms) == 16
    assert traj.max_norm_drift <= 1e-12
    assert population(traj, KET_0)[-1] < 1.0


def test_population_examples():
    traj = propagate(ConstantHamiltonian(np.zeros((2, 2))), KET_0, TAU, IntegratorConfig(steps=16))
    assert np.all(population(traj, KET_0) == 1.0)
    with pytest.raises(DimensionError):
        population(traj, np.ones(3) / math.sqrt(3))


def test_population_grover_input():
    n = 8
    psi = np.ones(n, dtype=complex) / math.sqrt(n)
    traj = propagate(ConstantHamiltonian(np.zeros((n, n))), psi, TAU, IntegratorConfig(steps=16))
    mark = np.zeros(n)
    mark[5] = 1
    assert abs(population(traj, mark)[0] - 1 / n) <= 1e-12


def test_constant_hamiltonian_propagator_vs_expm(rng):
    for dim in (2, 3, 5):
        for _ in range(5):
            h = random_hermitian(rng, dim, scale=3.0)
            exact = scipy.linalg.expm(-1j * h * TAU)
            got = propagator(ConstantHamiltonian(h), TAU, IntegratorConfig(steps=64), dim=dim)
            assert np.max(np.abs(got - exact)) <= 1e-10


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.floats(1e-4, 3.0))
def test_su2_exponential_vs_expm(seed, dt):
    h = random_hermitian(np.random.default_rng(seed), scale=5.0)
    assert np.max(np.abs(su2_exponential(h[None], dt)[0] - scipy.linalg.expm(-1j * h * dt))) <= 1e-12


def test_su2_exponential_scalar_hamiltonian():
    h = 0.7 * np.eye(2)[None]
    assert_allclose(su2_exponential(h, 0.3)[0], np.exp(-0.21j) * np.eye(2), atol=1e-15)


def test_hermitian_exponential_dense(rng):
    h = random_hermitian(rng, 4)
    assert np.max(np.abs(hermitian_exponential(h, 0.5) - scipy.linalg.expm(-0.5j * h))) <= 1e-12


def test_errors():
    with pytest.raises(IntegrationError):
        propagate(lambda t: np.array([[0, 1], [0, 0]]), KET_0, TAU, IntegratorConfig(steps=16))
    with pytest.raises(IntegrationError):
        propagate(lambda t: np.full((2, 2), np.nan), KET_0, TAU, IntegratorConfig(steps=16))
    with pytest.raises(ValueError):
        propagate(ConstantHamiltonian(SIGMA_Y), np.array([1.0, 1.0]), TAU)
    with pytest.raises(DimensionError):
        propagate(ConstantHamiltonian(np.eye(3)), KET_0, TAU, IntegratorConfig(steps=16))
    with pytest.raises(ValueError):
        IntegratorConfig(steps=8)
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")
    with pytest.raises(ValueError):
        propagate(ConstantHamiltonian(SIGMA_Y), KET_0, -1.0)


def test_propagator_matches_propagate(rng):
    path = random_path(rng)
    h = path_hamiltonian(path)
    cfg = IntegratorConfig(steps=512)
    u = propagator(h, TAU, cfg)
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) <= 1e-8
    for psi in (KET_0, KET_1, KET_PLUS):
        assert np.max(np.abs(u @ psi - propagate(h, psi, TAU, cfg).final_state)) <= 1e-8


@pytest.mark.parametrize("identity_at_zero", [True, False])
def test_propagator_identity(rng, identity_at_zero):
    for _ in range(3):
        path = random_path(rng, identity_at_zero=identity_at_zero)
        u = propagator(path_hamiltonian(path), TAU)
        target = unitary_at(path, TAU) @ unitary_at(path, 0.0).conj().T
        assert np.max(np.abs(u - target)) <= 1e-6


def test_norm_drift(rng):
    path = random_path(rng)
    h = path_hamiltonian(path)
    assert propagate(h, KET_PLUS, TAU).max_norm_drift <= 1e-10
    assert propagate(h, KET_PLUS, TAU, IntegratorConfig("rk4")).max_norm_drift <= 1e-8
    # coefficient magnitudes of order 10 pi / tau
    strong = PauliHamiltonian(lambda t: (0 * t, 10 * PI * np.cos(t), 10 * PI * np.sin(3 * t), 0 * t + 5.0))
    assert propagate(strong, KET_0, TAU, IntegratorConfig("rk4")).max_norm_drift <= 1e-8


def test_methods_agree(rng):
    h = path_hamiltonian(random_path(rng))
    a = propagate(h, KET_0, TAU).final_state
    b = propagate(h, KET_0, TAU, IntegratorConfig("rk4")).final_state
    assert np.max(np.abs(a - b)) <= 1e-6


def embedded_pair(rng, dim):
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    base = random_path(rng)
    path = UnitaryPath(base.frame, base.phase1, base.phase2, basis_labels=(q[:, 0], q[:, 1]))
    return path, q


@pytest.mark.parametrize("method", ["exp_midpoint", "rk4"])
def test_embedded_matches_dense(rng, method):
    dim = 6
    path, q = embedded_pair(rng, dim)
    h = path_hamiltonian(path)
    assert isinstance(h, EmbeddedHamiltonian)
    psi0 = q @ (rng.normal(size=dim) + 1j * rng.normal(size=dim))
    psi0 /= np.linalg.norm(psi0)
    cfg = IntegratorConfig(method, steps=256, record_every=64)
    fast = propagate(h, psi0, TAU, cfg)
    # a plain callable takes the dense eigendecomposition / rk4 route
    dense = propagate(lambda t: h(t), psi0, TAU, cfg)
    assert np.array_equal(fast.times, dense.times)
    assert np.max(np.abs(fast.states - dense.states)) <= 1e-10
    full = propagator(h, TAU, IntegratorConfig(method, steps=256))
    assert np.max(np.abs(full @ psi0 - fast.final_state)) <= 1e-10


def test_embedded_complement_untouched(rng):
    dim = 5
    path, q = embedded_pair(rng, dim)
    traj = propagate(path_hamiltonian(path), q[:, 3], TAU, IntegratorConfig(steps=64))
    assert np.max(np.abs(traj.states - q[:, 3])) <= 1e-14
