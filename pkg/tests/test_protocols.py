import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from hiqe.dynamics import IntegratorConfig
from hiqe.extraction import closed_form_deutsch, hamiltonian_fd
from hiqe.linalg import KET_PLUS, fidelity, pauli_decompose
from hiqe.protocols import (
    BooleanFunction,
    GroverInstance,
    ProtocolError,
    deutsch_oracle_path,
    deutsch_run,
    epsilon_probability_check,
    grover_alpha,
    grover_full_run,
    grover_reduced_run,
    grover_target_angle,
    hadamard_step,
    oracle_propagator,
)
from hiqe.schedules import Schedule

PI = math.pi
ALL_F = [BooleanFunction(a, b) for a in (0, 1) for b in (0, 1)]


def test_boolean_function():
    f = BooleanFunction.parse("01")
    assert f == BooleanFunction.parse("0,1") == BooleanFunction(0, 1)
    assert f.is_balanced and not f.is_constant and f.label == "01"
    assert BooleanFunction(1, 1).is_constant
    for bad in ("2", "012", "a,b"):
        with pytest.raises(ProtocolError):
            BooleanFunction.parse(bad)
    with pytest.raises(ProtocolError):
        BooleanFunction(0, 2)


@pytest.mark.parametrize("phi", [Schedule.linear(0, PI, 1.0), Schedule.smooth(0, PI, 1.0)])
def test_hadamard_step(phi):
    state, fid = hadamard_step(1.0, phi)
    assert fid >= 1 - 1e-10
    assert fidelity(state, KET_PLUS) == fid


def test_hadamard_step_boundary_violation():
    with pytest.raises(ProtocolError):
        hadamard_step(1.0, Schedule.linear(0, PI / 2, 1.0))


@pytest.mark.parametrize("f", ALL_F, ids=lambda f: f.label)
def test_deutsch_phase_ramp(f):
    report = deutsch_run(f)
    assert report.verdict_correct
    assert report.verdict == ("constant" if f.is_constant else "balanced")
    assert max(report.p_plus, report.p_minus) >= 1 - 1e-8
    assert abs(report.p_plus + report.p_minus - 1) <= 1e-10
    assert report.output_state_fidelity >= 1 - 1e-8
    assert report.oracle_identity_at_zero


@pytest.mark.parametrize("f", ALL_F, ids=lambda f: f.label)
def test_phase_ramp_oracle_is_diagonal(f):
    path = deutsch_oracle_path(f, 1.0)
    for t in np.linspace(0, 1, 11):
        c = pauli_decompose(hamiltonian_fd(path, t))
        assert abs(c.omega_x) <= 1e-8 and abs(c.omega_y) <= 1e-8


@pytest.mark.parametrize("f", [BooleanFunction(0, 1), BooleanFunction(1, 0)], ids=lambda f: f.label)
def test_rotation_paper_literal_balanced(f):
    u = oracle_propagator(f, 1.0, "rotation_paper_literal")
    assert np.max(np.abs(u + np.eye(2))) <= 1e-6
    report = deutsch_run(f, mode="rotation_paper_literal")
    assert not report.oracle_identity_at_zero
    assert report.verdict == "constant"
    assert not report.verdict_correct
    assert fidelity(report.final_state, KET_PLUS) >= 1 - 1e-8


@pytest.mark.parametrize("f", ALL_F, ids=lambda f: f.label)
def test_deutsch_paper_literal_closed_form_vanishes(f):
    path = deutsch_oracle_path(f, 1.0, "rotation_paper_literal")
    c = closed_form_deutsch(path.frame, f.f0, f.f1, 0.5, "paper_literal")
    assert (c.omega_x, c.omega_y, c.omega_z) == (0.0, 0.0, 0.0)


def test_deutsch_errors():
    with pytest.raises(ProtocolError):
        deutsch_run(BooleanFunction(0, 0), mode="quantum")
    with pytest.raises(ProtocolError):
        deutsch_run(BooleanFunction(0, 0), tau=0.0)


@pytest.mark.parametrize("n, expected", [(2, PI / 4), (4, PI / 6)])
def test_grover_alpha(n, expected):
    assert grover_alpha(n) == pytest.approx(expected, abs=1e-15)
    assert grover_alpha(n) == pytest.approx(math.acos(math.sqrt((n - 1) / n)), abs=1e-15)


def test_grover_alpha_large_n():
    assert grover_alpha(10**6) == pytest.approx(1e-3, rel=1e-6)
    with pytest.raises(ProtocolError):
        grover_alpha(1)


def test_grover_target_angle():
    assert grover_target_angle(4, 0) == pytest.approx(2 * PI / 3, abs=1e-15)
    assert grover_target_angle(2, 1) == pytest.approx(7 * PI / 4, abs=1e-15)
    assert abs(grover_target_angle(2**40, 0) - PI / 2) < 1e-6
    with pytest.raises(ProtocolError):
        grover_target_angle(1)


@pytest.mark.parametrize("eps", [0.0, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3])
def test_epsilon_law(eps):
    alpha = grover_alpha(16)
    e, exact, quad = epsilon_probability_check(alpha, alpha - PI / 2 - eps)
    assert e == pytest.approx(eps, abs=1e-15)
    assert abs(exact - quad) <= eps**4 + 1e-15


def test_epsilon_examples():
    e, exact, quad = epsilon_probability_check(0.0, -PI / 2)
    assert e == 0.0 and exact == pytest.approx(1.0) and quad == 1.0
    e, exact, quad = epsilon_probability_check(0.1, -PI / 2)
    assert exact == pytest.approx(math.cos(0.1) ** 2, abs=1e-15)
    assert abs(exact - 0.99) <= 1e-4


@settings(max_examples=100)
@given(st.floats(0, PI / 2), st.floats(-20, 20))
def test_epsilon_branch(alpha, theta_tau):
    e, exact, _ = epsilon_probability_check(alpha, theta_tau)
    assert -PI / 2 <= e < PI / 2
    assert abs(math.cos(e) ** 2 - exact) <= 1e-12


def test_grover_reduced_examples():
    r = grover_reduced_run(4, 2 * PI / 3)
    assert r.predicted_p == pytest.approx(1.0, abs=1e-15)
    assert abs(r.integrated_p - 1.0) <= 1e-8
    assert r.epsilon == pytest.approx(0.0, abs=1e-15)
    r = grover_reduced_run(4, PI / 6)
    assert abs(r.integrated_p) <= 1e-8
    for n in (2, 16):
        r = grover_reduced_run(n, 0.0)
        assert abs(r.integrated_p - 1 / n) <= 1e-12
        assert r.p_initial == pytest.approx(1 / n, abs=1e-15)


@pytest.mark.parametrize("theta_mode", ["constant", "linear"])
def test_grover_law_sample(theta_mode):
    for n in (2, 1024):
        for k in (0, 5, 11, 19):
            r = grover_reduced_run(n, k * PI / 12, theta_mode=theta_mode)
            assert r.predicted_p == math.sin(r.alpha - r.theta_tau) ** 2
            assert abs(r.integrated_p - r.predicted_p) <= 1e-6


def test_grover_instance_validation():
    inst = GroverInstance(3, 5)
    assert inst.N == 8
    assert abs(np.vdot(inst.marked_state(), inst.unmarked_state())) == 0.0
    assert_allclose(inst.input_state(), np.full(8, 1 / math.sqrt(8)))
    for bad in ((3, 8), (3, -1), (0, 0), (11, 0)):
        with pytest.raises(ProtocolError):
            GroverInstance(*bad)


def test_grover_full_example():
    r = grover_full_run(GroverInstance(2, 3), 2 * PI / 3)
    assert abs(r.integrated_p - 1.0) <= 1e-6
    assert abs(r.p_initial - 0.25) <= 1e-12
    assert r.max_leakage <= 1e-10
    assert r.p_trajectory[0] == r.p_initial and r.p_trajectory[-1] == r.integrated_p


def test_reduced_full_equivalence(rng):
    cfg = IntegratorConfig(steps=512, record_every=64)
    for n in range(1, 9):
        for m in rng.choice(2**n, size=min(5, 2**n), replace=False):
            inst = GroverInstance(n, int(m))
            target = grover_target_angle(inst.N) if n > 1 else 0.9
            full = grover_full_run(inst, target, cfg=cfg)
            reduced = grover_reduced_run(inst.N, target, cfg=cfg)
            assert abs(full.integrated_p - reduced.integrated_p) <= 1e-6
            assert full.max_leakage <= 1e-10
            assert abs(full.p_initial - 1 / inst.N) <= 1e-12


def test_grover_linear_theta_full_register():
    inst = GroverInstance(3, 6)
    r = grover_full_run(inst, grover_target_angle(8), theta_mode="linear")
    assert r.integrated_p >= 1 - r.epsilon**2 - 1e-9
    assert abs(r.integrated_p - 1) <= 1e-6


def test_reports_serialize():
    d = grover_reduced_run(4, 2 * PI / 3).to_dict()
    assert d["mode"] == "reduced" and d["N"] == 4
    d = deutsch_run(BooleanFunction(1, 0)).to_dict()
    assert d["verdict"] == "balanced" and d["f"] == "10"
