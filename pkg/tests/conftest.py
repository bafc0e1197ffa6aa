import numpy as np
import pytest

from hiqe.schedules import Schedule
from hiqe.synthesis import FrameParams, UnitaryPath


@pytest.fixture
def rng():
    return np.random.default_rng(20180523)


def random_schedule(rng, tau, start=None, span=np.pi, kinds=("constant", "linear", "smooth", "polynomial")):
    """Random schedule; ``start`` pins the value at t=0 when given."""
    kind = kinds[rng.integers(len(kinds))]
    a = rng.uniform(-span, span) if start is None else start
    b = rng.uniform(-span, span)
    if kind == "constant":
        return Schedule.constant(a, tau)
    if kind == "polynomial":
        coeffs = [a] + list(rng.uniform(-span, span, size=rng.integers(1, 4)))
        return Schedule.polynomial(coeffs, tau)
    return Schedule(kind, (a, b), tau)


def random_path(rng, tau=1.0, identity_at_zero=True):
    """Random smooth path with moderate angular rates."""
    theta = random_schedule(rng, tau, kinds=("linear", "smooth"))
    omega = random_schedule(rng, tau, span=np.pi / 2, kinds=("constant", "linear", "smooth"))
    if identity_at_zero:
        p1 = random_schedule(rng, tau, start=0.0, kinds=("linear", "smooth"))
        p2 = random_schedule(rng, tau, start=0.0, kinds=("linear", "smooth"))
    else:
        p1 = random_schedule(rng, tau, start=rng.uniform(0.5, 2.5), kinds=("linear", "smooth"))
        p2 = random_schedule(rng, tau, start=-rng.uniform(0.5, 2.5), kinds=("linear", "smooth"))
    return UnitaryPath(FrameParams(theta, omega), p1, p2)


def random_hermitian(rng, dim=2, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in results.items():
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
