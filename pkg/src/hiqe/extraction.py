"""Recover the driving Hamiltonian ``H = i dU/dt U^dagger`` from a unitary path.

The finite-difference extractor is the reference. The closed-form
coefficient sets (general frame, Grover subspace, Deutsch oracle) are
evaluated verbatim and checked against it. Where a literal form disagrees
with the reference, a ``"corrected"`` convention is offered alongside the
``"paper_literal"`` one; see each function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import EmbeddedHamiltonian, PauliHamiltonian
from .linalg import PauliCoefficients, dagger, pauli_components
from .schedules import Schedule
from .synthesis import FrameParams, UnitaryPath, frame_states

SOURCES = ("finite_difference", "closed_form_eq8", "closed_form_grover", "closed_form_deutsch")
CONVENTIONS = ("paper_literal", "corrected")
DEFAULT_FD_FRACTION = 1e-5


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtractionConfig:
    fd_step: Optional[float] = None
    hermitize: bool = True

    def step_for(self, tau: float) -> float:
        h = DEFAULT_FD_FRACTION * tau if self.fd_step is None else float(self.fd_step)
        if not 0.0 < h < tau / 2:
            raise ExtractionError(f"fd_step must lie in (0, tau/2), got {h}")
        return h


@dataclass(frozen=True)
class CoefficientSample:
    t: float
    coeffs: PauliCoefficients
    source: str


def _check_times(times, tau):
    times = np.asarray(times, dtype=np.float64)
    if np.any(times < 0.0) or np.any(times > tau):
        raise ExtractionError(f"time outside [0, {tau!r}]")
    return times


def _projector(path: UnitaryPath, t) -> np.ndarray:
    v = frame_states(path.frame, t)[0]
    return v[..., :, None] * np.conj(v[..., None, :])


def _fd_batch(path: UnitaryPath, times, cfg: ExtractionConfig):
    """Finite-difference Hamiltonians for an array of times.

    Central second-order differences in the interior, second-order one-sided
    stencils within ``fd_step`` of either end. Returns ``(H, residue)`` where
    ``residue`` is the per-sample max entry of the anti-Hermitian part.

    Only the frame projector is differenced. With ``U = e^{i phi1}(P + e^{i d} Q)``,
    ``d = phi2 - phi1`` and ``Q = 1 - P``, the phase rates come from the
    schedules' exact derivatives, so a shared phase ramp moves only the
    identity component and never leaks truncation error into the rest.
    """
    tau = path.tau
    h = cfg.step_for(tau)
    times = _check_times(times, tau)

    p = _projector(path, times)
    dp = np.empty_like(p)
    fwd = times - h < 0.0
    bwd = ~fwd & (times + h > tau)
    mid = ~(fwd | bwd)
    if np.any(mid):
        t = times[mid]
        dp[mid] = (_projector(path, t + h) - _projector(path, t - h)) / (2 * h)
    if np.any(fwd):
        t = times[fwd]
        if np.any(t + 2 * h > tau):
            raise ExtractionError("fd_step too large for a one-sided stencil")
        dp[fwd] = (-3 * p[fwd] + 4 * _projector(path, t + h) - _projector(path, t + 2 * h)) / (2 * h)
    if np.any(bwd):
        t = times[bwd]
        if np.any(t - 2 * h < 0.0):
            raise ExtractionError("fd_step too large for a one-sided stencil")
        dp[bwd] = (3 * p[bwd] - 4 * _projector(path, t - h) + _projector(path, t - 2 * h)) / (2 * h)

    rate1 = np.asarray(path.phase1.derivative(times), dtype=float)[:, None, None]
    rel = (np.asarray(path.phase2(times)) - np.asarray(path.phase1(times)))[:, None, None]
    rel_rate = np.asarray(path.phase2.derivative(times), dtype=float)[:, None, None] - rate1
    eye = np.eye(2)
    q = eye - p
    e = np.exp(1j * rel)
    w = p + e * q
    dw = dp + e * (1j * rel_rate * q - dp)
    ham = 1j * dw @ dagger(w) - rate1 * eye
    anti = 0.5 * (ham - dagger(ham))
    residue = np.max(np.abs(anti), axis=(-1, -2))
    if cfg.hermitize:
        ham = 0.5 * (ham + dagger(ham))
    return ham, residue


def hamiltonian_fd(path: UnitaryPath, t: float, cfg: ExtractionConfig | None = None,
                   return_residue: bool = False):
    """Finite-difference ``H(t)`` in the path's reduced 2x2 basis.

    For a path with ambient basis labels the result is the 2x2 block; embed it
    with :func:`hiqe.synthesis.embed_operator`.
    """
    cfg = cfg or ExtractionConfig()
    ham, residue = _fd_batch(path, np.array([float(t)]), cfg)
    if return_residue:
        return ham[0], float(residue[0])
    return ham[0]


class PathHamiltonian:
    """Finite-difference Hamiltonian of a reduced path, sampled on demand."""

    def __init__(self, path: UnitaryPath, cfg: ExtractionConfig | None = None):
        self.path = path.reduced() if path.basis_labels is not None else path
        self.cfg = cfg or ExtractionConfig()

    def sample(self, times):
        return _fd_batch(self.path, times, self.cfg)[0]

    def __call__(self, t):
        return hamiltonian_fd(self.path, t, self.cfg)


def path_hamiltonian(path: UnitaryPath, cfg: ExtractionConfig | None = None):
    """Hamiltonian driving ``path``, embedded when the path has basis labels."""
    block = PathHamiltonian(path, cfg)
    if path.basis_labels is None:
        return block
    return EmbeddedHamiltonian(block, path.isometry())


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _eq8(th, thd, om, omd, ph, phd, convention):
    cp = np.cos(ph) - 1.0
    s_th, c_th = np.sin(th), np.cos(th)
    s_om, c_om = np.sin(om), np.cos(om)
    s_ph = np.sin(ph)
    # literal x-component carries + on this term; the derivative of U gives -
    sign = 1.0 if convention == "paper_literal" else -1.0
    wx = (cp * omd * c_om * c_th * s_th
          + (thd * c_th * s_ph + phd * s_th) * c_om
          + (sign * omd * s_th * s_ph + cp * thd) * s_om)
    wy = (cp * omd * s_om * s_th * c_th
          + s_om * (thd * c_th * s_ph + phd * s_th)
          + (omd * s_th * s_ph - cp * thd) * c_om)
    wz = -thd * s_th * s_ph - cp * omd * s_th**2 + phd * c_th
    return wx, wy, wz


def _grover(th, thd, ph, phd, convention):
    sign = -1.0 if convention == "paper_literal" else 1.0
    wx = phd * np.sin(th) + sign * thd * np.cos(th) * np.sin(ph)
    wy = 2.0 * thd * np.sin(ph / 2) ** 2
    wz = phd * np.cos(th) - thd * np.sin(th) * np.sin(ph)
    return wx, wy, wz


def deutsch_factor(f0: int, f1: int, f_convention: str) -> float:
    """``sin^2(F pi / 2)`` evaluated exactly for the integer ``F``."""
    if f_convention == "paper_literal":
        big_f = (-1) ** f0 - (-1) ** f1
    elif f_convention == "corrected":
        big_f = f0 - f1
    else:
        raise ValueError(f"unknown F convention {f_convention!r}")
    return float(big_f % 2)


def _deutsch(th, thd, om, omd, factor):
    s_th, c_th = np.sin(th), np.cos(th)
    s_om, c_om = np.sin(om), np.cos(om)
    wx = 2 * factor * (omd * c_om * s_th * c_th + s_om * thd)
    wy = 2 * factor * (c_om * thd - omd * s_om * s_th * c_th)
    wz = 2 * omd * factor * s_th**2
    return wx, wy, wz


def _coeffs(wx, wy, wz):
    return PauliCoefficients(0.0, float(wx), float(wy), float(wz))


def _frame_values(frame: FrameParams, t):
    return frame.theta(t), frame.theta.derivative(t), frame.omega(t), frame.omega.derivative(t)


def closed_form_eq8(frame: FrameParams, phi: Schedule, t: float,
                    convention: str = "paper_literal") -> PauliCoefficients:
    """General-frame coefficients in the gauge ``varphi_1 = 0, varphi_2 = phi``.

    ``paper_literal`` reproduces the literal x-component, whose
    ``dOmega sin(theta) sin(phi) sin(Omega)`` term has the wrong sign; it is
    exact whenever ``Omega`` or that product vanishes. ``corrected`` flips it.
    """
    _check_convention(convention)
    th, thd, om, omd = _frame_values(frame, t)
    return _coeffs(*_eq8(th, thd, om, omd, phi(t), phi.derivative(t), convention))


def closed_form_grover(theta: Schedule, phi: Schedule, t: float,
                       convention: str = "paper_literal") -> PauliCoefficients:
    """Grover-subspace coefficients in the ordered basis ``(|m_perp>, |m>)``.

    The literal x-component has ``- dtheta cos(theta) sin(phi)``; the
    reference gives ``+``. The two agree for constant ``theta``.
    """
    _check_convention(convention)
    return _coeffs(*_grover(theta(t), theta.derivative(t), phi(t), phi.derivative(t), convention))


def closed_form_deutsch(frame: FrameParams, f0: int, f1: int, t: float,
                        f_convention: str = "paper_literal") -> PauliCoefficients:
    """Oracle coefficients for constant phases ``varphi_n = pi f(n)``.

    ``paper_literal`` uses ``F = (-1)^f(0) - (-1)^f(1)``, which is always even,
    so every coefficient vanishes. ``corrected`` uses ``F = f(0) - f(1)``.
    """
    th, thd, om, omd = _frame_values(frame, t)
    return _coeffs(*_deutsch(th, thd, om, omd, deutsch_factor(f0, f1, f_convention)))


def closed_form_hamiltonian(path: UnitaryPath, source: str, convention: str = "paper_literal",
                            f: tuple | None = None, f_convention: str = "corrected") -> PauliHamiltonian:
    """Vectorized 2x2 Hamiltonian from one of the closed-form coefficient sets."""
    frame, phi = path.frame, path.phase2
    if source == "closed_form_eq8":
        _require_gauge(path)
        _check_convention(convention)

        def coeffs(t):
            th, thd, om, omd = _frame_values(frame, t)
            return (np.zeros_like(t),) + _eq8(th, thd, om, omd, phi(t), phi.derivative(t), convention)
    elif source == "closed_form_grover":
        _require_gauge(path)
        _check_convention(convention)

        def coeffs(t):
            th, thd = frame.theta(t), frame.theta.derivative(t)
            return (np.zeros_like(t),) + _grover(th, thd, phi(t), phi.derivative(t), convention)
    elif source == "closed_form_deutsch":
        if f is None:
            raise ValueError("closed_form_deutsch needs the function bits f=(f0, f1)")
        factor = deutsch_factor(f[0], f[1], f_convention)

        def coeffs(t):
            th, thd, om, omd = _frame_values(frame, t)
            return (np.zeros_like(t),) + _deutsch(th, thd, om, omd, factor)
    else:
        raise ValueError(f"unknown closed-form source {source!r}")
    return PauliHamiltonian(coeffs)


def _require_gauge(path: UnitaryPath):
    p1 = path.phase1
    if not (p1.kind == "constant" and p1.params[0] == 0.0):
        raise ExtractionError("closed form assumes the gauge varphi_1 = 0")


def coefficient_series(path: UnitaryPath, n_samples: int, source: str = "finite_difference",
                       cfg: ExtractionConfig | None = None, **closed_form_options) -> list[CoefficientSample]:
    """Pauli coefficients on a uniform grid including both endpoints.

    ``closed_form_options`` are forwarded to :func:`closed_form_hamiltonian`
    (``convention``, ``f``, ``f_convention``).
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}; choose from {SOURCES}")
    times = np.linspace(0.0, path.tau, n_samples)
    if source == "finite_difference":
        hs = _fd_batch(path.reduced() if path.basis_labels is not None else path, times,
                       cfg or ExtractionConfig())[0]
    else:
        hs = closed_form_hamiltonian(path, source, **closed_form_options).sample(times)
    comps = pauli_components(hs)
    return [
        CoefficientSample(float(t), PauliCoefficients(*(float(c) for c in row)), source)
        for t, row in zip(times, comps)
    ]
