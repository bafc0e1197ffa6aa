"""Unitary paths built spectrally from a rotating frame and two phase schedules.

The frame is the orthonormal pair::

    |phi1> =  cos(theta/2)|0> + e^{i Omega} sin(theta/2)|1>
    |phi2> = -sin(theta/2)|0> + e^{i Omega} cos(theta/2)|1>

and the path is ``U(t) = sum_n exp(i varphi_n(t)) |phi_n(t)><phi_n(t)|``.
When ``basis_labels`` are given, ``|0>`` and ``|1>`` above stand for those two
ambient vectors and ``U`` acts as the identity on their orthogonal complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import NORM_TOL, NormalizationError, dagger, max_abs
from .schedules import Schedule

IDENTITY_AT_ZERO_TOL = 1e-10
UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class FrameParams:
    theta: Schedule
    omega: Schedule

    def __post_init__(self):
        if self.theta.tau != self.omega.tau:
            raise ValueError("frame schedules must share the same tau")

    @property
    def tau(self) -> float:
        return self.theta.tau


@dataclass(frozen=True)
class UnitaryPath:
    frame: FrameParams
    phase1: Schedule
    phase2: Schedule
    basis_labels: Optional[tuple] = None

    def __post_init__(self):
        if not (self.phase1.tau == self.phase2.tau == self.frame.tau):
            raise ValueError("all path schedules must share the same tau")
        if self.basis_labels is not None:
            v0, v1 = (np.asarray(v, dtype=np.complex128) for v in self.basis_labels)
            if v0.ndim != 1 or v0.shape != v1.shape or v0.shape[0] < 2:
                raise ValueError("basis labels must be two vectors of equal dimension")
            gram = np.array([[np.vdot(a, b) for b in (v0, v1)] for a in (v0, v1)])
            if max_abs(gram - np.eye(2)) > NORM_TOL:
                raise ValueError("basis labels must be orthonormal")
            v0.flags.writeable = False
            v1.flags.writeable = False
            object.__setattr__(self, "basis_labels", (v0, v1))

    @classmethod
    def gauge(cls, frame: FrameParams, phi: Schedule, basis_labels=None) -> "UnitaryPath":
        """Common gauge with ``varphi_1 = 0`` and ``varphi_2 = phi``."""
        return cls(frame, Schedule.constant(0.0, phi.tau), phi, basis_labels)

    @property
    def tau(self) -> float:
        return self.frame.tau

    @property
    def dim(self) -> int:
        return 2 if self.basis_labels is None else self.basis_labels[0].shape[0]

    def isometry(self) -> np.ndarray:
        """``(dim, 2)`` matrix whose columns are the two reduced-basis vectors."""
        if self.basis_labels is None:
            return np.eye(2, dtype=np.complex128)
        return np.stack(self.basis_labels, axis=1)

    def reduced(self) -> "UnitaryPath":
        return UnitaryPath(self.frame, self.phase1, self.phase2)

    def to_dict(self) -> dict:
        return {
            "frame": {"theta": self.frame.theta.to_dict(), "omega": self.frame.omega.to_dict()},
            "phase1": self.phase1.to_dict(),
            "phase2": self.phase2.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, tau: float) -> "UnitaryPath":
        frame = FrameParams(
            Schedule.from_dict(data["frame"]["theta"], tau),
            Schedule.from_dict(data["frame"]["omega"], tau),
        )
        return cls(
            frame,
            Schedule.from_dict(data["phase1"], tau),
            Schedule.from_dict(data["phase2"], tau),
        )


@dataclass(frozen=True)
class PathReport:
    is_unitary: bool
    identity_at_zero: bool
    max_unitarity_defect: float
    max_identity_defect: float


def _frame_arrays(theta, omega):
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    e = np.exp(1j * omega)
    phi1 = np.stack([c + 0j, e * s], axis=-1)
    phi2 = np.stack([-s + 0j, e * c], axis=-1)
    return phi1, phi2


def frame_states(frame: FrameParams, t):
    """Return the orthonormal frame pair at time ``t`` (scalar or array)."""
    return _frame_arrays(frame.theta(t), frame.omega(t))


def reduced_unitary(path: UnitaryPath, t) -> np.ndarray:
    """The 2x2 unitary in the reduced basis; a stack ``(K, 2, 2)`` for array ``t``."""
    phi1, phi2 = frame_states(path.frame, t)
    e1 = np.exp(1j * np.asarray(path.phase1(t)))[..., None, None]
    e2 = np.exp(1j * np.asarray(path.phase2(t)))[..., None, None]
    p1 = phi1[..., :, None] * np.conj(phi1[..., None, :])
    p2 = phi2[..., :, None] * np.conj(phi2[..., None, :])
    return e1 * p1 + e2 * p2


def embed_unitary(block, isometry) -> np.ndarray:
    """Extend a 2x2 unitary to the ambient space, identity on the complement."""
    v = np.asarray(isometry)
    return np.eye(v.shape[0], dtype=np.complex128) + v @ (block - np.eye(2)) @ dagger(v)


def embed_operator(block, isometry) -> np.ndarray:
    """Embed a 2x2 generator; it vanishes on the complement."""
    v = np.asarray(isometry)
    return v @ block @ dagger(v)


def unitary_at(path: UnitaryPath, t: float) -> np.ndarray:
    u = reduced_unitary(path, float(t))
    if path.basis_labels is None:
        return u
    return embed_unitary(u, path.isometry())


def evolved_amplitudes(a: float, b: complex, theta: float, omega_angle: float, phi: float):
    """Closed-form amplitudes of ``U|psi0>`` in the gauge ``varphi_1=0, varphi_2=phi``.

    ``a`` is the real amplitude on ``|0>`` and ``b`` the complex amplitude on
    ``|1>``; ``theta`` and ``omega_angle`` are the frame angles at that time.
    """
    if abs(a * a + abs(b) ** 2 - 1.0) > NORM_TOL:
        raise NormalizationError("input amplitudes are not normalized")
    sigma_p = np.exp(1j * phi) + 1.0
    sigma_m = np.exp(1j * phi) - 1.0
    # frame phase Omega, not the spectral phase, multiplies the cross terms
    alpha_t = a * np.cos(theta) + b * np.exp(-1j * omega_angle) * np.sin(theta)
    beta_t = b * np.cos(theta) - a * np.exp(1j * omega_angle) * np.sin(theta)
    alpha = (a * sigma_p - sigma_m * alpha_t) / 2
    beta = (b * sigma_p + sigma_m * beta_t) / 2
    return complex(alpha), complex(beta)


def validate_path(path: UnitaryPath, samples: int = 101) -> PathReport:
    if samples < 2:
        raise ValueError("validate_path needs at least two samples")
    times = np.linspace(0.0, path.tau, samples)
    u = reduced_unitary(path, times)
    # the ambient extension is unitary iff the reduced block is
    unitarity = max_abs(u @ dagger(u) - np.eye(2))
    identity = max_abs(u[0] - np.eye(2))
    return PathReport(
        is_unitary=unitarity <= UNITARITY_TOL,
        identity_at_zero=identity <= IDENTITY_AT_ZERO_TOL,
        max_unitarity_defect=unitarity,
        max_identity_defect=identity,
    )
