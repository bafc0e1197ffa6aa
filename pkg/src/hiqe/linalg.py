"""Dense complex vectors and operators used throughout the package.

States and operators are plain ``numpy`` arrays of dtype ``complex128``. The
helpers here validate shapes and norms at the boundaries and provide the
Pauli decomposition of 2x2 Hermitian operators with hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


IDENTITY2 = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
HADAMARD = _frozen(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

KET_0 = _frozen([1, 0])
KET_1 = _frozen([0, 1])
KET_PLUS = _frozen(np.array([1, 1]) / np.sqrt(2))
KET_MINUS = _frozen(np.array([1, -1]) / np.sqrt(2))


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotHermitianError(ValueError):
    """Operator deviates from Hermiticity beyond tolerance."""


class NormalizationError(ValueError):
    """State vector is not normalized."""


def state_vector(amplitudes, renormalize=False) -> np.ndarray:
    """Validate and return a normalized state as a complex array.

    With ``renormalize`` the input is rescaled to unit norm; otherwise it
    must already be normalized within ``NORM_TOL``.
    """
    v = np.asarray(amplitudes, dtype=np.complex128).copy()
    if v.ndim != 1 or v.shape[0] < 2:
        raise DimensionError(f"state vector needs shape (dim>=2,), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("state vector contains non-finite amplitudes")
    norm = np.linalg.norm(v)
    if renormalize:
        if norm == 0.0:
            raise NormalizationError("cannot renormalize the zero vector")
        return v / norm
    if abs(norm**2 - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm^2 = {norm**2!r} is not 1")
    return v


def operator(entries) -> np.ndarray:
    """Validate a dense square complex matrix."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("operator contains non-finite entries")
    return a


def basis_state(dim: int, k: int) -> np.ndarray:
    if not 0 <= k < dim:
        raise IndexError(f"basis index {k} out of range for dim {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    v[k] = 1.0
    return v


def matmul(a, b) -> np.ndarray:
    a, b = operator(a), operator(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(a, dtype=np.complex128), -1, -2))


def apply(a, v) -> np.ndarray:
    """Matrix-vector product. The result is not renormalized."""
    a = operator(a)
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != a.shape[1]:
        raise DimensionError(f"cannot apply {a.shape} operator to {v.shape} vector")
    return a @ v


def fidelity(u, v) -> float:
    """Global-phase-insensitive overlap ``|<u|v>|^2``."""
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"fidelity needs equal 1-d shapes, got {u.shape}, {v.shape}")
    return float(min(1.0, abs(np.vdot(u, v)) ** 2))


def hermitian_defect(a) -> float:
    """Largest entry of ``|A - A^dagger|``; works on stacks of matrices."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


@dataclass(frozen=True)
class PauliCoefficients:
    """Expansion ``omega0/2 * 1 + (wx sx + wy sy + wz sz) / 2`` of a 2x2 Hermitian."""

    omega0: float
    omega_x: float
    omega_y: float
    omega_z: float

    def matrix(self) -> np.ndarray:
        return pauli_compose(self.omega0, self.omega_x, self.omega_y, self.omega_z)

    def traceless(self) -> "PauliCoefficients":
        return PauliCoefficients(0.0, self.omega_x, self.omega_y, self.omega_z)

    def as_array(self) -> np.ndarray:
        return np.array([self.omega0, self.omega_x, self.omega_y, self.omega_z])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.omega_x, self.omega_y, self.omega_z])


def pauli_compose(omega0, omega_x, omega_y, omega_z) -> np.ndarray:
    """Build the Hermitian matrix (or stack of matrices) from Pauli coefficients."""
    w0, wx, wy, wz = (np.asarray(w, dtype=np.float64) for w in (omega0, omega_x, omega_y, omega_z))
    out = np.empty(np.broadcast(w0, wx, wy, wz).shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 0.5 * (w0 + wz)
    out[..., 1, 1] = 0.5 * (w0 - wz)
    out[..., 0, 1] = 0.5 * (wx - 1j * wy)
    out[..., 1, 0] = 0.5 * (wx + 1j * wy)
    return out


def pauli_components(h) -> np.ndarray:
    """Return ``(..., 4)`` array of ``(trace H, tr(sx H), tr(sy H), tr(sz H))``.

    Only the Hermitian part of ``h`` contributes; no tolerance check is made.
    """
    h = np.asarray(h, dtype=np.complex128)
    a, d = h[..., 0, 0], h[..., 1, 1]
    b, c = h[..., 0, 1], h[..., 1, 0]
    out = np.empty(h.shape[:-2] + (4,))
    out[..., 0] = (a + d).real
    out[..., 1] = (b + c).real
    out[..., 2] = (1j * (b - c)).real
    out[..., 3] = (a - d).real
    return out


def pauli_decompose(h, tol: float = HERMITIAN_TOL) -> PauliCoefficients:
    h = operator(h)
    if h.shape != (2, 2):
        raise DimensionError(f"Pauli decomposition needs a 2x2 operator, got {h.shape}")
    defect = hermitian_defect(h)
    if defect > tol:
        raise NotHermitianError(f"operator is not Hermitian (max deviation {defect:.3e})")
    h = 0.5 * (h + dagger(h))
    return PauliCoefficients(*(float(x) for x in pauli_components(h)))
