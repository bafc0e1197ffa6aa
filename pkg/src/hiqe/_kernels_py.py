"""Pure-Python/numpy reference kernels for the time-stepping loops.

Every function here has a compiled twin in ``_kernels.pyx`` with the same
signature and semantics. Records are taken at step 0, at every multiple of
``record_every``, and at the final step.
"""

import numpy as np


def n_records(n_steps, record_every):
    return n_steps // record_every + 1 + (1 if n_steps % record_every else 0)


def _record(k, n_steps, record_every):
    return k % record_every == 0 or k == n_steps


def evolve_block(steps, x0, record_every):
    """Apply ``steps[k]`` in order to the ``(d, m)`` block ``x0``."""
    n_steps = steps.shape[0]
    out = np.empty((n_records(n_steps, record_every),) + x0.shape, dtype=np.complex128)
    x = np.array(x0, dtype=np.complex128)
    out[0] = x
    r = 1
    for k in range(n_steps):
        x = steps[k] @ x
        if _record(k + 1, n_steps, record_every):
            out[r] = x
            r += 1
    return out


def rk4_block(hs, x0, dt, record_every):
    """Classic RK4 for ``dX/dt = -i H(t) X``.

    ``hs`` holds ``2K+1`` samples at ``t_0, t_0+dt/2, t_1, ...``.
    """
    n_steps = (hs.shape[0] - 1) // 2
    out = np.empty((n_records(n_steps, record_every),) + x0.shape, dtype=np.complex128)
    x = np.array(x0, dtype=np.complex128)
    out[0] = x
    r = 1
    for k in range(n_steps):
        h0, hm, h1 = hs[2 * k], hs[2 * k + 1], hs[2 * k + 2]
        k1 = -1j * (h0 @ x)
        k2 = -1j * (hm @ (x + 0.5 * dt * k1))
        k3 = -1j * (hm @ (x + 0.5 * dt * k2))
        k4 = -1j * (h1 @ (x + dt * k3))
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if _record(k + 1, n_steps, record_every):
            out[r] = x
            r += 1
    return out


def evolve_embedded(steps, basis, psi0, record_every):
    """Apply ``1 + V (E_k - 1) V^dagger`` for each 2x2 step ``E_k``."""
    n_steps = steps.shape[0]
    out = np.empty((n_records(n_steps, record_every), psi0.shape[0]), dtype=np.complex128)
    vh = basis.conj().T
    shifted = steps - np.eye(2)
    psi = np.array(psi0, dtype=np.complex128)
    out[0] = psi
    r = 1
    for k in range(n_steps):
        psi = psi + basis @ (shifted[k] @ (vh @ psi))
        if _record(k + 1, n_steps, record_every):
            out[r] = psi
            r += 1
    return out


def rk4_embedded(hs, basis, psi0, dt, record_every):
    """RK4 for ``dpsi/dt = -i V h(t) V^dagger psi`` with 2x2 blocks ``h``."""
    n_steps = (hs.shape[0] - 1) // 2
    out = np.empty((n_records(n_steps, record_every), psi0.shape[0]), dtype=np.complex128)
    vh = basis.conj().T

    def f(h, y):
        return -1j * (basis @ (h @ (vh @ y)))

    psi = np.array(psi0, dtype=np.complex128)
    out[0] = psi
    r = 1
    for k in range(n_steps):
        h0, hm, h1 = hs[2 * k], hs[2 * k + 1], hs[2 * k + 2]
        k1 = f(h0, psi)
        k2 = f(hm, psi + 0.5 * dt * k1)
        k3 = f(hm, psi + 0.5 * dt * k2)
        k4 = f(h1, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if _record(k + 1, n_steps, record_every):
            out[r] = psi
            r += 1
    return out
