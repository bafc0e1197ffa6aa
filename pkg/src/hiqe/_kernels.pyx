# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled time-stepping kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

ctypedef double complex cplx

cnp.import_array()


cpdef Py_ssize_t n_records(Py_ssize_t n_steps, Py_ssize_t record_every):
    return n_steps // record_every + 1 + (1 if n_steps % record_every else 0)


cdef inline bint _record(Py_ssize_t k, Py_ssize_t n_steps, Py_ssize_t record_every) nogil:
    return k % record_every == 0 or k == n_steps


cdef inline void _neg_i_matmul(const cplx[:, :, ::1] hs, Py_ssize_t s, const cplx[:, ::1] x,
                               cplx[:, ::1] out) nogil:
    cdef Py_ssize_t d = hs.shape[1], m = x.shape[1], i, j, l
    cdef cplx acc
    for i in range(d):
        for j in range(m):
            acc = 0
            for l in range(d):
                acc = acc + hs[s, i, l] * x[l, j]
            out[i, j] = -1j * acc


def evolve_block(const cplx[:, :, ::1] steps, x0, Py_ssize_t record_every):
    cdef Py_ssize_t n_steps = steps.shape[0]
    cdef Py_ssize_t d = steps.shape[1]
    x_arr = np.array(x0, dtype=np.complex128, order="C")
    cdef Py_ssize_t m = x_arr.shape[1]
    out_arr = np.empty((n_records(n_steps, record_every), d, m), dtype=np.complex128)
    y_arr = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, ::1] x = x_arr
    cdef cplx[:, ::1] y = y_arr
    cdef cplx[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, i, j, l, r = 1
    cdef cplx acc
    out[0, :, :] = x
    with nogil:
        for k in range(n_steps):
            for i in range(d):
                for j in range(m):
                    acc = 0
                    for l in range(d):
                        acc = acc + steps[k, i, l] * x[l, j]
                    y[i, j] = acc
            x[:, :] = y
            if _record(k + 1, n_steps, record_every):
                out[r, :, :] = x
                r += 1
    return out_arr


def rk4_block(const cplx[:, :, ::1] hs, x0, double dt, Py_ssize_t record_every):
    cdef Py_ssize_t n_steps = (hs.shape[0] - 1) // 2
    cdef Py_ssize_t d = hs.shape[1]
    x_arr = np.array(x0, dtype=np.complex128, order="C")
    cdef Py_ssize_t m = x_arr.shape[1]
    out_arr = np.empty((n_records(n_steps, record_every), d, m), dtype=np.complex128)
    cdef cplx[:, ::1] x = x_arr
    cdef cplx[:, ::1] tmp = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, ::1] k1 = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, ::1] k2 = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, ::1] k3 = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, ::1] k4 = np.empty((d, m), dtype=np.complex128)
    cdef cplx[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, i, j, r = 1
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    out[0, :, :] = x
    with nogil:
        for k in range(n_steps):
            _neg_i_matmul(hs, 2 * k, x, k1)
            for i in range(d):
                for j in range(m):
                    tmp[i, j] = x[i, j] + half * k1[i, j]
            _neg_i_matmul(hs, 2 * k + 1, tmp, k2)
            for i in range(d):
                for j in range(m):
                    tmp[i, j] = x[i, j] + half * k2[i, j]
            _neg_i_matmul(hs, 2 * k + 1, tmp, k3)
            for i in range(d):
                for j in range(m):
                    tmp[i, j] = x[i, j] + dt * k3[i, j]
            _neg_i_matmul(hs, 2 * k + 2, tmp, k4)
            for i in range(d):
                for j in range(m):
                    x[i, j] = x[i, j] + sixth * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            if _record(k + 1, n_steps, record_every):
                out[r, :, :] = x
                r += 1
    return out_arr


def evolve_embedded(const cplx[:, :, ::1] steps, const cplx[:, ::1] basis, psi0, Py_ssize_t record_every):
    cdef Py_ssize_t n_steps = steps.shape[0]
    cdef Py_ssize_t n = basis.shape[0]
    psi_arr = np.array(psi0, dtype=np.complex128, order="C")
    out_arr = np.empty((n_records(n_steps, record_every), n), dtype=np.complex128)
    cdef cplx[::1] psi = psi_arr
    cdef cplx[:, ::1] out = out_arr
    cdef const cplx[:, ::1] vh = np.ascontiguousarray(np.conj(basis))
    cdef Py_ssize_t k, i, r = 1
    cdef cplx c0, c1, d0, d1
    out[0, :] = psi
    with nogil:
        for k in range(n_steps):
            c0 = 0
            c1 = 0
            for i in range(n):
                c0 = c0 + vh[i, 0] * psi[i]
                c1 = c1 + vh[i, 1] * psi[i]
            d0 = (steps[k, 0, 0] - 1.0) * c0 + steps[k, 0, 1] * c1
            d1 = steps[k, 1, 0] * c0 + (steps[k, 1, 1] - 1.0) * c1
            for i in range(n):
                psi[i] = psi[i] + basis[i, 0] * d0 + basis[i, 1] * d1
            if _record(k + 1, n_steps, record_every):
                out[r, :] = psi
                r += 1
    return out_arr


cdef inline void _embedded_rhs(const cplx[:, :, ::1] hs, Py_ssize_t j, const cplx[:, ::1] basis,
                               const cplx[:, ::1] vh, const cplx[::1] y, cplx[::1] out) nogil:
    cdef Py_ssize_t n = basis.shape[0], i
    cdef cplx c0 = 0, c1 = 0, g0, g1
    for i in range(n):
        c0 = c0 + vh[i, 0] * y[i]
        c1 = c1 + vh[i, 1] * y[i]
    g0 = -1j * (hs[j, 0, 0] * c0 + hs[j, 0, 1] * c1)
    g1 = -1j * (hs[j, 1, 0] * c0 + hs[j, 1, 1] * c1)
    for i in range(n):
        out[i] = basis[i, 0] * g0 + basis[i, 1] * g1


def rk4_embedded(const cplx[:, :, ::1] hs, const cplx[:, ::1] basis, psi0, double dt, Py_ssize_t record_every):
    cdef Py_ssize_t n_steps = (hs.shape[0] - 1) // 2
    cdef Py_ssize_t n = basis.shape[0]
    psi_arr = np.array(psi0, dtype=np.complex128, order="C")
    out_arr = np.empty((n_records(n_steps, record_every), n), dtype=np.complex128)
    cdef cplx[::1] psi = psi_arr
    cdef cplx[::1] tmp = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k1 = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k2 = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k3 = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k4 = np.empty(n, dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef const cplx[:, ::1] vh = np.ascontiguousarray(np.conj(basis))
    cdef Py_ssize_t k, i, r = 1
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    out[0, :] = psi
    with nogil:
        for k in range(n_steps):
            _embedded_rhs(hs, 2 * k, basis, vh, psi, k1)
            for i in range(n):
                tmp[i] = psi[i] + half * k1[i]
            _embedded_rhs(hs, 2 * k + 1, basis, vh, tmp, k2)
            for i in range(n):
                tmp[i] = psi[i] + half * k2[i]
            _embedded_rhs(hs, 2 * k + 1, basis, vh, tmp, k3)
            for i in range(n):
                tmp[i] = psi[i] + dt * k3[i]
            _embedded_rhs(hs, 2 * k + 2, basis, vh, tmp, k4)
            for i in range(n):
                psi[i] = psi[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if _record(k + 1, n_steps, record_every):
                out[r, :] = psi
                r += 1
    return out_arr
