# cython: language_level=3
"""Compiled statevector kernels (same contract as ``_kernels_py``)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

ctypedef double complex cplx


cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil


cdef inline int _popparity(long long v) noexcept nogil:
    return __builtin_parityll(v)


cdef inline cplx _phase(int ny) noexcept nogil:
    ny = ny & 3
    if ny == 0:
        return 1.0
    elif ny == 1:
        return 1.0j
    elif ny == 2:
        return -1.0
    return -1.0j


def apply_pauli(cplx[::1] psi, long long xmask, long long zmask, int ny):
    cdef Py_ssize_t dim = psi.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef cplx ph = _phase(ny)
    cdef Py_ssize_t b
    with nogil:
        for b in range(dim):
            if _popparity(b & zmask):
                out[b ^ xmask] = -ph * psi[b]
            else:
                out[b ^ xmask] = ph * psi[b]
    return out_arr


def pauli_rotation(cplx[::1] psi, long long xmask, long long zmask, int ny, double theta):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef double c = cos(theta)
    cdef cplx s = -1.0j * sin(theta) * _phase(ny)
    cdef Py_ssize_t b, b2
    cdef cplx a, a2, sb, sb2
    with nogil:
        if xmask == 0:
            for b in range(dim):
                if _popparity(b & zmask):
                    psi[b] = psi[b] * (c - s)
                else:
                    psi[b] = psi[b] * (c + s)
        else:
            for b in range(dim):
                b2 = b ^ xmask
                if b2 < b:
                    continue
                a = psi[b]
                a2 = psi[b2]
                # P|b> lands on b2 with sign from b, and vice versa
                sb = -s if _popparity(b & zmask) else s
                sb2 = -s if _popparity(b2 & zmask) else s
                psi[b2] = c * a2 + sb * a
                psi[b] = c * a + sb2 * a2


def apply_1q(cplx[::1] psi, int n_qubits, int qubit, u):
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t bit = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t b
    cdef cplx a0, a1
    with nogil:
        for b in range(dim):
            if b & bit:
                continue
            a0 = psi[b]
            a1 = psi[b | bit]
            psi[b] = u00 * a0 + u01 * a1
            psi[b | bit] = u10 * a0 + u11 * a1


def cnot(cplx[::1] psi, int n_qubits, int control, int target):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << (n_qubits - 1 - control)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (n_qubits - 1 - target)
    cdef Py_ssize_t b
    cdef cplx tmp
    with nogil:
        for b in range(dim):
            if (b & cbit) and not (b & tbit):
                tmp = psi[b]
                psi[b] = psi[b | tbit]
                psi[b | tbit] = tmp


def pauli_expectation(cplx[::1] psi, long long xmask, long long zmask, int ny):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef cplx acc = 0.0
    cdef cplx v
    cdef Py_ssize_t b
    with nogil:
        for b in range(dim):
            v = psi[b ^ xmask].conjugate() * psi[b]
            if _popparity(b & zmask):
                acc = acc - v
            else:
                acc = acc + v
    return (acc * _phase(ny)).real


def parity_sums(double[::1] weights, zmasks):
    cdef long long[::1] zm = np.ascontiguousarray(zmasks, dtype=np.int64)
    cdef Py_ssize_t nk = zm.shape[0], dim = weights.shape[0]
    out_arr = np.zeros(nk, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, b
    cdef double acc
    cdef long long z
    with nogil:
        for k in range(nk):
            z = zm[k]
            acc = 0.0
            for b in range(dim):
                if _popparity(b & z):
                    acc -= weights[b]
                else:
                    acc += weights[b]
            out[k] = acc
    return out_arr
