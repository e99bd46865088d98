# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled GCNN layer kernels.

Hand-rolled loops beat BLAS dispatch overhead for the small per-layer
matrices this package runs on (tens of nodes, narrow feature widths) inside
hot training and sampling loops. Must stay semantically identical to
graphdiff._kernels_py.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def layer_apply(double[:, ::1] lap, double[:, :, ::1] x, double[:, :, ::1] theta):
    """See graphdiff._kernels_py.layer_apply."""
    cdef Py_ssize_t kp1 = theta.shape[0]
    cdef Py_ssize_t w_in = theta.shape[1]
    cdef Py_ssize_t w_out = theta.shape[2]
    cdef Py_ssize_t batch = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]

    powers_arr = np.empty((kp1, batch, n, w_in), dtype=np.float64)
    out_arr = np.empty((batch, n, w_out), dtype=np.float64)
    cdef double[:, :, :, ::1] powers = powers_arr
    cdef double[:, :, ::1] out = out_arr

    cdef Py_ssize_t k, b, i, j, w, o
    cdef double acc, lij

    for b in range(batch):
        for i in range(n):
            for w in range(w_in):
                powers[0, b, i, w] = x[b, i, w]
    for k in range(1, kp1):
        for b in range(batch):
            for i in range(n):
                for w in range(w_in):
                    acc = 0.0
                    for j in range(n):
                        acc += lap[i, j] * powers[k - 1, b, j, w]
                    powers[k, b, i, w] = acc
    for b in range(batch):
        for i in range(n):
            for o in range(w_out):
                acc = 0.0
                for k in range(kp1):
                    for w in range(w_in):
                        acc += powers[k, b, i, w] * theta[k, w, o]
                out[b, i, o] = acc
    return powers_arr, out_arr


def layer_grad(double[:, ::1] lap, double[:, :, :, ::1] powers,
               double[:, :, ::1] theta, double[:, :, ::1] d_out):
    """See graphdiff._kernels_py.layer_grad."""
    cdef Py_ssize_t kp1 = theta.shape[0]
    cdef Py_ssize_t w_in = theta.shape[1]
    cdef Py_ssize_t w_out = theta.shape[2]
    cdef Py_ssize_t batch = d_out.shape[0]
    cdef Py_ssize_t n = d_out.shape[1]

    d_theta_arr = np.zeros((kp1, w_in, w_out), dtype=np.float64)
    d_x_arr = np.empty((batch, n, w_in), dtype=np.float64)
    tmp_arr = np.empty((batch, n, w_in), dtype=np.float64)
    cdef double[:, :, ::1] d_theta = d_theta_arr
    cdef double[:, :, ::1] d_x = d_x_arr
    cdef double[:, :, ::1] tmp = tmp_arr

    cdef Py_ssize_t k, b, i, j, w, o
    cdef double acc

    for k in range(kp1):
        for b in range(batch):
            for i in range(n):
                for w in range(w_in):
                    acc = powers[k, b, i, w]
                    for o in range(w_out):
                        d_theta[k, w, o] += acc * d_out[b, i, o]

    # Horner: d_x = G_K; d_x = L d_x + G_k for k = K-1 .. 0,
    # where G_k = d_out theta_k^T.
    for b in range(batch):
        for i in range(n):
            for w in range(w_in):
                acc = 0.0
                for o in range(w_out):
                    acc += d_out[b, i, o] * theta[kp1 - 1, w, o]
                d_x[b, i, w] = acc
    for k in range(kp1 - 2, -1, -1):
        for b in range(batch):
            for i in range(n):
                for w in range(w_in):
                    acc = 0.0
                    for j in range(n):
                        acc += lap[i, j] * d_x[b, j, w]
                    for o in range(w_out):
                        acc += d_out[b, i, o] * theta[k, w, o]
                    tmp[b, i, w] = acc
        d_x, tmp = tmp, d_x
        d_x_arr, tmp_arr = tmp_arr, d_x_arr
    return d_theta_arr, d_x_arr
