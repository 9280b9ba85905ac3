# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo amplitude kernels.

Must stay operation-for-operation identical to ``_ampcore_py`` (see the
bit-compatibility note there); built with -ffp-contract=off so the C
compiler cannot fuse the squared terms.
"""

from libc.math cimport sqrt

import numpy as np
cimport numpy as cnp

cnp.import_array()


def rician_amp(double[::1] z1, double[::1] z2, double los, double scale,
               out=None):
    cdef Py_ssize_t n = z1.shape[0]
    if out is None:
        out = np.empty(n, dtype=np.float64)
    cdef double[::1] r = out
    cdef Py_ssize_t i
    cdef double t1
    with nogil:
        for i in range(n):
            t1 = z1[i] + los
            r[i] = scale * sqrt(t1 * t1 + z2[i] * z2[i])
    return out


def cascade_accum(double[::1] z1, double[::1] z2, double[::1] z3,
                  double[::1] z4, double los, double scale_prod,
                  double[::1] out):
    cdef Py_ssize_t n = z1.shape[0]
    cdef Py_ssize_t i
    cdef double t1, t3, a, b
    with nogil:
        for i in range(n):
            t1 = z1[i] + los
            t3 = z3[i] + los
            a = sqrt(t1 * t1 + z2[i] * z2[i])
            b = sqrt(t3 * t3 + z4[i] * z4[i])
            out[i] += scale_prod * (a * b)
