# cython: boundscheck=False, wraparound=False, initializedcheck=False
# Compiled max-plus product kernel. Entries are float64 with -inf as the
# additive zero; -inf rows are skipped so epsilon never costs inner loops.

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double NEG_INF = float("-inf")


def mp_mul(a_in, b_in):
    a_arr = np.ascontiguousarray(a_in, dtype=np.float64)
    b_arr = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef const double[:, ::1] a = a_arr
    cdef const double[:, ::1] b = b_arr
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p = a.shape[1]
    cdef Py_ssize_t m = b.shape[1]
    if b.shape[0] != p:
        raise ValueError("inner dimensions differ")
    out_arr = np.full((n, m), NEG_INF)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, j
    cdef double aik, v
    for i in range(n):
        for k in range(p):
            aik = a[i, k]
            if aik == NEG_INF:
                continue
            for j in range(m):
                v = aik + b[k, j]
                if v > out[i, j]:
                    out[i, j] = v
    return out_arr
