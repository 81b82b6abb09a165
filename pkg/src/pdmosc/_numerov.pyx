# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Numerov recurrences.

Both routines integrate psi'' = -k^2 psi on a uniform grid, given
w[i] = h^2 k^2(y_i) / 12, from the two seed values psi[0], psi[1].
"""
from libc.math cimport fabs

cdef double BIG = 1e100
cdef double SMALL = 1e-100


def numerov_nodes(const double[::1] w, double p0, double p1):
    """Sign changes of psi[1], ..., psi[n-1] (zeros skipped)."""
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double prev = p0, cur = p1, nxt
    cdef double last = p1
    cdef long nodes = 0
    for i in range(1, n - 1):
        nxt = (2.0 * (1.0 - 5.0 * w[i]) * cur - (1.0 + w[i - 1]) * prev) / (1.0 + w[i + 1])
        if fabs(nxt) > BIG:
            nxt *= SMALL
            cur *= SMALL
        if nxt != 0.0:
            if last == 0.0:
                last = nxt
            elif (nxt > 0.0) != (last > 0.0):
                nodes += 1
                last = nxt
        prev = cur
        cur = nxt
    return nodes


def numerov_fill(const double[::1] w, double p0, double p1, double[::1] out):
    """Write psi into ``out`` (same length as w); rescales the prefix on overflow."""
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i, j
    out[0] = p0
    if n > 1:
        out[1] = p1
    for i in range(1, n - 1):
        out[i + 1] = (2.0 * (1.0 - 5.0 * w[i]) * out[i] - (1.0 + w[i - 1]) * out[i - 1]) / (1.0 + w[i + 1])
        if fabs(out[i + 1]) > BIG:
            for j in range(i + 2):
                out[j] *= SMALL
