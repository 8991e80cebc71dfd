# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-precision lattice kernels; same results as ``_fallback``."""

from libc.math cimport exp, log, fabs, M_PI

cdef double _RESCALE = 1e150


cdef double _damped_abs(int n, double x) nogil:
    cdef double prev, cur, nxt, shift
    cdef int k
    if n == 0:
        return exp(-0.5 * x)
    prev = 1.0
    cur = 1.0 - x
    shift = 0.0
    for k in range(1, n):
        nxt = ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        prev = cur
        cur = nxt
        if fabs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            shift += log(_RESCALE)
    if cur == 0.0:
        return 0.0
    return exp(log(fabs(cur)) + shift - 0.5 * x)


def damped_abs(int n, double x):
    """|L_n(x)| * exp(-x/2) in doubles, rescaling to avoid overflow."""
    return _damped_abs(n, x)


def box_sum(int n, double a2, double b2, int M):
    """Sum of damped_abs(n, pi*(k^2 a2 + l^2 b2)) over max(|k|,|l|) <= M."""
    cdef double total = 0.0
    cdef int k, l, wk, wl
    for k in range(M + 1):
        wk = 1 if k == 0 else 2
        for l in range(M + 1):
            wl = 1 if l == 0 else 2
            if k == 0 and l == 0:
                total += 1.0
                continue
            total += wk * wl * _damped_abs(n, M_PI * (k * k * a2 + l * l * b2))
    return total


def disc_sum(int n, double a2, double b2, long R2):
    """Same sum over k^2 + l^2 < R2."""
    cdef double total = 0.0
    cdef long k, l, kmax = 0
    cdef int wk, wl
    while (kmax + 1) * (kmax + 1) <= R2 - 1:
        kmax += 1
    for k in range(kmax + 1):
        wk = 1 if k == 0 else 2
        for l in range(kmax + 1):
            if k * k + l * l >= R2:
                break
            wl = 1 if l == 0 else 2
            if k == 0 and l == 0:
                total += 1.0
                continue
            total += wk * wl * _damped_abs(n, M_PI * (k * k * a2 + l * l * b2))
    return total
