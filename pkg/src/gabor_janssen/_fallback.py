"""Pure-Python versions of the double-precision lattice kernels."""

import math

_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)


def damped_abs(n, x):
    """|L_n(x)| * exp(-x/2) in doubles, rescaling to avoid overflow."""
    if n == 0:
        return math.exp(-0.5 * x)
    prev = 1.0
    cur = 1.0 - x
    shift = 0.0
    for k in range(1, n):
        nxt = ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        prev = cur
        cur = nxt
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            shift += _LOG_RESCALE
    if cur == 0.0:
        return 0.0
    return math.exp(math.log(abs(cur)) + shift - 0.5 * x)


def box_sum(n, a2, b2, M):
    """Sum of damped_abs(n, pi*(k^2 a2 + l^2 b2)) over max(|k|,|l|) <= M."""
    total = 0.0
    for k in range(M + 1):
        wk = 1 if k == 0 else 2
        for l in range(M + 1):
            wl = 1 if l == 0 else 2
            if k == 0 and l == 0:
                total += 1.0
                continue
            total += wk * wl * damped_abs(n, math.pi * (k * k * a2 + l * l * b2))
    return total


def disc_sum(n, a2, b2, R2):
    """Same sum over k^2 + l^2 < R2."""
    total = 0.0
    kmax = math.isqrt(max(R2 - 1, 0))
    for k in range(kmax + 1):
        wk = 1 if k == 0 else 2
        for l in range(kmax + 1):
            if k * k + l * l >= R2:
                break
            wl = 1 if l == 0 else 2
            if k == 0 and l == 0:
                total += 1.0
                continue
            total += wk * wl * damped_abs(n, math.pi * (k * k * a2 + l * l * b2))
    return total
