"""Numba-compiled cumulative quadrature kernels."""

import numpy as np
from numba import njit


@njit(cache=True)
def prefix_simpson(y, h):
    n = y.shape[0]
    out = np.zeros(n, dtype=np.float64)
    acc = 0.0
    for k in range(2, n, 2):
        acc = acc + (h / 3.0) * (y[k - 2] + 4.0 * y[k - 1] + y[k])
        out[k] = acc
    for k in range(1, n, 2):
        out[k] = out[k - 1] + (h / 2.0) * (y[k - 1] + y[k])
    return out


@njit(cache=True)
def suffix_simpson(y, h):
    n = y.shape[0]
    out = np.zeros(n, dtype=np.float64)
    acc = 0.0
    for k in range(n - 3, -1, -2):
        acc = acc + (h / 3.0) * (y[k + 2] + 4.0 * y[k + 1] + y[k])
        out[k] = acc
    for k in range(n - 2, -1, -2):
        out[k] = out[k + 1] + (h / 2.0) * (y[k + 1] + y[k])
    return out
