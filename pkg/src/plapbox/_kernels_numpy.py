"""Pure-numpy cumulative quadrature kernels (fallback backend)."""

import numpy as np


def prefix_simpson(y, h):
    """Running integral of uniformly spaced samples, left endpoint anchored at 0.

    Even-offset nodes are reached by composite Simpson pairs; odd-offset
    nodes close the last panel with a trapezoid.
    """
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    out = np.zeros(n, dtype=np.float64)
    if n >= 3:
        pairs = (h / 3.0) * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
        out[2::2] = np.cumsum(pairs)
    out[1::2] = out[0:-1:2] + (h / 2.0) * (y[0:-1:2] + y[1::2])
    return out


def suffix_simpson(y, h):
    """Mirror of :func:`prefix_simpson`: integral from each node to the right end."""
    rev = prefix_simpson(y[::-1], h)
    return np.ascontiguousarray(rev[::-1])
