"""Quadrature kernel backend selection.

The environment variable ``PLAPBOX_BACKEND`` picks the implementation:
``numba`` (JIT kernels, the default when numba imports), ``numpy``
(pure-numpy fallback), or ``auto``.
"""

import os

_requested = os.environ.get("PLAPBOX_BACKEND", "auto").strip().lower()
if _requested not in {"auto", "numba", "numpy"}:
    raise RuntimeError(
        f"PLAPBOX_BACKEND={_requested!r} is not supported; use 'auto', 'numba' or 'numpy'"
    )

if _requested in {"auto", "numba"}:
    try:
        from ._kernels_numba import prefix_simpson, suffix_simpson

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from ._kernels_numpy import prefix_simpson, suffix_simpson

        BACKEND = "numpy"
else:
    from ._kernels_numpy import prefix_simpson, suffix_simpson

    BACKEND = "numpy"

__all__ = ["prefix_simpson", "suffix_simpson", "BACKEND"]
