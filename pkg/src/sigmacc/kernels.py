"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python reference kernels are used. Set ``SIGMACC_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from sigmacc import _kernels_py

BACKEND = "python"

if os.environ.get("SIGMACC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from sigmacc import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

lin_cmp = _impl.lin_cmp
interval_contains = _impl.interval_contains
max_clique = _impl.max_clique

__all__ = ["BACKEND", "lin_cmp", "interval_contains", "max_clique"]
