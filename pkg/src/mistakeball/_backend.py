"""Kernel backend selection.

The hot inner loops (return-time scans, overlap counting, Markov path
generation, orbit fill) exist in two interchangeable implementations:

* ``mistakeball._kernels_numba`` -- @njit compiled early-exit loops
* ``mistakeball._kernels_numpy`` -- chunked pure-numpy equivalents

The active backend is chosen once at import time from the environment
variable ``MISTAKEBALL_BACKEND`` ("numba" or "numpy").  Unset, numba is
used when importable and numpy otherwise.  Both backends return identical
values on identical inputs (tests enforce this), so the flag affects wall
time only, never results; experiment configuration itself never consults
the environment.
"""

from __future__ import annotations

import os

_ENV_VAR = "MISTAKEBALL_BACKEND"


def _select():
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        from . import _kernels_numpy as mod

        return mod, "numpy"
    if choice == "numba":
        from . import _kernels_numba as mod

        return mod, "numba"
    try:
        from . import _kernels_numba as mod

        return mod, "numba"
    except ImportError:
        from . import _kernels_numpy as mod

        return mod, "numpy"


kernels, BACKEND = _select()
