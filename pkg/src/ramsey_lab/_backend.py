"""Backend selection: numba-jitted kernels by default, plain numpy on demand.

Set RAMSEY_LAB_BACKEND=numpy to skip jitting (or when numba is missing).
The choice is made at import time; `BACKEND` records what was picked.
"""

import os

from . import _kernels

_requested = os.environ.get("RAMSEY_LAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise RuntimeError(f"RAMSEY_LAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

HAS_NUMBA = False
if _requested == "numba":
    try:
        from numba import njit
        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:
    BACKEND = "numba"
    dpll_step = njit(cache=True)(_kernels.dpll_step)
    sweep_colorings = njit(cache=True)(_kernels.sweep_colorings)
else:
    BACKEND = "numpy"
    dpll_step = _kernels.dpll_step
    sweep_colorings = _kernels.sweep_colorings_numpy
