"""Exhaustive arrowing oracle: sweep every coloring of the host.

Independent of the search engine: copies become edge bitmasks and each of
the 2^E colorings is tested directly.  Usable up to E around 24; the point
is cross-validation of decide_arrowing on small hosts, not performance.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from ._backend import sweep_colorings
from .coloring import TwoColoring
from .core import LooseTemplate
from .embedder import copy_rank_matrix


def _masks(N: int, k: int, t: LooseTemplate) -> np.ndarray:
    rows = copy_rank_matrix(N, k, t)
    masks = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[0]):
        m = 0
        for r in rows[i]:
            m |= 1 << int(r)
        masks[i] = m
    return masks


def coloring_from_mask(k: int, N: int, x: int) -> TwoColoring:
    E = math.comb(N, k)
    bits = np.zeros(E, dtype=np.uint8)
    for i in range(E):
        if (x >> i) & 1:
            bits[i] = 1
    return TwoColoring(k, N, bits)


def brute_force_arrowing(k: int, N: int, red_target: LooseTemplate,
                         blue_target: LooseTemplate,
                         ) -> Tuple[bool, Optional[TwoColoring]]:
    """(admissible coloring exists?, first such coloring in mask order).

    "Admissible" = no red copy of red_target and no blue copy of blue_target,
    i.e. SAT in decide_arrowing's sense.  Exhaustive over all 2^C(N,k) masks.
    """
    E = math.comb(N, k)
    if E > 24:
        raise ValueError(f"brute force limited to 24 edges, got {E}")
    reds = _masks(N, k, red_target)
    blues = _masks(N, k, blue_target)
    hit = int(sweep_colorings(reds, blues, 0, 1 << E))
    if hit < 0:
        return False, None
    return True, coloring_from_mask(k, N, hit)
