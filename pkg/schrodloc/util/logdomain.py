""" Arithmetic on base-2 logarithms

Schedules collapse doubly exponentially: v_3 may already underflow a double.
Everything that sums or compares schedule quantities works on log2 values instead.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt


def log2_sum(log2_values: npt.ArrayLike) -> float:
    """ log2(Σ 2^x) for an array of log2 values; -inf for an empty sum """
    values = np.asarray(log2_values, dtype=float)
    if values.size == 0:
        return float('-inf')
    return float(np.logaddexp2.reduce(values))


def pow2(log2_value: float) -> float:
    """ 2^x, saturating to 0.0 / inf instead of raising """
    with np.errstate(over='ignore', under='ignore'):
        return float(np.exp2(log2_value))
