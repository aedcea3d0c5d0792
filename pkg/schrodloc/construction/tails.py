""" Schedule tail sums, in the log domain

    Σ_{i>k} v_i <= 2 v_{k+1}                         (upper tail: later, finer stages)
    Σ_{K<=i<=k-1} v_i^{-β} <= v_{k-1}^{-β} / (1 - 2^{-β})   (lower tail: earlier, coarser stages)
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from schrodloc import exc
from schrodloc.util import log2_sum, pow2

from .schedule import Schedule


@dataclasses.dataclass(frozen=True)
class TailSums:
    """ Both tails around stage k, as log2 values """
    k: int

    # log2 Σ_{i>k} v_i, including the analytic bound of the stages beyond k_max
    log2_sum_hi: float

    # log2 Σ_{K<=i<=k-1} v_i^{-β}
    log2_sum_lo: float

    # log2 of the part of `log2_sum_hi` that bounds stages beyond k_max; -inf when there are none
    log2_truncated_hi: float

    @property
    def sum_hi(self) -> float:
        return pow2(self.log2_sum_hi)

    @property
    def sum_lo(self) -> float:
        return pow2(self.log2_sum_lo)


def tail_sums(schedule: Schedule, k: int) -> TailSums:
    """ Σ_{i>k} v_i and Σ_{K<=i<=k-1} v_i^{-β}, with both geometric bounds asserted

    Stages beyond k_max of a recurrence contribute at most 2 v_{k_max+1}: each v_{i+1} <= v_i / 2.
    An explicit v-list is the whole function: nothing lies beyond it.

    Raises:
        exc.InvalidParameterError: k outside of (K, k_max]
        exc.InvariantViolation: a geometric bound fails
    """
    if not schedule.K < k <= schedule.k_max:
        raise exc.InvalidParameterError(f'tail_sums needs K < k <= k_max, got k = {k}')
    log_v = schedule.log_v
    beta = schedule.beta

    # Upper tail
    log2_next = schedule.log2_v_next()
    log2_truncated = -math.inf if log2_next is None else 1 + log2_next
    log2_hi = log2_sum(np.append(log_v[k:], log2_truncated))

    # Bound: 2 v_{k+1}, with v_{k_max+1} from the recurrence
    if k < schedule.k_max:
        log2_bound_hi = 1 + float(log_v[k])
    else:
        log2_bound_hi = 1 + (log2_next if log2_next is not None else -math.inf)
    if log2_hi > log2_bound_hi:
        raise exc.InvariantViolation('tail_sums', f'Σ_(i>{k}) v_i <= 2 v_({k + 1}) fails')

    # Lower tail
    log2_lo = log2_sum(-beta * log_v[schedule.K - 1:k - 1])
    log2_bound_lo = -beta * float(log_v[k - 2]) - math.log2(1 - 2 ** -beta)
    if log2_lo > log2_bound_lo:
        raise exc.InvariantViolation('tail_sums', f'Σ v_i^-β <= v_({k - 1})^-β / (1 - 2^-β) fails')

    return TailSums(k=k, log2_sum_hi=log2_hi, log2_sum_lo=log2_lo, log2_truncated_hi=log2_truncated)
