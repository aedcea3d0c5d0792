""" The parameter schedule v_K > v_{K+1} > ... of the construction

v_k collapses doubly exponentially, so the schedule lives in the log domain: it stores log2 v_k,
and every quantity derived from it is computed from logarithms.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections import abc
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.typing import RealArray
from schrodloc.util import pow2

logger = logging.getLogger(__name__)

# Largest |log2 v| a schedule may hold
LOG2_LIMIT = 1e300


@dataclasses.dataclass(frozen=True)
class ScheduleOverrides:
    """ Explicit replacements for the parameters of the recurrence

    Every override is watermarked in the outputs.
    """
    # Replaces max(n, 2 + n/4)
    mu: Optional[float] = None

    # Replaces ε_k = 2^{-k}; index 0 is ε_1 (unused by the recurrence)
    eps: Optional[tuple[float, ...]] = None

    # Replaces the whole recurrence: v_1, v_2, ... as given
    v: Optional[tuple[float, ...]] = None

    # Replaces the smallest K with v_K < δ/4
    K: Optional[int] = None

    def __bool__(self):
        return any(value is not None for value in dataclasses.astuple(self))

    def export(self) -> dict:
        return {
            name: list(value) if isinstance(value, tuple) else value
            for name, value in dataclasses.asdict(self).items()
            if value is not None
        }


@dataclasses.dataclass(frozen=True, eq=False)
class Schedule:
    """ v_k = ε_k v_{k-1}^μ for k = 2..k_max, with v_1 given

    Stage indices are 1-based, like in the construction: `log_v[k - 1]` is log2 v_k.
    """
    # Dimension
    n: int

    # v_1
    v1: float

    # Exponent of the recurrence
    mu: float

    # log2 ε_k, for k = 1..k_max (ε_1 is unused: nan)
    log_eps: RealArray

    # log2 v_k, for k = 1..k_max
    log_v: RealArray

    # The first stage: v_K < delta / 4
    K: int

    # The last stage
    k_max: int

    # Half-width of the x1-region the divergence set avoids
    delta: float

    # What was overridden; empty when the schedule is the plain recurrence
    overrides: ScheduleOverrides = ScheduleOverrides()

    @property
    def gamma(self) -> float:
        """ γ = n/2: the |t| exponent of the upper-tail cross terms """
        return self.n / 2

    @property
    def beta(self) -> float:
        """ β = 4 + n/2: the v exponent of the lower-tail cross terms """
        return 4 + self.n / 2

    @property
    def is_recurrence(self) -> bool:
        """ Whether the v_k follow the recurrence (possibly with overridden μ, ε) """
        return self.overrides.v is None

    @property
    def watermark(self) -> Optional[str]:
        """ A label for every output made from an overridden schedule """
        if not self.overrides:
            return None
        return 'override:' + ','.join(sorted(self.overrides.export()))

    @property
    def stage_indices(self) -> range:
        return range(self.K, self.k_max + 1)

    def log2_v(self, k: int) -> float:
        self._check_index(k, 1)
        return float(self.log_v[k - 1])

    def v(self, k: int) -> float:
        """ v_k as a double; 0.0 once it underflows """
        return pow2(self.log2_v(k))

    def log2_eps(self, k: int) -> float:
        """ log2 ε_k; a recurrence also has one at k_max + 1 """
        if k == self.k_max + 1 and self.is_recurrence:
            return self._log2_eps_default(k)
        self._check_index(k, 2)
        return float(self.log_eps[k - 1])

    def log2_v_next(self) -> Optional[float]:
        """ log2 v_{k_max + 1} of the recurrence; None for an explicit list """
        if not self.is_recurrence:
            return None
        return self._log2_eps_default(self.k_max + 1) + self.mu * float(self.log_v[-1])

    def export(self) -> dict:
        return {
            'n': self.n,
            'v1': self.v1,
            'mu': self.mu,
            'delta': self.delta,
            'K': self.K,
            'k_max': self.k_max,
            'log2_v': [float(x) for x in self.log_v],
            'overrides': self.overrides.export(),
        }

    def _log2_eps_default(self, k: int) -> float:
        if self.overrides.eps is not None and k - 1 < len(self.overrides.eps):
            return math.log2(self.overrides.eps[k - 1])
        return -float(k)

    def _check_index(self, k: int, lowest: int):
        if not lowest <= k <= self.k_max:
            raise exc.InvalidParameterError(f'stage index {k} outside of [{lowest}, {self.k_max}]')


def default_mu(n: int) -> float:
    """ μ = max(n, 2 + n/4) """
    return max(float(n), 2 + n / 4)


def build_schedule(n: int, v1: float, delta: float, k_max: int,
                   overrides: Optional[ScheduleOverrides] = None) -> Schedule:
    """ Build the schedule in the log domain and verify its laws

    Args:
        n: Dimension, >= 2
        v1: The first scale, in (0, 1)
        delta: In (0, 1); K is the first index with v_K < delta/4
        k_max: The last stage
        overrides: Explicit μ, ε_k, v_k or K

    Raises:
        exc.InvalidParameterError: parameters outside of their domain, or a violated schedule law
        exc.ScheduleOverflowError: log2 v_k beyond the representable range
    """
    overrides = overrides or ScheduleOverrides()

    # Check parameters
    if n < 2:
        raise exc.InvalidParameterError(f'n must be >= 2, got {n!r}')
    if not 0 < delta < 1:
        raise exc.InvalidParameterError(f'delta must be in (0, 1), got {delta!r}')
    if overrides.v is not None:
        if not overrides.v:
            raise exc.InvalidParameterError('the explicit v list is empty')
        v1 = overrides.v[0]
        k_max = len(overrides.v)
    if not 0 < v1 < 1:
        raise exc.InvalidParameterError(f'v1 must be in (0, 1), got {v1!r}')
    if k_max < 1:
        raise exc.InvalidParameterError(f'k_max must be >= 1, got {k_max!r}')

    mu = default_mu(n) if overrides.mu is None else float(overrides.mu)
    gamma, beta = n / 2, 4 + n / 2

    # μ-conditions: μ >= 2γ and μ >= β/2
    if overrides.v is None and not (mu >= 2 * gamma and mu >= beta / 2):
        raise exc.InvalidParameterError(f'mu = {mu!r} violates mu >= 2γ = {2 * gamma!r} and mu >= β/2 = {beta / 2!r}')

    # Recurrence in the log domain
    if overrides.v is not None:
        if any(not 0 < v < 1 for v in overrides.v):
            raise exc.InvalidParameterError(f'explicit v_k must lie in (0, 1), got {list(overrides.v)!r}')
        log_v = np.log2(np.asarray(overrides.v, dtype=float))
        log_eps = np.concatenate(([math.nan], log_v[1:] - mu * log_v[:-1]))
    else:
        log_v = np.empty(k_max)
        log_eps = np.full(k_max, math.nan)
        log_v[0] = math.log2(v1)
        for k in range(2, k_max + 1):
            if overrides.eps is not None and k - 1 < len(overrides.eps):
                eps = overrides.eps[k - 1]
                if not 0 < eps < 1:
                    raise exc.InvalidParameterError(f'eps_{k} must be in (0, 1), got {eps!r}')
                log_eps[k - 1] = math.log2(eps)
            else:
                log_eps[k - 1] = -float(k)
            log_v[k - 1] = log_eps[k - 1] + mu * log_v[k - 2]
            if not abs(log_v[k - 1]) < LOG2_LIMIT:
                raise exc.ScheduleOverflowError(k, float(log_v[k - 1]))

    # K
    log2_quarter_delta = math.log2(delta / 4)
    if overrides.K is not None:
        K = overrides.K
        if not 1 <= K <= k_max:
            raise exc.InvalidParameterError(f'K = {K!r} outside of [1, {k_max}]')
        if not log_v[K - 1] < log2_quarter_delta:
            raise exc.InvalidParameterError(f'v_K must be < delta/4 for K = {K!r}')
    else:
        below = np.flatnonzero(log_v < log2_quarter_delta)
        if below.size == 0:
            raise exc.InvalidParameterError(f'no v_k < delta/4 = {delta / 4!r} up to k_max = {k_max}')
        K = int(below[0]) + 1

    schedule = Schedule(
        n=n,
        v1=float(v1),
        mu=mu,
        log_eps=log_eps,
        log_v=log_v,
        K=K,
        k_max=k_max,
        delta=delta,
        overrides=overrides,
    )

    # Verify the laws
    for violation in schedule_violations(schedule):
        raise exc.InvalidParameterError(violation)

    if schedule.watermark:
        logger.info(f'Schedule is overridden ({schedule.watermark})')
    return schedule


def schedule_violations(schedule: Schedule) -> abc.Iterator[str]:
    """ Yield every violated schedule law """
    log_v = schedule.log_v

    # Strictly decreasing
    if np.any(np.diff(log_v) >= 0):
        yield 'v_k must be strictly decreasing'

    # v_k < 2^{-k} for k >= 2
    k = np.arange(1, len(log_v) + 1)
    bad = (k >= 2) & ~(log_v < -k)
    if np.any(bad):
        yield f'v_k < 2^-k fails at k = {k[bad].tolist()}'

    # Explicit lists: v_{k+1} <= v_k^{2γ} and v_{k+1}² <= v_k^β between consecutive stages
    if not schedule.is_recurrence:
        for i in range(schedule.K, schedule.k_max):
            lo, hi = log_v[i], log_v[i - 1]  # log2 v_{i+1}, log2 v_i
            if not lo <= 2 * schedule.gamma * hi:
                yield f'v_{i + 1} <= v_{i}^(2γ) fails'
            if not 2 * lo <= schedule.beta * hi:
                yield f'v_{i + 1}^2 <= v_{i}^β fails'
