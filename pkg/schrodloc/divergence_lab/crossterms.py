""" Off-stage terms of S_t h(x) at the time of one stage

At a time of stage k, the other stages contribute

    Σ_{i>k} |S_t h_{v_i}(x)| <= C Σ_{i>k} v_i / |t|^γ         (finer stages)
    Σ_{i<k} |S_t h_{v_i}(x)| <= C |t| Σ_{K<=i<k} v_i^{-β}     (coarser stages)

For the recurrence, with |t| ~ v_k², both tails are bounded by C (ε_{k+1} + ε_k²).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from enum import Enum
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.construction import Point, Schedule, Stage, make_stage, tail_sums
from schrodloc.profiles import FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.propagator import G_v_sup_bound, propagate_stage
from schrodloc.quadrature import QuadratureSpec
from schrodloc.util import log2_sum, pow2

logger = logging.getLogger(__name__)

# A stage whose inner integrals would need more panels than this is majorized instead of measured
MEASURE_PANEL_BUDGET = 1 << 14


class CrossTermKind(Enum):
    # |S_t h_{v_i}(x)| evaluated
    MEASURED = 'measured'

    # An upper bound of |S_t h_{v_i}(x)| substituted for the evaluation
    MAJORANT = 'majorant'


@dataclasses.dataclass(frozen=True)
class CrossTermBound:
    """ The analytic bound of the off-stage terms at one time, with both tails in log2 """
    k: int
    t: float

    # Envelope constant
    C: float

    # log2 of Σ_{i>k, i<=k_max} v_i / |t|^γ; -inf for k = k_max
    log2_upper: float

    # log2 of |t| Σ_{K<=i<k} v_i^{-β}; -inf for k = K
    log2_lower: float

    # log2 of the contribution of the stages beyond k_max to the upper tail: -inf for an explicit v-list
    log2_beyond: float

    # C (ε_{k+1} + ε_k²), for schedules that follow the recurrence
    tightened: Optional[float] = None

    @property
    def value(self) -> float:
        """ The bound for the truncated sum Σ_{i=K}^{k_max} """
        return self.C * (pow2(self.log2_upper) + pow2(self.log2_lower))

    @property
    def value_infinite(self) -> float:
        """ The bound with the stages beyond k_max included """
        return self.value + self.C * pow2(self.log2_beyond)

    def export(self) -> dict:
        return {
            'k': self.k,
            't': self.t,
            'C': self.C,
            'log2_upper': self.log2_upper,
            'log2_lower': self.log2_lower,
            'bound': self.value,
            'tightened': self.tightened,
        }


@dataclasses.dataclass(frozen=True)
class CrossTerm:
    """ |S_t h_{v_i}(x)| of one off-stage i, measured or majorized """
    i: int
    kind: CrossTermKind
    value: float
    est_error: float = 0.0

    # Why a majorant was used
    reason: Optional[str] = None

    def export(self) -> dict:
        return {'i': self.i, 'kind': self.kind.value, 'value': self.value, 'est_error': self.est_error,
                'reason': self.reason}


def cross_term_bound(schedule: Schedule, k: int, t: float, C: float = 1.0) -> CrossTermBound:
    """ C (Σ_{i>k} v_i / |t|^γ + |t| Σ_{K<=i<k} v_i^{-β}), summed in the log domain

    Raises:
        exc.InvalidParameterError: k outside of [K, k_max], t = 0, or C <= 0
    """
    if not schedule.K <= k <= schedule.k_max:
        raise exc.InvalidParameterError(f'cross_term_bound needs K <= k <= k_max, got k = {k}')
    if t == 0:
        raise exc.InvalidParameterError('cross_term_bound needs t != 0')
    if not C > 0:
        raise exc.InvalidParameterError(f'the envelope constant must be > 0, got {C!r}')

    log2_t = math.log2(abs(t))
    gamma = schedule.gamma
    log_v = schedule.log_v

    # Tails: tail_sums covers k > K and asserts both geometric bounds
    if k > schedule.K:
        tails = tail_sums(schedule, k)
        log2_lo = tails.log2_sum_lo
        log2_truncated = tails.log2_truncated_hi
    else:
        log2_lo = -math.inf
        next_v = schedule.log2_v_next()
        log2_truncated = -math.inf if next_v is None else 1 + next_v
    log2_hi = log2_sum(log_v[k:])

    return CrossTermBound(
        k=k,
        t=t,
        C=C,
        log2_upper=log2_hi - gamma * log2_t,
        log2_lower=log2_lo + log2_t,
        log2_beyond=log2_truncated - gamma * log2_t,
        tightened=tightened_bound(schedule, k, C),
    )


def tightened_bound(schedule: Schedule, k: int, C: float = 1.0) -> Optional[float]:
    """ C (ε_{k+1} + ε_k²) for a schedule that follows the recurrence; None otherwise """
    if not schedule.is_recurrence:
        return None
    log2_eps_next = log2_eps(schedule, k + 1)
    log2_eps_k = log2_eps(schedule, k) if k >= 2 else -math.inf
    return C * (pow2(log2_eps_next) + pow2(2 * log2_eps_k))


def log2_eps(schedule: Schedule, k: int) -> float:
    """ log2 ε_k, one stage past k_max included """
    if k == schedule.k_max + 1 and not schedule.is_recurrence:
        raise exc.InvalidParameterError('an explicit v-list has no ε beyond k_max')
    return schedule.log2_eps(k)


def tightened_sequence(schedule: Schedule, C: float = 1.0) -> list[tuple[int, Optional[float]]]:
    """ (k, C (ε_{k+1} + ε_k²)) for every stage of a recurrence """
    return [(k, tightened_bound(schedule, k, C)) for k in schedule.stage_indices]


def measured_cross_terms(schedule: Schedule, k: int, t: float, point: Point, spec: QuadratureSpec, *,
                         table: Optional[FourierTable] = None) -> list[CrossTerm]:
    """ |S_t h_{v_i}(x)| for every stage i != k

    A stage is majorized, and tagged so, when its inner integrals exceed the panel budget or its evaluation
    fails numerically. The majorant (π/|t|)^{1/2} ‖f_v‖₁ · sup|S_t G_v| keeps the sum an upper bound.
    """
    table = table or default_table()
    terms = []
    for i in schedule.stage_indices:
        if i == k:
            continue
        stage = make_stage(schedule, i)
        bump = frequency_bump(stage.n, table.profile)

        panels = _G_panels(stage, t, point, bump, spec)
        if panels > MEASURE_PANEL_BUDGET:
            terms.append(_majorant(stage, t, spec, bump, f'{panels} panels per inner integral'))
            continue

        term = propagate_stage(stage, t, point, spec, table=table)
        if term.term is None:
            terms.append(_majorant(stage, t, spec, bump, term.error))
        else:
            terms.append(CrossTerm(i=i, kind=CrossTermKind.MEASURED, value=abs(term.term), est_error=term.term.est_error))
    return terms


def h_v_majorant(stage: Stage, t: float, spec: QuadratureSpec, bump: Optional[FrequencyBump] = None) -> float:
    """ sup_x |S_t h_v(x)| <= (π/|t|)^{1/2} v ‖ǧ‖₁ · R^{-(n-1)/4} (count ∫|ψ̂|)^{n-1} """
    bump = bump or frequency_bump(stage.n)
    f_bound = math.sqrt(math.pi / abs(t)) * stage.v * bump.profile.l1_norm(spec).value.real
    return f_bound * G_v_sup_bound(stage, bump)


def _majorant(stage: Stage, t: float, spec: QuadratureSpec, bump: FrequencyBump, reason: Optional[str]) -> CrossTerm:
    logger.debug(f'Cross term of stage {stage.k} at t={t!r} is majorized: {reason}')
    return CrossTerm(i=stage.k, kind=CrossTermKind.MAJORANT, value=h_v_majorant(stage, t, spec, bump), reason=reason)


def _G_panels(stage: Stage, t: float, point: Point, bump: FrequencyBump, spec: QuadratureSpec) -> int:
    """ Panels of the inner integrals S_tψ(x_j + 2tDl): the phase bound over the support of ψ̂ """
    reach = float(np.max(np.abs(point.xprime_array()))) + 2 * abs(t) * stage.D * stage.lattice_hi
    omega = reach + 2 * abs(t) * bump.r
    return math.ceil(2 * bump.r * omega / spec.phase_per_panel)
