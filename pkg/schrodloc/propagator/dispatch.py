""" Choice between the routes for S_t f_v, and the majorant of |S_t G_v| """

from __future__ import annotations

import logging
from typing import Optional

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.profiles import FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.quadrature import PHASE_CEILING, QuadratureSpec

from .base import EvalMode, EvalResult
from .kernel import kernel_f_v_phase, propagate_f_v_kernel
from .semi_analytic import f_v_phase, f_v_truncation, propagate_f_v

logger = logging.getLogger(__name__)


def select_f_mode(stage: Stage, t: float, x1: float, spec: QuadratureSpec,
                  table: Optional[FourierTable] = None) -> EvalMode:
    """ The cheaper route for S_t f_v(x1): the one whose quadratic phase varies less over its interval

    The semi-analytic route integrates over the support of g, the kernel route over (-v, v).
    Routes whose phase exceeds the precision ceiling are not eligible.

    Raises:
        exc.PrecisionLossError: neither route keeps its phase below the ceiling
    """
    if t == 0:
        return EvalMode.SEMI_ANALYTIC

    table = table or default_table()
    X, _ = f_v_truncation(spec, table)
    semi = f_v_phase(stage, t, x1)
    kernel = kernel_f_v_phase(stage, t, x1)

    candidates = []
    if semi.magnitude(-X, X) <= PHASE_CEILING:
        candidates.append((semi.variation(-X, X), EvalMode.SEMI_ANALYTIC))
    if kernel.magnitude(-stage.v, stage.v) <= PHASE_CEILING:
        candidates.append((kernel.variation(-stage.v, stage.v), EvalMode.KERNEL_CONVOLUTION))

    if not candidates:
        raise exc.PrecisionLossError('select_f_mode', semi.magnitude(-X, X), PHASE_CEILING)

    variation, mode = min(candidates, key=lambda candidate: candidate[0])
    logger.debug(f'S_t f_v, k={stage.k}, t={t!r}, x1={x1!r}: {mode.value} (phase variation {variation:.3g})')
    return mode


def propagate_f_v_auto(stage: Stage, t: float, x1: float, spec: QuadratureSpec, *,
                       table: Optional[FourierTable] = None,
                       mode: Optional[EvalMode] = None) -> EvalResult:
    """ S_t f_v(x1) by the given route, or by the cheaper one """
    table = table or default_table()
    mode = mode or select_f_mode(stage, t, x1, spec, table)

    if mode is EvalMode.SEMI_ANALYTIC:
        return propagate_f_v(stage, t, x1, spec, table=table)
    elif mode is EvalMode.KERNEL_CONVOLUTION:
        return propagate_f_v_kernel(stage, t, x1, spec, profile=table.profile)
    else:
        raise exc.InvalidParameterError(f'{mode.value} is an oracle, not a route for S_t f_v')


def G_v_sup_bound(stage: Stage, bump: Optional[FrequencyBump] = None) -> float:
    """ sup_{t, x'} |S_t G_v(x')| <= R^{-(n-1)/4} (count ∫|ψ̂|)^{n-1} """
    bump = bump or frequency_bump(stage.n)
    return stage.amplitude * (stage.lattice_count_per_axis * bump.hat_l1()) ** stage.dim
