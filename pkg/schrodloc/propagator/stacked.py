""" S_t of the stacked function h = Σ_k h_{v_k}, stage by stage """

from __future__ import annotations

import dataclasses
import logging
from typing import Optional

from schrodloc import exc
from schrodloc.construction import Point, Schedule, Stage, make_stage
from schrodloc.profiles import FourierTable, default_table, frequency_bump
from schrodloc.quadrature import QuadratureSpec

from .base import EvalMode, EvalResult
from .dispatch import propagate_f_v_auto
from .semi_analytic import propagate_G_v

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class StageTerm:
    """ S_t f_{v_k}(x1) · S_t G_{v_k}(x') for one stage """
    k: int

    # The two factors and their product. None when the stage failed.
    f: Optional[EvalResult]
    G: Optional[EvalResult]
    term: Optional[EvalResult]

    # Why the stage failed
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.term is None

    def export(self) -> dict:
        return {
            'k': self.k,
            're': self.term.value.real if self.term else None,
            'im': self.term.value.imag if self.term else None,
            'abs': abs(self.term) if self.term else None,
            'est_err': self.term.est_error if self.term else None,
            'f_mode': self.f.mode.value if self.f else None,
            'error': self.error,
        }


@dataclasses.dataclass(frozen=True)
class StackedResult:
    """ S_t h(x) with the per-stage breakdown """
    total: EvalResult
    terms: tuple[StageTerm, ...]

    @property
    def partial(self) -> bool:
        """ Whether some stage is missing from `total` """
        return any(term.failed for term in self.terms)

    @property
    def failed_stages(self) -> list[int]:
        return [term.k for term in self.terms if term.failed]

    def term(self, k: int) -> StageTerm:
        for term in self.terms:
            if term.k == k:
                return term
        raise KeyError(k)


def propagate_stage(stage: Stage, t: float, point: Point, spec: QuadratureSpec, *,
                    table: Optional[FourierTable] = None,
                    f_mode: Optional[EvalMode] = None) -> StageTerm:
    """ S_t h_v(x) = S_t f_v(x1) · S_t G_v(x'); numerical failures are recorded in the term """
    table = table or default_table()
    try:
        f = propagate_f_v_auto(stage, t, point.x1, spec, table=table, mode=f_mode)
        G = propagate_G_v(stage, t, point.xprime_array(), spec, frequency_bump(stage.n, table.profile))
    except exc.NumericalError as e:
        logger.warning(f'S_t h_v, stage {stage.k} failed at t={t!r}: {e}')
        return StageTerm(k=stage.k, f=None, G=None, term=None, error=str(e))
    return StageTerm(k=stage.k, f=f, G=G, term=f * G)


def propagate_h(schedule: Schedule, t: float, point: Point, spec: QuadratureSpec, *,
                table: Optional[FourierTable] = None,
                f_mode: Optional[EvalMode] = None) -> StackedResult:
    """ S_t h(x) = Σ_{k=K}^{k_max} S_t f_{v_k}(x1) S_t G_{v_k}(x')

    Stages that fail numerically are kept in the breakdown with their error, and flagged by `partial`.
    """
    if point.n != schedule.n:
        raise exc.InvalidParameterError(f'the point has {point.n} coordinates, the schedule is {schedule.n}-dimensional')

    terms = tuple(
        propagate_stage(make_stage(schedule, k), t, point, spec, table=table, f_mode=f_mode)
        for k in schedule.stage_indices
    )

    value = 0j
    error = 0.0
    for term in terms:
        if term.term is not None:
            value += term.term.value
            error += term.term.est_error
    total = EvalResult(value=value, est_error=error, mode=f_mode or EvalMode.SEMI_ANALYTIC)
    return StackedResult(total=total, terms=terms)
