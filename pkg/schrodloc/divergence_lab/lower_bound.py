""" The lower bound of |S_t f_v(x1)| over a time window

Inside the window, |S_t f_v(x1)| is predicted by the kernel scale (π/|t|)^{1/2} v times |ǧ(2τR^{3/2})|.
The window keeps |2τR^{3/2}| < 0.2, inside the plateau of ǧ, so the prediction is flat.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.profiles import FourierTable, default_table
from schrodloc.propagator import EvalResult, propagate_f_v_auto
from schrodloc.quadrature import QuadratureSpec

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class LowerBoundF:
    """ |S_t f_v(x1)| over a τ-grid: the best time, and the corridor of measured / predicted """
    k: int
    x1: float

    # The best time and |S_t f_v(x1)| there
    t_best: float
    value: float

    # min and max of measured / predicted over the grid
    corridor: tuple[float, float]

    # Threshold c0_f, when one is set
    threshold: Optional[float] = None

    @property
    def passed(self) -> bool:
        """ Whether the max reaches the threshold; True without a threshold """
        return self.threshold is None or self.value >= self.threshold

    @property
    def kappa(self) -> float:
        """ The smallest κ with the corridor inside [1/κ, κ] """
        lo, hi = self.corridor
        return max(hi, 1 / lo) if lo > 0 else math.inf

    def export(self) -> dict:
        return {
            'k': self.k,
            'x1': self.x1,
            't': self.t_best,
            'value': self.value,
            'corridor': list(self.corridor),
            'threshold': self.threshold,
            'passed': self.passed,
        }


def f_v_predictor(stage: Stage, t: float, tau: float, table: Optional[FourierTable] = None) -> float:
    """ (π/|t|)^{1/2} v |ǧ(2τR^{3/2})| """
    table = table or default_table()
    profile = table.profile
    return math.sqrt(math.pi / abs(t)) * stage.v * float(profile(2 * tau * stage.R ** 1.5))


def lower_bound_f(stage: Stage, x1: float, taus: npt.ArrayLike, spec: QuadratureSpec, *,
                  table: Optional[FourierTable] = None,
                  threshold: Optional[float] = None) -> LowerBoundF:
    """ Scan S_t f_v(x1) at t = x1/(2R) + τ, for τ on the grid

    A result below the threshold is reported, not raised.

    Raises:
        exc.InvalidParameterError: an empty grid
    """
    table = table or default_table()
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        raise exc.InvalidParameterError('lower_bound_f needs a non-empty τ-grid')
    t_center = x1 / (2 * stage.R)

    values = []
    ratios = []
    for tau in taus:
        t = t_center + float(tau)
        result: EvalResult = propagate_f_v_auto(stage, t, x1, spec, table=table)
        values.append(abs(result))

        # A zero prediction carries no corridor information
        predicted = f_v_predictor(stage, t, float(tau), table)
        if predicted > 0:
            ratios.append(abs(result) / predicted)

    j = int(np.argmax(values))
    bound = LowerBoundF(
        k=stage.k,
        x1=x1,
        t_best=t_center + float(taus[j]),
        value=float(values[j]),
        corridor=(min(ratios), max(ratios)) if ratios else (0.0, math.inf),
        threshold=threshold,
    )
    if not bound.passed:
        logger.info(f'|S_t f_v(x1)| below c0_f at stage {stage.k}, x1={x1!r}: {bound.value:.4g} < {threshold!r}')
    return bound
