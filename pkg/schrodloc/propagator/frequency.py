""" S_t on the frequency side: ∫ e^{iξ·x} e^{it|ξ|²} f̂(ξ) dξ """

from __future__ import annotations

import logging
from collections import abc
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.quadrature import QuadratureSpec, PhaseAccumulator, integrate, integrate_box, linear_oscillation
from schrodloc.typing import ComplexArray, FrequencyFunction, RealArray

from .base import EvalMode, EvalResult

logger = logging.getLogger(__name__)


def schrodinger_mean_fhat(fhat: FrequencyFunction, t: float, x: npt.ArrayLike, spec: QuadratureSpec, *,
                          box: abc.Sequence[tuple[float, float]],
                          breakpoints: Optional[abc.Sequence[abc.Iterable[float]]] = None,
                          truncation_error: float = 0.0,
                          where: str = 'schrodinger_mean_fhat',
                          record_history: bool = False) -> EvalResult:
    """ S_t f(x) from f̂ supported (up to `truncation_error`) in `box`

    Args:
        fhat: Vectorized f̂: frequencies of shape (N, dim) -> N values
        t: Time
        x: The point, `dim` coordinates
        box: (lo, hi) per axis: the bounded set f̂ lives on
        breakpoints: Per-axis points where f̂ is not smooth
        truncation_error: Bound on ∫|f̂| outside of the box; added to the error estimate

    Raises:
        exc.QuadratureNonconvergenceError: with the best value and its error estimate
        exc.PrecisionLossError: a phase beyond the compensated arithmetic's ceiling
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (len(box),):
        raise exc.InvalidParameterError(f'x has {x.size} coordinates, the box has {len(box)} axes')

    def integrand(xi: RealArray) -> ComplexArray:
        phase = PhaseAccumulator(where=where)
        phase.add_product(xi, x)
        phase.add_product3(t, xi, xi)
        return phase.unit().prod(axis=-1) * fhat(xi)

    # Axis j oscillates with |x_j + 2t ξ_j|
    oscillation = [linear_oscillation(float(x_j), 2 * t) for x_j in x]

    if len(box) == 1:
        (lo, hi), = box
        result = integrate(lambda xi: integrand(xi[:, None]), lo, hi, spec,
                           oscillation=oscillation[0], breakpoints=(breakpoints or [()])[0],
                           where=where, record_history=record_history)
    else:
        result = integrate_box(integrand, box, spec, oscillation=oscillation, breakpoints=breakpoints, where=where)

    return EvalResult.from_quadrature(result, EvalMode.DIRECT_ORACLE, extra_error=truncation_error)


def multiplier(t: float, xi: npt.ArrayLike) -> ComplexArray:
    """ e^{it|ξ|²}: the frequency-side propagator; the last axis holds the coordinates """
    xi = np.asarray(xi, dtype=float)
    phase = PhaseAccumulator(where='multiplier').add_product3(t, xi, xi)
    return phase.unit().prod(axis=-1)
