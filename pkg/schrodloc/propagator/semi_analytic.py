""" Semi-analytic propagation: S_t of f_v, ψ, Φ and G_v through exact changes of variables

    S_t f_v(x1)  = ∫ e^{i x1 (η - 1/v)/v} e^{it (η - 1/v)²/v²} g(η) dη
    S_t G_v(x')  = R^{-(n-1)/4} Σ_l e^{iDl·x'} e^{itD²|l|²} (S_tΦ)(x' + 2tDl)
    S_t Φ(y')    = Π_j S_tψ(y_j)

Only bounded, low-frequency integrals remain: g over its effective support, ψ̂ over [-r, r].
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.construction import Stage, cutoff_or_fail
from schrodloc.profiles import FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.quadrature import (
    PHASE_CEILING, PhaseAccumulator, QuadraticPhase, QuadratureSpec,
    dd_mul, integrate, integrate_batch, two_prod,
)
from schrodloc.quadrature.phase import dd_add
from schrodloc.typing import ComplexArray, RealArray
from schrodloc.util import pow2

from .base import EvalMode, EvalResult

logger = logging.getLogger(__name__)

# Share of the absolute tolerance spent on the truncated tails of g
TAIL_SHARE = 0.05


def f_v_phase(stage: Stage, t: float, x1: float) -> QuadraticPhase:
    """ The phase of S_t f_v in the variable η = v(ξ + R), with s = 1/v:

        θ(η) = t s² η² + s(x1 - 2tR) η + R(tR - x1)
    """
    s = pow2(-stage.log2_v)
    R = stage.R

    # x1 - 2tR
    d = dd_add(x1, 0.0, *(-part for part in two_prod(2 * t, R)))

    # tR - x1
    q = dd_add(*two_prod(t, R), -x1, 0.0)

    return QuadraticPhase(
        a=dd_mul(t, 0.0, *two_prod(s, s)),
        b=dd_mul(s, 0.0, *d),
        c=dd_mul(R, 0.0, *q),
        where='propagate_f_v',
    )


def f_v_truncation(spec: QuadratureSpec, table: FourierTable) -> tuple[float, float]:
    """ (X, tail): the semi-analytic integral runs over [-X, X], and `tail` bounds what is left out """
    X = cutoff_or_fail(table, TAIL_SHARE * spec.abs_tol, 'propagate_f_v')
    tail = 2 * table.envelope.tail_integral(X)
    return X, tail


def propagate_f_v(stage: Stage, t: float, x1: float, spec: QuadratureSpec, *,
                  table: Optional[FourierTable] = None,
                  record_history: bool = False) -> EvalResult:
    """ S_t f_v(x1) by quadrature of g over its effective support

    The tail beyond the certified cutoff and the table's interpolation error enter the error estimate.

    Raises:
        exc.TruncationError: the decay envelope cannot certify the cutoff on the table
        exc.PrecisionLossError: the quadratic phase exceeds the ceiling
        exc.QuadratureNonconvergenceError: with the best value and its error estimate
    """
    table = table or default_table()
    X, tail = f_v_truncation(spec, table)
    phase = f_v_phase(stage, t, x1)

    # Fail before evaluating anything
    magnitude = phase.magnitude(-X, X)
    if magnitude > PHASE_CEILING:
        raise exc.PrecisionLossError('propagate_f_v', magnitude, PHASE_CEILING)

    result = integrate(
        lambda eta: phase.unit(eta) * table(eta),
        -X, X, spec,
        oscillation=phase.oscillation(),
        where='propagate_f_v',
        record_history=record_history,
    )
    return EvalResult.from_quadrature(result, EvalMode.SEMI_ANALYTIC, extra_error=tail + table.error_l1)


def propagate_psi(t: float, y: npt.ArrayLike, spec: QuadratureSpec,
                  bump: Optional[FrequencyBump] = None) -> tuple[ComplexArray, RealArray]:
    """ S_tψ(y) = ∫ e^{iηy} e^{itη²} ψ̂(η) dη at many points at once

    Returns:
        (values, est_errors), shaped like `y`
    """
    bump = bump or frequency_bump(2)
    y = np.asarray(y, dtype=float)
    flat = y.reshape(-1)
    if flat.size == 0:
        return np.zeros(y.shape, dtype=complex), np.zeros(y.shape)

    def integrand(eta: RealArray) -> ComplexArray:
        phase = PhaseAccumulator(where='propagate_psi')
        phase.add_product(flat[:, None], eta[None, :])
        phase.add_product3(t, eta, eta)
        return phase.unit() * bump.hat(eta)[None, :]

    values, errors = integrate_batch(
        integrand, -bump.r, bump.r, spec,
        omega=float(np.max(np.abs(flat))) + 2 * abs(t) * bump.r,
        where='propagate_psi',
    )
    return values.reshape(y.shape), errors.reshape(y.shape)


def propagate_phi(t: float, yprime: npt.ArrayLike, spec: QuadratureSpec,
                  bump: Optional[FrequencyBump] = None) -> EvalResult:
    """ S_tΦ(y') = Π_j S_tψ(y_j); n is taken from the number of coordinates """
    yprime = np.atleast_1d(np.asarray(yprime, dtype=float))
    if yprime.ndim != 1:
        raise exc.InvalidParameterError(f'y\' must be a vector, got shape {yprime.shape}')
    bump = bump or frequency_bump(yprime.size + 1)
    if bump.dim != yprime.size:
        raise exc.InvalidParameterError(f'y\' must have {bump.dim} coordinates, got {yprime.size}')

    values, errors = propagate_psi(t, yprime, spec, bump)
    return _product(values, errors)


def propagate_G_v(stage: Stage, t: float, xprime: npt.ArrayLike, spec: QuadratureSpec,
                  bump: Optional[FrequencyBump] = None) -> EvalResult:
    """ S_tG_v(x') through the lattice reduction

    All (n - 1) × count inner integrals S_tψ(x_j + 2tDl) run as one batch.
    The lattice phases D l x_j + t D² l² are accumulated in double-double.

    Raises:
        exc.PrecisionLossError: a lattice phase beyond the ceiling
        exc.QuadratureNonconvergenceError: an inner integral did not converge
    """
    bump = bump or frequency_bump(stage.n)
    xprime = np.atleast_1d(np.asarray(xprime, dtype=float))
    if xprime.shape != (stage.dim,):
        raise exc.InvalidParameterError(f'x\' must have {stage.dim} coordinates, got shape {xprime.shape}')

    # D l, exactly as a double-double
    Dl_hi, Dl_lo = two_prod(stage.D, stage.lattice.astype(float))

    # Phases: (dim, count)
    phase = PhaseAccumulator(where='propagate_G_v')
    phase.add_dd_mul(Dl_hi[None, :], Dl_lo[None, :], xprime[:, None], 0.0)
    phase.add_dd_mul(*dd_mul(Dl_hi, Dl_lo, Dl_hi, Dl_lo), t, 0.0)
    units = phase.unit()

    # Inner integrals at the shifted points
    shifted = xprime[:, None] + 2 * t * Dl_hi[None, :]
    values, errors = propagate_psi(t, shifted, spec, bump)

    axis_values = (units * values).sum(axis=-1)
    axis_errors = errors.sum(axis=-1)
    return _product(axis_values, axis_errors).scaled(stage.amplitude)


def _product(values: ComplexArray, errors: RealArray) -> EvalResult:
    """ Product of per-axis factors, with first-order error propagation """
    result = EvalResult(value=1 + 0j, est_error=0.0, mode=EvalMode.SEMI_ANALYTIC)
    for value, error in zip(values, errors):
        result = result * EvalResult(value=complex(value), est_error=float(error), mode=EvalMode.SEMI_ANALYTIC)
    return result
