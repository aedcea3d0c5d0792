""" S_t as a convolution with the kernel K_t

    K_t(y) = |t|^{-n/2} π^{n/2} e^{±inπ/4} e^{-i|y|²/(4t)},  sign of t

The constant comes from the Fresnel integral ∫ e^{itξ² + ibξ} dξ = (π/|t|)^{1/2} e^{±iπ/4} e^{-ib²/(4t)}.
"""

from __future__ import annotations

import cmath
import math
from collections import abc
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.profiles import BumpProfile
from schrodloc.quadrature import (
    PHASE_CEILING, PhaseAccumulator, QuadraticPhase, QuadratureSpec,
    dd_div, integrate, integrate_box, linear_oscillation, two_prod,
)
from schrodloc.quadrature.phase import dd_add
from schrodloc.typing import ComplexArray, Integrand, RealArray

from .base import EvalMode, EvalResult


def kernel_constant(t: float, n: int) -> complex:
    """ |t|^{-n/2} π^{n/2} e^{±inπ/4} """
    if t == 0:
        raise exc.DomainError('the kernel K_t is not defined at t = 0')
    sign = 1 if t > 0 else -1
    return (math.pi / abs(t)) ** (n / 2) * cmath.exp(sign * 1j * n * math.pi / 4)


def kernel_K_t(t: float, y: npt.ArrayLike) -> ComplexArray:
    """ K_t(y); the last axis of `y` holds the n coordinates

    Raises:
        exc.DomainError: t = 0
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    constant = kernel_constant(t, y.shape[-1])

    # -|y|²/(4t), accumulated per coordinate
    phase = PhaseAccumulator(where='kernel_K_t')
    for j in range(y.shape[-1]):
        phase.add_dd(*dd_div(*two_prod(y[..., j], y[..., j]), -4 * t))
    return constant * phase.unit()


def propagate_by_kernel(f: Integrand, support: abc.Sequence[tuple[float, float]], t: float, x: npt.ArrayLike,
                        spec: QuadratureSpec, *,
                        breakpoints: Optional[abc.Sequence[abc.Iterable[float]]] = None,
                        frequency: Optional[abc.Sequence[float]] = None,
                        where: str = 'propagate_by_kernel') -> EvalResult:
    """ S_t f(x) = ∫ K_t(x - y) f(y) dy over the support of f

    Args:
        f: Vectorized f: points of shape (N, n) -> N values
        support: (lo, hi) per axis
        breakpoints: Per-axis points where f is not smooth
        frequency: Per-axis bound on the oscillation of f itself (e.g. R for f_v), added to the kernel's

    Raises:
        exc.DomainError: t = 0
        exc.QuadratureNonconvergenceError: with the best value and its error estimate
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(support)
    if x.shape != (n,):
        raise exc.InvalidParameterError(f'x has {x.size} coordinates, the support has {n} axes')
    constant = kernel_constant(t, n)
    frequency = frequency or [0.0] * n

    def integrand(y: RealArray) -> ComplexArray:
        diff = x[None, :] - y
        phase = PhaseAccumulator(where=where)
        for j in range(n):
            phase.add_dd(*dd_div(*two_prod(diff[:, j], diff[:, j]), -4 * t))
        return phase.unit() * f(y)

    # Axis j: |d/dy (x_j - y)²/(4t)| = |x_j - y|/(2|t|)
    oscillation = [
        linear_oscillation(abs(x_j) / (2 * abs(t)) + w, 1 / (2 * abs(t)))
        for x_j, w in zip(x, frequency)
    ]
    result = integrate_box(integrand, support, spec, oscillation=oscillation, breakpoints=breakpoints, where=where)
    return EvalResult.from_quadrature(result, EvalMode.KERNEL_CONVOLUTION).scaled(constant)


def kernel_f_v_phase(stage: Stage, t: float, x1: float) -> QuadraticPhase:
    """ The phase of K_t(x1 - y) f_v(y) in y:

        θ(y) = -y²/(4t) + (x1 - 2tR)/(2t) y - x1²/(4t)
    """
    if t == 0:
        raise exc.DomainError('the kernel K_t is not defined at t = 0')

    # x1 - 2tR
    d = dd_add(x1, 0.0, *(-part for part in two_prod(2 * t, stage.R)))

    return QuadraticPhase(
        a=dd_div(-1.0, 0.0, 4 * t),
        b=dd_div(*d, 2 * t),
        c=dd_div(*two_prod(x1, x1), -4 * t),
        where='propagate_f_v_kernel',
    )


def propagate_f_v_kernel(stage: Stage, t: float, x1: float, spec: QuadratureSpec, *,
                         profile: BumpProfile = BumpProfile()) -> EvalResult:
    """ S_t f_v(x1) by convolution with K_t over the support (-v, v) of f_v

    The modulation e^{-iRy} of f_v is folded into the kernel's quadratic phase.

    Raises:
        exc.DomainError: t = 0
        exc.PrecisionLossError: the quadratic phase exceeds the ceiling
    """
    phase = kernel_f_v_phase(stage, t, x1)
    v = stage.v

    magnitude = phase.magnitude(-v, v)
    if magnitude > PHASE_CEILING:
        raise exc.PrecisionLossError('propagate_f_v_kernel', magnitude, PHASE_CEILING)

    result = integrate(
        lambda y: phase.unit(y) * profile(y / v),
        -v, v, spec,
        oscillation=phase.oscillation(),
        breakpoints=[v * b for b in profile.breakpoints],
        where='propagate_f_v_kernel',
    )
    return EvalResult.from_quadrature(result, EvalMode.KERNEL_CONVOLUTION).scaled(kernel_constant(t, 1))
