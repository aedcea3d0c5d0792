""" The counterexample family: f_v, G_v, h_v, the stacked h, and their Fourier transforms

    f_v(x1) = e^{-i x1 / v²} ǧ(x1 / v)                   f̂_v(ξ1) = v g(v ξ1 + 1/v)
    G_v(x') = R^{-(n-1)/4} Φ(x') Π_j Σ_l e^{i D l x_j}     Ĝ_v(ξ') = R^{-(n-1)/4} Σ_l Φ̂(ξ' - D l)
    h_v(x) = f_v(x1) G_v(x')                              h = Σ_{k=K}^{k_max} h_{v_k}

All large phases (x1 R, D l x_j) go through the compensated phase arithmetic.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.profiles import BumpProfile, FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.quadrature import PhaseAccumulator, QuadratureSpec, QuadratureResult, integrate, linear_oscillation
from schrodloc.typing import ComplexArray, RealArray

from .point import Point
from .schedule import Schedule
from .stage import Stage, make_stage


def f_v_eval(stage: Stage, x1: npt.ArrayLike, profile: BumpProfile = BumpProfile()) -> ComplexArray:
    """ f_v(x1), vectorized; exactly 0 for |x1| >= v """
    x1 = np.asarray(x1, dtype=float)
    phase = PhaseAccumulator(where='f_v_eval').add_product(x1, -stage.R)
    return phase.unit() * profile(x1 / stage.v)


def f_v_hat(stage: Stage, xi1: npt.ArrayLike, table: Optional[FourierTable] = None) -> ComplexArray:
    """ f̂_v(ξ1) = v g(v ξ1 + 1/v); peaks at ξ1 = -R """
    table = table or default_table()
    xi1 = np.asarray(xi1, dtype=float)
    return stage.v * table(stage.v * (xi1 + stage.R))


def f_v_hat_quadrature(stage: Stage, xi1: float, spec: QuadratureSpec,
                       profile: BumpProfile = BumpProfile()) -> QuadratureResult:
    """ ∫ e^{-iξ1 x} f_v(x) dx by adaptive quadrature on (-v, v): the oracle of `f_v_hat` """
    omega = xi1 + stage.R
    return integrate(
        lambda x: np.exp(-1j * omega * x) * profile(x / stage.v),
        -stage.v, stage.v, spec,
        oscillation=linear_oscillation(abs(omega), 0.0),
        breakpoints=[stage.v * b for b in profile.breakpoints],
        where='f_v_hat_quadrature',
    )


def lattice_sum(stage: Stage, x: npt.ArrayLike) -> ComplexArray:
    """ Σ_{R/2D < l < R/D} e^{i D l x}, vectorized over x """
    x = np.asarray(x, dtype=float)
    phase = PhaseAccumulator(where='lattice_sum').add_product3(stage.D, stage.lattice, x[..., None])
    return phase.unit().sum(axis=-1)


def G_v_eval(stage: Stage, xprime: npt.ArrayLike, bump: Optional[FrequencyBump] = None) -> ComplexArray:
    """ G_v(x'), vectorized; the last axis holds the n - 1 coordinates """
    bump = bump or frequency_bump(stage.n)
    xprime = _coordinates(stage, xprime)
    return stage.amplitude * bump.phi(xprime) * np.prod(lattice_sum(stage, xprime), axis=-1)


def G_v_hat(stage: Stage, xiprime: npt.ArrayLike, bump: Optional[FrequencyBump] = None) -> RealArray:
    """ Ĝ_v(ξ'), vectorized; the last axis holds the n - 1 coordinates

    When D > 2r the translates Φ̂(· - D l) have disjoint supports, and only the nearest lattice point contributes
    """
    bump = bump or frequency_bump(stage.n)
    xiprime = _coordinates(stage, xiprime)

    if stage.D > 2 * bump.r:
        nearest = np.rint(xiprime / stage.D)
        inside = (nearest >= stage.lattice_lo) & (nearest <= stage.lattice_hi)
        factors = np.where(inside, bump.hat(xiprime - stage.D * nearest), 0.0)
    else:
        offsets = xiprime[..., None] - stage.D * stage.lattice
        factors = bump.hat(offsets).sum(axis=-1)
    return stage.amplitude * np.prod(factors, axis=-1)


def G_v_hat_quadrature(stage: Stage, xi2: float, spec: QuadratureSpec,
                       bump: Optional[FrequencyBump] = None) -> QuadratureResult:
    """ ∫ e^{-iξ2 x} G_v(x) dx for n = 2, by quadrature on a truncated line: the oracle of `G_v_hat`

    The truncation point comes from the decay envelope of ψ, with the tail below 0.1 × abs_tol

    Raises:
        exc.TruncationError: the envelope cannot certify the truncation within the Fourier table
    """
    if stage.n != 2:
        raise exc.InvalidParameterError(f'G_v_hat_quadrature is one-dimensional, got n = {stage.n}')
    bump = bump or frequency_bump(2)

    # |G_v| <= amplitude * count * |ψ|, ψ(y) = g(ry) / g(0)
    scale = stage.amplitude * stage.lattice_count_per_axis / (bump.r * bump.profile.mass())
    X = cutoff_or_fail(bump.table, 0.5 * 0.1 * spec.abs_tol / scale, 'G_v_hat_quadrature') / bump.r

    omega = abs(xi2) + stage.D * stage.lattice_hi
    return integrate(
        lambda x: np.exp(-1j * xi2 * x) * G_v_eval(stage, x[:, None], bump),
        -X, X, spec,
        oscillation=linear_oscillation(omega, 0.0),
        where='G_v_hat_quadrature',
    )


def h_v_eval(stage: Stage, point: Point, bump: Optional[FrequencyBump] = None) -> complex:
    """ h_v(x) = f_v(x1) G_v(x'); exactly 0 for |x1| >= v """
    f = complex(f_v_eval(stage, point.x1))
    if f == 0:
        return 0j
    return f * complex(G_v_eval(stage, point.xprime_array(), bump))


def h_truncated_eval(schedule: Schedule, point: Point) -> complex:
    """ h(x) = Σ_{k=K}^{k_max} h_{v_k}(x); exactly 0 for |x1| >= v_K """
    total = 0j
    for k in schedule.stage_indices:
        # Supports are nested: later stages vanish too
        if not abs(point.x1) < schedule.v(k):
            break
        total += h_v_eval(make_stage(schedule, k), point)
    return total


def cutoff_or_fail(table: FourierTable, budget: float, where: str, *,
                   power: float = 1.0, moment: float = 0.0) -> float:
    """ The point beyond which ∫|g|^power ξ^moment <= budget; it must lie on the table """
    X = table.envelope.cutoff(budget, power, moment)
    if X > table.xi_max:
        raise exc.TruncationError(where, X, table.xi_max)
    return X


def _coordinates(stage: Stage, xprime: npt.ArrayLike) -> RealArray:
    """ x' as an array with n - 1 coordinates on the last axis """
    xprime = np.asarray(xprime, dtype=float)
    if xprime.ndim == 0 and stage.dim == 1:
        xprime = xprime[None]
    if xprime.shape[-1:] != (stage.dim,):
        raise exc.InvalidParameterError(f'x\' must have {stage.dim} coordinates on the last axis, got shape {xprime.shape}')
    return xprime


__all__ = [
    'f_v_eval', 'f_v_hat', 'f_v_hat_quadrature', 'lattice_sum',
    'G_v_eval', 'G_v_hat', 'G_v_hat_quadrature',
    'h_v_eval', 'h_truncated_eval', 'cutoff_or_fail',
]
