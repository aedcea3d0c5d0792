""" Direct band quadrature of S_t f_v and S_t G_v: the oracles of the semi-analytic routes

These integrate e^{iξx} e^{itξ²} f̂(ξ) over the whole frequency band, |ξ| ~ R.
The cost grows like R |t| R per axis; only small stages are affordable.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc.construction import Stage, G_v_hat, f_v_hat
from schrodloc.profiles import FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.quadrature import QuadratureSpec

from .base import EvalResult
from .frequency import schrodinger_mean_fhat
from .semi_analytic import f_v_truncation


def direct_f_v(stage: Stage, t: float, x1: float, spec: QuadratureSpec, *,
               table: Optional[FourierTable] = None) -> EvalResult:
    """ S_t f_v(x1) over the band ξ1 ∈ -R ± X/v, where the tabulated f̂_v lives """
    table = table or default_table()
    X, tail = f_v_truncation(spec, table)
    half_width = X / stage.v

    return schrodinger_mean_fhat(
        lambda xi: f_v_hat(stage, xi[..., 0], table),
        t, [x1], spec,
        box=[(-stage.R - half_width, -stage.R + half_width)],
        truncation_error=tail + table.error_l1,
        where='direct_f_v',
    )


def direct_G_v(stage: Stage, t: float, xprime: npt.ArrayLike, spec: QuadratureSpec, *,
               bump: Optional[FrequencyBump] = None) -> EvalResult:
    """ S_t G_v(x') over the band D lo - r <= ξ_j <= D hi + r, with breakpoints at the edges of every translate """
    bump = bump or frequency_bump(stage.n)
    centers = stage.D * stage.lattice
    edges = sorted(float(c + b) for c in centers for b in bump.breakpoints)
    band = (float(centers[0]) - bump.r, float(centers[-1]) + bump.r)

    return schrodinger_mean_fhat(
        lambda xi: G_v_hat(stage, xi, bump),
        t, np.atleast_1d(np.asarray(xprime, dtype=float)), spec,
        box=[band] * stage.dim,
        breakpoints=[edges] * stage.dim,
        where='direct_G_v',
    )
