""" L¹ and L² norms of f_v, G_v, h_v, and the L¹ mass of the Dirichlet kernel

Conventions: f̂(ξ) = ∫ e^{-iξx} f(x) dx, so ‖f̂‖₂² = (2π)^d ‖f‖₂².
G_v factorizes over the axes of x', and so do its norms:

    ‖G_v‖_p^p = R^{-p(n-1)/4} (∫ |ψ(x)|^p |Σ_l e^{iDlx}|^p dx)^{n-1}
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc.construction import (
    Stage, cutoff_or_fail, dirichlet_kernel, f_v_eval, lattice_sum_modulus, lattice_sum_zeros,
)
from schrodloc.profiles import BumpProfile, FrequencyBump, frequency_bump
from schrodloc.quadrature import QuadratureResult, QuadratureSpec, integrate, linear_oscillation

from .report import NormReport

logger = logging.getLogger(__name__)

# Share of the tolerance that truncated tails may take
TAIL_SHARE = 0.1

# Default offsets a of the Dirichlet masses ∫_a^{a+1}
DIRICHLET_OFFSETS = tuple(np.linspace(0.0, 1.0, 8, endpoint=False))


def l2_f_v(stage: Stage, spec: QuadratureSpec, profile: BumpProfile = BumpProfile()) -> NormReport:
    """ ‖f_v‖₂ by quadrature on (-v, v), next to the closed form v^{1/2} ‖ǧ‖₂ """
    v = stage.v
    result = integrate(
        lambda x: np.abs(f_v_eval(stage, x, profile)) ** 2,
        -v, v, spec,
        breakpoints=[v * b for b in profile.breakpoints],
        where='l2_f_v',
    )
    closed = math.sqrt(v * profile.l2_norm_squared(spec).value.real)
    return _norm_report('L2_fv', stage, result, bound=closed)


def l2_G_v(stage: Stage, spec: QuadratureSpec, bump: Optional[FrequencyBump] = None) -> NormReport:
    """ ‖G_v‖₂ on the frequency side

    With disjoint translates (D > 2r): ‖G_v‖₂² = (2π)^{-(n-1)} R^{-(n-1)/2} count^{n-1} ‖ψ̂‖₂^{2(n-1)}.
    Otherwise the overlapping translates are integrated, with a warning.
    The bound is the scaling law R^{-(n-1)/(4(n+1))}.
    """
    bump = bump or frequency_bump(stage.n)
    count = stage.lattice_count_per_axis

    if stage.D > 2 * bump.r:
        per_axis = count * bump.hat_l2_squared(spec)
        error = 0.0
        closed_form = True
    else:
        logger.warning(f'l2_G_v: translates overlap at R={stage.R!r} (D={stage.D!r}); falling back to quadrature')
        centers = stage.D * stage.lattice
        result = integrate(
            lambda xi: np.abs(bump.hat(xi[:, None] - centers[None, :]).sum(axis=-1)) ** 2,
            float(centers[0]) - bump.r, float(centers[-1]) + bump.r, spec,
            breakpoints=sorted(float(c + b) for c in centers for b in bump.breakpoints),
            where='l2_G_v',
        )
        per_axis = result.value.real
        error = result.est_error
        closed_form = False

    squared = stage.amplitude ** 2 * (per_axis / (2 * math.pi)) ** stage.dim
    squared_error = squared * stage.dim * error / per_axis
    return NormReport(
        quantity='L2_Gv',
        k=stage.k, v=stage.v, R=stage.R,
        measured=math.sqrt(squared),
        bound=stage.R ** (-stage.dim / (4 * (stage.n + 1))),
        est_error=squared_error / (2 * math.sqrt(squared)),
        details={'count': count, 'ideal_count': stage.ideal_count, 'closed_form': closed_form},
    )


def l2_G_v_physical(stage: Stage, spec: QuadratureSpec, bump: Optional[FrequencyBump] = None) -> NormReport:
    """ ‖G_v‖₂ by quadrature on the physical side, next to the frequency-side value as the bound

    The line is truncated where the decay envelope of ψ certifies the tail.
    """
    bump = bump or frequency_bump(stage.n)
    count = stage.lattice_count_per_axis
    scale = count ** 2 / (bump.profile.mass() ** 2 * bump.r)

    # ∫_{|x|>X} |ψ|²|S|² <= 2 scale ∫_{rX}^∞ envelope²
    X = cutoff_or_fail(bump.table, TAIL_SHARE * spec.abs_tol / (2 * scale), 'l2_G_v_physical', power=2) / bump.r
    tail = 2 * scale * bump.table.envelope.tail_integral(bump.r * X, power=2)

    result = integrate(
        lambda x: (bump.psi(x) * lattice_sum_modulus(stage, x)) ** 2,
        -X, X, spec,
        oscillation=linear_oscillation(stage.D * (count - 1) + 1.0, 0.0),
        where='l2_G_v_physical',
    )
    per_axis = result.value.real
    squared = stage.amplitude ** 2 * per_axis ** stage.dim
    squared_error = squared * stage.dim * (result.est_error + tail) / per_axis

    return NormReport(
        quantity='L2_Gv_physical',
        k=stage.k, v=stage.v, R=stage.R,
        measured=math.sqrt(squared),
        bound=l2_G_v(stage, spec, bump).measured,
        est_error=squared_error / (2 * math.sqrt(squared)),
        details={'truncation': X},
    )


def l1_norms(stage: Stage, spec: QuadratureSpec, bump: Optional[FrequencyBump] = None) -> list[NormReport]:
    """ ‖f_v‖₁, ‖G_v‖₁ and ‖h_v‖₁ = ‖f_v‖₁ ‖G_v‖₁

    Bounds: the exact v ‖ǧ‖₁; R^{-(n-1)/4} (log R)^{n-1}; v^{5/4}.

    Raises:
        exc.TruncationError: the decay envelope of ψ cannot certify the truncation of ‖G_v‖₁
    """
    bump = bump or frequency_bump(stage.n)
    profile = bump.profile
    v = stage.v

    # f_v
    f_result = integrate(
        lambda x: np.abs(f_v_eval(stage, x, profile)),
        -v, v, spec,
        breakpoints=[v * b for b in profile.breakpoints],
        where='l1_norms',
    )
    f_report = _norm_report('L1_fv', stage, f_result, bound=v * profile.l1_norm(spec).value.real)

    # G_v, per axis: ∫|ψ||S|, split at the zeros of S
    def integrand(x: np.ndarray) -> np.ndarray:
        return np.abs(bump.psi(x)) * lattice_sum_modulus(stage, x)

    core = integrate(integrand, -1.0, 1.0, spec, breakpoints=lattice_sum_zeros(stage, -1.0, 1.0), where='l1_norms')
    scale = stage.lattice_count_per_axis / (profile.mass() * bump.r)
    budget = TAIL_SHARE * spec.target(core.value.real) / (2 * scale)
    X = max(1.0, cutoff_or_fail(bump.table, budget, 'l1_norms') / bump.r)
    tail = 2 * scale * bump.table.envelope.tail_integral(bump.r * X)

    axis = integrate(integrand, -X, X, spec, breakpoints=lattice_sum_zeros(stage, -X, X), where='l1_norms')
    per_axis = axis.value.real
    G_value = stage.amplitude * per_axis ** stage.dim
    G_error = G_value * stage.dim * (axis.est_error + tail) / per_axis
    G_report = NormReport(
        quantity='L1_Gv',
        k=stage.k, v=v, R=stage.R,
        measured=G_value,
        bound=stage.R ** (-stage.dim / 4) * math.log(stage.R) ** stage.dim,
        est_error=G_error,
        details={'truncation': X, 'count': stage.lattice_count_per_axis},
    )

    # h_v
    h_report = NormReport(
        quantity='L1_hv',
        k=stage.k, v=v, R=stage.R,
        measured=f_report.measured * G_report.measured,
        bound=v ** 1.25,
        est_error=f_report.measured * G_report.est_error + G_report.measured * f_report.est_error,
    )
    return [f_report, G_report, h_report]


def dirichlet_l1(stage: Stage, spec: QuadratureSpec, offsets: npt.ArrayLike = DIRICHLET_OFFSETS) -> NormReport:
    """ sup_a ∫_a^{a+1} |D_p(Dx)| dx over the offsets, next to the bound log R """
    p, D = stage.p, stage.D
    m = 2 * p + 1
    step = 2 * math.pi / (m * D)

    def zeros(a: float) -> np.ndarray:
        j = np.arange(math.ceil(a / step), math.floor((a + 1) / step) + 1)
        return j[j % m != 0] * step

    masses = []
    error = 0.0
    for a in np.asarray(offsets, dtype=float):
        result = integrate(
            lambda x: np.abs(dirichlet_kernel(p, D * x)),
            float(a), float(a) + 1, spec,
            breakpoints=zeros(float(a)),
            where='dirichlet_l1',
        )
        masses.append(result.value.real)
        error = max(error, result.est_error)

    return NormReport(
        quantity='L1_dirichlet',
        k=stage.k, v=stage.v, R=stage.R,
        measured=max(masses),
        bound=math.log(stage.R),
        est_error=error,
        details={'p': p, 'min_mass': min(masses), 'offsets': len(masses)},
    )


def _norm_report(quantity: str, stage: Stage, result: QuadratureResult, *, bound: float) -> NormReport:
    """ A norm from a quadrature of |f| or |f|² """
    value = result.value.real
    if quantity.startswith('L2'):
        measured = math.sqrt(value)
        error = result.est_error / (2 * measured)
    else:
        measured = value
        error = result.est_error
    return NormReport(quantity=quantity, k=stage.k, v=stage.v, R=stage.R, measured=measured, bound=bound, est_error=error)
