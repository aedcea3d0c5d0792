""" Norm suites over dyadic stages: scaling fits and single-constant envelopes """

from __future__ import annotations

import logging
from collections import abc
from typing import Optional

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.profiles import frequency_bump
from schrodloc.quadrature import QuadratureSpec
from schrodloc.testing.profile import timeit
from schrodloc.util import collecting

from .hs import DEFAULT_A, DEFAULT_N, hs_norm_h_v
from .norms import dirichlet_l1, l1_norms, l2_f_v, l2_G_v, l2_G_v_physical
from .report import EnvelopeCheck, NormReport, ScalingFit

logger = logging.getLogger(__name__)

# Physical-side cross-checks of ‖G_v‖₂ are run up to this R
PHYSICAL_MAX_R = 256

# Slope tolerances: absolute for the closed forms, relative for the lattice sums (never below the absolute one)
SLOPE_TOLERANCE = 0.005
SLOPE_RELATIVE_TOLERANCE = 0.15


def dyadic_stages(n: int, log2_R: abc.Iterable[float]) -> list[Stage]:
    """ Stages with R = 2^j, coarsest first """
    return [Stage.from_R(n, 2.0 ** j, k=i) for i, j in enumerate(sorted(log2_R), start=1)]


@collecting
def norm_suite(stages: abc.Sequence[Stage], spec: QuadratureSpec, *,
               s_values: abc.Sequence[float] = (0.25,),
               A: float = DEFAULT_A, N: int = DEFAULT_N,
               physical_max_R: float = PHYSICAL_MAX_R):
    """ Every norm of every stage: L², L¹, H_s for each s, and the Dirichlet L¹ mass """
    for stage in stages:
        bump = frequency_bump(stage.n)
        with timeit(f'norms R={stage.R:g}'):
            yield l2_f_v(stage, spec, bump.profile)
            yield l2_G_v(stage, spec, bump)
            if stage.R <= physical_max_R:
                yield l2_G_v_physical(stage, spec, bump)
            yield from l1_norms(stage, spec, bump)
            for s in s_values:
                yield hs_norm_h_v(stage, s, spec, A=A, N=N, bump=bump)
            yield dirichlet_l1(stage, spec)


def select(reports: abc.Iterable[NormReport], quantity: str, s: Optional[float] = None) -> list[NormReport]:
    """ The reports of one quantity, coarsest stage first """
    chosen = [r for r in reports if r.quantity == quantity and (s is None or r.s == s)]
    return sorted(chosen, key=lambda r: r.R)


def granularity(report: NormReport, n: int) -> float:
    """ (count / ideal)^{(n-1)/2}: how much the integer lattice count moves ‖G_v‖₂ off its ideal scaling """
    stage = Stage.from_R(n, report.R)
    return (stage.lattice_count_per_axis / stage.ideal_count) ** ((n - 1) / 2)


@collecting
def scaling_fits(reports: abc.Sequence[NormReport], n: int, s_values: abc.Sequence[float] = (0.25,)):
    """ Log-log fits with their expected slopes and tolerances; quantities with fewer than 4 stages are skipped """
    def fit(quantity: str, abscissa: str, expected: float, *, s: Optional[float] = None, corrected: bool = False):
        tolerance = max(SLOPE_RELATIVE_TOLERANCE * abs(expected), SLOPE_TOLERANCE) if corrected else SLOPE_TOLERANCE
        chosen = select(reports, quantity, s)
        if len(chosen) < 4:
            logger.info(f'Not enough stages to fit {quantity}: {len(chosen)}')
            return None
        x = [r.v if abscissa == 'v' else r.R for r in chosen]
        name = quantity if s is None else f'{quantity}(s={s:g})'
        return ScalingFit.fit(
            name, abscissa, x, [r.measured for r in chosen],
            stages=[r.R for r in chosen],
            expected_slope=expected,
            tolerance=tolerance,
            granularity=[granularity(r, n) for r in chosen] if corrected else None,
        )

    candidates = [
        fit('L2_fv', 'v', 0.5),
        fit('L1_fv', 'v', 1.0),
        fit('L2_Gv', 'R', -(n - 1) / (4 * (n + 1)), corrected=True),
    ]
    candidates += [
        fit('Hs_hv', 'v', n / (n + 1) - 2 * s, s=s, corrected=True)
        for s in s_values
    ]
    yield from (c for c in candidates if c is not None)


@collecting
def norm_envelopes(reports: abc.Sequence[NormReport], *, calibration: int = 2):
    """ Single-constant checks: ‖G_v‖₁ <= C R^{-(n-1)/4} (log R)^{n-1}, ‖h_v‖₁ <= C v^{5/4},
    sup_a ∫_a^{a+1}|D_p(Dx)| <= C log R """
    for quantity in ('L1_Gv', 'L1_hv', 'L1_dirichlet'):
        chosen = select(reports, quantity)
        if len(chosen) < max(calibration, 2):
            continue
        yield EnvelopeCheck.calibrate(
            quantity,
            [r.R for r in chosen],
            [r.constant for r in chosen],
            calibration=calibration,
        )


def plancherel_consistency(reports: abc.Sequence[NormReport]) -> list[tuple[float, float]]:
    """ (R, relative difference) between the physical and frequency sides of ‖G_v‖₂ """
    return [
        (r.R, abs(r.measured - r.bound) / r.bound)
        for r in select(reports, 'L2_Gv_physical')
    ]


def check_plancherel(reports: abc.Sequence[NormReport], tolerance: float = 1e-6) -> None:
    """ Raises:
        exc.InvariantViolation: the two sides of ‖G_v‖₂ disagree
    """
    for R, difference in plancherel_consistency(reports):
        if not difference <= tolerance:
            raise exc.InvariantViolation('l2_G_v_physical', f'Plancherel off by {difference:.3g} at R={R:g}')
