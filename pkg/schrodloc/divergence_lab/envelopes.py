""" Single-constant envelopes of |S_t f_v|, |S_t G_v| and |S_t h_v| over (t, x) grids

For 0 < v < δ/4, 0 < |t| < 1 and |x1| > δ/2:

    |S_t f_v(x1)| <= C v / |t|^{1/2}                                      f_decay
    |S_t f_v(x1)| <= C |t| / v^4                                          f_small_t
    |S_t G_v(x')| <= C v^{(n-1)/2} (log 1/v)^{n-1} |t|^{-(n-1)/2}          G_decay
    |S_t G_v(x')| <= C v^{-(n-1)²/(2(n+1))}                               G_sup
    |S_t h_v(x)|  <= C v / |t|^γ                                          h_decay
    |S_t h_v(x)|  <= C |t| / v^β                                          h_small_t

Each constant is calibrated on the coarsest stages and must hold on the others.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections import abc
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.profiles import FourierTable, default_table, frequency_bump
from schrodloc.propagator import propagate_f_v_auto, propagate_G_v
from schrodloc.quadrature import QuadratureSpec
from schrodloc.sobolev import EnvelopeCheck
from schrodloc.testing.profile import timeit

logger = logging.getLogger(__name__)

ENVELOPES = ('f_decay', 'f_small_t', 'G_decay', 'G_sup', 'h_decay', 'h_small_t')


@dataclasses.dataclass(frozen=True)
class EnvelopeGrid:
    """ The (t, x) samples of every stage """
    # x1 samples in (δ/2, x1_max)
    x1_count: int = 4
    x1_max: float = 0.9

    # Log-spaced |t| in [t_min, t_max]
    t_count: int = 7
    t_min: float = 1e-4
    t_max: float = 1e-1

    # Window times x1/(2R) + τ, as fractions of the window half-width
    window_taus: tuple[float, ...] = (-0.5, 0.0, 0.5)

    # x' = (c, ..., c)
    xprime: tuple[float, ...] = (0.0, 0.3, 0.7)

    def __post_init__(self):
        if self.x1_count < 1 or self.t_count < 1 or not self.xprime:
            raise exc.InvalidParameterError('the envelope grid needs x1, t and x\' samples')
        if not 0 < self.t_min <= self.t_max < 1:
            raise exc.InvalidParameterError(f'need 0 < t_min <= t_max < 1, got {self.t_min!r}, {self.t_max!r}')
        if any(not -1 < tau < 1 for tau in self.window_taus):
            raise exc.InvalidParameterError('window τ fractions must lie in (-1, 1)')

    def x1_values(self, delta: float) -> np.ndarray:
        if not delta / 2 < self.x1_max < 1:
            raise exc.InvalidParameterError(f'x1_max must lie in (δ/2, 1), got {self.x1_max!r}')
        return np.linspace(delta / 2, self.x1_max, self.x1_count + 1)[1:]

    def times(self, stage: Stage, x1: float) -> np.ndarray:
        grid = np.geomspace(self.t_min, self.t_max, self.t_count)
        window = x1 / (2 * stage.R) + stage.R ** -1.5 / 10 * np.asarray(self.window_taus)
        return np.concatenate((grid, window[window > 0]))


@dataclasses.dataclass(frozen=True)
class StageRatios:
    """ Per stage: the max of measured / bound of every envelope """
    k: int
    R: float
    ratios: dict[str, float]


@dataclasses.dataclass(frozen=True)
class EnvelopeSuite:
    stages: tuple[StageRatios, ...]
    checks: tuple[EnvelopeCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def cross_constant(self) -> float:
        """ The constant of the cross-term ledger: the larger of the two h_v envelopes """
        return max(self.check('h_decay').constant, self.check('h_small_t').constant)

    def check(self, name: str) -> EnvelopeCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def rows(self) -> list[dict]:
        return [
            {'envelope': name, 'k': s.k, 'R': s.R, 'ratio': s.ratios[name]}
            for name in ENVELOPES
            for s in self.stages
        ]

    def export(self) -> dict:
        return {
            'passed': self.passed,
            'cross_constant': self.cross_constant,
            'checks': [check.export() for check in self.checks],
        }


def stage_ratios(stage: Stage, delta: float, grid: EnvelopeGrid, spec: QuadratureSpec, *,
                 table: Optional[FourierTable] = None) -> StageRatios:
    """ Evaluate S_t f_v and S_t G_v on the grid of one stage, and take the max ratio of each envelope

    Raises:
        exc.InvalidParameterError: v >= δ/4
    """
    table = table or default_table()
    if not stage.v < delta / 4:
        raise exc.InvalidParameterError(f'the envelopes need v < δ/4, got v = {stage.v!r}')
    bump = frequency_bump(stage.n, table.profile)
    n, dim, v = stage.n, stage.dim, stage.v
    log_inv_v = math.log(1 / v)
    granularity = (stage.lattice_count_per_axis / stage.ideal_count) ** dim
    gamma, beta = n / 2, 4 + n / 2

    ratios = dict.fromkeys(ENVELOPES, 0.0)

    def record(name: str, value: float):
        ratios[name] = max(ratios[name], value)

    # S_t G_v does not depend on x1: evaluate it once per distinct time
    G_cache: dict[tuple[float, float], float] = {}

    def G_abs(t: float, c: float) -> float:
        if (t, c) not in G_cache:
            G_cache[t, c] = abs(propagate_G_v(stage, t, np.full(dim, c), spec, bump))
        return G_cache[t, c]

    for x1 in grid.x1_values(delta):
        for t in grid.times(stage, float(x1)):
            t = float(t)
            f = abs(propagate_f_v_auto(stage, t, float(x1), spec, table=table))
            record('f_decay', f / (v / math.sqrt(t)))
            record('f_small_t', f / (t / v ** 4))

            for c in grid.xprime:
                G = G_abs(t, c)
                record('G_decay', G / (v ** (dim / 2) * log_inv_v ** dim * t ** (-dim / 2)))
                record('G_sup', G / v ** (-dim ** 2 / (2 * (n + 1))) / granularity)
                record('h_decay', f * G / (v / t ** gamma))
                record('h_small_t', f * G / (t / v ** beta))

    return StageRatios(k=stage.k, R=stage.R, ratios=ratios)


def envelope_suite(stages: abc.Sequence[Stage], delta: float, spec: QuadratureSpec, *,
                   grid: EnvelopeGrid = EnvelopeGrid(),
                   calibration: int = 2,
                   table: Optional[FourierTable] = None) -> EnvelopeSuite:
    """ Every envelope over every stage, coarsest first, each with one calibrated constant

    Raises:
        exc.InvalidParameterError: fewer stages than the calibration needs, plus one
    """
    if len(stages) < calibration + 1:
        raise exc.InvalidParameterError(f'envelope checks need > {calibration} stages, got {len(stages)}')
    stages = sorted(stages, key=lambda s: s.R)

    per_stage = []
    for stage in stages:
        with timeit(f'envelopes R={stage.R:g}'):
            per_stage.append(stage_ratios(stage, delta, grid, spec, table=table))

    checks = tuple(
        EnvelopeCheck.calibrate(
            name,
            [s.R for s in per_stage],
            [s.ratios[name] for s in per_stage],
            calibration=calibration,
        )
        for name in ENVELOPES
    )
    return EnvelopeSuite(stages=tuple(per_stage), checks=checks)
