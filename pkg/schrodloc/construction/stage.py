""" Stages: all parameters of one level of the construction """

from __future__ import annotations

import dataclasses
import math

import numpy as np

from schrodloc import exc
from schrodloc.util import pow2

from .schedule import Schedule

# Largest log2 R a stage may have: R must stay a finite double
LOG2_R_LIMIT = 1000.0

# A ratio R/D this close to an integer is that integer
INTEGER_SNAP = 1e-12


@dataclasses.dataclass(frozen=True)
class Stage:
    """ Stage k: v, R = v^{-2}, D = R^{(n+2)/(2(n+1))}, the lattice R/2D < l < R/D, and the Dirichlet index p """
    k: int
    n: int
    log2_v: float
    v: float
    R: float
    D: float

    # Integers l with R/2D < l < R/D: lattice_lo..lattice_hi inclusive
    lattice_lo: int
    lattice_hi: int

    # Dirichlet index: |4p - R/D| <= 4
    p: int

    @classmethod
    def from_log2_v(cls, n: int, log2_v: float, k: int = 0) -> Stage:
        """ Derive every stage parameter from log2 v

        Raises:
            exc.ScheduleOverflowError: R is not a finite double
            exc.DegenerateStageError: the lattice is empty (R/D <= 2)
        """
        if n < 2:
            raise exc.InvalidParameterError(f'n must be >= 2, got {n!r}')
        if not log2_v < 0:
            raise exc.InvalidParameterError(f'v must be < 1, got log2 v = {log2_v!r}')

        log2_R = -2 * log2_v
        if log2_R > LOG2_R_LIMIT:
            raise exc.ScheduleOverflowError(k, log2_v)

        log2_D = log2_R * (n + 2) / (2 * (n + 1))
        ratio = pow2(log2_R - log2_D)

        # Exact integers survive the powers of two: snap what rounding has moved
        nearest = round(ratio)
        if abs(ratio - nearest) <= INTEGER_SNAP * ratio:
            ratio = float(nearest)

        lattice_lo = math.floor(ratio / 2) + 1
        lattice_hi = math.ceil(ratio) - 1
        R = pow2(log2_R)
        if lattice_lo > lattice_hi:
            raise exc.DegenerateStageError(k, R, ratio)

        # Nearest integer to ratio / 4, ties toward even
        p = round(ratio / 4)
        if not abs(4 * p - ratio) <= 4:
            raise exc.InvariantViolation('make_stage', f'|4p - R/D| <= 4 fails: p = {p}, R/D = {ratio!r}')

        return cls(
            k=k,
            n=n,
            log2_v=log2_v,
            v=pow2(log2_v),
            R=R,
            D=pow2(log2_D),
            lattice_lo=lattice_lo,
            lattice_hi=lattice_hi,
            p=p,
        )

    @classmethod
    def from_R(cls, n: int, R: float, k: int = 0) -> Stage:
        """ A stage for a given frequency radius R; used by the scaling suites """
        if not R > 1:
            raise exc.InvalidParameterError(f'R must be > 1, got {R!r}')
        return cls.from_log2_v(n, -math.log2(R) / 2, k)

    @property
    def dim(self) -> int:
        """ Dimension of x' """
        return self.n - 1

    @property
    def log2_R(self) -> float:
        return -2 * self.log2_v

    @property
    def ratio(self) -> float:
        """ R/D """
        return self.R / self.D

    @property
    def lattice(self) -> np.ndarray:
        """ The lattice integers of one axis """
        return np.arange(self.lattice_lo, self.lattice_hi + 1)

    @property
    def lattice_count_per_axis(self) -> int:
        return self.lattice_hi - self.lattice_lo + 1

    @property
    def ideal_count(self) -> float:
        """ The length of the lattice interval: R/2D; the count without integer granularity """
        return self.ratio / 2

    @property
    def amplitude(self) -> float:
        """ R^{-(n-1)/4} """
        return pow2(-self.log2_R * self.dim / 4)

    def export(self) -> dict:
        return {
            'k': self.k,
            'v': self.v,
            'R': self.R,
            'D': self.D,
            'lattice_lo': self.lattice_lo,
            'lattice_hi': self.lattice_hi,
            'p': self.p,
        }


def make_stage(schedule: Schedule, k: int) -> Stage:
    """ Stage k of a schedule

    Raises:
        exc.InvalidParameterError: k outside of [K, k_max]
        exc.DegenerateStageError: the lattice of the stage is empty
    """
    if not schedule.K <= k <= schedule.k_max:
        raise exc.InvalidParameterError(f'stage {k} outside of [K, k_max] = [{schedule.K}, {schedule.k_max}]')
    return Stage.from_log2_v(schedule.n, schedule.log2_v(k), k)
