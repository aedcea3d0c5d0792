""" Time windows around t = x1 / (2R), and searches over them

A window is t = x1/(2R) + τ with |τ| < R^{-3/2}/10, capped by |t| < c_window / R.
"""

from __future__ import annotations

import dataclasses
import math
from collections import abc

import numpy as np

from schrodloc import exc
from schrodloc.construction import Stage
from schrodloc.typing import RealArray

# Default number of τ samples: odd, so that τ = 0 is on the grid
TAU_GRID_SIZE = 65

# Golden-section iterations around the best grid point
REFINE_ITERATIONS = 24

_INVPHI = (math.sqrt(5) - 1) / 2


@dataclasses.dataclass(frozen=True)
class WindowSpec:
    """ The admissible times of one stage at one x1 """
    # x1 / (2R)
    t_center: float

    # R^{-3/2} / 10
    tau_max: float

    # c_window / R
    cap: float

    # R of the stage: kept for the τ-scale of predictors
    R: float

    @property
    def empty(self) -> bool:
        """ Whether the cap excludes the whole τ-interval """
        return abs(self.t_center) - self.tau_max >= self.cap

    @property
    def sign(self) -> int:
        """ Sign of the window times; follows x1 """
        return int(np.sign(self.t_center))

    def admits(self, t: float) -> bool:
        """ Whether t lies in the window """
        return abs(t - self.t_center) < self.tau_max and abs(t) < self.cap

    def admitted(self, taus: RealArray) -> RealArray:
        """ The τ values whose times lie in the window """
        taus = np.asarray(taus, dtype=float)
        times = self.t_center + taus
        return taus[(np.abs(taus) < self.tau_max) & (np.abs(times) < self.cap)]

    def export(self) -> dict:
        return {
            't_center': self.t_center,
            'tau_max': self.tau_max,
            'cap': self.cap,
            'empty': self.empty,
            'sign': self.sign,
        }


def time_window(stage: Stage, x1: float, c_window: float = 1.0) -> WindowSpec:
    """ The window t = x1/(2R) + τ of one stage

    Raises:
        exc.InvalidParameterError: |x1| >= 1, or c_window <= 0
    """
    if not abs(x1) < 1:
        raise exc.InvalidParameterError(f'time windows need |x1| < 1, got {x1!r}')
    if not c_window > 0:
        raise exc.InvalidParameterError(f'c_window must be > 0, got {c_window!r}')
    R = stage.R
    return WindowSpec(
        t_center=x1 / (2 * R),
        tau_max=R ** -1.5 / 10,
        cap=c_window / R,
        R=R,
    )


def tau_grid(window: WindowSpec, size: int = TAU_GRID_SIZE) -> RealArray:
    """ A symmetric uniform grid strictly inside (-tau_max, tau_max), restricted to the window

    Raises:
        exc.InvalidParameterError: fewer than 64 points
    """
    if size < 64:
        raise exc.InvalidParameterError(f'the τ-grid needs >= 64 points, got {size!r}')
    taus = window.tau_max * np.linspace(-1.0, 1.0, size + 2)[1:-1]
    return window.admitted(taus)


def golden_refine(func: abc.Callable[[float], float], lo: float, hi: float,
                  iterations: int = REFINE_ITERATIONS) -> tuple[float, float]:
    """ Golden-section search for the max of `func` on [lo, hi]

    Returns:
        (argument, value) of the best point seen
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    best = max((fc, c), (fd, d))

    for _ in range(iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
            best = max(best, (fd, d))

    value, argument = best
    return argument, value


def maximize_over_window(objective: abc.Callable[[float], float], window: WindowSpec, *,
                         size: int = TAU_GRID_SIZE,
                         refine_iterations: int = REFINE_ITERATIONS) -> tuple[float, float]:
    """ Max of objective(t) over a window: the τ-grid, then golden refinement around the best grid point

    Non-finite objective values count as -inf.

    Returns:
        (t, value); t always lies in the window

    Raises:
        exc.InvalidParameterError: the window is empty
    """
    taus = tau_grid(window, size)
    if window.empty or taus.size == 0:
        raise exc.InvalidParameterError(f'empty time window: {window.export()!r}')

    def value_at(tau: float) -> float:
        value = objective(window.t_center + tau)
        return value if math.isfinite(value) else -math.inf

    values = [value_at(float(tau)) for tau in taus]
    j = int(np.argmax(values))
    best_tau, best_value = float(taus[j]), values[j]

    # Refine between the neighbours of the best grid point
    if refine_iterations > 0 and taus.size >= 3:
        lo = float(taus[max(j - 1, 0)])
        hi = float(taus[min(j + 1, taus.size - 1)])
        tau, value = golden_refine(value_at, lo, hi, refine_iterations)
        if value > best_value and window.admits(window.t_center + tau):
            best_tau, best_value = tau, value

    return window.t_center + best_tau, best_value
