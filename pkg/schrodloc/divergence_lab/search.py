""" Monte Carlo stand-ins for the sets E_k

Sample points are drawn uniformly from B(0; 1) ∩ {|x1| > δ/2}. Each sample index owns its random stream,
so a sample does not depend on how many others are drawn, or in which order they are processed.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections import abc
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import scipy.special
import scipy.stats

from schrodloc import exc
from schrodloc.construction import Point, Stage
from schrodloc.profiles import FourierTable, FrequencyBump, default_table, frequency_bump
from schrodloc.propagator import EvalResult, propagate_f_v_auto, propagate_G_v
from schrodloc.quadrature import QuadratureSpec
from schrodloc.testing.profile import timeit

from .window import REFINE_ITERATIONS, TAU_GRID_SIZE, WindowSpec, maximize_over_window, time_window

logger = logging.getLogger(__name__)

# Thresholds are calibrated at this fraction of the median per-sample maximum
CALIBRATION_FACTOR = 0.5


@dataclasses.dataclass(frozen=True)
class Thresholds:
    """ Lower thresholds of |S_t f_v|, |S_t G_v| and of their product """
    c0_f: float
    c0_G: float
    c0_product: float

    def __post_init__(self):
        for name, value in dataclasses.asdict(self).items():
            if not (math.isfinite(value) and value >= 0):
                raise exc.InvalidParameterError(f'{name} must be finite and >= 0, got {value!r}')

    def export(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class SearchConfig:
    """ Settings of the searches and certificates """
    # Monte Carlo samples per stage
    samples: int = 200

    # Seed of the sample streams
    seed: int = 7

    # τ samples per window
    tau_grid_size: int = TAU_GRID_SIZE

    # Golden-section iterations around the best τ
    refine_iterations: int = REFINE_ITERATIONS

    # Thresholds. None until calibrated.
    thresholds: Optional[Thresholds] = None

    # The x-domain avoids |x1| <= delta / 2
    delta: float = 0.98

    # |t| < c_window / R
    c_window: float = 1.0

    # Samples that calibrate the thresholds
    calibration_samples: int = 32

    # Threads over sample points
    workers: int = 1

    # Confidence level of the Wilson intervals
    level: float = 0.95

    def __post_init__(self):
        if self.samples < 1:
            raise exc.InvalidParameterError(f'samples must be >= 1, got {self.samples!r}')
        if self.tau_grid_size < 64:
            raise exc.InvalidParameterError(f'tau_grid_size must be >= 64, got {self.tau_grid_size!r}')
        if not 0 < self.delta < 1:
            raise exc.InvalidParameterError(f'delta must be in (0, 1), got {self.delta!r}')
        if not self.c_window > 0:
            raise exc.InvalidParameterError(f'c_window must be > 0, got {self.c_window!r}')
        if self.workers < 1:
            raise exc.InvalidParameterError(f'workers must be >= 1, got {self.workers!r}')
        if not 0 < self.level < 1:
            raise exc.InvalidParameterError(f'level must be in (0, 1), got {self.level!r}')

    def with_thresholds(self, thresholds: Thresholds) -> SearchConfig:
        return dataclasses.replace(self, thresholds=thresholds)

    def require_thresholds(self) -> Thresholds:
        if self.thresholds is None:
            raise exc.InvalidParameterError('thresholds are not set: calibrate them first')
        return self.thresholds


@dataclasses.dataclass(frozen=True)
class SampleOutcome:
    """ One sample of a stage search """
    index: int
    point: Point

    # The best time and max |S_t G_v(x')|; nan when the evaluation failed
    t: float
    value: float

    passed: bool
    error: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class EmpiricalSet:
    """ The samples of one stage, with those passing the threshold """
    k: int
    samples: int
    seed: int
    threshold: float
    outcomes: tuple[SampleOutcome, ...]

    # Lebesgue measure of the sampling domain
    domain_measure: float

    level: float = 0.95

    @property
    def passing(self) -> list[SampleOutcome]:
        return [o for o in self.outcomes if o.passed]

    @property
    def passing_indices(self) -> frozenset[int]:
        return frozenset(o.index for o in self.outcomes if o.passed)

    @property
    def fraction(self) -> float:
        return len(self.passing) / self.samples

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(len(self.passing), self.samples, self.level)

    @property
    def measure(self) -> float:
        """ The estimated Lebesgue measure of the set """
        return self.fraction * self.domain_measure

    @property
    def maxima(self) -> list[float]:
        return [o.value for o in self.outcomes]

    def export(self) -> dict:
        return {
            'k': self.k,
            'samples': self.samples,
            'seed': self.seed,
            'threshold': self.threshold,
            'passing': len(self.passing),
            'fraction': self.fraction,
            'interval': list(self.interval),
            'measure': self.measure,
            'failed': sum(1 for o in self.outcomes if o.error is not None),
        }


@dataclasses.dataclass(frozen=True)
class JointBest:
    """ The best common time of both factors of S_t h_v(x) """
    t: float
    f: EvalResult
    G: EvalResult

    # max |S_t f_v| and max |S_t G_v| over the evaluated times, each on its own
    f_max: float
    G_max: float

    @property
    def product(self) -> float:
        return abs(self.f) * abs(self.G)


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """ Wilson score interval of a binomial proportion

    Raises:
        exc.InvalidParameterError: no trials, or successes outside of [0, trials]
    """
    if trials < 1 or not 0 <= successes <= trials:
        raise exc.InvalidParameterError(f'wilson_interval needs 0 <= successes <= trials, trials >= 1; '
                                        f'got {successes!r} of {trials!r}')
    z = float(scipy.stats.norm.ppf(1 - (1 - level) / 2))
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2) / (1 + z2n)
    half = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def domain_measure(n: int, delta: float) -> float:
    """ Lebesgue measure of B(0; 1) ∩ {|x1| > δ/2} in ℝ^n

    The slab |x1| <= a of the ball: 2 V_{n-1} ∫_0^a (1 - u²)^{(n-1)/2} du,
    and ∫_0^a (1 - u²)^m du = B(1/2, m + 1) I_{a²}(1/2, m + 1) / 2.
    """
    def ball(d: int) -> float:
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1)

    a = delta / 2
    m = (n - 1) / 2
    slab = ball(n - 1) * scipy.special.beta(0.5, m + 1) * scipy.special.betainc(0.5, m + 1, a * a)
    return ball(n) - float(slab)


def sample_point(index: int, seed: int, n: int, delta: float) -> Point:
    """ Sample `index` of the stream `seed`: uniform on B(0; 1) ∩ {|x1| > δ/2}, by rejection """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    while True:
        x = rng.uniform(-1.0, 1.0, size=n)
        if x @ x < 1 and abs(x[0]) > delta / 2:
            return Point.from_array(x)


def sample_points(config: SearchConfig, n: int, count: Optional[int] = None) -> list[Point]:
    """ The first `count` samples (default: all of them) """
    count = config.samples if count is None else count
    return [sample_point(i, config.seed, n, config.delta) for i in range(count)]


def maximize_G(stage: Stage, point: Point, window: WindowSpec, spec: QuadratureSpec, config: SearchConfig,
               bump: Optional[FrequencyBump] = None) -> tuple[float, float]:
    """ max over the window of |S_t G_v(x')|: (t, value) """
    bump = bump or frequency_bump(stage.n)
    xprime = point.xprime_array()
    return maximize_over_window(
        lambda t: abs(propagate_G_v(stage, t, xprime, spec, bump)),
        window,
        size=config.tau_grid_size,
        refine_iterations=config.refine_iterations,
    )


def joint_search(stage: Stage, point: Point, window: WindowSpec, spec: QuadratureSpec, config: SearchConfig, *,
                 table: Optional[FourierTable] = None) -> JointBest:
    """ One time t for both factors: maximize |S_t f_v(x1)| |S_t G_v(x')| over the window """
    table = table or default_table()
    bump = frequency_bump(stage.n, table.profile)
    xprime = point.xprime_array()
    evaluated: dict[float, tuple[EvalResult, EvalResult]] = {}

    def product(t: float) -> float:
        f = propagate_f_v_auto(stage, t, point.x1, spec, table=table)
        G = propagate_G_v(stage, t, xprime, spec, bump)
        evaluated[t] = (f, G)
        return abs(f) * abs(G)

    t, _ = maximize_over_window(product, window, size=config.tau_grid_size, refine_iterations=config.refine_iterations)
    f, G = evaluated[t]
    return JointBest(
        t=t, f=f, G=G,
        f_max=max(abs(pair[0]) for pair in evaluated.values()),
        G_max=max(abs(pair[1]) for pair in evaluated.values()),
    )


def search_Ek(stage: Stage, config: SearchConfig, spec: QuadratureSpec, *,
              bump: Optional[FrequencyBump] = None) -> EmpiricalSet:
    """ The samples whose max |S_t G_v(x')| over their window reaches c0_G

    Deterministic given the seed. A sample whose evaluation fails numerically does not pass, and is logged.

    Raises:
        exc.InvalidParameterError: thresholds are not set
    """
    threshold = config.require_thresholds().c0_G
    bump = bump or frequency_bump(stage.n)

    def run(index: int) -> SampleOutcome:
        point = sample_point(index, config.seed, stage.n, config.delta)
        window = time_window(stage, point.x1, config.c_window)
        try:
            t, value = maximize_G(stage, point, window, spec, config, bump)
        except exc.NumericalError as e:
            logger.warning(f'search_Ek: stage {stage.k}, sample {index} failed: {e}')
            return SampleOutcome(index=index, point=point, t=math.nan, value=math.nan, passed=False, error=str(e))
        return SampleOutcome(index=index, point=point, t=t, value=value, passed=value >= threshold)

    with timeit(f'search_Ek k={stage.k}'):
        outcomes = _map(run, range(config.samples), config.workers)

    result = EmpiricalSet(
        k=stage.k,
        samples=config.samples,
        seed=config.seed,
        threshold=threshold,
        outcomes=tuple(outcomes),
        domain_measure=domain_measure(stage.n, config.delta),
        level=config.level,
    )
    logger.info(f'search_Ek: stage {stage.k}: {len(result.passing)} of {result.samples} samples pass')
    return result


def calibrate_thresholds(f_maxima: abc.Iterable[float], G_maxima: abc.Iterable[float],
                         product_maxima: abc.Iterable[float], factor: float = CALIBRATION_FACTOR) -> Thresholds:
    """ Each threshold is `factor` × the median of the per-sample maxima; non-finite maxima are ignored

    Raises:
        exc.InvalidParameterError: no finite maxima
    """
    def median(values: abc.Iterable[float], name: str) -> float:
        finite = [v for v in values if math.isfinite(v)]
        if not finite:
            raise exc.InvalidParameterError(f'no finite maxima to calibrate {name}')
        return factor * float(np.median(finite))

    return Thresholds(
        c0_f=median(f_maxima, 'c0_f'),
        c0_G=median(G_maxima, 'c0_G'),
        c0_product=median(product_maxima, 'c0_product'),
    )


def calibration_run(stage: Stage, config: SearchConfig, spec: QuadratureSpec, *,
                    table: Optional[FourierTable] = None) -> Thresholds:
    """ Thresholds from joint searches at the calibration stage, over the first samples """
    table = table or default_table()
    count = min(config.calibration_samples, config.samples)

    def run(index: int) -> tuple[float, float, float]:
        point = sample_point(index, config.seed, stage.n, config.delta)
        window = time_window(stage, point.x1, config.c_window)
        try:
            best = joint_search(stage, point, window, spec, config, table=table)
        except exc.NumericalError as e:
            logger.warning(f'calibration: stage {stage.k}, sample {index} failed: {e}')
            return math.nan, math.nan, math.nan
        return best.f_max, best.G_max, best.product

    with timeit(f'calibration k={stage.k}'):
        maxima = _map(run, range(count), config.workers)

    f_maxima, G_maxima, products = zip(*maxima)
    thresholds = calibrate_thresholds(f_maxima, G_maxima, products)
    logger.info(f'Calibrated thresholds at stage {stage.k}: {thresholds.export()}')
    return thresholds


def _map(func, indices: abc.Iterable[int], workers: int) -> list:
    """ func over the indices, in index order """
    if workers == 1:
        return [func(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, indices))
