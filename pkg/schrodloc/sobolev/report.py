""" Norm reports, log-log fits and single-constant envelope checks """

from __future__ import annotations

import dataclasses
import logging
import math
from collections import abc
from typing import Optional

import numpy as np
import numpy.typing as npt

from schrodloc import exc

logger = logging.getLogger(__name__)

# Every fit needs at least this many stages
MIN_FIT_POINTS = 4

# Slack on calibrated envelope constants
ENVELOPE_SLACK = 1.05


@dataclasses.dataclass(frozen=True)
class NormReport:
    """ One measured quantity at one stage, next to its closed form or bound """
    # Quantity id: "L2_fv", "L2_Gv", "L1_Gv", "Hs_hv", ...
    quantity: str

    # Stage
    k: int
    v: float
    R: float

    # The measured value, >= 0
    measured: float

    # Closed form or bound, when available
    bound: Optional[float] = None

    # Sobolev exponent, for H_s entries
    s: Optional[float] = None

    # A-posteriori error of `measured`
    est_error: float = 0.0

    # Breakdown: I1, I2, lattice counts, ...
    details: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if not self.measured >= 0:
            raise exc.InvariantViolation(self.quantity, f'measured value must be >= 0, got {self.measured!r}')

    @property
    def constant(self) -> Optional[float]:
        """ measured / bound """
        if self.bound is None or self.bound == 0:
            return None
        return self.measured / self.bound

    def export(self) -> dict:
        return {
            'k': self.k,
            'v': self.v,
            'R': self.R,
            'quantity': self.quantity,
            's': self.s,
            'measured': self.measured,
            'bound': self.bound,
            'constant': self.constant,
            'est_error': self.est_error,
            **self.details,
        }


@dataclasses.dataclass(frozen=True)
class ScalingFit:
    """ log y = slope · log x + intercept over a set of stages """
    quantity: str

    # "v" or "R"
    abscissa: str

    slope: float
    intercept: float
    stderr: float
    max_residual: float

    # The stage indices, or R values, of the samples
    stages: tuple[float, ...]

    # The slope after dividing out the lattice-count granularity
    corrected_slope: Optional[float] = None

    # What the analysis predicts
    expected_slope: Optional[float] = None

    # Allowed |accepted_slope - expected_slope|; None: the fit is reported, not checked
    tolerance: Optional[float] = None

    @classmethod
    def fit(cls, quantity: str, abscissa: str, x: npt.ArrayLike, y: npt.ArrayLike, *,
            stages: Optional[abc.Sequence[float]] = None,
            expected_slope: Optional[float] = None,
            tolerance: Optional[float] = None,
            granularity: Optional[npt.ArrayLike] = None) -> ScalingFit:
        """ Least-squares fit in log-log

        Args:
            x, y: Positive samples
            granularity: Per-sample factors to divide y by before the corrected fit
            tolerance: Absolute slope tolerance the accepted slope is checked with

        Raises:
            exc.InvalidParameterError: fewer than 4 samples, or non-positive values
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.size < MIN_FIT_POINTS or x.shape != y.shape:
            raise exc.InvalidParameterError(f'a fit of {quantity} needs >= {MIN_FIT_POINTS} samples, got {x.size}')
        if np.any(x <= 0) or np.any(y <= 0):
            raise exc.InvalidParameterError(f'a log-log fit of {quantity} needs positive samples')

        log_x, log_y = np.log(x), np.log(y)
        (slope, intercept), cov = np.polyfit(log_x, log_y, 1, cov=True)
        residuals = log_y - (slope * log_x + intercept)

        corrected = None
        if granularity is not None:
            corrected = float(np.polyfit(log_x, log_y - np.log(np.asarray(granularity, dtype=float)), 1)[0])

        return cls(
            quantity=quantity,
            abscissa=abscissa,
            slope=float(slope),
            intercept=float(intercept),
            stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
            max_residual=float(np.max(np.abs(residuals))),
            stages=tuple(stages if stages is not None else x.tolist()),
            corrected_slope=corrected,
            expected_slope=expected_slope,
            tolerance=tolerance,
        )

    @property
    def accepted_slope(self) -> float:
        """ The slope that is compared against the expectation: the corrected one when available """
        return self.corrected_slope if self.corrected_slope is not None else self.slope

    def within(self, tolerance: float, *, relative: bool = False) -> bool:
        """ Whether the accepted slope is within `tolerance` of the expected one """
        if self.expected_slope is None:
            raise exc.InvalidParameterError(f'{self.quantity}: no expected slope to compare with')
        allowed = tolerance * abs(self.expected_slope) if relative else tolerance
        return abs(self.accepted_slope - self.expected_slope) <= allowed

    @property
    def passed(self) -> Optional[bool]:
        """ The check against the attached tolerance; None when there is nothing to check """
        if self.tolerance is None or self.expected_slope is None:
            return None
        return self.within(self.tolerance)

    def export(self) -> dict:
        return {
            'quantity': self.quantity,
            'abscissa': self.abscissa,
            'slope': self.slope,
            'corrected_slope': self.corrected_slope,
            'expected_slope': self.expected_slope,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'intercept': self.intercept,
            'stderr': self.stderr,
            'residual': self.max_residual,
            'stages': list(self.stages),
        }


@dataclasses.dataclass(frozen=True)
class EnvelopeCheck:
    """ measured <= C · bound with one constant C across stages

    C is calibrated on the coarsest stages (max ratio × slack) and must hold at every other stage.
    """
    name: str

    # Per stage: the stage label and the max of measured / bound over its samples
    labels: tuple[float, ...]
    ratios: tuple[float, ...]

    # Calibrated constant, slack included
    constant: float

    # How many leading stages calibrated the constant
    calibration: int

    @classmethod
    def calibrate(cls, name: str, labels: abc.Sequence[float], ratios: abc.Sequence[float], *,
                  calibration: int = 2, slack: float = ENVELOPE_SLACK) -> EnvelopeCheck:
        """ Stages must come coarsest first """
        if not 1 <= calibration <= len(ratios):
            raise exc.InvalidParameterError(f'{name}: cannot calibrate on {calibration} of {len(ratios)} stages')
        if any(not math.isfinite(r) or r < 0 for r in ratios):
            raise exc.InvariantViolation(name, f'envelope ratios must be finite and >= 0, got {list(ratios)!r}')

        check = cls(
            name=name,
            labels=tuple(labels),
            ratios=tuple(float(r) for r in ratios),
            constant=slack * max(ratios[:calibration]),
            calibration=calibration,
        )
        if not check.passed:
            logger.warning(f'Envelope {name} fails at stages {check.failures}')
        return check

    @property
    def failures(self) -> list[float]:
        return [label for label, ratio in zip(self.labels, self.ratios) if ratio > self.constant]

    @property
    def passed(self) -> bool:
        return not self.failures

    def export(self) -> dict:
        return {
            'name': self.name,
            'constant': self.constant,
            'calibration': self.calibration,
            'passed': self.passed,
            'stages': [{'stage': label, 'ratio': ratio} for label, ratio in zip(self.labels, self.ratios)],
        }
