""" Divergence certificates: a point outside supp h where |S_t h(x)| stays large at a time of every stage """

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from collections import abc
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.construction import Point, Schedule, h_truncated_eval, make_stage
from schrodloc.profiles import FourierTable, default_table
from schrodloc.propagator import EvalResult, propagate_stage
from schrodloc.quadrature import QuadratureSpec
from schrodloc.testing.profile import timeit
from schrodloc.util import collecting

from .crossterms import CrossTerm, CrossTermBound, CrossTermKind, cross_term_bound, measured_cross_terms
from .search import SearchConfig, Thresholds, joint_search
from .window import WindowSpec, time_window

logger = logging.getLogger(__name__)

# The off-stage sum may take at most this share of c0_product
CROSS_SHARE = 0.5


@dataclasses.dataclass(frozen=True)
class StageRecord:
    """ One stage of a certificate """
    k: int
    v: float
    R: float

    # The chosen time, and the window it was chosen from
    t: float
    window: WindowSpec

    # The two factors of S_t h_{v_k}(x)
    f: EvalResult
    G: EvalResult

    # Off-stage terms and their analytic bound
    cross_terms: tuple[CrossTerm, ...]
    cross_bound: CrossTermBound

    threshold: float

    @property
    def product(self) -> float:
        return abs(self.f) * abs(self.G)

    @property
    def cross_measured(self) -> float:
        """ Σ_{i≠k} |S_t h_{v_i}(x)|, majorants included """
        return math.fsum(term.value for term in self.cross_terms)

    @property
    def cross_evaluated(self) -> float:
        """ The part of the off-stage sum that was evaluated, not majorized """
        return math.fsum(term.value for term in self.cross_terms if term.kind is CrossTermKind.MEASURED)

    @property
    def majorized(self) -> list[int]:
        return [term.i for term in self.cross_terms if term.kind is CrossTermKind.MAJORANT]

    @property
    def valid(self) -> bool:
        return self.product >= self.threshold and self.cross_measured <= CROSS_SHARE * self.threshold

    @property
    def ledger_sound(self) -> bool:
        """ Whether the evaluated off-stage terms respect the analytic bound """
        return self.cross_evaluated <= self.cross_bound.value

    def export(self) -> dict:
        return {
            'k': self.k,
            'v': self.v,
            'R': self.R,
            't': self.t,
            'absSf': abs(self.f),
            'absSG': abs(self.G),
            'absProduct': self.product,
            'crossMeasured': self.cross_measured,
            'crossBound': self.cross_bound.value,
            'crossTerms': [term.export() for term in self.cross_terms],
            'valid': self.valid,
        }


@dataclasses.dataclass(frozen=True)
class Certificate:
    """ The stage records of one point, with the support check """
    point: Point
    records: tuple[StageRecord, ...]

    # dist(x1, [-v_K, v_K])
    support_margin: float

    # h(x), which must be exactly 0
    h_value: complex

    schedule_hash: str
    seed: Optional[int]
    thresholds: Thresholds

    @property
    def outside_support(self) -> bool:
        return self.support_margin > 0 and self.h_value == 0

    @property
    def valid(self) -> bool:
        return self.outside_support and all(record.valid for record in self.records)

    @property
    def failing_stage(self) -> Optional[int]:
        """ The first stage whose record is invalid """
        for record in self.records:
            if not record.valid:
                return record.k
        return None

    @property
    def ledger_sound(self) -> bool:
        return all(record.ledger_sound for record in self.records)

    def export(self) -> dict:
        return {
            'x': self.point.export(),
            'stages': [record.export() for record in self.records],
            'supportMargin': self.support_margin,
            'scheduleHash': self.schedule_hash,
            'seed': self.seed,
            'valid': self.valid,
            'failingStage': self.failing_stage,
            'ledgerSound': self.ledger_sound,
            'thresholds': self.thresholds.export(),
        }


@dataclasses.dataclass(frozen=True)
class TracePoint:
    """ |S_t h_{v_k}(x)| at one time near t_k """
    k: int
    t: float
    value: float


def schedule_hash(schedule: Schedule) -> str:
    """ SHA-256 of the canonical schedule export """
    canonical = json.dumps(schedule.export(), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode()).hexdigest()


def divergence_certificate(schedule: Schedule, point: Point, config: SearchConfig, spec: QuadratureSpec, *,
                           C: float = 1.0,
                           table: Optional[FourierTable] = None) -> Certificate:
    """ Jointly maximize both factors of every stage at one point, and account for the other stages

    An invalid certificate is a result: `failing_stage` names the stage.

    Raises:
        exc.InvalidParameterError: |x1| <= δ/2, a dimension mismatch, or thresholds are not set
        exc.InvariantViolation: a chosen time outside of its window, or times that do not shrink
    """
    table = table or default_table()
    thresholds = config.require_thresholds()
    if point.n != schedule.n:
        raise exc.InvalidParameterError(f'the point has {point.n} coordinates, the schedule is {schedule.n}-dimensional')
    if not abs(point.x1) > schedule.delta / 2:
        raise exc.InvalidParameterError(f'certificates need |x1| > δ/2 = {schedule.delta / 2!r}, got {point.x1!r}')

    records = []
    with timeit(f'certificate x={point.export()}'):
        for k in schedule.stage_indices:
            stage = make_stage(schedule, k)
            window = time_window(stage, point.x1, config.c_window)
            best = joint_search(stage, point, window, spec, config, table=table)
            records.append(StageRecord(
                k=k, v=stage.v, R=stage.R,
                t=best.t,
                window=window,
                f=best.f,
                G=best.G,
                cross_terms=tuple(measured_cross_terms(schedule, k, best.t, point, spec, table=table)),
                cross_bound=cross_term_bound(schedule, k, best.t, C),
                threshold=thresholds.c0_product,
            ))

    certificate = Certificate(
        point=point,
        records=tuple(records),
        support_margin=abs(point.x1) - schedule.v(schedule.K),
        h_value=h_truncated_eval(schedule, point),
        schedule_hash=schedule_hash(schedule),
        seed=config.seed,
        thresholds=thresholds,
    )

    for violation in certificate_violations(certificate, schedule.delta):
        raise exc.InvariantViolation('divergence_certificate', violation)

    if not certificate.valid:
        logger.info(f'Certificate at x={point.export()} fails at stage {certificate.failing_stage}')
    if not certificate.ledger_sound:
        logger.warning(f'Cross-term ledger exceeds its analytic bound at x={point.export()}')
    return certificate


def certificate_violations(certificate: Certificate, delta: float) -> abc.Iterator[str]:
    """ Yield every broken structural law of a certificate: windows, shrinking times, |t_k| R_k """
    previous = math.inf
    for record in certificate.records:
        if not record.window.admits(record.t):
            yield f'stage {record.k}: t = {record.t!r} outside of its window'
        if not abs(record.t) < previous:
            yield f'stage {record.k}: |t_k| does not decrease'
        previous = abs(record.t)

        scaled = abs(record.t) * record.R
        if not delta / 8 <= scaled <= 1:
            yield f'stage {record.k}: |t_k| R_k = {scaled!r} outside of [δ/8, 1]'


@collecting
def certificate_trace(schedule: Schedule, certificate: Certificate, spec: QuadratureSpec, *,
                      table: Optional[FourierTable] = None, points: int = 64, span: float = 4.0):
    """ |S_t h_{v_k}(x)| on a uniform time grid of ±span window half-widths around each t_k """
    table = table or default_table()
    for record in certificate.records:
        stage = make_stage(schedule, record.k)
        half = span * record.window.tau_max
        for t in record.t + np.linspace(-half, half, points):
            if t == 0:
                continue
            term = propagate_stage(stage, float(t), certificate.point, spec, table=table)
            yield TracePoint(k=record.k, t=float(t), value=abs(term.term) if term.term is not None else math.nan)


def certificates_document(certificates: abc.Iterable[Certificate], config_hash: Optional[str] = None) -> dict:
    certificates = list(certificates)
    return {
        'config_hash': config_hash,
        'certificates': [c.export() for c in certificates],
        'valid': sum(1 for c in certificates if c.valid),
        'total': len(certificates),
    }
