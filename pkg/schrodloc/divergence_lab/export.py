""" Search tables, envelope tables and certificate traces """

from __future__ import annotations

import csv
from collections import abc
from typing import IO, Optional

from schrodloc.util import fmt

from .certificate import TracePoint
from .envelopes import EnvelopeSuite
from .search import EmpiricalSet


def write_search_csv(result: EmpiricalSet, file: IO[str], config_hash: Optional[str] = None) -> None:
    """ One row per sample, in index order: index, x1..xn, t, value, passed """
    writer = csv.writer(file, lineterminator='\n')
    _header(file, config_hash)
    n = result.outcomes[0].point.n if result.outcomes else 0
    writer.writerow(['index', *(f'x{j}' for j in range(1, n + 1)), 't', 'value', 'passed'])
    for outcome in sorted(result.outcomes, key=lambda o: o.index):
        writer.writerow([
            outcome.index,
            *(fmt(c) for c in outcome.point.export()),
            fmt(outcome.t),
            fmt(outcome.value),
            int(outcome.passed),
        ])


def write_bounds_csv(suite: EnvelopeSuite, file: IO[str], config_hash: Optional[str] = None) -> None:
    """ envelope, k, R, ratio, constant, passed """
    writer = csv.writer(file, lineterminator='\n')
    _header(file, config_hash)
    writer.writerow(('envelope', 'k', 'R', 'ratio', 'constant', 'passed'))
    for row in suite.rows():
        check = suite.check(row['envelope'])
        writer.writerow((
            row['envelope'], row['k'], fmt(row['R']), fmt(row['ratio']),
            fmt(check.constant), int(row['ratio'] <= check.constant),
        ))


def write_trace_csv(points: abc.Iterable[TracePoint], file: IO[str], config_hash: Optional[str] = None) -> None:
    """ k, t, abs """
    writer = csv.writer(file, lineterminator='\n')
    _header(file, config_hash)
    writer.writerow(('k', 't', 'abs'))
    for point in points:
        writer.writerow((point.k, fmt(point.t), fmt(point.value)))


def _header(file: IO[str], config_hash: Optional[str]):
    if config_hash:
        file.write(f'# config_hash={config_hash}\n')
