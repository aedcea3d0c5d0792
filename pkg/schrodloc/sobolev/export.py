""" Scaling tables and fit summaries """

from __future__ import annotations

import csv
import json
from collections import abc
from typing import IO, Optional

from schrodloc.util import fmt

from .report import EnvelopeCheck, NormReport, ScalingFit

NORM_COLUMNS = ('k', 'v', 'R', 'quantity', 's', 'measured', 'bound', 'constant', 'est_error')


def write_norms_csv(reports: abc.Iterable[NormReport], file: IO[str], config_hash: Optional[str] = None) -> None:
    """ One row per report: k, v, R, quantity, s, measured, bound, constant, est_error """
    writer = csv.writer(file, lineterminator='\n')
    if config_hash:
        file.write(f'# config_hash={config_hash}\n')
    writer.writerow(NORM_COLUMNS)
    for report in reports:
        row = report.export()
        writer.writerow([_cell(row[name]) for name in NORM_COLUMNS])


def write_scaling_points_csv(reports: abc.Iterable[NormReport], file: IO[str], config_hash: Optional[str] = None) -> None:
    """ Plot-ready points: quantity, x (v or R), y """
    writer = csv.writer(file, lineterminator='\n')
    if config_hash:
        file.write(f'# config_hash={config_hash}\n')
    writer.writerow(('quantity', 'v', 'R', 'y'))
    for report in reports:
        name = report.quantity if report.s is None else f'{report.quantity}(s={report.s:g})'
        writer.writerow((name, fmt(report.v), fmt(report.R), fmt(report.measured)))


def fits_document(fits: abc.Iterable[ScalingFit], checks: abc.Iterable[EnvelopeCheck] = (),
                  config_hash: Optional[str] = None) -> dict:
    """ fits.json: every fit and envelope, and whether all of them hold """
    fits, checks = list(fits), list(checks)
    return {
        'config_hash': config_hash,
        'passed': fits_passed(fits, checks),
        'fits': [fit.export() for fit in fits],
        'envelopes': [check.export() for check in checks],
    }


def fits_passed(fits: abc.Iterable[ScalingFit], checks: abc.Iterable[EnvelopeCheck] = ()) -> bool:
    """ No checked fit is off its tolerance, and every envelope holds """
    return all(fit.passed is not False for fit in fits) and all(check.passed for check in checks)


def dumps_json(document: dict) -> str:
    """ Canonical JSON: sorted keys, fixed indentation """
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=True) + '\n'


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return fmt(value)
