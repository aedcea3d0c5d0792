""" Batch evaluation tables: k, t, x..., re, im, abs, est_err, mode """

from __future__ import annotations

import csv
import dataclasses
from collections import abc
from typing import IO, Optional

from schrodloc.util import fmt

from .base import EvalResult


@dataclasses.dataclass(frozen=True)
class EvalRow:
    """ One evaluation request with its response """
    k: int
    t: float
    x: tuple[float, ...]
    result: EvalResult

    def cells(self) -> list[str]:
        return [
            str(self.k),
            fmt(self.t),
            *(fmt(c) for c in self.x),
            fmt(self.result.value.real),
            fmt(self.result.value.imag),
            fmt(abs(self.result)),
            fmt(self.result.est_error),
            self.result.mode.value,
        ]


def eval_columns(dim: int) -> list[str]:
    """ Header of a batch table for points with `dim` coordinates """
    return ['k', 't', *(f'x{j}' for j in range(1, dim + 1)), 're', 'im', 'abs', 'est_err', 'mode']


def write_eval_csv(rows: abc.Iterable[EvalRow], file: IO[str], dim: int, config_hash: Optional[str] = None) -> int:
    """ Write a batch table; returns the number of rows """
    writer = csv.writer(file, lineterminator='\n')
    if config_hash:
        file.write(f'# config_hash={config_hash}\n')
    writer.writerow(eval_columns(dim))

    count = 0
    for row in rows:
        writer.writerow(row.cells())
        count += 1
    return count
