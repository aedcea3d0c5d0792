""" Stage tables """

from __future__ import annotations

import csv
from typing import IO, Optional

from schrodloc import exc
from schrodloc.util import collecting, fmt

from .schedule import Schedule
from .stage import make_stage

STAGE_COLUMNS = ('k', 'v', 'R', 'D', 'lattice_lo', 'lattice_hi', 'p')


@collecting
def stages_rows(schedule: Schedule):
    """ One row per representable stage: k, v, R, D, lattice_lo, lattice_hi, p """
    for k in schedule.stage_indices:
        try:
            stage = make_stage(schedule, k)
        except exc.ScheduleOverflowError:
            # v_k underflows: every later stage does too
            break
        yield stage.export()


def write_stages_csv(schedule: Schedule, file: IO[str], config_hash: Optional[str] = None) -> None:
    writer = csv.writer(file, lineterminator='\n')
    if config_hash:
        file.write(f'# config_hash={config_hash}\n')
    if schedule.watermark:
        file.write(f'# {schedule.watermark}\n')
    writer.writerow(STAGE_COLUMNS)
    for row in stages_rows(schedule):
        writer.writerow([
            value if isinstance(value, int) else fmt(value)
            for value in (row[name] for name in STAGE_COLUMNS)
        ])
