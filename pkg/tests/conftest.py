import logging

import pytest

from schrodloc.construction import Schedule, ScheduleOverrides, build_schedule
from schrodloc.profiles import FourierTable, default_table
from schrodloc.quadrature import QuadratureSpec


@pytest.fixture(scope='session')
def table() -> FourierTable:
    """ The shared Fourier table: built once per test session """
    logging.root.setLevel(logging.INFO)
    return default_table()


@pytest.fixture(scope='session')
def spec() -> QuadratureSpec:
    """ Quadrature settings for tests: looser than the run default, same engine """
    return QuadratureSpec.from_tolerance(1e-8)


@pytest.fixture(scope='function')
def demo_schedule() -> Schedule:
    """ The n = 2 demo: three explicit stages """
    return build_schedule(2, 0.24, 0.98, 3, ScheduleOverrides(v=(0.24, 0.028, 1.3e-4)))


@pytest.fixture(scope='function')
def recurrence_schedule() -> Schedule:
    """ The plain recurrence, n = 2, v1 = 0.24 """
    return build_schedule(2, 0.24, 0.98, 3)
