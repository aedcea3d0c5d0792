__version__ = __import__('importlib.metadata').metadata.version('schrodloc')

from .construction import Schedule, ScheduleOverrides, Stage, Point, build_schedule, make_stage
from .quadrature import QuadratureSpec
from .propagator import EvalMode, EvalResult, propagate_h
from .cli import RunConfig

from . import exc
