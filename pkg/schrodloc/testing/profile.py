""" Profiling of suites and table builds """

from __future__ import annotations

import logging
from collections import abc
from contextlib import contextmanager
from functools import wraps
from time import monotonic
from typing import Optional

logger = logging.getLogger(__name__)


def timeit(arg, timings: Optional[dict[str, float]] = None):
    """ Measure the time it takes to run a function, or a block of code.

    Can be used as a decorator, or as a context manager.
    When `timings` is given, the run time is also stored there under the name:
    the CLI uses it to put runtimes into the summary.

    Usage:
        with timeit('fourier table'):
            ...

    Make sure your logger includes INFO:

        import logging
        logging.root.setLevel(logging.INFO)

    Usage:
        @timeit
        def build():
            ...
    """
    if isinstance(arg, str):
        return timeit_contextmanager(arg, timings)
    else:
        return timeit_decorator(arg)


def timeit_decorator(f: abc.Callable):
    """ A decorator that times a function and outputs to the logger

    Example:
        @timeit
        def func(...):
            ...
    """
    @wraps(f)
    def measure_time(*args, **kwargs):
        with timeit_contextmanager(f.__qualname__):
            return f(*args, **kwargs)
    return measure_time


@contextmanager
def timeit_contextmanager(name: str, timings: Optional[dict[str, float]] = None):
    """ A context manager that times the code and logs the result

    Example:
        with timeit(...):
            ...
    """
    t_start = monotonic()
    try:
        yield
    finally:
        run_time = monotonic() - t_start
        if timings is not None:
            timings[name] = run_time
        logger.info(f'{name}: {run_time:.2f}s')
