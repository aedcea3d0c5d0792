""" Shared profile instances

The Fourier table is built once per process and shared by every stage and every suite.
"""

from __future__ import annotations

import functools

import numpy as np
import numpy.typing as npt

from schrodloc.quadrature import QuadratureSpec

from .bump import BumpProfile
from .fourier_table import FourierTable
from .frequency_bump import FrequencyBump


@functools.lru_cache(maxsize=None)
def default_table(profile: BumpProfile = BumpProfile()) -> FourierTable:
    """ The Fourier table of the bump, built on first use """
    return FourierTable.build(profile)


@functools.lru_cache(maxsize=None)
def frequency_bump(n: int, profile: BumpProfile = BumpProfile()) -> FrequencyBump:
    """ The frequency bump of dimension n, on the shared table """
    return FrequencyBump(n, default_table(profile))


def psi_eval(y: float, spec: QuadratureSpec, n: int = 2) -> complex:
    """ ψ(y) by quadrature of its frequency bump """
    return frequency_bump(n).psi_eval(y, spec).value


def phi_eval(xprime: npt.ArrayLike, n: int, spec: QuadratureSpec) -> complex:
    """ Φ(x') = Π_j ψ(x_j) by quadrature """
    return frequency_bump(n).phi_eval(np.atleast_1d(xprime), spec).value
