""" Dirichlet-kernel reduction of the lattice sums

    Σ_{R/2D<l<R/D} e^{ilθ} = e^{3ipθ} D_p(θ) + Σ_{extra} e^{ilθ} - Σ_{missing} e^{ilθ}

where D_p(θ) = Σ_{|m|<=p} e^{imθ} = sin((2p+1)θ/2) / sin(θ/2) and {2p..4p} is the centered range.
The boundary terms are the exact set differences between the lattice and {2p..4p}.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import numpy.typing as npt

from schrodloc.quadrature import PhaseAccumulator, reduce_2pi
from schrodloc.typing import ComplexArray, RealArray

from .stage import Stage

# Below this |θ mod 2π|, the kernel is evaluated by its Taylor series
SERIES_THRESHOLD = 1e-5


def dirichlet_kernel(p: int, theta: npt.ArrayLike) -> RealArray:
    """ D_p(θ) = sin((2p+1)θ/2) / sin(θ/2), vectorized; D_p(0) = 2p + 1 """
    return sine_ratio(2 * p + 1, reduce_2pi(np.asarray(theta, dtype=float)))


def lattice_sum_modulus(stage: Stage, x: npt.ArrayLike) -> RealArray:
    """ |Σ_l e^{iDlx}| = |sin(mθ/2) / sin(θ/2)| with θ = Dx and m lattice points, vectorized """
    theta = PhaseAccumulator(where='lattice_sum_modulus').add_product(stage.D, x).reduced()
    return np.abs(sine_ratio(stage.lattice_count_per_axis, theta))


def lattice_sum_zeros(stage: Stage, lo: float, hi: float) -> RealArray:
    """ The zeros of the lattice sum in [lo, hi]: x = 2πj / (mD), j not a multiple of m """
    m = stage.lattice_count_per_axis
    step = 2 * np.pi / (m * stage.D)
    j = np.arange(np.ceil(lo / step), np.floor(hi / step) + 1)
    return j[j % m != 0] * step


def sine_ratio(m: int, theta: RealArray) -> RealArray:
    """ sin(mθ/2) / sin(θ/2) for θ in [-π, π]; m at θ = 0 """
    near = np.abs(theta) < SERIES_THRESHOLD
    safe = np.where(near, 1.0, theta)
    with np.errstate(invalid='ignore', divide='ignore'):
        closed = np.sin(m * safe / 2) / np.sin(safe / 2)
    series = m * (1 - (m * m - 1) * theta * theta / 24)
    return np.where(near, series, closed)


@dataclasses.dataclass(frozen=True)
class DirichletReduction:
    """ The lattice of a stage against the centered range {2p..4p} """
    p: int

    # Lattice integers outside of {2p..4p}
    extra: tuple[int, ...]

    # Integers of {2p..4p} outside of the lattice
    missing: tuple[int, ...]

    @property
    def boundary_terms(self) -> int:
        """ Number of O(1) boundary terms """
        return len(self.extra) + len(self.missing)

    def lattice_sum(self, theta: npt.ArrayLike) -> ComplexArray:
        """ Σ_l e^{ilθ} over the lattice, through the Dirichlet kernel """
        theta = np.asarray(theta, dtype=float)
        center = PhaseAccumulator(where='dirichlet_reduce').add_product(3 * self.p, theta).unit()
        total = center * dirichlet_kernel(self.p, theta)
        for l in self.extra:
            total = total + PhaseAccumulator(where='dirichlet_reduce').add_product(l, theta).unit()
        for l in self.missing:
            total = total - PhaseAccumulator(where='dirichlet_reduce').add_product(l, theta).unit()
        return total


def dirichlet_reduce(stage: Stage) -> DirichletReduction:
    """ Compare the lattice R/2D < l < R/D with {2p..4p}; the difference is exact integer sets """
    lattice = set(range(stage.lattice_lo, stage.lattice_hi + 1))
    centered = set(range(2 * stage.p, 4 * stage.p + 1))
    return DirichletReduction(
        p=stage.p,
        extra=tuple(sorted(lattice - centered)),
        missing=tuple(sorted(centered - lattice)),
    )
