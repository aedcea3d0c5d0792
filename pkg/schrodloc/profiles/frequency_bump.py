""" The frequency bump ψ̂ and its products Φ̂ """

from __future__ import annotations

import functools
import math

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.quadrature import QuadratureSpec, QuadratureResult, integrate, linear_oscillation
from schrodloc.typing import RealArray

from .bump import BumpProfile
from .fourier_table import FourierTable


class FrequencyBump:
    """ ψ̂: the bump ǧ rescaled to the support (-r, r), r = (n-1)^{-1/2}, normalized so that ψ(0) = 1

    ψ̂(η) = c ǧ(η / r), so ψ(y) = (1/2π) ∫ e^{iηy} ψ̂(η) dη = g(ry) / g(0), and c = 2π / (r g(0)).
    The product Φ̂(ξ') = Π ψ̂(ξ_j) is supported in the cube of half-width r, which lies inside B(0; 1).
    """
    # Dimension of the full space; Φ lives in n - 1 dimensions
    n: int

    # Support radius: (n - 1)^{-1/2}
    r: float

    # Normalization constant c
    norm_const: float

    # The 1-D bump, and the table of its Fourier transform
    profile: BumpProfile
    table: FourierTable

    __slots__ = 'n', 'r', 'norm_const', 'profile', 'table'

    def __init__(self, n: int, table: FourierTable):
        if n < 2:
            raise exc.InvalidParameterError(f'the frequency bump needs n >= 2, got {n!r}')

        self.n = n
        self.table = table
        self.profile = table.profile
        self.r = (n - 1) ** -0.5
        self.norm_const = 2 * math.pi / (self.r * self.profile.mass())

    @property
    def dim(self) -> int:
        """ Number of coordinates of x' """
        return self.n - 1

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.r * x for x in self.profile.breakpoints)

    def hat(self, eta: npt.ArrayLike) -> RealArray:
        """ ψ̂(η), vectorized """
        return self.norm_const * self.profile(np.asarray(eta, dtype=float) / self.r)

    def hat_phi(self, xiprime: npt.ArrayLike) -> RealArray:
        """ Φ̂(ξ') = Π_j ψ̂(ξ_j); the last axis holds the coordinates """
        return np.prod(self.hat(xiprime), axis=-1)

    def psi(self, y: npt.ArrayLike) -> RealArray:
        """ ψ(y) = g(ry) / g(0), from the Fourier table """
        return self.table(self.r * np.asarray(y, dtype=float)).real / self.profile.mass()

    def phi(self, xprime: npt.ArrayLike) -> RealArray:
        """ Φ(x') = Π_j ψ(x_j); the last axis holds the coordinates """
        return np.prod(self.psi(xprime), axis=-1)

    def psi_eval(self, y: float, spec: QuadratureSpec) -> QuadratureResult:
        """ ψ(y) by quadrature of its frequency bump over [-r, r] """
        return integrate(
            lambda eta: np.exp(1j * eta * y) * self.hat(eta),
            -self.r, self.r, spec,
            oscillation=linear_oscillation(abs(y), 0.0),
            breakpoints=self.breakpoints,
            where='psi_eval',
        ).scaled(1 / (2 * math.pi))

    def phi_eval(self, xprime: npt.ArrayLike, spec: QuadratureSpec) -> QuadratureResult:
        """ Φ(x') as a product of quadratures, with first-order error propagation """
        xprime = np.atleast_1d(np.asarray(xprime, dtype=float))
        if xprime.shape != (self.dim,):
            raise exc.InvalidParameterError(f'x\' must have {self.dim} coordinates, got shape {xprime.shape}')

        value: complex = 1.0
        error = 0.0
        panels = 0
        for y in xprime:
            factor = self.psi_eval(float(y), spec)
            error = abs(value) * factor.est_error + error * abs(factor.value) + error * factor.est_error
            value *= factor.value
            panels += factor.panels
        return QuadratureResult(value=complex(value), est_error=error, panels=panels)

    def hat_l1(self) -> float:
        """ ‖ψ̂‖₁ = c r ∫ǧ = 2π, exact """
        return self.norm_const * self.r * self.profile.mass()

    @functools.lru_cache(maxsize=None)
    def hat_l2_squared(self, spec: QuadratureSpec) -> float:
        """ ‖ψ̂‖₂² = c² r ‖ǧ‖₂² """
        return self.norm_const ** 2 * self.r * self.profile.l2_norm_squared(spec).value.real

    def hat_l1_quadrature(self, spec: QuadratureSpec) -> QuadratureResult:
        """ ∫|ψ̂| by quadrature, for cross-checking `hat_l1()` """
        return integrate(lambda eta: np.abs(self.hat(eta)), -self.r, self.r, spec,
                         breakpoints=self.breakpoints, where='hat_l1')

