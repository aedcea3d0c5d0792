""" The plateau bump ǧ """

from __future__ import annotations

import dataclasses
import functools

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.quadrature import QuadratureSpec, QuadratureResult, integrate, linear_oscillation
from schrodloc.typing import RealArray


def smoothstep(u: npt.ArrayLike, sharpness: float = 1.0) -> RealArray:
    """ C^∞ step: 0 for u <= 0, 1 for u >= 1

    σ(u) = ρ(u) / (ρ(u) + ρ(1 - u)), ρ(u) = exp(-sharpness / u) for u > 0, else 0.
    The denominator never vanishes: max(u, 1 - u) >= 1/2.
    """
    u = np.asarray(u, dtype=float)
    with np.errstate(divide='ignore', over='ignore', under='ignore'):
        left = np.where(u > 0, np.exp(-sharpness / np.where(u > 0, u, 1.0)), 0.0)
        right = np.where(u < 1, np.exp(-sharpness / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return left / (left + right)


@dataclasses.dataclass(frozen=True)
class BumpProfile:
    """ ǧ: an even C^∞ bump, exactly 1 on the plateau and exactly 0 outside of the support

    ǧ(x) = σ((support - |x|) / (support - plateau))
    """
    # ǧ = 1 on |x| <= plateau_half_width
    plateau_half_width: float = 0.5

    # ǧ = 0 on |x| >= support_half_width
    support_half_width: float = 1.0

    # Exponent scale of the smoothstep
    sharpness: float = 1.0

    def __post_init__(self):
        if not 0 < self.plateau_half_width < self.support_half_width:
            raise exc.InvalidParameterError(
                f'need 0 < plateau < support, got {self.plateau_half_width!r}, {self.support_half_width!r}')
        if not self.sharpness > 0:
            raise exc.InvalidParameterError(f'sharpness must be > 0, got {self.sharpness!r}')

    def __call__(self, x: npt.ArrayLike) -> RealArray:
        """ ǧ(x), vectorized """
        x = np.abs(np.asarray(x, dtype=float))
        band = self.support_half_width - self.plateau_half_width
        return smoothstep((self.support_half_width - x) / band, self.sharpness)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """ Edges of the plateau and of the support """
        p, s = self.plateau_half_width, self.support_half_width
        return (-s, -p, p, s)

    def mass(self) -> float:
        """ ∫ǧ, exact

        σ(u) + σ(1 - u) = 1, so each transition band contributes half its width
        """
        return self.plateau_half_width + self.support_half_width

    @functools.lru_cache(maxsize=None)
    def l1_norm(self, spec: QuadratureSpec) -> QuadratureResult:
        """ ‖ǧ‖₁ by quadrature """
        s = self.support_half_width
        return integrate(self, -s, s, spec, breakpoints=self.breakpoints, where='bump.l1_norm')

    @functools.lru_cache(maxsize=None)
    def l2_norm_squared(self, spec: QuadratureSpec) -> QuadratureResult:
        """ ‖ǧ‖₂² by quadrature """
        s = self.support_half_width
        return integrate(lambda x: self(x) ** 2, -s, s, spec, breakpoints=self.breakpoints, where='bump.l2_norm')

    def fourier(self, xi: float, spec: QuadratureSpec) -> QuadratureResult:
        """ g(ξ) = ∫ e^{-iξx} ǧ(x) dx by adaptive quadrature over the support """
        s = self.support_half_width
        return integrate(
            lambda x: np.exp(-1j * xi * x) * self(x),
            -s, s, spec,
            oscillation=linear_oscillation(abs(xi), 0.0),
            breakpoints=self.breakpoints,
            where='bump_fourier',
        )


def bump_eval(x: float, profile: BumpProfile = BumpProfile()) -> float:
    """ ǧ(x) for a single point """
    return float(profile(x))


def bump_fourier(xi: float, tol: float, profile: BumpProfile = BumpProfile()) -> complex:
    """ g(ξ) with absolute error <= tol

    Raises:
        exc.QuadratureNonconvergenceError
    """
    if not tol > 0:
        raise exc.InvalidParameterError(f'tol must be > 0, got {tol!r}')

    # max(rel * |g|, abs) <= tol, because |g| <= ‖ǧ‖₁ = mass
    spec = QuadratureSpec(rel_tol=tol / max(1.0, profile.mass()), abs_tol=tol)
    return profile.fourier(xi, spec).value


def finite_difference_bound(profile: BumpProfile, order: int, h: float = 1e-2) -> float:
    """ max |Δ_h^order ǧ| / h^order on a grid over the support """
    s = profile.support_half_width
    x = np.arange(-s - order * h, s + order * h, h)
    diffs = np.diff(profile(x), n=order) / h ** order
    return float(np.max(np.abs(diffs)))


__all__ = ['BumpProfile', 'smoothstep', 'bump_eval', 'bump_fourier', 'finite_difference_bound']
