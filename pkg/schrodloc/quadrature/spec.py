""" Quadrature settings and results """

from __future__ import annotations

import dataclasses
import math
from typing import Optional

from schrodloc import exc


@dataclasses.dataclass(frozen=True)
class QuadratureSpec:
    """ Settings for the quadrature engine

    One object travels through every numerical operation: profiles, propagators, norms.
    """
    # Target relative tolerance: Σ est_error <= rel_tol * |value| ...
    rel_tol: float = 1e-10

    # ... or this absolute tolerance, whichever is larger
    abs_tol: float = 1e-13

    # The max number of panels a single integral may use
    max_panels: int = 1 << 21

    # Gauss-Legendre nodes per panel
    order: int = 16

    # Max phase change (radians) within one panel, when an oscillation bound is known
    phase_per_panel: float = 2 * math.pi

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise exc.InvalidParameterError(f'rel_tol must be > 0, got {self.rel_tol!r}')
        if not self.abs_tol > 0:
            raise exc.InvalidParameterError(f'abs_tol must be > 0, got {self.abs_tol!r}')
        if self.max_panels < 1:
            raise exc.InvalidParameterError(f'max_panels must be >= 1, got {self.max_panels!r}')
        if self.order < 2:
            raise exc.InvalidParameterError(f'order must be >= 2, got {self.order!r}')
        if not self.phase_per_panel > 0:
            raise exc.InvalidParameterError(f'phase_per_panel must be > 0, got {self.phase_per_panel!r}')

    @classmethod
    def from_tolerance(cls, tolerance: float, **kwargs) -> QuadratureSpec:
        """ Spec from a single tolerance, as configured by the user

        The absolute tolerance follows the relative one three orders of magnitude below
        """
        return cls(rel_tol=tolerance, abs_tol=tolerance * 1e-3, **kwargs)

    def target(self, value: complex) -> float:
        """ The error budget for an integral of this magnitude """
        return max(self.rel_tol * abs(value), self.abs_tol)

    def refined(self, factor: float = 4.0) -> QuadratureSpec:
        """ A stricter spec: used by self-oracles ("the same operation at 4x refinement") """
        return dataclasses.replace(
            self,
            rel_tol=self.rel_tol / factor,
            abs_tol=self.abs_tol / factor,
            phase_per_panel=self.phase_per_panel / factor,
        )

    def relaxed(self, factor: float) -> QuadratureSpec:
        """ A looser spec: for inner quantities whose errors get multiplied by small factors """
        return dataclasses.replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


@dataclasses.dataclass(frozen=True)
class QuadratureResult:
    """ A single integral: value, a-posteriori error estimate, cost """
    value: complex
    est_error: float
    panels: int

    # Total error estimate after each adaptive round. Recorded on demand.
    history: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        assert self.est_error >= 0

    def __add__(self, other: QuadratureResult) -> QuadratureResult:
        return QuadratureResult(
            value=self.value + other.value,
            est_error=self.est_error + other.est_error,
            panels=self.panels + other.panels,
        )

    def scaled(self, factor: complex) -> QuadratureResult:
        return QuadratureResult(
            value=self.value * factor,
            est_error=self.est_error * abs(factor),
            panels=self.panels,
            history=self.history,
        )
