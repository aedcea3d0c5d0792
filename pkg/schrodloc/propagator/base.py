""" Results of propagation """

from __future__ import annotations

import dataclasses
from enum import Enum
from typing import Optional

from schrodloc.quadrature import QuadratureResult


class EvalMode(Enum):
    """ How a Schrödinger mean was evaluated """
    # Lattice reduction + low-frequency quadrature
    SEMI_ANALYTIC = 'semi_analytic'

    # Quadrature of the frequency-side definition over the whole band
    DIRECT_ORACLE = 'direct_oracle'

    # Convolution with the kernel K_t
    KERNEL_CONVOLUTION = 'kernel_convolution'


@dataclasses.dataclass(frozen=True)
class EvalResult:
    """ A value of S_t(·) with its a-posteriori error estimate """
    value: complex
    est_error: float
    mode: EvalMode

    # Total error estimate after each refinement round. Recorded on demand.
    history: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        assert self.est_error >= 0

    @classmethod
    def from_quadrature(cls, result: QuadratureResult, mode: EvalMode, *, extra_error: float = 0.0) -> EvalResult:
        """ Wrap a quadrature result; `extra_error` carries truncation bounds """
        return cls(value=complex(result.value), est_error=result.est_error + extra_error, mode=mode,
                   history=result.history)

    def __abs__(self) -> float:
        return abs(self.value)

    def __mul__(self, other: EvalResult) -> EvalResult:
        """ Product of two factors; the mode of the left factor is kept """
        return EvalResult(
            value=self.value * other.value,
            est_error=(abs(self.value) * other.est_error + abs(other.value) * self.est_error +
                       self.est_error * other.est_error),
            mode=self.mode,
        )

    def scaled(self, factor: complex) -> EvalResult:
        return dataclasses.replace(self, value=self.value * factor, est_error=self.est_error * abs(factor))

    @property
    def relative_error(self) -> float:
        return self.est_error / abs(self.value) if self.value else float('inf')
