""" Points of ℝ^n, split as (x1, x') """

from __future__ import annotations

import dataclasses

import numpy as np
import numpy.typing as npt

from schrodloc import exc


@dataclasses.dataclass(frozen=True)
class Point:
    x1: float
    xprime: tuple[float, ...]

    def __post_init__(self):
        if not np.all(np.isfinite((self.x1, *self.xprime))):
            raise exc.InvalidParameterError(f'point coordinates must be finite, got {self!r}')

    @classmethod
    def from_array(cls, x: npt.ArrayLike) -> Point:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise exc.InvalidParameterError(f'a point needs n >= 2 coordinates, got shape {x.shape}')
        return cls(x1=float(x[0]), xprime=tuple(float(c) for c in x[1:]))

    @property
    def n(self) -> int:
        return 1 + len(self.xprime)

    def as_array(self) -> np.ndarray:
        return np.array((self.x1, *self.xprime))

    def xprime_array(self) -> np.ndarray:
        return np.array(self.xprime)

    def export(self) -> list[float]:
        return [self.x1, *self.xprime]
