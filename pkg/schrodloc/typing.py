from collections import abc
from typing import Union

import numpy as np
import numpy.typing as npt


# Annotation for real arrays
RealArray = npt.NDArray[np.float64]

# Annotation for complex arrays
ComplexArray = npt.NDArray[np.complex128]

# Anything numpy can turn into an array of reals
RealLike = Union[float, npt.ArrayLike]

# A vectorized integrand: nodes in, values out (same shape)
Integrand = abc.Callable[[RealArray], npt.NDArray]

# Oscillation bound callback: (panel lo edges, panel hi edges) -> bound on |d(phase)/dx| per panel
OscillationBound = abc.Callable[[RealArray, RealArray], RealArray]

# A frequency-side function handle: frequencies (array of shape (..., dim)) -> complex values
FrequencyFunction = abc.Callable[[RealArray], ComplexArray]
