from .spec import QuadratureSpec, QuadratureResult
from .adaptive import integrate, integrate_batch, integrate_box, gauss_legendre, linear_phase_variation, linear_oscillation
from .phase import PhaseAccumulator, QuadraticPhase, reduce_2pi, two_sum, two_prod, dd_mul, dd_div, PHASE_CEILING
