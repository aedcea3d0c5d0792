from .funcy import collecting
from .logdomain import log2_sum, pow2
from .floats import fmt
