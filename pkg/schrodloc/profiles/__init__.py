from .bump import BumpProfile, smoothstep, bump_eval, bump_fourier, finite_difference_bound
from .fourier_table import FourierTable, DecayEnvelope, table_grid, cosine_transform
from .frequency_bump import FrequencyBump
from .defaults import default_table, frequency_bump, psi_eval, phi_eval
