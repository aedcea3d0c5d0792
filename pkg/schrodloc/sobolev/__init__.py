from .report import NormReport, ScalingFit, EnvelopeCheck
from .norms import l2_f_v, l2_G_v, l2_G_v_physical, l1_norms, dirichlet_l1
from .hs import MembershipReport, hs_norm_h_v, hs_membership
from .suites import dyadic_stages, norm_suite, scaling_fits, norm_envelopes, select, granularity
from .suites import plancherel_consistency, check_plancherel
from .export import write_norms_csv, write_scaling_points_csv, fits_document, fits_passed, dumps_json
