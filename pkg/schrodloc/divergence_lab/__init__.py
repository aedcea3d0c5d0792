from .window import WindowSpec, time_window, tau_grid, golden_refine, maximize_over_window
from .lower_bound import LowerBoundF, f_v_predictor, lower_bound_f
from .search import Thresholds, SearchConfig, SampleOutcome, EmpiricalSet, JointBest
from .search import wilson_interval, domain_measure, sample_point, sample_points, maximize_G, joint_search
from .search import search_Ek, calibrate_thresholds, calibration_run
from .crossterms import CrossTermKind, CrossTermBound, CrossTerm, cross_term_bound, tightened_bound, tightened_sequence
from .crossterms import measured_cross_terms, h_v_majorant
from .certificate import StageRecord, Certificate, TracePoint, schedule_hash, divergence_certificate
from .certificate import certificate_violations, certificate_trace, certificates_document
from .limsup import SetEstimate, LimsupReport, limsup_report
from .envelopes import ENVELOPES, EnvelopeGrid, StageRatios, EnvelopeSuite, stage_ratios, envelope_suite
from .export import write_search_csv, write_bounds_csv, write_trace_csv
