from .schedule import Schedule, ScheduleOverrides, build_schedule, default_mu, schedule_violations
from .stage import Stage, make_stage
from .point import Point
from .family import f_v_eval, f_v_hat, f_v_hat_quadrature, lattice_sum, G_v_eval, G_v_hat, G_v_hat_quadrature
from .family import h_v_eval, h_truncated_eval, cutoff_or_fail
from .tails import TailSums, tail_sums
from .dirichlet import DirichletReduction, dirichlet_kernel, dirichlet_reduce, lattice_sum_modulus, lattice_sum_zeros
from .export import stages_rows, write_stages_csv
