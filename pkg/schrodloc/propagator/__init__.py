from .base import EvalMode, EvalResult
from .frequency import schrodinger_mean_fhat, multiplier
from .semi_analytic import f_v_phase, propagate_f_v, propagate_psi, propagate_phi, propagate_G_v
from .kernel import kernel_K_t, kernel_constant, kernel_f_v_phase, propagate_by_kernel, propagate_f_v_kernel
from .oracle import direct_f_v, direct_G_v
from .dispatch import select_f_mode, propagate_f_v_auto, G_v_sup_bound
from .stacked import StageTerm, StackedResult, propagate_stage, propagate_h
from .export import EvalRow, eval_columns, write_eval_csv
