from .modq import Fp, Fq2, GFext, poly_roots, poly_eval
from .linalg import (solve_linear, solve_mod_pk, kernel_mod_pk, field_solve,
                     field_kernel, FractionField, charpoly, mat_mul, mat_vec,
                     transpose, identity, hensel_split_at_zero, poly_eval_mat)
from .padic import PadicTrunc, LocalO, pval
from .cyclotomic import CycRing, cyclotomic_poly
from .series import QSeries, IntRing, Laurent
from .ball import ComplexBall, ball_sum
from .logtable import LogTable, fixed_log
