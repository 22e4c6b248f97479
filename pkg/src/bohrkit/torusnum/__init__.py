"""Norms, sup maximization and inequality checks on the finite polytorus."""
from .checks import (
    bcq_weighted_sum,
    bh_ratio,
    fred1_check,
    fred2_lhs,
    fred2_ratio,
    h2_sharp_constant,
    khinchine_ratio,
    ksz_search,
    random_fred1_instance,
    random_homogeneous,
)
from .norms import NormReport, TorusPoint, eval_poly, l2_norm, lp_norm_mc, sup_norm
from .sidon import sidon_constant, sidon_rhs, sidon_sweep
