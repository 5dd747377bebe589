"""Optimistic methods of first, second and higher order for composite saddle problems."""

from .geometry import MirrorMap, bregman_distance, euclidean_map, three_point_gap
from .problems import (Predictor, ProblemSpec, SaddleProblem, eval_F, eval_regularized_taylor, eval_taylor,
                       make_predictor, make_test_problem, primal_dual_gap_prob1, reference_saddle_point,
                       residual, restricted_gap_prob2)
from .linesearch import LineSearchConfig, LineSearchOutcome, line_search
from .solvers import (SolverConfig, Trajectory, eta_hat_rule, run, run_first_order_fixed, run_first_order_ls,
                      run_mirror_prox, run_pth_order, run_second_order, simulated_zeta, theory_constants,
                      zeta_sequence)

__version__ = "0.1.0"
