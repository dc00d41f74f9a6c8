"""Solvers for the two-flux scalar conservation law of CO2 plume migration
with residual trapping: exact Riemann solutions, binary wave interactions,
wave-front tracking, and independent numerical oracles."""

__version__ = "0.1.0"

from .flux import ConcaveCurve, FluxParams, Regime, char_speeds, df, d2f, f, ustar
from .riemann import (Constant, Front, FrontKind, Rarefaction, RarefactionFan,
                      RiemannSolution, Shock, check_admissibility,
                      classify_sigma, discretize_rarefaction,
                      sample_rarefaction, shock_speed, slope_jump,
                      solve_riemann)
from .interactions import (Classification, InteractionOutcome, PairCase,
                           asymptotic_eta_bar, asymptotic_eta_tilde,
                           classify_pair, collision_time, resolve_collision,
                           threshold_bar_M, threshold_tilde_M)
from .tracker import (PiecewiseConstantState, Trace, approximate_initial,
                      diagnostics, evolve, initialize_fronts, track)
from .oracle import GridSolution, ShockPath, compare_l1, fv_solve, shock_through_rarefaction
from .characteristics import CharField, CharGrid, CornerPath, char_field, corner_path, smooth_solve
