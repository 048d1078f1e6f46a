"""Degenerate Hopf bifurcation analysis for scalar delay differential equations.

Detects parameter points where an eigenvalue pair of x'(t) =
alpha(lam, mu)*x(t) + beta(lam, mu)*x(t - tau) + F(...) touches the
imaginary axis without crossing, computes the unfolding normal-form
coefficients, classifies the local bifurcation diagrams, and verifies
the predictions (including endemic bubbles in delayed-response SIS
models) by direct simulation.
"""

from .equilibria import LinearizationPoint, linearize, solve_equilibrium
from .errors import *  # noqa: F401,F403
from .expr import eval_jet, eval_real, parse, to_source
from .jets import Jet
from .model import (ExplicitEquilibrium, ImplicitEquilibrium, ModelSpec,
                    builtin_models, get_builtin, make_model, taylor_coeffs)
from .normalform import (Classification, DegeneracyReport, analyze, classify,
                         curvature_gap_invariant, find_degenerate_point,
                         lyapunov_k1_closed, lyapunov_k1_general, psi1_zero,
                         resonant_coefficients, scan_degenerate_guesses,
                         sigma4_via_xi, sigma_coefficients,
                         tangency_residuals)
from .simulate import (ConstantHistory, EquilibriumPerturbation, SimConfig,
                       SweepRecord, band_summary, classify_attractor,
                       integrate, run_point, sweep)
from .spectrum import (HopfPoint, StabilityReport, char_eval, curvature_hopf,
                       curvature_path, find_imaginary_root, hopf_curve,
                       hopf_point, rightmost_roots)

__version__ = "0.1.0"
