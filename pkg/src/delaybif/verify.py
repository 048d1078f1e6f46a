"""Cross-check suite: every quantity with two independent routes gets compared.

The checks exist because the intermediate center-manifold objects are not
desk-verifiable; instead each derived coefficient is computed two ways
(closed form vs operator assembly, implicit-theorem derivatives vs finite
differences, curvature gap vs the tangency invariant) and the routes must
agree to tight tolerances over randomized valid inputs.
"""

import math
from dataclasses import dataclass

import numpy as np

from .equilibria import LinearizationPoint, linearize
from .model import builtin_models
from .normalform import (curvature_gap_invariant, lyapunov_k1_closed,
                         lyapunov_k1_general, sigma4_via_xi,
                         sigma_coefficients)
from .spectrum import (_curvature_denominator, curvature_hopf, curvature_path,
                       hopf_point)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tol: float
    passed: bool
    detail: str = ""


def _random_curve_point(rng, tau):
    """A Hopf-curve point with the cubic-coefficient denominators alive."""
    while True:
        omega = rng.uniform(0.25, 0.93 * math.pi) / tau
        p = hopf_point(tau, omega)
        if abs(p.alpha + p.beta) > 0.05 and abs(4 * p.alpha - 5 * p.beta) > 0.05:
            return p


def _random_tangency(rng, tau):
    """Synthetic linearization data satisfying both tangency conditions."""
    p = _random_curve_point(rng, tau)
    a, b = p.alpha, p.beta
    if abs(tau * b * b - a) < 1e-6 or abs(b * (1 - a * tau)) < 1e-6:
        return _random_tangency(rng, tau)
    b_l = rng.uniform(0.2, 1.5) * rng.choice([-1.0, 1.0])
    a_l = -b_l * (tau * b * b - a) / (b * (1 - a * tau))
    return LinearizationPoint(
        lam=0.0, mu=0.0, ybar=0.0, alpha=a, beta=b,
        alpha_lam=a_l, beta_lam=b_l,
        alpha_mu=rng.uniform(-1, 1), beta_mu=rng.uniform(-1, 1),
        alpha_lamlam=rng.uniform(-2, 2), beta_lamlam=rng.uniform(-2, 2)), p


def check_k1_two_paths(n=100, seed=0, tol=1e-8, mutate_closed=None):
    """Closed-form vs resonant-collection cubic coefficient on random inputs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        tau = rng.uniform(0.5, 12.0)
        p = _random_curve_point(rng, tau)
        f = {key: rng.uniform(-2, 2) for key in
             ((2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))}
        f_closed = dict(f) if mutate_closed is None else mutate_closed(dict(f))
        k_closed = lyapunov_k1_closed(p.alpha, p.beta, p.omega, tau, f_closed)
        k_general = lyapunov_k1_general(p.alpha, p.beta, p.omega, tau, f)
        worst = max(worst, abs(k_closed - k_general) / max(1.0, abs(k_general)))
    return CheckResult("k1-two-paths", worst, tol, worst < tol,
                       "%d random curve points" % n)


def check_sigma4_two_paths(n=100, seed=1, tol=1e-10):
    """Tangency-invariant quotient vs half the eigenvalue curvature."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        tau = rng.uniform(0.5, 12.0)
        lp, p = _random_tangency(rng, tau)
        sig = sigma_coefficients(lp, tau, p.omega)
        via_xi = sigma4_via_xi(lp, tau, p.omega).real
        worst = max(worst, abs(sig[3] - via_xi) / max(1.0, abs(via_xi)))
    return CheckResult("sigma4-two-paths", worst, tol, worst < tol,
                       "%d random tangency paths" % n)


_GRIDS = {
    "sis-inverse": (np.linspace(1.5, 2.2, 5), np.linspace(2.0, 3.2, 5)),
    "sis-exp": (np.linspace(1.8, 2.5, 5), np.linspace(1.2, 2.0, 5)),
}


def _fd1(f, x, h):
    d = lambda hh: (f(x + hh) - f(x - hh)) / (2 * hh)
    return (4 * d(h / 2) - d(h)) / 3


def _fd2(f, x, h):
    d = lambda hh: (f(x + hh) - 2 * f(x) + f(x - hh)) / hh ** 2
    return (4 * d(h / 2) - d(h)) / 3


def check_implicit_derivatives(tol=1e-5, h=1e-4):
    """Jet/implicit-theorem parameter derivatives vs Richardson differences."""
    worst = 0.0
    for m in builtin_models():
        lam_grid, mu_grid = _GRIDS[m.name]
        for lam in lam_grid:
            for mu in mu_grid:
                lp = linearize(m, lam, mu)
                alpha = lambda l, mm=mu: linearize(m, l, mm).alpha
                beta = lambda l, mm=mu: linearize(m, l, mm).beta
                alpha_mu = lambda mm, l=lam: linearize(m, l, mm).alpha
                beta_mu = lambda mm, l=lam: linearize(m, l, mm).beta
                pairs = (
                    (lp.alpha_lam, _fd1(alpha, lam, h)),
                    (lp.beta_lam, _fd1(beta, lam, h)),
                    (lp.alpha_mu, _fd1(alpha_mu, mu, h)),
                    (lp.beta_mu, _fd1(beta_mu, mu, h)),
                    (lp.alpha_lamlam, _fd2(alpha, lam, h)),
                    (lp.beta_lamlam, _fd2(beta, lam, h)),
                )
                for exact, fd in pairs:
                    worst = max(worst, abs(exact - fd) / max(1.0, abs(exact)))
    return CheckResult("implicit-derivatives-vs-fd", worst, tol, worst < tol,
                       "both builtins, 5x5 grids")


def check_curvature_gap(n=60, seed=2, tol=1e-8):
    """G equals beta_lam^2 * (kappa2 - kappa1) * Den^(3/2) / beta."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        tau = rng.uniform(0.5, 12.0)
        lp, p = _random_tangency(rng, tau)
        k1 = curvature_hopf(p)
        k2 = curvature_path(lp, tau)
        den = _curvature_denominator(lp.alpha, lp.beta, tau)
        gap_form = lp.beta_lam ** 2 * (k2 - k1) * den ** 1.5 / lp.beta
        g = curvature_gap_invariant(lp, tau)
        worst = max(worst, abs(g - gap_form) / max(1.0, abs(g)))
    return CheckResult("curvature-gap-vs-G", worst, tol, worst < tol,
                       "%d random tangency paths" % n)


def run_all(tol_override=None):
    checks = (
        (check_k1_two_paths, 1e-8),
        (check_sigma4_two_paths, 1e-10),
        (check_implicit_derivatives, 1e-5),
        (check_curvature_gap, 1e-8),
    )
    results = []
    for fn, default_tol in checks:
        tol = default_tol if tol_override is None else tol_override
        results.append(fn(tol=tol))
    return results
