"""Characteristic equation xi - alpha - beta*exp(-xi*tau): curve, roots, curvature.

Purely imaginary roots +-i*omega exist exactly on the curve
alpha + beta*cos(tau*omega) = 0, -omega = beta*sin(tau*omega),
omega = sqrt(beta^2 - alpha^2); curvature_hopf/curvature_path give the
signed curvatures of that curve and of a parameter path tangent to it.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (EmptyResult, NotOnCurve, PreconditionFailed,
                     SingularCurvature, SingularParametrization)

AXIS_TOL = 1e-8          # |Re xi| below this counts as "on the imaginary axis"
DEDUP_RADIUS = 1e-6
_ROOT_RESIDUAL = 1e-10
_SIN_SINGULAR = 1e-12
_EXP_GUARD = 300.0       # abandon Newton iterates once -Re(xi)*tau exceeds this


@dataclass(frozen=True)
class HopfPoint:
    alpha: float
    beta: float
    omega: float
    tau: float

    def residuals(self):
        """(phase residual, quadrature residual, omega identity residual)."""
        r_cos = self.alpha + self.beta * math.cos(self.tau * self.omega)
        r_sin = self.omega + self.beta * math.sin(self.tau * self.omega)
        r_omega = self.omega - math.sqrt(self.beta ** 2 - self.alpha ** 2)
        return r_cos, r_sin, r_omega


@dataclass(frozen=True)
class StabilityReport:
    rightmost_real_part: float
    imaginary_axis_roots: tuple
    verified_hypothesis1: bool
    roots: tuple


def char_eval(alpha, beta, tau, xi):
    """Delta(xi) = xi - alpha - beta*e^(-xi*tau)."""
    return xi - alpha - beta * cmath.exp(-xi * tau)


def char_deriv(alpha, beta, tau, xi):
    return 1.0 + beta * tau * cmath.exp(-xi * tau)


def hopf_point(tau, omega):
    """The Hopf-curve point parametrized by omega."""
    s = math.sin(tau * omega)
    if abs(s) < _SIN_SINGULAR:
        raise SingularParametrization("sin(tau*omega) = %g at omega = %g" % (s, omega))
    beta = -omega / s
    alpha = -beta * math.cos(tau * omega)
    return HopfPoint(alpha=alpha, beta=beta, omega=omega, tau=tau)


def hopf_curve(tau, omega_grid):
    """Trace HopfPoints over an omega grid; singular omegas raise per point."""
    return [hopf_point(tau, w) for w in omega_grid]


def find_imaginary_root(alpha, beta, tau, phase_tol=1e-8):
    """omega = sqrt(beta^2 - alpha^2) with the phase conditions checked.

    Raises PreconditionFailed when beta^2 <= alpha^2 and NotOnCurve (with
    the residual attached) when (alpha, beta) misses the curve.
    """
    if not beta ** 2 > alpha ** 2:
        raise PreconditionFailed(
            "beta^2 = %g <= alpha^2 = %g: no imaginary root" % (beta ** 2, alpha ** 2))
    omega = math.sqrt(beta ** 2 - alpha ** 2)
    r_cos = alpha + beta * math.cos(tau * omega)
    r_sin = omega + beta * math.sin(tau * omega)
    residual = abs(r_cos) + abs(r_sin)
    if residual > phase_tol:
        raise NotOnCurve("phase residual %g at omega = %g" % (residual, omega), residual)
    return omega


def rightmost_roots(alpha, beta, tau, count=12, n_real_seeds=12):
    """Scan the rightmost characteristic roots by Newton from a seed grid.

    Seeds cover real parts in [-20/tau, 5] and imaginary parts at
    multiples of pi/tau up to `count` branches.  Roots are deduplicated
    (radius 1e-6), normalized to Im >= 0, and sorted by descending real
    part.  Individual non-converging seeds are skipped.
    """
    if not tau > 0:
        raise PreconditionFailed("tau must be positive")
    roots = []
    re_seeds = np.linspace(-20.0 / tau, 5.0, n_real_seeds)
    im_seeds = [k * math.pi / tau for k in range(count)]
    for re0 in re_seeds:
        for im0 in im_seeds:
            xi = _newton_root(alpha, beta, tau, complex(re0, im0))
            if xi is None:
                continue
            if xi.imag < 0:
                xi = xi.conjugate()
            if abs(xi.imag) < AXIS_TOL / 10:
                xi = complex(xi.real, 0.0)  # merge conjugates of real roots
            if not any(abs(xi - r) < DEDUP_RADIUS for r in roots):
                roots.append(xi)
    if not roots:
        raise EmptyResult("no characteristic root converged from the seed grid")
    roots.sort(key=lambda z: (-z.real, z.imag))
    axis = sorted(r.imag for r in roots if abs(r.real) < AXIS_TOL)
    off_axis = [r for r in roots if abs(r.real) >= AXIS_TOL]
    conjugate_pairs = [w for w in axis if w > AXIS_TOL]
    verified = (len(conjugate_pairs) == 1
                and len(axis) == 1
                and all(r.real < -AXIS_TOL for r in off_axis))
    return StabilityReport(
        rightmost_real_part=roots[0].real,
        imaginary_axis_roots=tuple(axis),
        verified_hypothesis1=verified,
        roots=tuple(roots),
    )


def _newton_root(alpha, beta, tau, xi, max_iter=80, step_tol=1e-13):
    for _ in range(max_iter):
        if -xi.real * tau > _EXP_GUARD:
            return None
        f = char_eval(alpha, beta, tau, xi)
        fp = char_deriv(alpha, beta, tau, xi)
        if abs(fp) < 1e-14:
            return None
        step = f / fp
        xi -= step
        if abs(step) < step_tol:
            break
    else:
        return None
    if -xi.real * tau > _EXP_GUARD:
        return None
    if abs(char_eval(alpha, beta, tau, xi)) > _ROOT_RESIDUAL:
        return None
    return xi


def _curvature_denominator(alpha, beta, tau):
    return (beta ** 2 * tau ** 2 + 1) * (alpha ** 2 + beta ** 2) - 4 * alpha * beta ** 2 * tau


def curvature_hopf(p):
    """Signed curvature of the Hopf curve at p (increasing-omega orientation)."""
    a, b, tau = p.alpha, p.beta, p.tau
    den = _curvature_denominator(a, b, tau)
    if not den > 0.0:
        raise SingularCurvature("curvature denominator %g at (%g, %g)" % (den, a, b))
    num = b * (a ** 2 - b ** 2) * (b ** 2 * tau ** 2 + a * tau - 2) * tau
    return num / den ** 1.5


def curvature_path(lp, tau):
    """Signed curvature of lam -> (alpha, beta) at a tangency point.

    Uses only beta_lam and the second derivatives: on the tangency set
    alpha_lam is slaved to beta_lam, so the expression is well-defined
    there.  The sign convention matches the increasing-lam orientation
    times sgn(beta * beta_lam * (1 - alpha*tau)).
    """
    a, b = lp.alpha, lp.beta
    b_l = lp.beta_lam
    if b_l == 0.0:
        raise SingularCurvature("beta_lam = 0: path curvature undefined")
    den = _curvature_denominator(a, b, tau)
    if not den > 0.0:
        raise SingularCurvature("curvature denominator %g at (%g, %g)" % (den, a, b))
    num = (a * tau - 1) ** 2 * b ** 2 * (
        b * (a * tau - 1) * lp.alpha_lamlam + (a - b ** 2 * tau) * lp.beta_lamlam)
    return num / (b_l ** 2 * den ** 1.5)
