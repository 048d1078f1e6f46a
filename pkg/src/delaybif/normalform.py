"""Degenerate Hopf point location, normal-form coefficients, classification.

At a point where the path lam -> (alpha, beta) meets the Hopf curve
tangentially (r1 = r2 = 0 below), the reduced dynamics in polar form are
r' = r*(sigma4*lam^2 + sigma1*mu + K1*r^2 + h.o.t.), equivalent to the
unfolding r*(eps*(lam^2 + eta) + r^2) with eps = sgn(sigma4/K1) and
eta = sigma1*mu / (|K1| sgn sigma4).  An endemic bubble (a periodic
branch leaving and re-entering the equilibrium) occurs iff eps = +1 and
eta < 0, with lam-width 2*sqrt|sigma1*mu/sigma4|.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .equilibria import linearize
from .errors import (DegenerateBeyondScope, LeftDomain, NoRootInBracket,
                     NonConvergence, NonDegeneracyViolated,
                     PreconditionFailed, SingularDenominator,
                     SingularImplicit)
from .model import taylor_coeffs
from .spectrum import find_imaginary_root

NEWTON_TOL = 1e-9
NEWTON_MAX_ITER = 50
FD_STEP_REL = 1e-6

SIGMA_ZERO_TOL = 1e-10
K1_ZERO_TOL = 1e-8

F_KEYS = ((2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


# ---------------------------------------------------------------------------
# tangency conditions


def tangency_residuals(lp, tau):
    """(r1, r2): Hopf condition and eigenvalue-crossing-speed condition.

    r1 = alpha + beta*cos(tau*sqrt(beta^2 - alpha^2))
    r2 = beta*alpha_lam*(1 - alpha*tau) + beta_lam*(tau*beta^2 - alpha)
    """
    a, b = lp.alpha, lp.beta
    if not b ** 2 > a ** 2:
        raise PreconditionFailed("beta^2 = %g <= alpha^2 = %g" % (b ** 2, a ** 2))
    omega = math.sqrt(b ** 2 - a ** 2)
    r1 = a + b * math.cos(tau * omega)
    r2 = b * lp.alpha_lam * (1 - a * tau) + lp.beta_lam * (tau * b ** 2 - a)
    return r1, r2


def find_degenerate_point(m, guess, tau=None):
    """2D Newton on (r1, r2) over (lam, mu) from `guess`.

    The Jacobian is taken by central finite differences (relative step
    1e-6).  Returns (lam, mu, LinearizationPoint, omega, (r1, r2)) with
    residuals below 1e-9; raises NonConvergence after 50 iterations and
    LeftDomain when an iterate exits beta^2 > alpha^2 or the equilibrium
    bracket.
    """
    if tau is None:
        tau = m.tau
    x = np.array([float(guess[0]), float(guess[1])])

    def residuals(lam, mu):
        try:
            lp = linearize(m, lam, mu)
            return np.array(tangency_residuals(lp, tau)), lp
        except PreconditionFailed as exc:
            raise LeftDomain("iterate (%g, %g): %s" % (lam, mu, exc)) from exc

    for _ in range(NEWTON_MAX_ITER):
        r, lp = residuals(*x)
        if np.max(np.abs(r)) < NEWTON_TOL:
            omega = find_imaginary_root(lp.alpha, lp.beta, tau)
            return x[0], x[1], lp, omega, (r[0], r[1])
        J = np.empty((2, 2))
        for j in range(2):
            h = FD_STEP_REL * max(1.0, abs(x[j]))
            xp = x.copy(); xp[j] += h
            xm = x.copy(); xm[j] -= h
            J[:, j] = (residuals(*xp)[0] - residuals(*xm)[0]) / (2 * h)
        try:
            x = x - np.linalg.solve(J, r)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence("singular Newton Jacobian at (%g, %g)" % tuple(x)) from exc
    raise NonConvergence("degenerate-point Newton exceeded %d iterations" % NEWTON_MAX_ITER)


def _r1_on_curve(m, lam, mu, tau):
    return tangency_residuals(linearize(m, lam, mu), tau)[0]


def _bisect_r1(m, mu, lam_lo, lam_hi, tau, iters=60):
    f_lo = _r1_on_curve(m, lam_lo, mu, tau)
    for _ in range(iters):
        mid = 0.5 * (lam_lo + lam_hi)
        f_mid = _r1_on_curve(m, mid, mu, tau)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lam_lo, f_lo = mid, f_mid
        else:
            lam_hi = mid
    return 0.5 * (lam_lo + lam_hi)


def scan_degenerate_guesses(m, lam_window, mu_values, tau=None, n_lam=60):
    """Coarse curve-then-refine guesses for find_degenerate_point.

    For each mu, the Hopf condition r1 = 0 is root-bracketed along a lam
    grid and solved by bisection; the crossing-speed residual r2 is then
    evaluated on that curve.  Two consecutive crossings with opposite r2
    signs flank a tangency: they merge into the degenerate point as the
    path becomes tangent to the curve.  Returns (lam, mu) guesses at the
    crossing-pair midpoints, tightest pair first and deduplicated.
    Parameter regions where the equilibrium or the imaginary pair does
    not exist are skipped.
    """
    if tau is None:
        tau = m.tau
    lam_grid = np.linspace(lam_window[0], lam_window[1], n_lam)
    skip = (PreconditionFailed, NoRootInBracket, NonConvergence, SingularImplicit)
    candidates = []
    for mu in mu_values:
        roots = []
        prev = None
        for lam in lam_grid:
            try:
                r1 = _r1_on_curve(m, lam, mu, tau)
            except skip:
                prev = None
                continue
            if prev is not None and (r1 == 0.0 or (prev[1] < 0) != (r1 < 0)):
                try:
                    lam_root = _bisect_r1(m, mu, prev[0], lam, tau)
                    r2 = tangency_residuals(linearize(m, lam_root, mu), tau)[1]
                except skip:
                    prev = (lam, r1)
                    continue
                roots.append((lam_root, r2))
            prev = (lam, r1)
        for (lam_a, r2_a), (lam_b, r2_b) in zip(roots, roots[1:]):
            if (r2_a < 0) != (r2_b < 0):
                candidates.append((lam_b - lam_a, 0.5 * (lam_a + lam_b), float(mu)))
    candidates.sort()
    dedup_radius = (lam_window[1] - lam_window[0]) / 10.0
    guesses = []
    for _, lam, mu in candidates:
        if not any(abs(lam - g[0]) < dedup_radius for g in guesses):
            guesses.append((lam, mu))
    return guesses


# ---------------------------------------------------------------------------
# linear normal-form coefficients


def psi1_zero(alpha, beta, tau, omega):
    """Adjoint normalization constant 1/((1 - alpha*tau) + i*omega*tau)."""
    den = complex(1.0 - alpha * tau, omega * tau)
    if den == 0:
        raise SingularDenominator("(1 - alpha*tau) + i*omega*tau", 0.0)
    return 1.0 / den


def curvature_gap_invariant(lp, tau):
    """G: tangency-order invariant; nonzero iff the two curvatures differ."""
    a, b = lp.alpha, lp.beta
    return ((a * tau - 1) ** 3 * b ** 2 * lp.alpha_lamlam
            + b * (a * tau - 1) ** 2 * (a - b ** 2 * tau) * lp.beta_lamlam
            - lp.beta_lam ** 2 * tau * (a ** 2 - b ** 2) * (b ** 2 * tau ** 2 + a * tau - 2))


def _check_sigma_denominators(a, b, tau):
    if abs(b) < 1e-12:
        raise SingularDenominator("beta", b)
    if abs(a * tau - 1) < 1e-12:
        raise SingularDenominator("alpha*tau - 1", a * tau - 1)
    q = -b ** 2 * tau ** 2 + 2 * a * tau - 1
    if abs(q) < 1e-12:
        raise SingularDenominator("-beta^2*tau^2 + 2*alpha*tau - 1", q)
    return q


def sigma4_via_xi(lp, tau, omega):
    """Half the second lam-derivative of the eigenvalue branch, as a complex.

    Assembled from the operator evaluations at the imaginary eigenvalue:
    xi_lam = psi1*(alpha_lam + beta_lam*E) with E = exp(-i*omega*tau), and
    xi_lamlam = psi1*[(alpha_lamlam + beta_lamlam*E)
                      + 2*xi_lam*(-tau*beta_lam*E)
                      + xi_lam^2*(tau^2*beta*E)].
    """
    a, b = lp.alpha, lp.beta
    _check_sigma_denominators(a, b, tau)
    E = cmath.exp(-1j * omega * tau)
    psi = psi1_zero(a, b, tau, omega)
    xi_l = psi * (lp.alpha_lam + lp.beta_lam * E)
    xi_ll = psi * ((lp.alpha_lamlam + lp.beta_lamlam * E)
                   + 2 * xi_l * (-tau * lp.beta_lam * E)
                   + xi_l ** 2 * (tau ** 2 * b * E))
    return 0.5 * xi_ll


def sigma_coefficients(lp, tau, omega):
    """(sigma1 ... sigma5) at a tangency point.

    sigma1 (unfolding speed in mu) and sigma4 (quadratic tangency
    strength) use the closed forms; sigma2, sigma3, sigma5 come from the
    corresponding operator expressions.
    """
    a, b = lp.alpha, lp.beta
    q = _check_sigma_denominators(a, b, tau)
    D = (1 - a * tau) ** 2 + omega ** 2 * tau ** 2
    sigma1 = (b * lp.alpha_mu * (1 - a * tau) + lp.beta_mu * (tau * b ** 2 - a)) / (b * D)
    E = cmath.exp(-1j * omega * tau)
    psi = psi1_zero(a, b, tau, omega)
    sigma2 = (psi * (lp.alpha_mu + lp.beta_mu * E)).imag
    sigma3 = (psi * (lp.alpha_lam + lp.beta_lam * E)).imag
    G = curvature_gap_invariant(lp, tau)
    sigma4 = G / (2 * b ** 2 * (a * tau - 1) ** 2 * q)
    sigma5 = sigma4_via_xi(lp, tau, omega).imag
    return sigma1, sigma2, sigma3, sigma4, sigma5


# ---------------------------------------------------------------------------
# cubic coefficient, two independent routes
#
# Both routes weight the collected cubic resonant term by the constant
# below; it is the normalization the closed-form coefficient table embodies
# (omega enters not scaled by tau), and the two routes must stay comparable.


def _k1_weight(alpha, tau, omega):
    return 1.0 / complex(1.0 - alpha * tau, omega)


def _as_f_table(f):
    table = dict.fromkeys(F_KEYS, 0.0)
    for key, v in f.items():
        if key not in table:
            raise ValueError("unexpected Taylor key %s" % (key,))
        table[key] = float(v)
    return table


def _check_k1_preconditions(alpha, beta, omega, tau):
    s = alpha + beta
    if abs(s) < 1e-12:
        raise NonDegeneracyViolated("alpha + beta", s)
    d2 = 2j * omega - (alpha + beta * cmath.exp(-2j * omega * tau))
    if abs(d2) < 1e-12:
        raise NonDegeneracyViolated("2*i*omega - alpha - beta*exp(-2*i*omega*tau)", abs(d2))
    return s, d2


class _Poly4:
    """Polynomial in four formal variables, complex coefficients, degree <= 3."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @staticmethod
    def variable(i, coeff=1.0):
        key = tuple(1 if j == i else 0 for j in range(4))
        return _Poly4({key: complex(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return _Poly4(out)

    def __mul__(self, other):
        if not isinstance(other, _Poly4):
            return _Poly4({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if sum(k) > 3:
                    continue
                out[k] = out.get(k, 0.0) + v1 * v2
        return _Poly4(out)

    __rmul__ = __mul__

    def power(self, n):
        out = _Poly4({(0, 0, 0, 0): 1.0 + 0j})
        for _ in range(n):
            out = out * self
        return out

    def coeff(self, key):
        return self.terms.get(key, 0.0 + 0j)


def resonant_coefficients(alpha, beta, omega, tau, f):
    """B coefficients of the mode-substituted nonlinearity.

    Substitutes x(t) -> x1 + x2 + x3 + x4 and
    x(t - tau) -> x1*E + x2*conj(E) + x3 + x4*E^2 (E = exp(-i*omega*tau))
    into the quadratic/cubic Taylor polynomial of the nonlinearity and
    collects the five monomials the cubic coefficient consumes.
    """
    table = _as_f_table(f)
    E = cmath.exp(-1j * omega * tau)
    u = (_Poly4.variable(0) + _Poly4.variable(1) + _Poly4.variable(2) + _Poly4.variable(3))
    v = (_Poly4.variable(0, E) + _Poly4.variable(1, E.conjugate())
         + _Poly4.variable(2) + _Poly4.variable(3, E * E))
    poly = _Poly4()
    for (j, k), c in table.items():
        if c != 0.0:
            poly = poly + c * (u.power(j) * v.power(k))
    return {
        "B2000": poly.coeff((2, 0, 0, 0)),
        "B1100": poly.coeff((1, 1, 0, 0)),
        "B1010": poly.coeff((1, 0, 1, 0)),
        "B0101": poly.coeff((0, 1, 0, 1)),
        "B2100": poly.coeff((2, 1, 0, 0)),
    }


def lyapunov_k1_general(alpha, beta, omega, tau, f):
    """Cubic coefficient via resonant-monomial collection.

    K1 = Re[ W * (B2100 - B1100*B1010/(alpha+beta)
                  + B2000*B0101/(2i*omega - alpha - beta*e^(-2i*omega*tau))) ]
    with W the shared normalization constant.
    """
    s, d2 = _check_k1_preconditions(alpha, beta, omega, tau)
    B = resonant_coefficients(alpha, beta, omega, tau, f)
    T = B["B2100"] - B["B1100"] * B["B1010"] / s + B["B2000"] * B["B0101"] / d2
    return (_k1_weight(alpha, tau, omega) * T).real


def lyapunov_k1_closed(alpha, beta, omega, tau, f):
    """Cubic coefficient from the closed-form coefficient table.

    Implemented exactly as printed (no algebraic rearrangement) so that a
    discrepancy against lyapunov_k1_general localizes a transcription bug.
    Requires alpha + beta != 0 and 4*alpha - 5*beta != 0.
    """
    a, b, t = alpha, beta, tau
    s = a + b
    if abs(s) < 1e-12:
        raise NonDegeneracyViolated("alpha + beta", s)
    d45 = 4 * a - 5 * b
    if abs(d45) < 1e-12:
        raise NonDegeneracyViolated("4*alpha - 5*beta", d45)
    table = _as_f_table(f)
    f20, f11, f02 = table[(2, 0)], table[(1, 1)], table[(0, 2)]
    f30, f21, f12, f03 = table[(3, 0)], table[(2, 1)], table[(1, 2)], table[(0, 3)]
    den = s * d45
    total = 3 * (1 - a * t) * f30
    total += ((3 * a ** 2 * t - a ** 2 + b ** 2 - 3 * a) / b) * f21
    total -= ((2 * a ** 3 * t + a * b ** 2 * t - 2 * a ** 3 + 2 * a * b ** 2
               - 2 * a ** 2 - b ** 2) / b ** 2) * f12
    total += 3 * ((a ** 2 * t - a ** 2 + b ** 2 - a) / b) * f03
    total += 2 * ((6 * a ** 2 * t - 9 * a * b * t - 2 * a ** 2 + 2 * b ** 2
                   - 6 * a + 9 * b) / den) * f20 ** 2
    total -= ((18 * a ** 3 * t - 33 * a ** 2 * b * t + 9 * a * b ** 2 * t
               - 10 * a ** 3 + 7 * a ** 2 * b + 10 * a * b ** 2 - 7 * b ** 3
               - 18 * a ** 2 + 33 * a * b - 9 * b ** 2) / (den * b)) * f20 * f11
    total -= 2 * ((a - b) * (6 * a ** 2 * t - 9 * a * b * t - 6 * a ** 2 + a * b
                             + 7 * b ** 2 - 6 * a + 9 * b) / (den * b)) * f20 * f02
    total += ((a - b) * (4 * a ** 3 * t - 10 * a ** 2 * b * t + a * b ** 2 * t
                         - 4 * a ** 3 + 2 * a ** 2 * b + 3 * a * b ** 2 - 3 * b ** 3
                         - 4 * a ** 2 + 10 * a * b - b ** 2) / (b ** 2 * den)) * f11 ** 2
    total += ((8 * t * a ** 5 + 8 * a ** 4 * b * t - 32 * a ** 3 * b ** 2 * t
               + 19 * a ** 2 * b ** 3 * t - 9 * a * b ** 4 * t - 8 * a ** 5
               - 8 * a ** 4 * b + 36 * a ** 3 * b ** 2
               + a ** 2 * b ** 3 - 28 * a * b ** 4 + 7 * b ** 5 - 8 * a ** 4
               - 8 * a ** 3 * b + 32 * a ** 2 * b ** 2 - 19 * a * b ** 3
               + 9 * b ** 4) / (b ** 3 * den)) * f11 * f02
    total -= 2 * ((4 * a ** 4 * t + 4 * a ** 3 * b * t - 13 * a ** 2 * b ** 2 * t
                   + 2 * a * b ** 3 * t - 4 * a ** 4 - 4 * a ** 3 * b
                   + 15 * a ** 2 * b ** 2 + 4 * a * b ** 3
                   - 11 * b ** 4 - 4 * a ** 3 - 4 * a ** 2 * b + 13 * a * b ** 2
                   - 2 * b ** 3) / (b ** 2 * den)) * f02 ** 2
    return total / ((1 - a * t) ** 2 + omega ** 2)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    epsilon: int
    eta: float
    diagram_class: str
    bubble: bool
    bubble_width: float


def _check_classifiable(sigma1, sigma4, K1):
    for name, value, tol in (("sigma1", sigma1, SIGMA_ZERO_TOL),
                             ("sigma4", sigma4, SIGMA_ZERO_TOL),
                             ("K1", K1, K1_ZERO_TOL)):
        if abs(value) < tol:
            raise DegenerateBeyondScope(name, value)


def classify(sigma1, sigma4, K1, mu_offset):
    """Unfolding diagram class at an auxiliary-parameter offset mu_offset.

    eps = sgn(sigma4/K1); eta = sigma1*mu_offset / (|K1| sgn sigma4).
    A bubble (Hopf pair bounding a periodic branch) exists iff eps = +1
    and eta < 0, with predicted lam-width 2*sqrt|sigma1*mu_offset/sigma4|.
    """
    _check_classifiable(sigma1, sigma4, K1)
    eps = 1 if sigma4 / K1 > 0 else -1
    eta = sigma1 * mu_offset / (abs(K1) * math.copysign(1.0, sigma4))
    if eta < 0:
        eta_tag = "eta<0"
    elif eta > 0:
        eta_tag = "eta>0"
    else:
        eta_tag = "eta=0"
    bubble = eps == 1 and eta < 0
    width = 2 * math.sqrt(abs(sigma1 * mu_offset / sigma4)) if bubble else 0.0
    return Classification(
        epsilon=eps, eta=eta,
        diagram_class="eps=%+d,%s" % (eps, eta_tag),
        bubble=bubble, bubble_width=width)


# ---------------------------------------------------------------------------
# full report


@dataclass(frozen=True)
class DegeneracyReport:
    model: str
    tau: float
    lam_star: float
    mu_star: float
    point: object
    omega_star: float
    psi10: complex
    sigma: tuple
    G_value: float
    K1: float
    K1_closed: float
    K1_general: float
    epsilon: object
    eta_slope: object
    bubble_coeff: object
    diagram_class: object
    r1: float
    r2: float
    flag: object = None


def analyze(m, guess, tau=None):
    """Locate the degenerate Hopf point from `guess` and report everything.

    eta_slope is d(eta)/d(mu_offset); bubble_coeff c makes the predicted
    bubble width c*sqrt(mu_offset) on the side where eta < 0.  When
    sigma1, sigma4 or K1 vanish within tolerance the report is flagged
    and the classification fields are left unset.
    """
    if tau is None:
        tau = m.tau
    lam, mu, lp, omega, (r1, r2) = find_degenerate_point(m, guess, tau)
    sigma = sigma_coefficients(lp, tau, omega)
    f = taylor_coeffs(m, lp)
    k1_closed = lyapunov_k1_closed(lp.alpha, lp.beta, omega, tau, f)
    k1_general = lyapunov_k1_general(lp.alpha, lp.beta, omega, tau, f)
    sigma1, sigma4 = sigma[0], sigma[3]
    try:
        _check_classifiable(sigma1, sigma4, k1_closed)
        flag = None
    except DegenerateBeyondScope as exc:
        flag = "degenerate-beyond-scope: %s" % exc.quantity
    if flag is None:
        eps = 1 if sigma4 / k1_closed > 0 else -1
        eta_slope = sigma1 / (abs(k1_closed) * math.copysign(1.0, sigma4))
        bubble_coeff = 2 * math.sqrt(abs(sigma1 / sigma4))
        diagram_class = classify(sigma1, sigma4, k1_closed, 1.0).diagram_class
    else:
        eps = eta_slope = bubble_coeff = diagram_class = None
    return DegeneracyReport(
        model=m.name, tau=tau, lam_star=lam, mu_star=mu, point=lp,
        omega_star=omega, psi10=psi1_zero(lp.alpha, lp.beta, tau, omega),
        sigma=sigma, G_value=curvature_gap_invariant(lp, tau),
        K1=k1_closed, K1_closed=k1_closed, K1_general=k1_general,
        epsilon=eps, eta_slope=eta_slope, bubble_coeff=bubble_coeff,
        diagram_class=diagram_class, r1=r1, r2=r2, flag=flag)
