"""Equilibrium resolution and parametrized linearization.

linearize() produces alpha(lam, mu) = d rhs/dx and beta(lam, mu) =
d rhs/dxd at the equilibrium together with their first and second
parameter derivatives.  All partials flow through one mechanism: the
model expressions are evaluated over truncated Taylor jets, and the
equilibrium's parameter dependence enters via second-order implicit
differentiation of the residual.
"""

from dataclasses import dataclass

from . import expr as ex
from .errors import NoRootInBracket, NonConvergence, SingularImplicit
from .jets import Jet
from .model import ExplicitEquilibrium

ROOT_TOL = 1e-13
MAX_ROOT_ITER = 100
_SINGULAR_GX = 1e-12


@dataclass(frozen=True)
class LinearizationPoint:
    """Linearization data at one (lam, mu) with parameter sensitivities."""

    lam: float
    mu: float
    ybar: float
    alpha: float
    beta: float
    alpha_lam: float
    beta_lam: float
    alpha_mu: float
    beta_mu: float
    alpha_lamlam: float
    beta_lamlam: float
    residual: float = 0.0


def solve_equilibrium(m, lam, mu):
    """Resolve ybar(lam, mu); |residual| < 1e-12 on success.

    Implicit equilibria use a bracketed Newton iteration (bisection
    fallback) on the residual; the bracket must change sign, otherwise
    NoRootInBracket is raised.  A degenerate bracket is never widened.
    """
    eq = m.equilibrium
    if isinstance(eq, ExplicitEquilibrium):
        return ex.eval_real(eq.expression, 0.0, 0.0, lam, mu)
    lo = ex.eval_real(eq.bracket_lo, 0.0, 0.0, lam, mu)
    hi = ex.eval_real(eq.bracket_hi, 0.0, 0.0, lam, mu)
    if not lo < hi:
        raise NoRootInBracket("empty bracket (%g, %g) at (lam, mu) = (%g, %g)" % (lo, hi, lam, mu))

    def g(x):
        return ex.eval_real(eq.residual, x, 0.0, lam, mu)

    def gx(x):
        j = ex.eval_jet(eq.residual, x, 0.0, lam, mu)
        return j.coeff(1, 0, 0, 0)

    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0.0:
        raise NoRootInBracket(
            "residual does not change sign over (%g, %g) at (lam, mu) = (%g, %g)"
            % (lo, hi, lam, mu))

    x = 0.5 * (lo + hi)
    for _ in range(MAX_ROOT_ITER):
        gval = g(x)
        if abs(gval) < ROOT_TOL:
            return x
        if gval * glo < 0.0:
            hi = x
        else:
            lo, glo = x, gval
        d = gx(x)
        if d != 0.0:
            xn = x - gval / d
            if lo < xn < hi:
                x = xn
                continue
        x = 0.5 * (lo + hi)
    raise NonConvergence("equilibrium iteration exceeded %d steps" % MAX_ROOT_ITER)


def _param_jet(value, d_lam, d_mu, d_lamlam, d_lammu, d_mumu):
    """Jet of a scalar function of (lam, mu) given value and derivatives."""
    return Jet.from_coeffs({
        (0, 0, 0, 0): value,
        (0, 0, 1, 0): d_lam,
        (0, 0, 0, 1): d_mu,
        (0, 0, 2, 0): 0.5 * d_lamlam,
        (0, 0, 1, 1): d_lammu,
        (0, 0, 0, 2): 0.5 * d_mumu,
    })


def _equilibrium_jet(m, lam, mu, ybar):
    """ybar(lam, mu) expanded to second order around (lam, mu)."""
    eq = m.equilibrium
    if isinstance(eq, ExplicitEquilibrium):
        j = ex.eval_jet(eq.expression, 0.0, 0.0, lam, mu)
        return _param_jet(ybar,
                          j.derivative(0, 0, 1, 0), j.derivative(0, 0, 0, 1),
                          j.derivative(0, 0, 2, 0), j.derivative(0, 0, 1, 1),
                          j.derivative(0, 0, 0, 2))
    j = ex.eval_jet(eq.residual, x=Jet.variable("x", ybar), xd=0.0, lam=lam, mu=mu)
    g_x = j.derivative(1, 0, 0, 0)
    if abs(g_x) < _SINGULAR_GX:
        raise SingularImplicit("dg/dx = %g at the equilibrium (fold)" % g_x)
    g_l = j.derivative(0, 0, 1, 0)
    g_m = j.derivative(0, 0, 0, 1)
    g_xx = j.derivative(2, 0, 0, 0)
    g_xl = j.derivative(1, 0, 1, 0)
    g_xm = j.derivative(1, 0, 0, 1)
    g_ll = j.derivative(0, 0, 2, 0)
    g_lm = j.derivative(0, 0, 1, 1)
    g_mm = j.derivative(0, 0, 0, 2)
    y_l = -g_l / g_x
    y_m = -g_m / g_x
    y_ll = -(g_ll + 2 * g_xl * y_l + g_xx * y_l * y_l) / g_x
    y_lm = -(g_lm + g_xl * y_m + g_xm * y_l + g_xx * y_l * y_m) / g_x
    y_mm = -(g_mm + 2 * g_xm * y_m + g_xx * y_m * y_m) / g_x
    return _param_jet(ybar, y_l, y_m, y_ll, y_lm, y_mm)


def linearize(m, lam, mu):
    """LinearizationPoint at (lam, mu), derivatives through ybar(lam, mu).

    The rhs is jet-expanded with both state slots shifted by the
    equilibrium jet, so coefficient (1,0,a,b) directly carries the
    lam/mu-derivatives of alpha and (0,1,a,b) those of beta.
    """
    ybar = solve_equilibrium(m, lam, mu)
    yj = _equilibrium_jet(m, lam, mu, ybar)
    jet = ex.eval_jet(m.rhs,
                      x=yj + Jet.variable("x", 0.0),
                      xd=yj + Jet.variable("xd", 0.0),
                      lam=lam, mu=mu)
    residual = jet.coeff(0, 0, 0, 0)
    return LinearizationPoint(
        lam=lam, mu=mu, ybar=ybar,
        alpha=jet.derivative(1, 0, 0, 0),
        beta=jet.derivative(0, 1, 0, 0),
        alpha_lam=jet.derivative(1, 0, 1, 0),
        beta_lam=jet.derivative(0, 1, 1, 0),
        alpha_mu=jet.derivative(1, 0, 0, 1),
        beta_mu=jet.derivative(0, 1, 0, 1),
        alpha_lamlam=jet.derivative(1, 0, 2, 0),
        beta_lamlam=jet.derivative(0, 1, 2, 0),
        residual=residual,
    )
