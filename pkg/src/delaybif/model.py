"""Model definitions: a scalar DDE right-hand side plus delay and equilibrium.

The right-hand side is an expression f(x, xd, lam, mu) where x is the
current state, xd the state delayed by tau, lam the distinguished
bifurcation parameter and mu the auxiliary (unfolding) parameter.  The
equilibrium ybar(lam, mu) is given either in closed form or implicitly
as the root of a residual g(x, lam, mu) inside a bracketing interval
whose endpoints may themselves depend on (lam, mu).
"""

from dataclasses import dataclass

from . import expr as ex
from .errors import InconsistentLinearization


@dataclass(frozen=True)
class ExplicitEquilibrium:
    """ybar given as a closed-form expression in lam, mu."""

    expression: object

    def __post_init__(self):
        extra = ex.free_vars(self.expression) - {"lam", "mu"}
        if extra:
            raise ValueError("explicit equilibrium may only use lam, mu (got %s)" % sorted(extra))


@dataclass(frozen=True)
class ImplicitEquilibrium:
    """ybar solves g(x, lam, mu) = 0 with a sign change over [lo, hi]."""

    residual: object
    bracket_lo: object
    bracket_hi: object

    def __post_init__(self):
        if "x" not in ex.free_vars(self.residual):
            raise ValueError("implicit residual must depend on x")
        for e in (self.bracket_lo, self.bracket_hi):
            extra = ex.free_vars(e) - {"lam", "mu"}
            if extra:
                raise ValueError("bracket endpoints may only use lam, mu (got %s)" % sorted(extra))


@dataclass(frozen=True)
class ModelSpec:
    name: str
    rhs: object
    tau: float
    equilibrium: object

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive (got %g)" % self.tau)
        if not isinstance(self.equilibrium, (ExplicitEquilibrium, ImplicitEquilibrium)):
            raise TypeError("equilibrium must be Explicit- or ImplicitEquilibrium")


def make_model(name, rhs_source, tau, equilibrium_source=None, residual_source=None,
               bracket_sources=("1e-12", "1 - 1/lam - 1e-12"), constants=None):
    """Convenience constructor from expression sources.

    Pass equilibrium_source for a closed-form equilibrium, or
    residual_source (with optional bracket_sources) for an implicit one.
    The default bracket suits SIS-style models with lam acting as R0 > 1.
    """
    if (equilibrium_source is None) == (residual_source is None):
        raise ValueError("give exactly one of equilibrium_source, residual_source")
    rhs = ex.parse(rhs_source, constants)
    if equilibrium_source is not None:
        eq = ExplicitEquilibrium(ex.parse(equilibrium_source, constants))
    else:
        lo, hi = bracket_sources
        eq = ImplicitEquilibrium(ex.parse(residual_source, constants),
                                 ex.parse(lo, constants), ex.parse(hi, constants))
    return ModelSpec(name=name, rhs=rhs, tau=float(tau), equilibrium=eq)


def taylor_coeffs(m, at, tol=1e-10):
    """Taylor coefficients of the shifted right-hand side, linear part removed.

    Expands x -> rhs(ybar + x, ybar + xd, lam, mu) around the equilibrium
    of the linearization point `at` and returns {(j, k): coefficient} for
    2 <= j + k <= 3.  The extracted linear part must agree with at.alpha,
    at.beta to `tol`, otherwise InconsistentLinearization is raised.
    """
    jet = ex.eval_jet(m.rhs,
                      x=_shifted("x", at.ybar), xd=_shifted("xd", at.ybar),
                      lam=at.lam, mu=at.mu)
    alpha = jet.coeff(1, 0, 0, 0)
    beta = jet.coeff(0, 1, 0, 0)
    if abs(alpha - at.alpha) > tol or abs(beta - at.beta) > tol:
        raise InconsistentLinearization(
            "extracted (alpha, beta) = (%.12g, %.12g) vs point (%.12g, %.12g)"
            % (alpha, beta, at.alpha, at.beta))
    return {(j, k): jet.coeff(j, k, 0, 0)
            for j in range(4) for k in range(4) if 2 <= j + k <= 3}


def _shifted(name, base):
    from .jets import Jet

    return Jet.variable(name, 0.0) + Jet.constant(base)


def builtin_models():
    """The two delayed-behaviour SIS models, lam acting as R0 and mu as p.

    sis-inverse uses the response 1/(1 + mu*y_delayed) and has a
    closed-form endemic equilibrium; sis-exp uses exp(-mu*y_delayed) and
    defines its equilibrium implicitly.  Both default to tau = 10.
    """
    sis_inverse = make_model(
        "sis-inverse",
        "-x + lam*x*(1 - x)/(1 + mu*xd)",
        tau=10.0,
        equilibrium_source="(lam - 1)/(mu + lam)",
    )
    sis_exp = make_model(
        "sis-exp",
        "-x + lam*exp(-mu*xd)*x*(1 - x)",
        tau=10.0,
        residual_source="exp(mu*x) - lam*(1 - x)",
    )
    return [sis_inverse, sis_exp]


def get_builtin(name):
    for m in builtin_models():
        if m.name == name:
            return m
    raise KeyError("no builtin model named %r" % name)
