"""Exception types shared across the package."""


class DelaybifError(Exception):
    """Base class for all package errors."""


class ModelSyntaxError(DelaybifError):
    """Malformed model expression. Carries 1-based line/column of the offending token."""

    def __init__(self, message, line, column):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.line = line
        self.column = column


class UnknownIdentifierError(ModelSyntaxError):
    """Identifier outside the declared variables and named constants."""


class DomainEvalError(DelaybifError):
    """Evaluation left the real domain (ln/sqrt of nonpositive, division by zero...)."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, column)
        super().__init__(message)
        self.line = line
        self.column = column


class InconsistentLinearization(DelaybifError):
    """Extracted linear coefficients disagree with the supplied linearization."""


class NoRootInBracket(DelaybifError):
    """Equilibrium residual does not change sign over the bracketing interval."""


class NonConvergence(DelaybifError):
    """Iteration exhausted without meeting tolerance."""


class SingularImplicit(DelaybifError):
    """dg/dx vanishes at the equilibrium (fold of equilibria)."""


class PreconditionFailed(DelaybifError):
    """A documented precondition does not hold for the supplied arguments."""


class SingularParametrization(DelaybifError):
    """sin(tau*omega) = 0: the Hopf-curve parametrization breaks down."""


class NotOnCurve(DelaybifError):
    """The phase conditions fail: (alpha, beta) is not on the Hopf curve."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class EmptyResult(DelaybifError):
    """No root of the characteristic equation could be located."""


class SingularCurvature(DelaybifError):
    """Curvature denominator vanishes."""


class SingularDenominator(DelaybifError):
    """A named factor in a normal-form denominator vanishes."""

    def __init__(self, factor_name, value):
        super().__init__("singular denominator: %s = %g" % (factor_name, value))
        self.factor_name = factor_name


class NonDegeneracyViolated(DelaybifError):
    """A non-degeneracy condition required by the cubic coefficient fails."""

    def __init__(self, factor_name, value):
        super().__init__("non-degeneracy violated: %s = %g" % (factor_name, value))
        self.factor_name = factor_name


class LeftDomain(DelaybifError):
    """Newton iterate left the admissible region (beta^2 > alpha^2, bracket...)."""


class DegenerateBeyondScope(DelaybifError):
    """sigma1, sigma4 or K1 vanish within tolerance: classification out of scope."""

    def __init__(self, quantity, value):
        super().__init__("%s = %g vanishes within tolerance" % (quantity, value))
        self.quantity = quantity


class BlowUp(DelaybifError):
    """Trajectory magnitude exceeded the blow-up bound."""

    def __init__(self, time, value):
        super().__init__("solution blew up at t = %g (|x| = %g)" % (time, abs(value)))
        self.time = time
        self.value = value


class Unclassifiable(DelaybifError):
    """Oscillating record window with too few mean crossings to estimate a period."""
