"""Truncated multivariate Taylor arithmetic in (x, xd, lam, mu).

A Jet stores Taylor coefficients c[j,k,a,b] of a function around a base
point, where (j,k) are orders in the state variables (x, xd) with
j + k <= 3 and (a,b) are orders in the parameters (lam, mu) with
a + b <= 2.  Coefficient (j,k,a,b) equals the mixed partial derivative
divided by j!k!a!b!.  Products are truncated convolutions, so every
retained coefficient of every arithmetic result is exact up to rounding.
"""

import math

import numpy as np

STATE_ORDER = 3
PARAM_ORDER = 2
SHAPE = (STATE_ORDER + 1, STATE_ORDER + 1, PARAM_ORDER + 1, PARAM_ORDER + 1)

# retained multi-indices: j+k <= 3 and a+b <= 2
_J, _K, _A, _B = np.indices(SHAPE)
MASK = ((_J + _K) <= STATE_ORDER) & ((_A + _B) <= PARAM_ORDER)

# highest total derivative order a product chain can populate
_MAX_TOTAL = STATE_ORDER + PARAM_ORDER

_VAR_INDEX = {"x": (1, 0, 0, 0), "xd": (0, 1, 0, 0), "lam": (0, 0, 1, 0), "mu": (0, 0, 0, 1)}

_FACT = [math.factorial(n) for n in range(6)]


class Jet:
    """Immutable-by-convention truncated Taylor value."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = coeffs

    # ---------- constructors ----------

    @staticmethod
    def constant(value):
        c = np.zeros(SHAPE)
        c[0, 0, 0, 0] = value
        return Jet(c)

    @staticmethod
    def variable(name, value):
        """Seed one of x, xd, lam, mu at the given base value."""
        c = np.zeros(SHAPE)
        c[0, 0, 0, 0] = value
        c[_VAR_INDEX[name]] = 1.0
        return Jet(c)

    @staticmethod
    def from_coeffs(table):
        """Build from a {(j,k,a,b): value} mapping; invalid indices rejected."""
        c = np.zeros(SHAPE)
        for idx, v in table.items():
            j, k, a, b = idx
            if j + k > STATE_ORDER or a + b > PARAM_ORDER:
                raise ValueError("multi-index %s outside truncation" % (idx,))
            c[idx] = v
        return Jet(c)

    # ---------- accessors ----------

    @property
    def value(self):
        return self.c[0, 0, 0, 0]

    def coeff(self, j, k=0, a=0, b=0):
        return self.c[j, k, a, b]

    def derivative(self, j, k=0, a=0, b=0):
        """Mixed partial of the represented function at the base point."""
        return self.c[j, k, a, b] * _FACT[j] * _FACT[k] * _FACT[a] * _FACT[b]

    def nonconstant_part(self):
        w = self.c.copy()
        w[0, 0, 0, 0] = 0.0
        return Jet(w)

    # ---------- ring operations ----------

    def __add__(self, other):
        other = _as_jet(other)
        return Jet(self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.c - _as_jet(other).c)

    def __rsub__(self, other):
        return Jet(_as_jet(other).c - self.c)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        other = _as_jet(other)
        u, v = self.c, other.c
        # iterate over the sparser operand
        nz_u = np.argwhere(u)
        nz_v = np.argwhere(v)
        if len(nz_v) < len(nz_u):
            u, v, nz_u = v, u, nz_v
        out = np.zeros(SHAPE)
        n0, n1, n2, n3 = SHAPE
        for j, k, a, b in nz_u:
            out[j:, k:, a:, b:] += u[j, k, a, b] * v[: n0 - j, : n1 - k, : n2 - a, : n3 - b]
        out[~MASK] = 0.0
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _as_jet(other)._reciprocal()

    def __rtruediv__(self, other):
        return _as_jet(other) * self._reciprocal()

    def __pow__(self, exponent):
        if isinstance(exponent, Jet):
            if np.any(exponent.nonconstant_part().c):
                return (exponent * self.ln()).exp()
            exponent = exponent.value
        if isinstance(exponent, (int, float)) and float(exponent).is_integer():
            return self._int_pow(int(exponent))
        return (_as_jet(exponent) * self.ln()).exp()

    def _int_pow(self, n):
        if n < 0:
            return self._reciprocal()._int_pow(-n)
        result = Jet.constant(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ---------- analytic functions via univariate composition ----------

    def _compose(self, derivs):
        """Sum_{n} derivs[n]/n! * w^n with w the nonconstant part (w^6 == 0)."""
        w = self.nonconstant_part()
        acc = Jet.constant(derivs[_MAX_TOTAL] / _FACT[_MAX_TOTAL])
        for n in range(_MAX_TOTAL - 1, -1, -1):
            acc = acc * w + Jet.constant(derivs[n] / _FACT[n])
        return acc

    def _reciprocal(self):
        c = self.value
        if c == 0.0:
            raise ZeroDivisionError("division by a jet with zero constant term")
        derivs = [(-1.0) ** n * _FACT[n] / c ** (n + 1) for n in range(_MAX_TOTAL + 1)]
        return self._compose(derivs)

    def exp(self):
        e = math.exp(self.value)
        return self._compose([e] * (_MAX_TOTAL + 1))

    def ln(self):
        c = self.value
        if c <= 0.0:
            raise ValueError("ln of a jet with nonpositive constant term")
        derivs = [math.log(c)]
        derivs += [(-1.0) ** (n - 1) * _FACT[n - 1] / c ** n for n in range(1, _MAX_TOTAL + 1)]
        return self._compose(derivs)

    def sqrt(self):
        c = self.value
        if c <= 0.0:
            raise ValueError("sqrt of a jet with nonpositive constant term")
        derivs = []
        coef = 1.0
        for n in range(_MAX_TOTAL + 1):
            derivs.append(coef * c ** (0.5 - n))
            coef *= 0.5 - n
        return self._compose(derivs)

    def sin(self):
        c = self.value
        s, co = math.sin(c), math.cos(c)
        cycle = [s, co, -s, -co]
        return self._compose([cycle[n % 4] for n in range(_MAX_TOTAL + 1)])

    def cos(self):
        c = self.value
        s, co = math.sin(c), math.cos(c)
        cycle = [co, -s, -co, s]
        return self._compose([cycle[n % 4] for n in range(_MAX_TOTAL + 1)])

    # ---------- misc ----------

    def allclose(self, other, tol=1e-12):
        return np.allclose(self.c, _as_jet(other).c, rtol=0.0, atol=tol)

    def __repr__(self):
        nz = {tuple(idx): self.c[tuple(idx)] for idx in np.argwhere(self.c)}
        return "Jet(%r)" % (nz,)


def _as_jet(v):
    if isinstance(v, Jet):
        return v
    return Jet.constant(float(v))
