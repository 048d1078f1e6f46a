"""Model expression language: parsing, evaluation, compilation.

The grammar is plain infix arithmetic over the variables x, xd, lam, mu
(state, delayed state, distinguished parameter, auxiliary parameter),
numeric literals, + - * / ^ (^ right-associative), unary minus, and the
functions exp, ln, sin, cos, sqrt.  The Unicode minus sign and the x/÷
multiplication/division signs are accepted as aliases, since model files
tend to be pasted out of typeset sources.  See docs/model-grammar.md.
"""

import math
import re
from dataclasses import dataclass, field

from .errors import DomainEvalError, ModelSyntaxError, UnknownIdentifierError
from .jets import Jet

VARIABLES = ("x", "xd", "lam", "mu")
FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt")

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Fun:
    name: str
    arg: object
    pos: tuple = field(default=(1, 1), compare=False)


Expr = (Num, Var, Neg, Bin, Fun)

# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−×÷])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)

_OP_ALIAS = {"−": "-", "×": "*", "÷": "/"}


def _tokenize(source):
    tokens = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(source):
        text = m.group(0)
        kind = m.lastgroup
        if kind == "ws":
            for ch in text:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            continue
        if kind == "bad":
            raise ModelSyntaxError("unexpected character %r" % text, line, col)
        if kind == "op":
            text = _OP_ALIAS.get(text, text)
        tokens.append((kind, text, (line, col)))
        col += len(m.group(0))
    tokens.append(("end", "", (line, col)))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens, constants):
        self.tokens = tokens
        self.i = 0
        self.constants = constants

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, value, pos = self.next()
        if value != text:
            raise ModelSyntaxError("expected %r, found %r" % (text, value or "end of input"), *pos)

    def parse(self):
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ModelSyntaxError("unexpected %r after expression" % value, *pos)
        return e

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, pos = self.next()
            left = Bin(op, left, self.term(), pos)
        return left

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.next()
            left = Bin(op, left, self.unary(), pos)
        return left

    def unary(self):
        kind, value, pos = self.peek()
        if value == "-":
            self.next()
            operand = self.unary()
            if isinstance(operand, Num):
                return Num(-operand.value, pos)
            return Neg(operand, pos)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            _, _, pos = self.next()
            return Bin("^", base, self.unary(), pos)
        return base

    def atom(self):
        kind, value, pos = self.next()
        if kind == "num":
            return Num(float(value), pos)
        if kind == "ident":
            if self.peek()[1] == "(":
                if value not in FUNCTIONS:
                    raise UnknownIdentifierError("unknown function %r" % value, *pos)
                self.next()
                arg = self.expr()
                self.expect(")")
                return Fun(value, arg, pos)
            if value in VARIABLES:
                return Var(value, pos)
            if value in self.constants:
                return Num(float(self.constants[value]), pos)
            raise UnknownIdentifierError("unknown identifier %r" % value, *pos)
        if value == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ModelSyntaxError("unexpected %r" % (value or "end of input"), *pos)


def parse(source, constants=None):
    """Parse an expression; named constants are inlined as literals."""
    tokens = _tokenize(source)
    return _Parser(tokens, constants or {}).parse()


def free_vars(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_vars(e.operand)
    if isinstance(e, Bin):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Fun):
        return free_vars(e.arg)
    return set()


# ---------------------------------------------------------------------------
# pretty printer (round-trips through parse up to token positions)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def _prec(e):
    if isinstance(e, Bin):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Num) and repr(e.value).startswith("-"):
        return 3  # prints with a leading minus, binds like a negation
    return 5


def to_source(e):
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Fun):
        return "%s(%s)" % (e.name, to_source(e.arg))
    if isinstance(e, Neg):
        s = to_source(e.operand)
        if _prec(e.operand) < 3:
            s = "(%s)" % s
        return "-" + s
    if isinstance(e, Bin):
        p = _PREC[e.op]
        ls = to_source(e.left)
        rs = to_source(e.right)
        if e.op == "^":
            # right-associative: parenthesize an equal-precedence left child
            if _prec(e.left) <= p:
                ls = "(%s)" % ls
            if _prec(e.right) < p:
                rs = "(%s)" % rs
        else:
            # left-associative: parenthesize an equal-precedence right child
            if _prec(e.left) < p:
                ls = "(%s)" % ls
            if _prec(e.right) <= p:
                rs = "(%s)" % rs
        return "%s%s%s" % (ls, e.op, rs)
    raise TypeError("not an expression node: %r" % (e,))


# ---------------------------------------------------------------------------
# evaluation


def _real_ln(v, pos):
    if v <= 0.0:
        raise DomainEvalError("ln of nonpositive value %g" % v, *pos)
    return math.log(v)


def _real_sqrt(v, pos):
    if v < 0.0:
        raise DomainEvalError("sqrt of negative value %g" % v, *pos)
    return math.sqrt(v)


def _eval_real(e, env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Neg):
        return -_eval_real(e.operand, env)
    if isinstance(e, Bin):
        a = _eval_real(e.left, env)
        b = _eval_real(e.right, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                raise DomainEvalError("division by zero", *e.pos)
            return a / b
        try:
            return math.pow(a, b)
        except (ValueError, OverflowError) as exc:
            raise DomainEvalError("%g^%g: %s" % (a, b, exc), *e.pos) from None
    if isinstance(e, Fun):
        v = _eval_real(e.arg, env)
        if e.name == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                raise DomainEvalError("exp overflow at %g" % v, *e.pos) from None
        if e.name == "ln":
            return _real_ln(v, e.pos)
        if e.name == "sqrt":
            return _real_sqrt(v, e.pos)
        return getattr(math, e.name)(v)
    raise TypeError("not an expression node: %r" % (e,))


def eval_real(e, x, xd=0.0, lam=0.0, mu=0.0):
    """IEEE-double evaluation at a point."""
    return _eval_real(e, {"x": x, "xd": xd, "lam": lam, "mu": mu})


def _eval_jet(e, env):
    if isinstance(e, Num):
        return Jet.constant(e.value)
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Neg):
        return -_eval_jet(e.operand, env)
    if isinstance(e, Bin):
        a = _eval_jet(e.left, env)
        b = _eval_jet(e.right, env)
        try:
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if e.op == "/":
                return a / b
            return a ** b
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainEvalError(str(exc), *e.pos) from None
    if isinstance(e, Fun):
        v = _eval_jet(e.arg, env)
        try:
            return getattr(v, "ln" if e.name == "ln" else e.name)()
        except (ValueError, OverflowError) as exc:
            raise DomainEvalError(str(exc), *e.pos) from None
    raise TypeError("not an expression node: %r" % (e,))


def eval_jet(e, x, xd=0.0, lam=0.0, mu=0.0):
    """Taylor-expand around the base point (x, xd, lam, mu).

    Coefficient (j,k,a,b) of the result is the mixed partial derivative
    d^{j+k+a+b} e / dx^j dxd^k dlam^a dmu^b at the base, divided by
    j!k!a!b!.  Arguments may also be prepared Jet values (for expanding
    through implicit dependencies).
    """
    env = {}
    for name, v in zip(VARIABLES, (x, xd, lam, mu)):
        env[name] = v if isinstance(v, Jet) else Jet.variable(name, float(v))
    return _eval_jet(e, env)


# ---------------------------------------------------------------------------
# compilation to a plain python function (used by the integrator hot loop)


def _codegen(e):
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "(-%s)" % _codegen(e.operand)
    if isinstance(e, Bin):
        if e.op == "^":
            return "_pow(%s, %s)" % (_codegen(e.left), _codegen(e.right))
        return "(%s %s %s)" % (_codegen(e.left), e.op, _codegen(e.right))
    if isinstance(e, Fun):
        fn = "log" if e.name == "ln" else e.name
        return "%s(%s)" % (fn, _codegen(e.arg))
    raise TypeError("not an expression node: %r" % (e,))


def compile_rhs(e):
    """Compile to f(x, xd, lam, mu) -> float.

    Domain violations raise the underlying ValueError/ZeroDivisionError/
    OverflowError without source positions; callers integrating in a hot
    loop wrap them as needed.
    """
    src = "def _rhs(x, xd, lam, mu):\n    return %s\n" % _codegen(e)
    glob = {
        "exp": math.exp,
        "log": math.log,
        "sin": math.sin,
        "cos": math.cos,
        "sqrt": math.sqrt,
        "_pow": math.pow,
    }
    exec(src, glob)
    return glob["_rhs"]
