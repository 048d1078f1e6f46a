import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delaybif.errors import (DomainEvalError, ModelSyntaxError,
                             UnknownIdentifierError)
from delaybif.expr import (FUNCTIONS, VARIABLES, Bin, Fun, Neg, Num, Var,
                           compile_rhs, eval_real, free_vars, parse,
                           to_source)

SIS1_RHS = "-x + lam*x*(1 - x)/(1 + mu*xd)"


def test_parse_and_eval_basic():
    e = parse("x + 2*xd^2")
    assert eval_real(e, 1.0, 2.0, 0.0, 0.0) == 9.0


def test_rhs_vanishes_at_zero_state():
    e = parse("-x + lam*exp(-mu*xd)*x*(1-x)")
    for xd, lam, mu in [(0.3, 2.0, 1.5), (0.0, 5.0, 0.0), (1.0, 0.1, 7.0)]:
        assert eval_real(e, 0.0, xd, lam, mu) == 0.0


def test_syntax_error_position():
    with pytest.raises(ModelSyntaxError) as err:
        parse("x +* 2")
    assert err.value.line == 1
    assert err.value.column == 4


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse("x + q")
    with pytest.raises(UnknownIdentifierError):
        parse("foo(x)")


def test_eval_examples():
    assert eval_real(parse("x*xd"), 3.0, 4.0) == 12.0
    assert eval_real(parse("exp(0)"), 0.0) == 1.0


def test_sis1_equilibrium_residual():
    e = parse(SIS1_RHS)
    assert abs(eval_real(e, 1 / 3, 1 / 3, 2.0, 1.0)) < 1e-14


def test_unicode_operators():
    assert parse("x − 2") == parse("x - 2")
    assert parse("x × xd") == parse("x * xd")
    assert parse("x ÷ 2") == parse("x / 2")


def test_named_constants_inlined():
    assert parse("a*x", {"a": 2.5}) == parse("2.5*x")
    e = parse("c + x", {"c": -1.5})
    assert eval_real(e, 1.0) == -0.5
    # negative inlined constants still round-trip structurally
    assert parse(to_source(e)) == e


def test_power_right_associative():
    assert eval_real(parse("2^3^2"), 0.0) == 512.0
    assert eval_real(parse("-2^2"), 0.0) == -4.0
    assert eval_real(parse("(-2)^2"), 0.0) == 4.0


def test_domain_errors_carry_position():
    with pytest.raises(DomainEvalError) as err:
        eval_real(parse("x / (xd - 1)"), 1.0, 1.0)
    assert err.value.column == 3
    with pytest.raises(DomainEvalError):
        eval_real(parse("ln(x)"), -1.0)
    with pytest.raises(DomainEvalError):
        eval_real(parse("sqrt(x)"), -4.0)
    with pytest.raises(DomainEvalError):
        eval_real(parse("x^0.5"), -4.0)


def test_free_vars():
    assert free_vars(parse(SIS1_RHS)) == {"x", "xd", "lam", "mu"}
    assert free_vars(parse("exp(lam)")) == {"lam"}


_leaf = st.one_of(
    st.sampled_from([Var(v) for v in VARIABLES]),
    st.integers(-9, 9).map(lambda n: Num(float(n))),
    st.floats(min_value=-50, max_value=50, allow_nan=False).map(Num),
)
_expr_trees = st.recursive(
    _leaf,
    lambda ch: st.one_of(
        st.tuples(st.sampled_from("+-*/^"), ch, ch).map(lambda t: Bin(*t)),
        ch.map(Neg),
        st.tuples(st.sampled_from(FUNCTIONS), ch).map(lambda t: Fun(*t)),
    ),
    max_leaves=12,
)


@settings(max_examples=150, deadline=None)
@given(_expr_trees)
def test_print_parse_roundtrip(tree):
    # parse(print(parse(s))) == parse(s) for any printable source s
    first = parse(to_source(tree))
    assert parse(to_source(first)) == first


def test_roundtrip_specific():
    for src in [SIS1_RHS, "-x + lam*exp(-mu*xd)*x*(1-x)", "x^xd^2",
                "(x + xd)*(lam - mu)", "-(x + 1)", "2*-x", "x--2"]:
        e = parse(src)
        assert parse(to_source(e)) == e


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3), st.floats(0.1, 3))
def test_compiled_matches_interpreted(x, xd, lam, mu):
    for src in (SIS1_RHS, "-x + lam*exp(-mu*xd)*x*(1-x)"):
        e = parse(src)
        f = compile_rhs(e)
        assert f(x, xd, lam, mu) == pytest.approx(eval_real(e, x, xd, lam, mu),
                                                  rel=1e-15, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="xd lamu+-*/^()0123456789.eE −×÷", max_size=30))
def test_parser_raises_only_documented_errors(source):
    # arbitrary input either parses or raises the documented syntax errors
    try:
        e = parse(source)
    except ModelSyntaxError:  # UnknownIdentifierError subclasses it
        return
    assert parse(to_source(e)) == e
