import pytest
from hypothesis import given, settings

from lmcalc.syntax import (
    Mode, ParseError, parse_context, parse_equations, parse_term, parse_type, print_context,
    print_equations, print_term, print_type,
)
from lmcalc.terms import App, Lam, Mu, Name, Pair, Proj, Sort, Var, alpha_eq
from lmcalc.types import Arrow, Atom, BOT

from strategies import raw_terms, typed_items, types

A = Atom("A")


def test_parse_examples():
    assert parse_term(r"\x:A. x", Sort.LAMBDA, Mode.CHURCH) == Lam("x", A, Var("x"))
    assert parse_term("(<x, y> p1)", Sort.FULL) == App(Pair(Var("x"), Var("y")), Proj(1))


def test_sort_violation():
    with pytest.raises(ParseError):
        parse_term("(mu a. [a] x  y)", Sort.LAMBDA)
    with pytest.raises(ParseError):
        parse_term("(x p1)", Sort.LAMBDA_MU)


def test_print_examples():
    assert print_term(Lam("x", A, Var("x"))) == r"\x:A. x"
    assert print_term(App(Pair(Var("x"), Var("y")), Proj(1))) == "(<x, y> p1)"
    assert print_term(Mu("a", A, Name("a", Var("x")))) == "mu a:~A. [a] x"


def test_church_mode_needs_annotations():
    with pytest.raises(ParseError):
        parse_term(r"\x. x", Sort.LAMBDA, Mode.CHURCH)


def test_constants_need_explicit_token():
    t = parse_term("(c[X] x)", Sort.LAMBDA)
    assert print_term(t) == "(c[X] x)"
    with pytest.raises(ParseError):
        parse_term("(c[X] x)", Sort.FULL)


@pytest.mark.parametrize("text", [
    "(x", r"\x x", "mu . x", "<x y>", "(x [y. y])", "x y", "[a x", "",
    "mu phi. [phi] x", "(x [y. y | z. z]", "w1",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_term("(x ))")
    assert "column 5" in str(exc.value)


def test_context_and_equations_round_trip():
    ctx = parse_context("x : A -> B\nmu a : ~(A /\\ B)  # comment\ny : bot")
    assert ctx.term_map == {"x": Arrow(A, Atom("B")), "y": BOT}
    assert parse_context(print_context(ctx)) == ctx
    eqs = parse_equations("X = A /\\ (X -> B)\nY = X \\/ Y")
    assert parse_equations(print_equations(eqs)) == eqs
    with pytest.raises(ParseError):
        parse_context("mu a : A")


@settings(max_examples=300, deadline=None)
@given(raw_terms())
def test_term_round_trip(t):
    assert alpha_eq(parse_term(print_term(t)), t)


@settings(max_examples=100, deadline=None)
@given(typed_items())
def test_annotated_round_trip(item):
    t = item.term
    assert parse_term(print_term(t), Sort.FULL, Mode.CHURCH) == t


@settings(max_examples=300, deadline=None)
@given(types())
def test_type_round_trip(a):
    assert parse_type(print_type(a)) == a
