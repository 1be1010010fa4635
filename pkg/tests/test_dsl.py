import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ivopt import dsl
from ivopt.dsl import (
    Abs,
    Add,
    IntervalInConstraint,
    IntervalLit,
    LexError,
    Max,
    Mul,
    Neg,
    NumberLit,
    ParseError,
    Pow,
    ProblemFile,
    Sub,
    UndeclaredVariable,
    Var,
    parse,
    pretty_print,
    tokenize,
)
from ivopt.interval import Interval
from ivopt.problems import ALL, FJ_COUNTEREXAMPLE

I = Interval


def kinds(text):
    return [(t.kind, t.lexeme) for t in tokenize(text)]


def test_tokenize_examples():
    assert kinds("[1,2]*y^2") == [("Interval", "[1,2]"), ("Operator", "*"), ("Ident", "y"), ("Operator", "^"), ("Number", "2")]
    assert kinds("abs(y1)") == [("Keyword", "abs"), ("Punct", "("), ("Ident", "y1"), ("Punct", ")")]
    assert kinds("[ -1.5 , 2e3 ]")[0] == ("Interval", "[ -1.5 , 2e3 ]")
    with pytest.raises(LexError) as e:
        tokenize("[2,1]")
    assert e.value.span.column == 1


def test_spans_and_comments():
    toks = tokenize("# header\nvar y in [0,1]  # tail\nmin y")
    assert [t.lexeme for t in toks] == ["var", "y", "in", "[0,1]", "min", "y"]
    assert toks[0].span == dsl.Span(2, 1) and toks[4].span == dsl.Span(3, 1)
    spans = [(t.span.line, t.span.column) for t in toks]
    assert spans == sorted(spans)


@pytest.mark.parametrize("text, col", [("var y in [0,1]\nmin y $ 2", 7), ("var y in [0,1]\nmin [1,2", 5)])
def test_lex_error_span_inside_lexeme(text, col):
    with pytest.raises(LexError) as e:
        tokenize(text)
    assert e.value.span == dsl.Span(2, col)


def test_parse_fj_counterexample():
    pf = parse(FJ_COUNTEREXAMPLE)
    assert pf.names == ("y",) and len(pf.constraints) == 1
    obj = pf.objective
    # three terms, left associated
    assert isinstance(obj, Add) and isinstance(obj.left, Add) and isinstance(obj.right, IntervalLit)


def test_parse_errors():
    with pytest.raises(UndeclaredVariable):
        parse("min [1,2]*y^2")
    with pytest.raises(IntervalInConstraint) as e:
        parse("var y in [0,1]\nmin y\nst [1,1]*y <= 0")
    assert e.value.span == dsl.Span(3, 4)
    with pytest.raises(UndeclaredVariable):
        parse("var y in [0,1]\nmin y + x")
    with pytest.raises(ParseError) as e:
        parse("var y in [0,1]\nmin y +")
    assert "expression" in e.value.expected
    with pytest.raises(ParseError):
        parse("var y in [0,1]\nmin y^-1")
    with pytest.raises(ParseError):
        parse("var y in [0,1]\nmin max(y)")
    with pytest.raises(ParseError):
        parse("var y in [0,1]\nmin y\nst y <= 1")


def test_error_spans_point_into_lexeme():
    text = "var y in [0,1]\nmin y * * y"
    with pytest.raises(ParseError) as e:
        parse(text)
    line = text.splitlines()[e.value.span.line - 1]
    assert line[e.value.span.column - 1] == "*"


def test_precedence():
    e = dsl.parse_expr("-y^2*[1,2] - y + 3")
    assert e == Add(Sub(Mul(Neg(Pow(Var("y"), 2)), IntervalLit(I(1, 2))), Var("y")), NumberLit(3.0))


def test_compile_examples():
    p = dsl.compile(parse(FJ_COUNTEREXAMPLE))
    assert p.objective(-1.0) == I(1, 7)
    assert p.constraint_values([0.0]) == [-1.0]
    pf = parse("var y in [-2,2]\nmin [2,4]*y^3 + [1,1]")
    assert dsl.compile(pf).objective(-1.0) == I(-3, -1)


def test_fj_counterexample_matches_closed_form_exactly():
    p = dsl.compile(parse(FJ_COUNTEREXAMPLE))
    for y in np.linspace(-2, 0, 201):
        t = p.objective(y)
        assert t.lo == y**2 + 2 * y + 2
        assert t.hi == 2 * y**2 + 5


def test_split_objective():
    pf = parse(ALL["composite_cubic"])
    assert pf.split is not None and pf.objective == Add(*pf.split)
    t, h = dsl.compile_split(pf)
    assert (t(-1.0) + h(-1.0)) == I(0, 2)


def test_pretty_print_examples():
    pf = parse(FJ_COUNTEREXAMPLE)
    assert parse(pretty_print(pf)) == pf
    assert dsl.pretty_expr(Max((Var("y"), NumberLit(1.0)))) == "max(y, 1)"
    assert dsl.pretty_expr(IntervalLit(I(0.1, 2.0))) == "[0.1,2]"
    assert dsl.pretty_expr(Pow(Pow(Var("y"), 2), 3)) == "(y^2)^3"


def test_subdifferential_of_expressions():
    pf = parse(ALL["composite_convex"])
    h = dsl.expr_subdifferential(pf.split[1], pf, [0.0])
    assert h == dsl.subdiff_abs_weighted(I(1, 2), 1, 0, [0.0])
    s = dsl.expr_subdifferential(pf.objective, pf, [0.0])
    assert s.dim == 1
    const = parse(ALL["composite_cubic"])
    assert dsl.expr_subdifferential(const.split[1], const, [0.0]).value.is_zero()


# random problem files

NAMES = ["y", "y1", "x2", "z"]
finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
nonneg = st.floats(0, 1e6, allow_nan=False, allow_infinity=False)


def interval_lits():
    return st.tuples(finite, finite).map(lambda p: IntervalLit(I(min(p), max(p))))


def exprs(names, intervals=True):
    leaves = [nonneg.map(NumberLit), st.sampled_from(names).map(Var)]
    if intervals:
        leaves.append(interval_lits())

    def grow(children):
        return st.one_of(
            st.tuples(children, children).map(lambda t: Add(*t)),
            st.tuples(children, children).map(lambda t: Sub(*t)),
            st.tuples(children, children).map(lambda t: Mul(*t)),
            st.tuples(children, st.integers(0, 5)).map(lambda t: Pow(*t)),
            children.map(Abs),
            children.map(Neg),
            st.lists(children, min_size=2, max_size=3).map(lambda a: Max(tuple(a))),
        )

    return st.recursive(st.one_of(*leaves), grow, max_leaves=8)


@st.composite
def problem_files(draw):
    k = draw(st.integers(1, 3))
    names = NAMES[:k]
    boxes = [draw(interval_lits()).value for _ in names]
    if draw(st.booleans()):
        split = (draw(exprs(names)), draw(exprs(names)))
        obj = Add(*split)
    else:
        split, obj = None, draw(exprs(names))
    cons = tuple(draw(st.lists(exprs(names, intervals=False), max_size=2)))
    return ProblemFile(tuple(zip(names, boxes)), obj, split, cons)


@given(problem_files())
@settings(max_examples=100)
def test_round_trip(pf):
    text = pretty_print(pf)
    assert parse(text) == pf
    assert pretty_print(parse(text)) == text
