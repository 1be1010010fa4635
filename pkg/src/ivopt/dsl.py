"""Problem files: tokenizer, recursive-descent parser, compiler and printer.

    problem    := var_decl+ objective constraint*
    var_decl   := "var" IDENT "in" INTERVAL
    objective  := "min" expr | "min" "smooth:" expr "+" "nonsmooth:" expr
    constraint := "st" expr "<=" "0"
    expr       := term (("+"|"-") term)*
    term       := factor ("*" factor)*
    factor     := atom ("^" UINT)? | "-" factor
    atom       := INTERVAL | NUMBER | IDENT | "abs" "(" expr ")"
                | "max" "(" expr ("," expr)+ ")" | "(" expr ")"

Binary "-" is Moore subtraction. "#" starts a line comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .calculus import DEFAULT_CONFIG, DiffConfig, endpoint_gradient
from .interval import Interval, IntervalError, IntervalVector, format_interval, format_real, power
from .ivf import Box, Ivf, as_point
from .optimality import Iop
from .sets import sup_set
from .subdiff import Singleton, SubdiffSet, UnsupportedShape, subdiff_abs_weighted, subdiff_smooth, sum_subdiff

KEYWORDS = {"var", "in", "min", "st", "abs", "max", "smooth:", "nonsmooth:"}


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class DslError(ValueError):
    def __init__(self, message: str, span: Span | None = None):
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


class LexError(DslError):
    pass


class ParseError(DslError):
    def __init__(self, message: str, span: Span | None = None, expected: str = ""):
        self.expected = expected
        super().__init__(message, span)


class UndeclaredVariable(ParseError):
    pass


class IntervalInConstraint(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # Ident | Number | Interval | Keyword | Operator | Punct
    lexeme: str
    span: Span
    value: object = None


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_SNUM = r"[+-]?" + _NUM
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<interval>\[\s*(?P<lo>{_SNUM})\s*,\s*(?P<hi>{_SNUM})\s*\])
  | (?P<number>{_NUM})
  | (?P<kw>(?:smooth|nonsmooth):)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|[-+*^])
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            if text[pos] == "[":
                raise LexError("malformed interval literal", span)
            raise LexError(f"unexpected character {text[pos]!r}", span)
        lexeme = m.group(0)
        if m.group("interval") is not None:
            lo, hi = float(m.group("lo")), float(m.group("hi"))
            if lo > hi:
                raise LexError(f"interval {lexeme} has lower end above upper end", span)
            out.append(Token("Interval", lexeme, span, Interval(lo, hi)))
        elif m.group("number") is not None:
            out.append(Token("Number", lexeme, span, float(lexeme)))
        elif m.group("kw") is not None:
            out.append(Token("Keyword", lexeme, span))
        elif m.group("ident") is not None:
            out.append(Token("Keyword" if lexeme in KEYWORDS else "Ident", lexeme, span))
        elif m.group("op") is not None:
            out.append(Token("Operator", lexeme, span))
        elif m.group("punct") is not None:
            out.append(Token("Punct", lexeme, span))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        pos = m.end()
    return out


# AST

@dataclass(frozen=True)
class IntervalLit:
    value: Interval


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Sub:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Mul:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: int


@dataclass(frozen=True)
class Abs:
    arg: "Ast"


@dataclass(frozen=True)
class Max:
    args: tuple["Ast", ...]


@dataclass(frozen=True)
class Neg:
    arg: "Ast"


Ast = Union[IntervalLit, NumberLit, Var, Add, Sub, Mul, Pow, Abs, Max, Neg]


@dataclass(frozen=True)
class ProblemFile:
    vars: tuple[tuple[str, Interval], ...]
    objective: Ast
    split: tuple[Ast, Ast] | None = None
    constraints: tuple[Ast, ...] = ()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.vars)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.declared: set[str] = set()

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def at(self, lexeme: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind != "Ident" and tok.lexeme == lexeme

    def _end_span(self) -> Span:
        if not self.toks:
            return Span(1, 1)
        last = self.toks[-1]
        return Span(last.span.line, last.span.column + len(last.lexeme))

    def fail(self, expected: str):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {expected}, found end of input", self._end_span(), expected)
        raise ParseError(f"expected {expected}, found {tok.lexeme!r}", tok.span, expected)

    def expect(self, lexeme: str) -> Token:
        if not self.at(lexeme):
            self.fail(repr(lexeme))
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.fail(what)
        self.i += 1
        return tok

    def problem(self) -> ProblemFile:
        vars_ = []
        while self.at("var"):
            self.i += 1
            name = self.expect_kind("Ident", "a variable name")
            if name.lexeme in self.declared:
                raise ParseError(f"variable {name.lexeme!r} declared twice", name.span, "a new name")
            self.expect("in")
            box = self.expect_kind("Interval", "an interval")
            self.declared.add(name.lexeme)
            vars_.append((name.lexeme, box.value))
        if not vars_:
            if self.at("min"):
                # report the first variable use, which is necessarily undeclared
                for tok in self.toks:
                    if tok.kind == "Ident":
                        raise UndeclaredVariable(f"variable {tok.lexeme!r} used but never declared", tok.span)
            self.fail("'var'")
        self.expect("min")
        split = None
        if self.at("smooth:"):
            self.i += 1
            smooth = self.expr()
            self.expect("+")
            self.expect("nonsmooth:")
            nonsmooth = self.expr()
            split = (smooth, nonsmooth)
            objective = Add(smooth, nonsmooth)
        else:
            objective = self.expr()
        constraints = []
        while self.at("st"):
            self.i += 1
            start = self.i
            g = self.expr()
            for tok in self.toks[start:self.i]:
                if tok.kind == "Interval":
                    raise IntervalInConstraint("constraints must be real-valued", tok.span)
            self.expect("<=")
            zero = self.expect_kind("Number", "'0'")
            if zero.value != 0:
                raise ParseError("constraint right-hand side must be 0", zero.span, "'0'")
            constraints.append(g)
        if self.peek() is not None:
            self.fail("'st' or end of input")
        return ProblemFile(tuple(vars_), objective, split, tuple(constraints))

    def expr(self) -> Ast:
        node = self.term()
        while self.at("+") or self.at("-"):
            if self.at("+") and self.at("nonsmooth:", 1):
                break
            op = self.toks[self.i].lexeme
            self.i += 1
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Ast:
        node = self.factor()
        while self.at("*"):
            self.i += 1
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Ast:
        if self.at("-"):
            self.i += 1
            return Neg(self.factor())
        base = self.atom()
        if self.at("^"):
            self.i += 1
            tok = self.expect_kind("Number", "a nonnegative integer exponent")
            if not re.fullmatch(r"\d+", tok.lexeme):
                raise ParseError("exponent must be a nonnegative integer", tok.span, "an integer")
            return Pow(base, int(tok.lexeme))
        return base

    def atom(self) -> Ast:
        tok = self.peek()
        if tok is None:
            self.fail("an expression")
        if tok.kind == "Interval":
            self.i += 1
            return IntervalLit(tok.value)
        if tok.kind == "Number":
            self.i += 1
            return NumberLit(tok.value)
        if tok.kind == "Ident":
            if tok.lexeme not in self.declared:
                raise UndeclaredVariable(f"variable {tok.lexeme!r} used but never declared", tok.span)
            self.i += 1
            return Var(tok.lexeme)
        if self.at("abs"):
            self.i += 1
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Abs(arg)
        if self.at("max"):
            self.i += 1
            self.expect("(")
            args = [self.expr()]
            while self.at(","):
                self.i += 1
                args.append(self.expr())
            if len(args) < 2:
                self.fail("','")
            self.expect(")")
            return Max(tuple(args))
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        self.fail("an expression")


def parse(tokens: list[Token] | str) -> ProblemFile:
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return _Parser(list(tokens)).problem()


def parse_expr(text: str, names=("y",)) -> Ast:
    p = _Parser(tokenize(text))
    p.declared = set(names)
    node = p.expr()
    if p.peek() is not None:
        p.fail("end of expression")
    return node


# printing

_LEVEL = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 3}


def _level(node: Ast) -> int:
    return _LEVEL.get(type(node), 4)


def _wrap(node: Ast, min_level: int) -> str:
    s = pretty_expr(node)
    return s if _level(node) >= min_level else f"({s})"


def pretty_expr(node: Ast) -> str:
    if isinstance(node, IntervalLit):
        return format_interval(node.value)
    if isinstance(node, NumberLit):
        return format_real(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Add):
        return f"{_wrap(node.left, 1)} + {_wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{_wrap(node.left, 1)} - {_wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{_wrap(node.left, 2)}*{_wrap(node.right, 3)}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg, 3)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 4)}^{node.exponent}"
    if isinstance(node, Abs):
        return f"abs({pretty_expr(node.arg)})"
    if isinstance(node, Max):
        return "max(" + ", ".join(pretty_expr(a) for a in node.args) + ")"
    raise TypeError(f"not an AST node: {node!r}")


def pretty_print(pf: ProblemFile) -> str:
    lines = [f"var {n} in {format_interval(box)}" for n, box in pf.vars]
    if pf.split is not None:
        s, h = pf.split
        lines.append(f"min smooth: {pretty_expr(s)} + nonsmooth: {pretty_expr(h)}")
    else:
        lines.append(f"min {pretty_expr(pf.objective)}")
    lines += [f"st {pretty_expr(g)} <= 0" for g in pf.constraints]
    return "\n".join(lines) + "\n"


# evaluation

def eval_interval(node: Ast, env: dict[str, float]) -> Interval:
    if isinstance(node, IntervalLit):
        return node.value
    if isinstance(node, NumberLit):
        return Interval.point(node.value)
    if isinstance(node, Var):
        return Interval.point(env[node.name])
    if isinstance(node, Add):
        return eval_interval(node.left, env) + eval_interval(node.right, env)
    if isinstance(node, Sub):
        return eval_interval(node.left, env) - eval_interval(node.right, env)
    if isinstance(node, Mul):
        return eval_interval(node.left, env) * eval_interval(node.right, env)
    if isinstance(node, Neg):
        return -eval_interval(node.arg, env)
    if isinstance(node, Pow):
        base = eval_interval(node.base, env)
        if base.is_degenerate:
            # real power first, so [c,d]*y^k multiplies by one real number
            return Interval.point(base.lo ** node.exponent)
        return power(base, node.exponent)
    if isinstance(node, Abs):
        return abs(eval_interval(node.arg, env))
    if isinstance(node, Max):
        return sup_set([eval_interval(a, env) for a in node.args])
    raise TypeError(f"not an AST node: {node!r}")


def eval_real(node: Ast, env: dict[str, float]) -> float:
    if isinstance(node, NumberLit):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Add):
        return eval_real(node.left, env) + eval_real(node.right, env)
    if isinstance(node, Sub):
        return eval_real(node.left, env) - eval_real(node.right, env)
    if isinstance(node, Mul):
        return eval_real(node.left, env) * eval_real(node.right, env)
    if isinstance(node, Neg):
        return -eval_real(node.arg, env)
    if isinstance(node, Pow):
        return eval_real(node.base, env) ** node.exponent
    if isinstance(node, Abs):
        return abs(eval_real(node.arg, env))
    if isinstance(node, Max):
        return max(eval_real(a, env) for a in node.args)
    raise IntervalInConstraint("interval literal in a real-valued expression")


@dataclass(frozen=True)
class IntervalEvaluator:
    ast: Ast
    names: tuple[str, ...]

    def __call__(self, y) -> Interval:
        return eval_interval(self.ast, dict(zip(self.names, (float(v) for v in y))))


@dataclass(frozen=True)
class RealEvaluator:
    ast: Ast
    names: tuple[str, ...]

    def __call__(self, y) -> float:
        return float(eval_real(self.ast, dict(zip(self.names, (float(v) for v in y)))))


def domain_box(pf: ProblemFile) -> Box:
    return Box.from_intervals(b for _, b in pf.vars)


def compile_expr(node: Ast, pf: ProblemFile) -> Ivf:
    box = domain_box(pf)
    return Ivf.from_interval_fn(IntervalEvaluator(node, pf.names), box, box.dim)


def compile(pf: ProblemFile) -> Iop:
    """Objective as an Ivf on the declared box, constraints as real evaluators."""
    return Iop(compile_expr(pf.objective, pf), [RealEvaluator(g, pf.names) for g in pf.constraints], domain_box(pf))


def compile_split(pf: ProblemFile) -> tuple[Ivf, Ivf] | None:
    if pf.split is None:
        return None
    return compile_expr(pf.split[0], pf), compile_expr(pf.split[1], pf)


def load(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# subdifferentials of compiled expressions

def _has_vars(node: Ast) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (IntervalLit, NumberLit)):
        return False
    if isinstance(node, (Add, Sub, Mul)):
        return _has_vars(node.left) or _has_vars(node.right)
    if isinstance(node, (Neg, Abs)):
        return _has_vars(node.arg)
    if isinstance(node, Pow):
        return _has_vars(node.base)
    return any(_has_vars(a) for a in node.args)


def _additive_terms(node: Ast) -> list[Ast]:
    # Moore a - b equals a + (-b), so subtraction splits as well
    if isinstance(node, Add):
        return _additive_terms(node.left) + _additive_terms(node.right)
    if isinstance(node, Sub):
        return _additive_terms(node.left) + [Neg(t) for t in _additive_terms(node.right)]
    return [node]


def _weighted_abs(node: Ast) -> tuple[Interval, str] | None:
    """Match ``C*abs(v)``, ``abs(v)*C`` or ``abs(v)``; C a literal."""
    if isinstance(node, Abs) and isinstance(node.arg, Var):
        return Interval(1.0, 1.0), node.arg.name
    if isinstance(node, Mul):
        for c, a in ((node.left, node.right), (node.right, node.left)):
            if isinstance(a, Abs) and isinstance(a.arg, Var) and isinstance(c, (IntervalLit, NumberLit)):
                val = c.value if isinstance(c, IntervalLit) else Interval.point(c.value)
                return val, a.arg.name
    return None


def expr_subdifferential(node: Ast, pf: ProblemFile, ybar, cfg: DiffConfig = DEFAULT_CONFIG) -> SubdiffSet:
    """Subdifferential of a compiled expression at ȳ.

    Weighted absolute values ``C*abs(v)`` with ``C ⪰ 0`` sitting on their
    kink contribute a dominance box; var-free terms contribute nothing. All
    remaining terms are differentiated together numerically.
    """
    ybar = as_point(ybar)
    names = pf.names
    n = len(names)
    boxes, rest = [], []
    for t in _additive_terms(node):
        if not _has_vars(t):
            continue
        m = _weighted_abs(t)
        if m is not None and m[0].lo >= 0 and ybar[names.index(m[1])] == 0:
            boxes.append(subdiff_abs_weighted(m[0], n, names.index(m[1]), ybar))
            continue
        rest.append(t)
    sets: list[SubdiffSet] = []
    if rest:
        smooth = rest[0]
        for t in rest[1:]:
            smooth = Add(smooth, t)
        try:
            sets.append(subdiff_smooth(compile_expr(smooth, pf), ybar, cfg))
        except IntervalError as exc:
            raise UnsupportedShape(f"cannot differentiate {pretty_expr(smooth)} at ȳ: {exc}") from exc
    sets += boxes
    if not sets:
        return Singleton(IntervalVector.zeros(n))
    return sets[0] if len(sets) == 1 else sum_subdiff(*sets)


def constraint_gradients(pf: ProblemFile, ybar, cfg: DiffConfig = DEFAULT_CONFIG) -> list[np.ndarray]:
    return [endpoint_gradient(RealEvaluator(g, pf.names), ybar, cfg) for g in pf.constraints]
