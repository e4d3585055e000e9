"""Polynomial expression syntax shared by `PolynomialRing.parse` and the session DSL."""

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import SessionError, SessionNameError, SessionSyntaxError, SessionTypeError
from .polyring import Polynomial, PolynomialRing

EXPR_GRAMMAR = r"""
    ?expr: sum

    ?sum: product
        | sum "+" product -> add
        | sum "-" product -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary -> neg

    ?power: atom
        | atom "^" INT -> pow

    ?atom: INT -> number
         | NAME -> name
         | "(" expr ")"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    INT: /[0-9]+/

    %import common.WS
    %ignore WS
    COMMENT: /#[^\n]*/
    %ignore COMMENT
"""


@dataclass(frozen=True)
class Number:
    value: int
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


Expr = Union[Number, Name, BinOp, Neg, Pow]


def node_position(meta) -> dict:
    if getattr(meta, "empty", True):
        return {}
    return {"line": meta.line, "column": meta.column}


@v_args(meta=True)
class ExprBuilder(Transformer):
    """Turns expression parse trees into Expr values"""

    def number(self, meta, children):
        return Number(int(children[0]), **node_position(meta))

    def name(self, meta, children):
        return Name(str(children[0]), **node_position(meta))

    def _binop(self, op, meta, children):
        return BinOp(op, children[0], children[1], **node_position(meta))

    def add(self, meta, children):
        return self._binop("+", meta, children)

    def sub(self, meta, children):
        return self._binop("-", meta, children)

    def mul(self, meta, children):
        return self._binop("*", meta, children)

    def div(self, meta, children):
        return self._binop("/", meta, children)

    def neg(self, meta, children):
        return Neg(children[0], **node_position(meta))

    def pow(self, meta, children):
        return Pow(children[0], int(children[1]), **node_position(meta))


@lru_cache(maxsize=1)
def _expression_parser() -> Lark:
    return Lark("start: expr\n" + EXPR_GRAMMAR, start="start", parser="lalr", propagate_positions=True)


def parse_expression(text: str) -> Expr:
    try:
        tree = _expression_parser().parse(text)
    except UnexpectedInput as e:
        raise SessionSyntaxError(f"cannot parse expression {text!r}", e.line, e.column) from None
    try:
        return ExprBuilder().transform(tree).children[0]
    except VisitError as e:
        if isinstance(e.orig_exc, SessionError):
            raise e.orig_exc from None
        raise


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _PRECEDENCE[expr.op]
    if isinstance(expr, Neg):
        return 3
    if isinstance(expr, Pow):
        return 4
    return 5


def format_expr(expr: Expr) -> str:
    """Render an expression with the fewest parentheses that reparse to it"""
    if isinstance(expr, Number):
        return str(expr.value)
    if isinstance(expr, Name):
        return expr.name
    if isinstance(expr, Neg):
        inner = format_expr(expr.operand)
        return f"-{inner}" if _prec(expr.operand) >= 3 else f"-({inner})"
    if isinstance(expr, Pow):
        inner = format_expr(expr.base)
        return f"{inner}^{expr.exponent}" if _prec(expr.base) >= 5 else f"({inner})^{expr.exponent}"
    p = _PRECEDENCE[expr.op]
    left = format_expr(expr.left)
    if _prec(expr.left) < p:
        left = f"({left})"
    right = format_expr(expr.right)
    if _prec(expr.right) <= p:
        right = f"({right})"
    return f"{left} {expr.op} {right}" if p == 1 else f"{left}{expr.op}{right}"


def expression_names(expr: Expr) -> list[Name]:
    if isinstance(expr, Name):
        return [expr]
    if isinstance(expr, BinOp):
        return expression_names(expr.left) + expression_names(expr.right)
    if isinstance(expr, (Neg, Pow)):
        return expression_names(expr.operand if isinstance(expr, Neg) else expr.base)
    return []


def evaluate(
    expr: Expr, ring: PolynomialRing, env: Mapping[str, Polynomial] | None = None
) -> Polynomial:
    """Evaluate an expression in `ring`; names are variables, parameters or env entries"""
    env = env or {}
    if isinstance(expr, Number):
        return ring.constant(expr.value)
    if isinstance(expr, Name):
        if expr.name in ring.variables:
            return ring.gen(expr.name)
        if expr.name in ring.field.parameters:
            return ring.constant(ring.field.parameter(expr.name))
        if expr.name in env:
            value = env[expr.name]
            if value.ring != ring:
                raise SessionTypeError(f"{expr.name} does not live in {ring}", expr.line, expr.column)
            return value
        raise SessionNameError(f"unknown name {expr.name!r}", expr.line, expr.column)
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, ring, env)
    if isinstance(expr, Pow):
        return evaluate(expr.base, ring, env) ** expr.exponent
    left = evaluate(expr.left, ring, env)
    right = evaluate(expr.right, ring, env)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if not right.is_constant() or right.is_zero():
        raise SessionTypeError("division is only defined by nonzero scalars", expr.line, expr.column)
    return left.scale(ring.field.inv(right.constant_term()))


def token_position(token: Token) -> tuple[int | None, int | None]:
    return getattr(token, "line", None), getattr(token, "column", None)
