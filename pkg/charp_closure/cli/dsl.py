"""Session language: declarations of rings, ideals and elements followed by check directives.

    ring R = quotient(poly(F(2), [x, y, z]), [x^2 + y^3 + z^5]);
    ideal q = ideal(y, z);
    check frobenius_closed(q) expect OUT;

Parsing is total: a session is parsed and type-checked completely before anything runs.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from lark import Lark, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from charp_closure.src.config import EngineConfig
from charp_closure.src.errors import SessionError, SessionNameError, SessionSyntaxError, SessionTypeError
from charp_closure.src.expressions import (
    EXPR_GRAMMAR,
    BinOp,
    Expr,
    ExprBuilder,
    Name,
    Number,
    Pow,
    expression_names,
    format_expr,
    node_position,
)
from charp_closure.src.scalar import is_prime
from charp_closure.src.verdicts import Status

logger = logging.getLogger(__name__)

SESSION_GRAMMAR = r"""
    start: stmt*

    ?stmt: ring_decl
         | ideal_decl
         | element_decl
         | set_stmt
         | check_stmt

    ring_decl: "ring" NAME "=" ring_expr ";"
             | "subring" NAME "=" ring_expr ";" -> subring_decl

    ?ring_expr: "poly" "(" field "," name_list ")" -> poly_ring
              | "quotient" "(" ring_expr "," "[" expr_list "]" ")" -> quotient_ring
              | "veronese" "(" ring_expr "," INT ")" -> veronese_ring
              | NAME -> ring_ref

    field: "F" "(" INT ("," name_list)? ")"
    name_list: "[" (NAME ("," NAME)*)? "]"
    expr_list: (expr ("," expr)*)?

    ideal_decl: "ideal" NAME "=" ideal_expr ("in" NAME)? ";"

    ?ideal_expr: ideal_term
               | ideal_expr "+" ideal_term -> ideal_sum
    ?ideal_term: ideal_factor
               | ideal_term "*" ideal_factor -> ideal_product
    ?ideal_factor: ideal_atom
                 | ideal_atom "^" "[" INT "]" -> ideal_bracket
                 | ideal_atom "^" INT -> ideal_power
    ?ideal_atom: ideal_literal
               | NAME -> ideal_ref
               | "(" ideal_expr ")"
    ?ideal_literal: "ideal" "(" expr_list ")" -> ideal_gens
                  | "maximal" "(" NAME? ")" -> ideal_maximal

    element_decl: "element" NAME "=" expr ("in" NAME)? ";"

    set_stmt: "set" NAME "=" (INT | NAME) ";"

    check_stmt: "check" NAME "(" (arg ("," arg)*)? ")" option* ";"
    ?arg: expr
        | ideal_literal
    ?option: "using" NAME "=" expr -> opt_using
           | "using" NAME "=" expr "untested" -> opt_using_untested
           | "using" NAME "=" "auto" -> opt_using_auto
           | "emax" INT -> opt_emax
           | "window" INT -> opt_window
           | "probes" "[" expr_list "]" -> opt_probes
           | "expect" NAME -> opt_expect
           | "--expect" NAME -> opt_expect
""" + EXPR_GRAMMAR


# --- syntax tree -------------------------------------------------------------------------


def _position():
    return field(default=None, compare=False)


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int
    parameters: tuple[str, ...] = ()


@dataclass(frozen=True)
class PolyRingSpec:
    field: FieldSpec
    variables: tuple[str, ...]


@dataclass(frozen=True)
class QuotientSpec:
    base: "RingSpec"
    relations: tuple[Expr, ...]


@dataclass(frozen=True)
class VeroneseSpec:
    base: "RingSpec"
    degree: int


@dataclass(frozen=True)
class RingRef:
    name: str
    line: int | None = _position()
    column: int | None = _position()


RingSpec = Union[PolyRingSpec, QuotientSpec, VeroneseSpec, RingRef]


@dataclass(frozen=True)
class IdealGens:
    generators: tuple[Expr, ...]


@dataclass(frozen=True)
class IdealMaximal:
    ring: str | None = None
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class IdealRef:
    name: str
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class IdealSum:
    left: "IdealExpr"
    right: "IdealExpr"


@dataclass(frozen=True)
class IdealProduct:
    left: "IdealExpr"
    right: "IdealExpr"


@dataclass(frozen=True)
class IdealBracket:
    base: "IdealExpr"
    q: int
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class IdealPower:
    base: "IdealExpr"
    exponent: int


IdealExpr = Union[IdealGens, IdealMaximal, IdealRef, IdealSum, IdealProduct, IdealBracket, IdealPower]
CheckArg = Union[Expr, IdealGens, IdealMaximal]


@dataclass(frozen=True)
class RingDecl:
    name: str
    spec: RingSpec
    subring: bool = False
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class IdealDecl:
    name: str
    expr: IdealExpr
    ring: str | None = None
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class ElementDecl:
    name: str
    expr: Expr
    ring: str | None = None
    line: int | None = _position()
    column: int | None = _position()


@dataclass(frozen=True)
class SetStmt:
    key: str
    value: int | str
    line: int | None = _position()
    column: int | None = _position()


AUTO = "auto"


@dataclass(frozen=True)
class CheckOptions:
    multiplier: Expr | str | None = None
    multiplier_name: str = "c"
    multiplier_tested: bool = True
    emax: int | None = None
    window: int | None = None
    probes: tuple[Expr, ...] = ()
    expect: Status | None = None


@dataclass(frozen=True)
class CheckStmt:
    name: str
    args: tuple[CheckArg, ...] = ()
    options: CheckOptions = CheckOptions()
    line: int | None = _position()
    column: int | None = _position()


Statement = Union[RingDecl, IdealDecl, ElementDecl, SetStmt, CheckStmt]


@dataclass(frozen=True)
class Session:
    statements: tuple[Statement, ...] = ()

    @property
    def checks(self) -> list[CheckStmt]:
        return [s for s in self.statements if isinstance(s, CheckStmt)]

    @property
    def settings(self) -> dict[str, int | str]:
        return {s.key: s.value for s in self.statements if isinstance(s, SetStmt)}


# --- check signatures ---------------------------------------------------------------------

# argument kinds; a trailing "?" marks an optional argument
CHECKS: dict[str, tuple[str, ...]] = {
    "member": ("element", "ideal"),
    "element_equal": ("element", "element"),
    "ideal_equal": ("ideal", "ideal"),
    "parameters": ("ideal",),
    "regular_sequence": ("ideal",),
    "filter_regular": ("ideal",),
    "dimension": ("ring", "int?"),
    "frobenius_member": ("element", "ideal"),
    "frobenius_closure": ("ideal", "ideal?"),
    "frobenius_closed": ("ideal",),
    "bracket_commute": ("ideal",),
    "tight_member": ("element", "ideal"),
    "special_part": ("element", "ideal"),
    "product_identity": ("ideal", "ideal"),
    "briancon_skoda": ("ideal",),
    "colon_socle": ("ideal", "ideal?"),
    "power_identity": ("ideal",),
    "decomposition": ("ideal", "int?"),
    "rationality_conditions": ("ideal", "ideal"),
}


# --- parse tree -> syntax tree --------------------------------------------------------------


@v_args(meta=True)
class SessionBuilder(ExprBuilder):
    def start(self, meta, children):
        return Session(tuple(children))

    def field(self, meta, children):
        p = int(children[0])
        if not is_prime(p):
            raise SessionSyntaxError(f"characteristic must be prime, got {p}", children[0].line, children[0].column)
        parameters = children[1] if len(children) > 1 else ()
        return FieldSpec(p, parameters)

    def name_list(self, meta, children):
        return tuple(str(c) for c in children)

    def expr_list(self, meta, children):
        return tuple(children)

    def poly_ring(self, meta, children):
        return PolyRingSpec(children[0], children[1])

    def quotient_ring(self, meta, children):
        return QuotientSpec(children[0], children[1])

    def veronese_ring(self, meta, children):
        return VeroneseSpec(children[0], int(children[1]))

    def ring_ref(self, meta, children):
        return RingRef(str(children[0]), **node_position(meta))

    def ring_decl(self, meta, children):
        return RingDecl(str(children[0]), children[1], False, **node_position(meta))

    def subring_decl(self, meta, children):
        return RingDecl(str(children[0]), children[1], True, **node_position(meta))

    def ideal_gens(self, meta, children):
        return IdealGens(children[0] if children else ())

    def ideal_maximal(self, meta, children):
        return IdealMaximal(str(children[0]) if children else None, **node_position(meta))

    def ideal_ref(self, meta, children):
        return IdealRef(str(children[0]), **node_position(meta))

    def ideal_sum(self, meta, children):
        return IdealSum(children[0], children[1])

    def ideal_product(self, meta, children):
        return IdealProduct(children[0], children[1])

    def ideal_bracket(self, meta, children):
        return IdealBracket(children[0], int(children[1]), **node_position(meta))

    def ideal_power(self, meta, children):
        return IdealPower(children[0], int(children[1]))

    def ideal_decl(self, meta, children):
        ring = str(children[2]) if len(children) > 2 else None
        return IdealDecl(str(children[0]), children[1], ring, **node_position(meta))

    def element_decl(self, meta, children):
        ring = str(children[2]) if len(children) > 2 else None
        return ElementDecl(str(children[0]), children[1], ring, **node_position(meta))

    def set_stmt(self, meta, children):
        token = children[1]
        value = int(token) if token.type == "INT" else str(token)
        return SetStmt(str(children[0]), value, **node_position(meta))

    def opt_using(self, meta, children):
        return {"multiplier_name": str(children[0]), "multiplier": children[1]}

    def opt_using_untested(self, meta, children):
        return {"multiplier_name": str(children[0]), "multiplier": children[1], "multiplier_tested": False}

    def opt_using_auto(self, meta, children):
        return {"multiplier_name": str(children[0]), "multiplier": AUTO}

    def opt_emax(self, meta, children):
        return {"emax": int(children[0])}

    def opt_window(self, meta, children):
        return {"window": int(children[0])}

    def opt_probes(self, meta, children):
        return {"probes": children[0]}

    def opt_expect(self, meta, children):
        token = children[0]
        try:
            return {"expect": Status(str(token).upper())}
        except ValueError:
            raise SessionSyntaxError(f"unknown status {str(token)!r}", token.line, token.column) from None

    def check_stmt(self, meta, children):
        name = str(children[0])
        args, options = [], {}
        for child in children[1:]:
            if isinstance(child, dict):
                options.update(child)
            else:
                args.append(child)
        return CheckStmt(name, tuple(args), CheckOptions(**options), **node_position(meta))


@lru_cache(maxsize=1)
def _session_parser() -> Lark:
    return Lark(SESSION_GRAMMAR, start="start", parser="lalr", propagate_positions=True)


def _syntax_error(e: UnexpectedInput) -> SessionSyntaxError:
    if isinstance(e, UnexpectedToken):
        if e.token.type == "$END":
            return SessionSyntaxError("unexpected end of input", e.line, e.column)
        return SessionSyntaxError(f"unexpected {str(e.token)!r}", e.line, e.column)
    if isinstance(e, UnexpectedCharacters):
        return SessionSyntaxError(f"unexpected character {e.char!r}", e.line, e.column)
    if isinstance(e, UnexpectedEOF):
        return SessionSyntaxError("unexpected end of input")
    return SessionSyntaxError(str(e), getattr(e, "line", None), getattr(e, "column", None))


def parse_session(text: str) -> Session:
    """Parse and type-check a whole session; nothing is evaluated"""
    try:
        tree = _session_parser().parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(e) from None
    try:
        session = SessionBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, SessionError):
            raise e.orig_exc from None
        raise
    validate_session(session)
    logger.debug(f"[SESSION] parsed {len(session.statements)} statements")
    return session


# --- validation -------------------------------------------------------------------------------


@dataclass(frozen=True)
class RingInfo:
    characteristic: int
    names: frozenset[str]
    subring: bool = False


class SessionScope:
    """Names declared so far, their kinds, and the ring each ideal or element lives in"""

    def __init__(self) -> None:
        self.kinds: dict[str, str] = {}
        self.rings: dict[str, RingInfo] = {}
        self.owner: dict[str, str] = {}
        self.current: str | None = None
        # statement index -> ring the statement is evaluated in
        self.resolved: dict[int, str] = {}

    def declare(self, name: str, kind: str, line, column) -> None:
        if name in self.kinds:
            raise SessionNameError(f"{name!r} is already declared as a {self.kinds[name]}", line, column)
        self.kinds[name] = kind

    def ring_of(self, explicit: str | None, line, column) -> str:
        if explicit is not None:
            if self.kinds.get(explicit) != "ring":
                raise self._missing(explicit, "ring", line, column)
            return explicit
        if self.current is None:
            raise SessionNameError("no ring declared yet", line, column)
        return self.current

    def _missing(self, name: str, kind: str, line, column) -> SessionError:
        if name in self.kinds:
            return SessionTypeError(f"{name!r} is a {self.kinds[name]}, not a {kind}", line, column)
        return SessionNameError(f"unknown {kind} {name!r}", line, column)

    def ring_spec(self, spec: RingSpec, line, column) -> RingInfo:
        if isinstance(spec, RingRef):
            if self.kinds.get(spec.name) != "ring":
                raise self._missing(spec.name, "ring", spec.line or line, spec.column or column)
            return self.rings[spec.name]
        if isinstance(spec, PolyRingSpec):
            names = spec.variables + spec.field.parameters
            duplicates = sorted({n for n in names if names.count(n) > 1})
            if duplicates:
                raise SessionNameError(f"repeated variable {duplicates[0]!r}", line, column)
            if not spec.variables:
                raise SessionTypeError("a polynomial ring needs at least one variable", line, column)
            return RingInfo(spec.field.characteristic, frozenset(names))
        base = self.ring_spec(spec.base, line, column)
        if isinstance(spec, QuotientSpec):
            if base.subring:
                raise SessionTypeError("quotients of subrings are not supported", line, column)
            for relation in spec.relations:
                self.expression(relation, base, None, line, column)
            return base
        if spec.degree < 1:
            raise SessionTypeError("the Veronese degree must be positive", line, column)
        if base.subring:
            raise SessionTypeError("Veronese subrings of subrings are not supported", line, column)
        return RingInfo(base.characteristic, base.names, True)

    def expression(self, expr: Expr, info: RingInfo, ring: str | None, line, column) -> None:
        for name in expression_names(expr):
            if name.name in info.names:
                continue
            where = (name.line or line, name.column or column)
            if self.kinds.get(name.name) == "element" and self.owner[name.name] == ring:
                continue
            if name.name in self.kinds:
                kind = self.kinds[name.name]
                if kind == "element":
                    raise SessionTypeError(f"element {name.name!r} lives in {self.owner[name.name]}, not {ring}", *where)
                raise SessionTypeError(f"{name.name!r} is a {kind}, not an element", *where)
            raise SessionNameError(f"unknown name {name.name!r}", *where)

    def ideal(self, expr: IdealExpr, ring: str, line, column) -> None:
        info = self.rings[ring]
        if isinstance(expr, IdealGens):
            for g in expr.generators:
                self.expression(g, info, ring, line, column)
        elif isinstance(expr, IdealMaximal):
            if expr.ring is not None and self.ring_of(expr.ring, expr.line, expr.column) != ring:
                raise SessionTypeError(f"maximal({expr.ring}) is not an ideal of {ring}", expr.line, expr.column)
        elif isinstance(expr, IdealRef):
            if self.kinds.get(expr.name) != "ideal":
                raise self._missing(expr.name, "ideal", expr.line or line, expr.column or column)
            if self.owner[expr.name] != ring:
                raise SessionTypeError(
                    f"ideal {expr.name!r} lives in {self.owner[expr.name]}, not {ring}", expr.line or line, expr.column or column
                )
        elif isinstance(expr, (IdealSum, IdealProduct)):
            self.ideal(expr.left, ring, line, column)
            self.ideal(expr.right, ring, line, column)
        elif isinstance(expr, IdealBracket):
            q, p = expr.q, info.characteristic
            while q > 1 and q % p == 0:
                q //= p
            if q != 1:
                raise SessionTypeError(f"{expr.q} is not a power of {p}", expr.line or line, expr.column or column)
            self.ideal(expr.base, ring, line, column)
        else:
            self.ideal(expr.base, ring, line, column)


def ideal_from_expr(expr: CheckArg) -> IdealExpr | None:
    """Read a check argument as an ideal expression over declared ideal names"""
    if isinstance(expr, (IdealGens, IdealMaximal)):
        return expr
    if isinstance(expr, Name):
        return IdealRef(expr.name, expr.line, expr.column)
    if isinstance(expr, BinOp) and expr.op in "+*":
        left, right = ideal_from_expr(expr.left), ideal_from_expr(expr.right)
        if left is None or right is None:
            return None
        return IdealSum(left, right) if expr.op == "+" else IdealProduct(left, right)
    if isinstance(expr, Pow):
        base = ideal_from_expr(expr.base)
        return None if base is None else IdealPower(base, expr.exponent)
    return None


def _check_ring(stmt: CheckStmt, signature: tuple[str, ...], scope: SessionScope) -> str:
    for kind, arg in zip(signature, stmt.args):
        kind = kind.rstrip("?")
        if kind == "ideal":
            if isinstance(arg, IdealMaximal) and arg.ring is not None:
                return scope.ring_of(arg.ring, arg.line, arg.column)
            if not isinstance(arg, (IdealGens, IdealMaximal)):
                for name in expression_names(arg):
                    if scope.kinds.get(name.name) == "ideal":
                        return scope.owner[name.name]
        elif kind == "ring" and isinstance(arg, Name):
            return scope.ring_of(arg.name, arg.line, arg.column)
    for kind, arg in zip(signature, stmt.args):
        if kind == "element" and not isinstance(arg, (IdealGens, IdealMaximal)):
            for name in expression_names(arg):
                if scope.kinds.get(name.name) == "element":
                    return scope.owner[name.name]
    return scope.ring_of(None, stmt.line, stmt.column)


def _validate_check(stmt: CheckStmt, scope: SessionScope) -> str:
    line, column = stmt.line, stmt.column
    if stmt.name not in CHECKS:
        raise SessionNameError(f"unknown check {stmt.name!r}", line, column)
    signature = CHECKS[stmt.name]
    required = sum(1 for kind in signature if not kind.endswith("?"))
    if not required <= len(stmt.args) <= len(signature):
        raise SessionTypeError(
            f"{stmt.name} takes {required}..{len(signature)} arguments, got {len(stmt.args)}", line, column
        )
    ring = _check_ring(stmt, signature, scope)
    info = scope.rings[ring]
    for kind, arg in zip(signature, stmt.args):
        kind = kind.rstrip("?")
        where = (getattr(arg, "line", None) or line, getattr(arg, "column", None) or column)
        if kind == "element":
            if isinstance(arg, (IdealGens, IdealMaximal)):
                raise SessionTypeError(f"{stmt.name} expects an element here, not an ideal", *where)
            scope.expression(arg, info, ring, *where)
        elif kind == "ideal":
            ideal = ideal_from_expr(arg)
            if ideal is None:
                raise SessionTypeError(f"{stmt.name} expects an ideal here", *where)
            scope.ideal(ideal, ring, *where)
        elif kind == "ring":
            if not isinstance(arg, Name):
                raise SessionTypeError(f"{stmt.name} expects a ring name", *where)
            scope.ring_of(arg.name, *where)
        elif not isinstance(arg, Number):
            raise SessionTypeError(f"{stmt.name} expects an integer here", *where)
    options = stmt.options
    if options.multiplier is not None and options.multiplier != AUTO:
        scope.expression(options.multiplier, info, ring, line, column)
    for probe in options.probes:
        scope.expression(probe, info, ring, line, column)
    return ring


def validate_session(session: Session) -> SessionScope:
    """Check names, kinds and rings statement by statement; returns the final scope"""
    scope = SessionScope()
    for index, stmt in enumerate(session.statements):
        line, column = stmt.line, stmt.column
        if isinstance(stmt, RingDecl):
            if stmt.subring and not isinstance(stmt.spec, VeroneseSpec):
                raise SessionTypeError("subring declarations take a veronese(...) ring", line, column)
            info = scope.ring_spec(stmt.spec, line, column)
            scope.declare(stmt.name, "ring", line, column)
            scope.rings[stmt.name] = info
            scope.current = stmt.name
        elif isinstance(stmt, IdealDecl):
            ring = scope.ring_of(stmt.ring, line, column)
            scope.ideal(stmt.expr, ring, line, column)
            scope.declare(stmt.name, "ideal", line, column)
            scope.owner[stmt.name] = ring
            scope.resolved[index] = ring
        elif isinstance(stmt, ElementDecl):
            ring = scope.ring_of(stmt.ring, line, column)
            scope.expression(stmt.expr, scope.rings[ring], ring, line, column)
            scope.declare(stmt.name, "element", line, column)
            scope.owner[stmt.name] = ring
            scope.resolved[index] = ring
        elif isinstance(stmt, SetStmt):
            if stmt.key not in EngineConfig._fields:
                raise SessionNameError(f"unknown setting {stmt.key!r}", line, column)
            expected = str if stmt.key == "order" else int
            if not isinstance(stmt.value, expected):
                raise SessionTypeError(f"setting {stmt.key!r} takes a {expected.__name__}", line, column)
        else:
            scope.resolved[index] = _validate_check(stmt, scope)
    return scope


# --- printing ---------------------------------------------------------------------------------


def format_field(spec: FieldSpec) -> str:
    if spec.parameters:
        return f"F({spec.characteristic}, [{', '.join(spec.parameters)}])"
    return f"F({spec.characteristic})"


def format_ring(spec: RingSpec) -> str:
    if isinstance(spec, RingRef):
        return spec.name
    if isinstance(spec, PolyRingSpec):
        return f"poly({format_field(spec.field)}, [{', '.join(spec.variables)}])"
    if isinstance(spec, QuotientSpec):
        relations = ", ".join(format_expr(r) for r in spec.relations)
        return f"quotient({format_ring(spec.base)}, [{relations}])"
    return f"veronese({format_ring(spec.base)}, {spec.degree})"


def _ideal_prec(expr: IdealExpr) -> int:
    if isinstance(expr, IdealSum):
        return 1
    if isinstance(expr, IdealProduct):
        return 2
    if isinstance(expr, (IdealBracket, IdealPower)):
        return 3
    return 4


def format_ideal(expr: IdealExpr) -> str:
    if isinstance(expr, IdealGens):
        return f"ideal({', '.join(format_expr(g) for g in expr.generators)})"
    if isinstance(expr, IdealMaximal):
        return f"maximal({expr.ring or ''})"
    if isinstance(expr, IdealRef):
        return expr.name
    if isinstance(expr, (IdealBracket, IdealPower)):
        base = format_ideal(expr.base)
        if _ideal_prec(expr.base) < 4:
            base = f"({base})"
        return f"{base}^[{expr.q}]" if isinstance(expr, IdealBracket) else f"{base}^{expr.exponent}"
    p = _ideal_prec(expr)
    left, right = format_ideal(expr.left), format_ideal(expr.right)
    if _ideal_prec(expr.left) < p:
        left = f"({left})"
    if _ideal_prec(expr.right) <= p:
        right = f"({right})"
    return f"{left} {'+' if p == 1 else '*'} {right}"


def format_arg(arg: CheckArg) -> str:
    if isinstance(arg, (IdealGens, IdealMaximal)):
        return format_ideal(arg)
    return format_expr(arg)


def format_options(options: CheckOptions) -> str:
    parts = []
    if options.multiplier is not None:
        value = options.multiplier if options.multiplier == AUTO else format_expr(options.multiplier)
        parts.append(f"using {options.multiplier_name} = {value}" + ("" if options.multiplier_tested else " untested"))
    if options.emax is not None:
        parts.append(f"emax {options.emax}")
    if options.window is not None:
        parts.append(f"window {options.window}")
    if options.probes:
        parts.append(f"probes [{', '.join(format_expr(x) for x in options.probes)}]")
    if options.expect is not None:
        parts.append(f"expect {options.expect.value}")
    return "".join(f" {part}" for part in parts)


def format_statement(stmt: Statement) -> str:
    if isinstance(stmt, RingDecl):
        return f"{'subring' if stmt.subring else 'ring'} {stmt.name} = {format_ring(stmt.spec)};"
    if isinstance(stmt, IdealDecl):
        suffix = f" in {stmt.ring}" if stmt.ring else ""
        return f"ideal {stmt.name} = {format_ideal(stmt.expr)}{suffix};"
    if isinstance(stmt, ElementDecl):
        suffix = f" in {stmt.ring}" if stmt.ring else ""
        return f"element {stmt.name} = {format_expr(stmt.expr)}{suffix};"
    if isinstance(stmt, SetStmt):
        return f"set {stmt.key} = {stmt.value};"
    args = ", ".join(format_arg(a) for a in stmt.args)
    return f"check {stmt.name}({args}){format_options(stmt.options)};"


def print_session(session: Session) -> str:
    """Session text that parses back to an equal session"""
    return "".join(format_statement(s) + "\n" for s in session.statements)
