"""Multivariate polynomials over a FieldDescriptor, monomial orders and ring maps."""

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union

from .errors import LengthMismatch, ResourceLimit, RingMismatch
from .scalar import Coefficient, Exp, FieldDescriptor, Scalar

MAX_EXPONENT = 2**31 - 1


class OrderKind(str, Enum):
    LEX = "lex"
    GREVLEX = "grevlex"
    ELIMINATION = "elimination"


@dataclass(frozen=True)
class MonomialOrder:
    kind: OrderKind = OrderKind.GREVLEX
    # number of leading variables forming the eliminated block
    block: int = 0
    permutation: tuple[int, ...] | None = None

    def key(self, nvars: int) -> Callable[[Exp], tuple]:
        return _order_key(self, nvars)

    def __str__(self) -> str:
        if self.kind is OrderKind.ELIMINATION:
            return f"elimination({self.block})"
        return self.kind.value


GREVLEX = MonomialOrder()
LEX = MonomialOrder(OrderKind.LEX)


def elimination_order(block: int) -> MonomialOrder:
    return MonomialOrder(OrderKind.ELIMINATION, block)


def order_from_name(name: str) -> MonomialOrder:
    try:
        kind = OrderKind(name)
    except ValueError:
        raise ValueError(f"unknown monomial order {name!r}") from None
    if kind is OrderKind.ELIMINATION:
        raise ValueError("elimination orders need a block size")
    return MonomialOrder(kind)


def _grevlex(e: Exp) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


@lru_cache(maxsize=None)
def _order_key(order: MonomialOrder, nvars: int) -> Callable[[Exp], tuple]:
    perm = order.permutation
    if perm is not None and sorted(perm) != list(range(nvars)):
        raise LengthMismatch(f"permutation {perm} does not fit {nvars} variables")

    if order.kind is OrderKind.LEX:
        base = lambda e: e  # noqa: E731
    elif order.kind is OrderKind.GREVLEX:
        base = _grevlex
    else:
        k = order.block

        def base(e: Exp) -> tuple:
            return (_grevlex(e[:k]), _grevlex(e[k:]))

    if perm is None:
        return base
    return lambda e: base(tuple(e[i] for i in perm))


def monomial_compare(order: MonomialOrder, m1: Sequence[int], m2: Sequence[int]) -> int:
    """-1, 0 or 1 as m1 is smaller than, equal to or greater than m2"""
    if len(m1) != len(m2):
        raise LengthMismatch(f"exponent vectors of length {len(m1)} and {len(m2)}")
    key = order.key(len(m1))
    k1, k2 = key(tuple(m1)), key(tuple(m2))
    return (k1 > k2) - (k1 < k2)


def monomial_divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class PolynomialRing:
    field: FieldDescriptor
    variables: tuple[str, ...]
    order: MonomialOrder = GREVLEX

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"variable names must be distinct: {self.variables}")
        clash = set(self.variables) & set(self.field.parameters)
        if clash:
            raise ValueError(f"variables clash with field parameters: {sorted(clash)}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def key(self) -> Callable[[Exp], tuple]:
        return self.order.key(self.nvars)

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    def with_order(self, order: MonomialOrder) -> "PolynomialRing":
        return PolynomialRing(self.field, self.variables, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: Union[int, Scalar]) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field.coerce(c)})

    def monomial(self, exponents: Sequence[int], c: Union[int, Scalar] = 1) -> "Polynomial":
        if len(exponents) != self.nvars:
            raise LengthMismatch(f"expected {self.nvars} exponents, got {len(exponents)}")
        return Polynomial(self, {tuple(exponents): self.field.coerce(c)})

    def gen(self, name: Union[str, int]) -> "Polynomial":
        i = self.variables.index(name) if isinstance(name, str) else name
        return self.monomial(tuple(1 if j == i else 0 for j in range(self.nvars)))

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def parse(self, text: str) -> "Polynomial":
        """Parse a polynomial written in the session expression syntax"""
        from .expressions import evaluate, parse_expression

        return evaluate(parse_expression(text), self)

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.variables)}]"


class Polynomial:
    """Immutable polynomial; terms are (exponent, raw coefficient) pairs, descending"""

    __slots__ = ("ring", "terms", "_dict", "_hash")

    ring: PolynomialRing
    terms: tuple[tuple[Exp, Coefficient], ...]

    def __init__(self, ring: PolynomialRing, terms: Mapping[Exp, Coefficient]):
        field = ring.field
        items = [(e, c) for e, c in terms.items() if not field.is_zero(c)]
        key = ring.key
        items.sort(key=lambda t: key(t[0]), reverse=True)
        self.ring = ring
        self.terms = tuple(items)
        self._dict: dict[Exp, Coefficient] | None = None
        self._hash: int | None = None

    def to_dict(self) -> dict[Exp, Coefficient]:
        if self._dict is None:
            self._dict = dict(self.terms)
        return dict(self._dict)

    def coefficient(self, exponents: Exp) -> Coefficient:
        if self._dict is None:
            self._dict = dict(self.terms)
        return self._dict.get(tuple(exponents), self.ring.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def support(self) -> list[Exp]:
        return [e for e, _ in self.terms]

    def leading_monomial(self, order: MonomialOrder | None = None) -> Exp:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        if order is None or order == self.ring.order:
            return self.terms[0][0]
        key = order.key(self.ring.nvars)
        return max((e for e, _ in self.terms), key=key)

    def leading_coefficient(self, order: MonomialOrder | None = None) -> Coefficient:
        return self.coefficient(self.leading_monomial(order))

    def constant_term(self) -> Coefficient:
        return self.coefficient((0,) * self.ring.nvars)

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        field = self.ring.field
        out = self.to_dict()
        for e, c in other.terms:
            if e in out:
                out[e] = field.add(out[e], c)
            else:
                out[e] = c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        field = self.ring.field
        return Polynomial(self.ring, {e: field.neg(c) for e, c in self.terms})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(self.ring.field.coerce(other))
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Coefficient) -> "Polynomial":
        field = self.ring.field
        if field.is_zero(c):
            return self.ring.zero()
        return Polynomial(self.ring, {e: field.mul(v, c) for e, v in self.terms})

    def shift(self, exponents: Exp, c: Coefficient | None = None) -> "Polynomial":
        """Multiply by the term c * x^exponents"""
        field = self.ring.field
        c = field.one if c is None else c
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(e, exponents)): field.mul(v, c) for e, v in self.terms},
        )

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def frobenius(self, e: int) -> "Polynomial":
        return poly_frobenius_power(self, e)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for e, c in self.terms:
            factors = [n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x]
            text = str(c)
            if isinstance(c, Scalar) and c.needs_parentheses() and factors:
                text = f"({text})"
            if factors and self.ring.field.is_one(c):
                parts.append("*".join(factors))
            else:
                parts.append("*".join([text] + factors))
        return " + ".join(parts)


PolyLike = Union[Polynomial, int, Scalar]


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    ring = f.ring
    field = ring.field
    out: dict[Exp, Coefficient] = {}
    if field.is_prime_field:
        p = field.characteristic
        for ea, ca in f.terms:
            for eb, cb in g.terms:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = (out.get(e, 0) + ca * cb) % p
    else:
        for ea, ca in f.terms:
            for eb, cb in g.terms:
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                out[e] = out[e] + prod if e in out else prod
    return Polynomial(ring, out)


def poly_frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """f^(p^e), term by term: (c, a) -> (c^(p^e), p^e * a)"""
    if e == 0:
        return f
    ring = f.ring
    q = ring.characteristic**e
    field = ring.field
    out = {}
    for exp, c in f.terms:
        new = tuple(q * x for x in exp)
        if any(x > MAX_EXPONENT for x in new):
            raise ResourceLimit(f"exponent overflow in Frobenius power q={q}")
        out[new] = field.frobenius(c, e)
    return Polynomial(ring, out)


def poly_divide(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Division with remainder by a single divisor under the ring order"""
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    field = ring.field
    key = ring.key
    lm, lc = g.terms[0]
    inv = field.inv(lc)
    rest = f.to_dict()
    quotient: dict[Exp, Coefficient] = {}
    remainder: dict[Exp, Coefficient] = {}
    while rest:
        m = max(rest, key=key)
        c = rest.pop(m)
        if monomial_divides(lm, m):
            shift = tuple(x - y for x, y in zip(m, lm))
            factor = field.mul(c, inv)
            quotient[shift] = factor
            for e, v in g.terms[1:]:
                t = tuple(x + y for x, y in zip(e, shift))
                nv = field.sub(rest.get(t, field.zero), field.mul(factor, v))
                if field.is_zero(nv):
                    rest.pop(t, None)
                else:
                    rest[t] = nv
        else:
            remainder[m] = c
    return Polynomial(ring, quotient), Polynomial(ring, remainder)


def embed(f: Polynomial, ring: PolynomialRing, positions: Sequence[int]) -> Polynomial:
    """Copy f into `ring`, sending variable i of f.ring to variable positions[i]"""
    if f.ring.field != ring.field:
        raise RingMismatch(f"{f.ring.field} vs {ring.field}")
    out = {}
    for e, c in f.terms:
        new = [0] * ring.nvars
        for i, x in enumerate(e):
            new[positions[i]] += x
        out[tuple(new)] = c
    return Polynomial(ring, out)


@dataclass(frozen=True)
class RingMap:
    source: PolynomialRing
    target: PolynomialRing
    images: tuple[Polynomial, ...]
    # coefficient action: c -> c^(p^frobenius_e)
    frobenius_e: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.nvars:
            raise LengthMismatch(
                f"ring map needs {self.source.nvars} images, got {len(self.images)}"
            )
        for img in self.images:
            if img.ring != self.target:
                raise RingMismatch(f"image {img} is not in {self.target}")
        if self.source.field.characteristic != self.target.field.characteristic:
            raise RingMismatch("ring maps must preserve the characteristic")

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_ring_map(self, f)

    @classmethod
    def frobenius(cls, ring: PolynomialRing, e: int) -> "RingMap":
        return cls(ring, ring, tuple(x.frobenius(e) for x in ring.gens()), e)


def apply_ring_map(ring_map: RingMap, f: Polynomial) -> Polynomial:
    if f.ring != ring_map.source:
        raise RingMismatch(f"{f} does not live in {ring_map.source}")
    target = ring_map.target
    sfield, tfield = ring_map.source.field, target.field
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, k: int) -> Polynomial:
        if (i, k) not in powers:
            powers[(i, k)] = ring_map.images[i] ** k
        return powers[(i, k)]

    result = target.zero()
    for exp, c in f.terms:
        coeff = sfield.frobenius(c, ring_map.frobenius_e)
        if sfield != tfield:
            coeff = tfield.coerce(sfield.scalar(coeff))
        term = target.constant(tfield.scalar(coeff))
        for i, k in enumerate(exp):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


def lift_polynomials(items: Iterable[PolyLike], ring: PolynomialRing) -> list[Polynomial]:
    out = []
    for item in items:
        if isinstance(item, Polynomial):
            if item.ring != ring:
                raise RingMismatch(f"{item} is not in {ring}")
            out.append(item)
        else:
            out.append(ring.constant(item))
    return out
