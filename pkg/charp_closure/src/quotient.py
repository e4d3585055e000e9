"""Quotient rings S/J, their ideals, parameter predicates and subring presentations."""

import itertools
import logging
import string
from collections.abc import Iterable, Sequence

from .errors import NotHomogeneous, RingMismatch, TooManyElements, UnitRelation
from .ideals import (
    IdealHandle,
    fresh_names,
    graph_ideal,
    ideal_colon,
    ideal_membership,
    is_m_primary as lift_is_m_primary,
    krull_dimension,
    normal_form,
    ring_map_kernel,
    saturation,
)
from .polyring import Polynomial, PolynomialRing, PolyLike, RingMap, elimination_order, embed

logger = logging.getLogger(__name__)


class RingPresentation:
    """R = S/J with m the image of the variable ideal; dim R is computed once"""

    def __init__(self, ambient: PolynomialRing, relations: IdealHandle | None = None) -> None:
        relations = relations if relations is not None else IdealHandle(ambient)
        if relations.ring != ambient:
            raise RingMismatch(f"relations live in {relations.ring}, not {ambient}")
        if relations.is_unit():
            raise UnitRelation(f"{relations} is the unit ideal")
        self.ambient: PolynomialRing = ambient
        self.relations: IdealHandle = relations
        self.dimension: int = krull_dimension(relations)

    @property
    def field(self):
        return self.ambient.field

    @property
    def characteristic(self) -> int:
        return self.ambient.characteristic

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ambient.variables

    def is_polynomial_ring(self) -> bool:
        return self.relations.is_zero()

    def element(self, value: PolyLike | str) -> Polynomial:
        if isinstance(value, str):
            return self.ambient.parse(value)
        if isinstance(value, Polynomial):
            if value.ring != self.ambient:
                raise RingMismatch(f"{value} is not in {self.ambient}")
            return value
        return self.ambient.constant(value)

    def reduce(self, f: PolyLike | str) -> Polynomial:
        """Canonical representative of f modulo J"""
        return normal_form(self.element(f), self.relations.groebner_basis())

    def equal(self, f: PolyLike | str, g: PolyLike | str) -> bool:
        return self.reduce(self.element(f) - self.element(g)).is_zero()

    def is_zero(self, f: PolyLike | str) -> bool:
        return self.reduce(f).is_zero()

    def ideal(self, generators: Iterable[PolyLike | str]) -> "QuotientIdeal":
        return QuotientIdeal(self, generators)

    def maximal_ideal(self) -> "QuotientIdeal":
        return QuotientIdeal(self, self.ambient.gens())

    def zero_ideal(self) -> "QuotientIdeal":
        return QuotientIdeal(self, ())

    def unit_ideal(self) -> "QuotientIdeal":
        return QuotientIdeal(self, (self.ambient.one(),))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return self is other or (self.ambient == other.ambient and self.relations == other.relations)

    def __hash__(self) -> int:
        return hash(self.ambient)

    def __str__(self) -> str:
        if self.relations.is_zero():
            return str(self.ambient)
        rels = ", ".join(str(g) for g in self.relations.generators)
        return f"{self.ambient}/({rels})"


class QuotientIdeal:
    """Ideal of R = S/J given by generators; `lift` is the preimage generators + J in S"""

    def __init__(self, ring: RingPresentation, generators: Iterable[PolyLike | str]) -> None:
        gens = []
        for g in generators:
            g = ring.element(g)
            if g and g not in gens:
                gens.append(g)
        self.ring: RingPresentation = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self.lift: IdealHandle = IdealHandle(ring.ambient, self.generators + ring.relations.generators)

    def _same_ring(self, other: "QuotientIdeal") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def contains(self, f: PolyLike | str) -> bool:
        return ideal_membership(self.ring.element(f), self.lift)

    def __contains__(self, f) -> bool:
        return self.contains(f)

    def issubset(self, other: "QuotientIdeal") -> bool:
        self._same_ring(other)
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other: "QuotientIdeal") -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuotientIdeal):
            return NotImplemented
        return self.ring == other.ring and self.lift == other.lift

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "QuotientIdeal") -> "QuotientIdeal":
        self._same_ring(other)
        return QuotientIdeal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "QuotientIdeal") -> "QuotientIdeal":
        self._same_ring(other)
        return QuotientIdeal(self.ring, [f * g for f in self.generators for g in other.generators])

    def power(self, n: int) -> "QuotientIdeal":
        result = self.ring.unit_ideal()
        for _ in range(n):
            result = result * self
        return result

    def colon(self, other: "QuotientIdeal") -> "QuotientIdeal":
        self._same_ring(other)
        quotient = ideal_colon(self.lift, IdealHandle(self.ring.ambient, other.generators))
        return QuotientIdeal(self.ring, quotient.generators)

    def is_unit(self) -> bool:
        return self.lift.is_unit()

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(g) for g in self.generators)

    def is_m_primary(self) -> bool:
        return lift_is_m_primary(self.lift)

    def reduced_generators(self) -> list[Polynomial]:
        """Nonzero normal forms of the generators modulo J"""
        out = []
        for g in self.generators:
            r = self.ring.reduce(g)
            if r and r not in out:
                out.append(r)
        return out

    def __repr__(self) -> str:
        return f"QuotientIdeal({self})"

    def __str__(self) -> str:
        return f"({', '.join(str(g) for g in self.generators)})"


def quotient_ring(ambient: PolynomialRing, relations: IdealHandle | Iterable[PolyLike | str] = ()) -> RingPresentation:
    if not isinstance(relations, IdealHandle):
        relations = IdealHandle(
            ambient, [ambient.parse(r) if isinstance(r, str) else r for r in relations]
        )
    ring = RingPresentation(ambient, relations)
    logger.debug(f"[QUOTIENT] {ring} has dimension {ring.dimension}")
    return ring


def _lift_all(xs: Sequence[PolyLike | str], ring: RingPresentation) -> list[Polynomial]:
    return [ring.element(x) for x in xs]


def is_regular_sequence(xs: Sequence[PolyLike | str], ring: RingPresentation) -> bool:
    """((x_1..x_i) : x_{i+1}) = (x_1..x_i) for every i, and (x_1..x_t) proper"""
    xs = _lift_all(xs, ring)
    if ring.ideal(xs).is_unit():
        return False
    for i, x in enumerate(xs):
        base = ring.ideal(xs[:i]).lift
        colon = ideal_colon(base, IdealHandle(ring.ambient, [x]))
        if not colon.issubset(base):
            return False
    return True


def is_filter_regular_sequence(xs: Sequence[PolyLike | str], ring: RingPresentation) -> bool:
    """Each colon ((x_1..x_i) : x_{i+1}) sits inside the m-saturation of (x_1..x_i)"""
    xs = _lift_all(xs, ring)
    m = ring.maximal_ideal().lift
    for i, x in enumerate(xs):
        base = ring.ideal(xs[:i]).lift
        colon = ideal_colon(base, IdealHandle(ring.ambient, [x]))
        if not colon.issubset(saturation(base, m)):
            return False
    return True


def is_system_of_parameters(xs: Sequence[PolyLike | str], ring: RingPresentation) -> bool:
    """dim R/(x_1..x_i) = dim R - i for i = 1..t, checked in the given order"""
    xs = _lift_all(xs, ring)
    if len(xs) > ring.dimension:
        raise TooManyElements(f"{len(xs)} elements exceed dim R = {ring.dimension}")
    for x in xs:
        if not ring.field.is_zero(ring.reduce(x).constant_term()):
            return False
    for i in range(1, len(xs) + 1):
        lift = ring.ideal(xs[:i]).lift
        if lift.is_unit() or krull_dimension(lift) != ring.dimension - i:
            return False
    return True


def is_parameter_ideal(ideal: QuotientIdeal) -> bool:
    """Generated (as given) by a full system of parameters"""
    if len(ideal.generators) != ideal.ring.dimension:
        return False
    return is_system_of_parameters(ideal.generators, ideal.ring)


def _presentation_names(count: int, taken: Iterable[str]) -> list[str]:
    taken = set(taken)
    letters = [c for c in string.ascii_lowercase if c not in taken]
    if count <= len(letters):
        return letters[:count]
    return fresh_names(count, taken, "a")


class SubringPresentation:
    """Subring of R generated by `generators`, presented as T/K with T -> S the induced map"""

    def __init__(self, parent: RingPresentation, generators: Sequence[PolyLike | str], names: Sequence[str] | None = None) -> None:
        gens = _lift_all(generators, parent)
        if not gens or any(not g for g in gens):
            raise ValueError("subring generators must be nonzero")
        ambient = parent.ambient
        names = list(names) if names else _presentation_names(
            len(gens), ambient.variables + ambient.field.parameters
        )
        self.parent: RingPresentation = parent
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self.source: PolynomialRing = PolynomialRing(ambient.field, tuple(names), ambient.order)
        self.ring_map: RingMap = RingMap(self.source, ambient, self.generators)
        self._graph: IdealHandle = graph_ideal(self.ring_map, parent.relations)
        self.kernel: IdealHandle = ring_map_kernel(self.ring_map, parent.relations)
        self.presentation: RingPresentation = RingPresentation(self.source, self.kernel)
        logger.info(
            f"[QUOTIENT] subring on {len(gens)} generators, kernel with "
            f"{len(self.kernel.generators)} generators, dimension {self.presentation.dimension}"
        )

    def image(self, f: Polynomial) -> Polynomial:
        return self.ring_map(f)

    def lift(self, f: PolyLike | str) -> Polynomial | None:
        """Write f as a polynomial in the subring generators, or None when f is outside"""
        f = self.parent.element(f)
        big = self._graph.ring
        k = self.parent.ambient.nvars
        basis = self._graph.groebner_basis(elimination_order(k))
        r = normal_form(embed(f, big, list(range(k))), basis)
        if any(any(e[:k]) for e, _ in r.terms):
            return None
        return Polynomial(self.source, {e[k:]: c for e, c in r.terms})

    def lift_ideal(self, generators: Iterable[PolyLike | str]) -> QuotientIdeal:
        lifted = []
        for g in generators:
            h = self.lift(g)
            if h is None:
                raise ValueError(f"{g} is not in the subring")
            lifted.append(h)
        return QuotientIdeal(self.presentation, lifted)


def subring_presentation(generators: Sequence[PolyLike | str], ring: RingPresentation, names: Sequence[str] | None = None) -> SubringPresentation:
    return SubringPresentation(ring, generators, names)


def veronese(ring: RingPresentation, degree: int) -> SubringPresentation:
    """Degree-d Veronese subring, generated by the degree-d monomials normal modulo J in lex-descending order"""
    if not ring.relations.is_homogeneous():
        raise NotHomogeneous("Veronese subrings need homogeneous relations")
    lms = ring.relations.groebner_basis().leading_monomials()
    ambient = ring.ambient
    monomials = []
    for combo in itertools.combinations_with_replacement(range(ambient.nvars), degree):
        e = tuple(combo.count(i) for i in range(ambient.nvars))
        if not any(all(a <= b for a, b in zip(lm, e)) for lm in lms):
            monomials.append(e)
    monomials.sort(reverse=True)
    return SubringPresentation(ring, [ambient.monomial(e) for e in monomials])
