"""Gröbner basis kernel and the ideal algebra built on it.

Buchberger's algorithm with the coprime and chain criteria and the normal selection
strategy (smallest lcm degree first, ties by pair index). Internally polynomials are
plain dicts {exponent: raw coefficient}; only finished bases become Polynomial values.
"""

import itertools
import logging
import threading
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from .config import ResourceBudget, current_budget
from .errors import EmptyRing, NonPerfectCoefficients, NotMonomial, RingMismatch
from .errors import ResourceLimit
from .polyring import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    PolyLike,
    RingMap,
    elimination_order,
    embed,
    lift_polynomials,
    monomial_divides,
    monomial_lcm,
    poly_divide,
)
from .scalar import Coefficient, Exp, FieldDescriptor

logger = logging.getLogger(__name__)

RawPoly = dict[Exp, Coefficient]
BasisEntry = tuple[Exp, RawPoly]


# --- kernel ------------------------------------------------------------------------


def _raw_monic(f: RawPoly, lm: Exp, field: FieldDescriptor) -> RawPoly:
    lc = f[lm]
    if field.is_one(lc):
        return f
    inv = field.inv(lc)
    return {e: field.mul(c, inv) for e, c in f.items()}


def _sub_shifted(rest: RawPoly, c: Coefficient, shift: Exp, g: RawPoly, skip: Exp | None, field: FieldDescriptor) -> None:
    """rest -= c * x^shift * g, in place, ignoring the term `skip` of g"""
    if field.is_prime_field:
        p = field.characteristic
        for e, v in g.items():
            if e == skip:
                continue
            t = tuple(x + y for x, y in zip(e, shift))
            nv = (rest.get(t, 0) - c * v) % p
            if nv:
                rest[t] = nv
            else:
                rest.pop(t, None)
    else:
        for e, v in g.items():
            if e == skip:
                continue
            t = tuple(x + y for x, y in zip(e, shift))
            nv = rest[t] - c * v if t in rest else -(c * v)
            if nv.is_zero():
                rest.pop(t, None)
            else:
                rest[t] = nv


def _reduce(f: RawPoly, basis: Sequence[BasisEntry], field: FieldDescriptor, key: Callable) -> RawPoly:
    """Full reduction of f by a list of monic (leading monomial, poly) entries"""
    rest = dict(f)
    remainder: RawPoly = {}
    while rest:
        m = max(rest, key=key)
        c = rest.pop(m)
        for lm, g in basis:
            if all(a <= b for a, b in zip(lm, m)):
                shift = tuple(b - a for a, b in zip(lm, m))
                _sub_shifted(rest, c, shift, g, lm, field)
                break
        else:
            remainder[m] = c
    return remainder


def _spoly(f: BasisEntry, g: BasisEntry, field: FieldDescriptor) -> RawPoly:
    lmf, pf = f
    lmg, pg = g
    lcm = monomial_lcm(lmf, lmg)
    sf = tuple(a - b for a, b in zip(lcm, lmf))
    sg = tuple(a - b for a, b in zip(lcm, lmg))
    out: RawPoly = {tuple(x + y for x, y in zip(e, sf)): c for e, c in pf.items() if e != lmf}
    _sub_shifted(out, field.one, sg, pg, lmg, field)
    return out


def _check_budget(poly: RawPoly, size: int, budget: ResourceBudget) -> None:
    degree = max((sum(e) for e in poly), default=0)
    if degree > budget.max_degree:
        raise ResourceLimit(f"polynomial degree {degree} exceeds budget {budget.max_degree}")
    if size > budget.max_basis_size:
        raise ResourceLimit(f"basis size {size} exceeds budget {budget.max_basis_size}")


def _buchberger(gens: Iterable[RawPoly], field: FieldDescriptor, key: Callable, budget: ResourceBudget) -> list[BasisEntry]:
    basis: list[BasisEntry] = []
    pairs: dict[tuple[int, int], tuple[int, Exp]] = {}

    def add(h: RawPoly) -> None:
        lm = max(h, key=key)
        h = _raw_monic(h, lm, field)
        _check_budget(h, len(basis) + 1, budget)
        n = len(basis)
        basis.append((lm, h))
        for i in range(n):
            lcm = monomial_lcm(basis[i][0], lm)
            pairs[(i, n)] = (sum(lcm), lcm)

    for g in gens:
        if g:
            _check_budget(g, len(basis), budget)
            h = _reduce(g, basis, field, key)
            if h:
                add(h)

    while pairs:
        i, j = min(pairs, key=lambda ij: (pairs[ij][0], ij[1], ij[0]))
        _, lcm = pairs.pop((i, j))
        lmi, lmj = basis[i][0], basis[j][0]
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        if any(
            k != i
            and k != j
            and monomial_divides(basis[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        r = _reduce(_spoly(basis[i], basis[j], field), basis, field, key)
        if r:
            add(r)
            logger.debug(f"[GB] basis grew to {len(basis)} elements, {len(pairs)} pairs pending")

    # minimalize, then interreduce tails
    minimal: list[BasisEntry] = []
    for entry in sorted(basis, key=lambda t: key(t[0])):
        if not any(monomial_divides(lm, entry[0]) for lm, _ in minimal):
            minimal.append(entry)
    reduced: list[BasisEntry] = []
    for idx, (lm, g) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = _reduce({e: c for e, c in g.items() if e != lm}, others, field, key)
        tail[lm] = field.one
        reduced.append((lm, tail))
    reduced.sort(key=lambda t: key(t[0]), reverse=True)
    return reduced


# --- public types ----------------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolynomialRing
    order: MonomialOrder
    elements: tuple[Polynomial, ...]
    _entries: tuple[BasisEntry, ...] = field(default=(), compare=False, repr=False)

    @property
    def key(self) -> Callable:
        return self.order.key(self.ring.nvars)

    def leading_monomials(self) -> list[Exp]:
        return [lm for lm, _ in self._entries]

    def is_unit(self) -> bool:
        return any(not any(lm) for lm, _ in self._entries)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class IdealHandle:
    """Ideal given by generators, with a lazily filled reduced Gröbner basis per order"""

    def __init__(self, ring: PolynomialRing, generators: Iterable[PolyLike] = ()):
        gens = []
        for g in lift_polynomials(generators, ring):
            if g and g not in gens:
                gens.append(g)
        self.ring: PolynomialRing = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: dict[MonomialOrder, GroebnerBasis] = {}
        self._lock = threading.Lock()
        self._order_locks: dict[MonomialOrder, threading.Lock] = {}

    def groebner_basis(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        order = order or self.ring.order
        cached = self._cache.get(order)
        if cached is not None:
            return cached
        with self._lock:
            lock = self._order_locks.setdefault(order, threading.Lock())
        with lock:
            cached = self._cache.get(order)
            if cached is None:
                cached = _compute_basis(self.ring, self.generators, order)
                self._cache[order] = cached
        return cached

    def contains(self, f: PolyLike) -> bool:
        return ideal_membership(lift_polynomials([f], self.ring)[0], self)

    def __contains__(self, f: PolyLike) -> bool:
        return self.contains(f)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return self.groebner_basis().is_unit()

    def issubset(self, other: "IdealHandle") -> bool:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other: "IdealHandle") -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealHandle):
            return NotImplemented
        if other.ring != self.ring:
            return False
        return self.groebner_basis().elements == other.groebner_basis().elements

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        return ideal_sum(self, other)

    def __mul__(self, other: "IdealHandle") -> "IdealHandle":
        return ideal_product(self, other)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __repr__(self) -> str:
        return f"IdealHandle({self})"

    def __str__(self) -> str:
        return f"ideal({', '.join(str(g) for g in self.generators)})"


def _compute_basis(ring: PolynomialRing, generators: Sequence[Polynomial], order: MonomialOrder) -> GroebnerBasis:
    key = order.key(ring.nvars)
    entries = _buchberger((g.to_dict() for g in generators), ring.field, key, current_budget())
    elements = tuple(Polynomial(ring, g) for _, g in entries)
    logger.debug(f"[GB] {len(generators)} generators -> {len(elements)} basis elements under {order}")
    return GroebnerBasis(ring, order, elements, tuple(entries))


# --- operations ------------------------------------------------------------------


def groebner_basis(ideal: IdealHandle, order: MonomialOrder | None = None) -> GroebnerBasis:
    return ideal.groebner_basis(order)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    if f.ring != basis.ring:
        raise RingMismatch(f"{f.ring} vs {basis.ring}")
    return Polynomial(f.ring, _reduce(f.to_dict(), basis._entries, f.ring.field, basis.key))


def ideal_membership(f: Polynomial, ideal: IdealHandle) -> bool:
    if f.ring != ideal.ring:
        raise RingMismatch(f"{f.ring} vs {ideal.ring}")
    if f.is_zero():
        return True
    return normal_form(f, ideal.groebner_basis()).is_zero()


def ideal_sum(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return IdealHandle(a.ring, a.generators + b.generators)


def ideal_product(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return IdealHandle(a.ring, [f * g for f in a.generators for g in b.generators])


def fresh_names(count: int, taken: Iterable[str], stem: str = "t") -> list[str]:
    taken = set(taken)
    names = []
    i = 0
    while len(names) < count:
        name = f"{stem}{i}"
        if name not in taken:
            names.append(name)
            taken.add(name)
        i += 1
    return names


def eliminate(ideal: IdealHandle, count: int, target: PolynomialRing) -> IdealHandle:
    """Intersect with the subring of the trailing variables (first `count` eliminated)"""
    basis = ideal.groebner_basis(elimination_order(count))
    kept = []
    for g in basis.elements:
        if all(not any(e[:count]) for e, _ in g.terms):
            kept.append(Polynomial(target, {e[count:]: c for e, c in g.terms}))
    return IdealHandle(target, kept)


def ideal_intersection(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    """I ∩ J as the t-free part of t·I + (1 - t)·J"""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return IdealHandle(ring)
    (t,) = fresh_names(1, ring.variables + ring.field.parameters)
    big = PolynomialRing(ring.field, (t,) + ring.variables)
    positions = list(range(1, ring.nvars + 1))
    tvar = big.gen(0)
    gens = [tvar * embed(f, big, positions) for f in a.generators]
    for g in b.generators:
        h = embed(g, big, positions)
        gens.append(h - tvar * h)
    return eliminate(IdealHandle(big, gens), 1, ring)


def _principal_colon(ideal: IdealHandle, g: Polynomial) -> IdealHandle:
    ring = ideal.ring
    if ideal_membership(g, ideal):
        return IdealHandle(ring, [ring.one()])
    meet = ideal_intersection(ideal, IdealHandle(ring, [g]))
    quotients = []
    for h in meet.generators:
        q, r = poly_divide(h, g)
        if not r.is_zero():
            raise ArithmeticError(f"{g} does not divide {h} in the intersection")
        quotients.append(q)
    return IdealHandle(ring, quotients)


def ideal_colon(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    """(I : J) = {f : fJ ⊆ I}, as the intersection of the principal colons"""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    result: IdealHandle | None = None
    for g in b.generators:
        part = _principal_colon(a, g)
        if part.is_unit():
            continue
        result = part if result is None else ideal_intersection(result, part)
    if result is None:
        return IdealHandle(a.ring, [a.ring.one()])
    return result


def saturation(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    """Stable value of the chain I ⊆ (I : J) ⊆ (I : J^2) ⊆ ..."""
    current = a
    while True:
        following = ideal_colon(current, b)
        if following.issubset(current):
            return current
        current = following


def graph_ideal(ring_map: RingMap, relations: IdealHandle | None = None) -> IdealHandle:
    """(s_i - image_i) + relations in target[targets..., sources...]; target variables come first"""
    source, target = ring_map.source, ring_map.target
    if source.field != target.field:
        raise RingMismatch(f"{source.field} vs {target.field}")
    if ring_map.frobenius_e and not target.field.is_prime_field:
        raise NonPerfectCoefficients("Frobenius ring maps over a parameter field are not linear")
    if relations is not None and relations.ring != target:
        raise RingMismatch(f"relations live in {relations.ring}, not {target}")
    taken = set(target.variables) | set(target.field.parameters)
    clashing = [n for n in source.variables if n in taken]
    renamed = iter(fresh_names(len(clashing), taken | set(source.variables), "s"))
    src_names = tuple(next(renamed) if n in taken else n for n in source.variables)
    big = PolynomialRing(target.field, target.variables + src_names)
    k = target.nvars
    tpos = list(range(k))
    gens = [big.gen(k + i) - embed(img, big, tpos) for i, img in enumerate(ring_map.images)]
    if relations is not None:
        gens.extend(embed(r, big, tpos) for r in relations.generators)
    return IdealHandle(big, gens)


def ring_map_kernel(ring_map: RingMap, relations: IdealHandle | None = None) -> IdealHandle:
    """Kernel of source -> target/relations via the graph ideal and elimination"""
    return eliminate(graph_ideal(ring_map, relations), ring_map.target.nvars, ring_map.source)


def _independent(lms: Sequence[Exp], subset: set[int]) -> bool:
    return all(any(x and i not in subset for i, x in enumerate(lm)) for lm in lms)


def krull_dimension(ideal: IdealHandle) -> int:
    """Dimension of ring/ideal via maximal independent sets modulo the leading terms"""
    basis = ideal.groebner_basis(GREVLEX)
    if basis.is_unit():
        raise EmptyRing(f"{ideal} is the unit ideal")
    lms = basis.leading_monomials()
    n = ideal.ring.nvars
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            if _independent(lms, set(subset)):
                return size
    return 0


def is_m_primary(ideal: IdealHandle, relations: IdealHandle | None = None) -> bool:
    """True when ideal + relations has finite colength at the variable ideal"""
    whole = ideal if relations is None else ideal_sum(ideal, relations)
    basis = whole.groebner_basis()
    if basis.is_unit():
        return False
    lms = basis.leading_monomials()
    n = ideal.ring.nvars
    return all(
        any(lm[i] > 0 and all(x == 0 for j, x in enumerate(lm) if j != i) for lm in lms)
        for i in range(n)
    )


def _minimal_monomials(exps: Iterable[Exp]) -> list[Exp]:
    out: list[Exp] = []
    for e in sorted(set(exps), key=lambda m: (sum(m), m)):
        if not any(monomial_divides(m, e) for m in out):
            out.append(e)
    return sorted(out)


def _contains_monomial_ideal(big: Sequence[Exp], small: Sequence[Exp]) -> bool:
    """(small) ⊆ (big) for monomial generator lists"""
    return all(any(monomial_divides(b, s) for b in big) for s in small)


def monomial_irreducible_decomposition(ideal: IdealHandle) -> list[IdealHandle]:
    """Irredundant decomposition of a monomial ideal into ideals of pure powers"""
    ring = ideal.ring
    exps = []
    for g in ideal.generators:
        if not g.is_monomial():
            raise NotMonomial(f"{g} is not a monomial")
        exps.append(g.terms[0][0])
    start = _minimal_monomials(exps)
    if not start or any(not any(e) for e in start):
        return [IdealHandle(ring, [ring.monomial(e) for e in start])]

    components: set[tuple[Exp, ...]] = set()
    stack = [start]
    while stack:
        gens = stack.pop()
        mixed = next((m for m in gens if sum(1 for x in m if x) > 1), None)
        if mixed is None:
            components.add(tuple(gens))
            continue
        i = next(idx for idx, x in enumerate(mixed) if x)
        pure = tuple(mixed[i] if j == i else 0 for j in range(ring.nvars))
        other = tuple(0 if j == i else x for j, x in enumerate(mixed))
        rest = [m for m in gens if m != mixed]
        stack.append(_minimal_monomials(rest + [pure]))
        stack.append(_minimal_monomials(rest + [other]))

    ordered = sorted(components)
    irredundant = [
        c
        for c in ordered
        if not any(d != c and _contains_monomial_ideal(c, d) for d in ordered)
    ]
    return [IdealHandle(ring, [ring.monomial(e) for e in c]) for c in irredundant]
