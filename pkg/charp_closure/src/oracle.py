"""Brute-force verifiers that share nothing with the Gröbner engine, plus seeded instances."""

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .errors import NotHomogeneous, RingMismatch
from .ideals import IdealHandle
from .polyring import Polynomial, PolynomialRing
from .scalar import Coefficient, Exp, FieldDescriptor

VARIABLE_NAMES = ("x", "y", "z", "w", "s", "t")


def monomials_of_degree(nvars: int, d: int) -> list[Exp]:
    """All exponent vectors of total degree d, lexicographically descending"""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        out.append(tuple(combo.count(i) for i in range(nvars)))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class GradedSlice:
    ring: PolynomialRing
    degree: int
    basis: tuple[Exp, ...]
    # one row per (generator, monomial multiplier) of total degree `degree`
    rows: tuple[tuple[Coefficient, ...], ...]

    def vector(self, f: Polynomial) -> list[Coefficient]:
        return [f.coefficient(m) for m in self.basis]


def graded_slice(ideal: IdealHandle, d: int) -> GradedSlice:
    ring = ideal.ring
    if not ideal.is_homogeneous():
        raise NotHomogeneous(f"{ideal} is not homogeneous")
    basis = tuple(monomials_of_degree(ring.nvars, d))
    rows = []
    for g in ideal.generators:
        k = d - g.degree()
        if k < 0:
            continue
        for m in monomials_of_degree(ring.nvars, k):
            h = g.shift(m)
            rows.append(tuple(h.coefficient(b) for b in basis))
    return GradedSlice(ring, d, basis, tuple(rows))


def _eliminate(row: list[Coefficient], echelon: list[tuple[int, list[Coefficient]]], field: FieldDescriptor) -> list[Coefficient]:
    """Fraction-free: row <- pivot * row - row[pc] * pivot_row for each earlier pivot"""
    for pc, prow in echelon:
        a = row[pc]
        if field.is_zero(a):
            continue
        b = prow[pc]
        row = [field.sub(field.mul(b, x), field.mul(a, y)) for x, y in zip(row, prow)]
    return row


def _echelon(rows: Sequence[Sequence[Coefficient]], field: FieldDescriptor) -> list[tuple[int, list[Coefficient]]]:
    echelon: list[tuple[int, list[Coefficient]]] = []
    for row in rows:
        reduced = _eliminate(list(row), echelon, field)
        pc = next((i for i, x in enumerate(reduced) if not field.is_zero(x)), None)
        if pc is not None:
            echelon.append((pc, reduced))
    return echelon


def linalg_membership(f: Polynomial, ideal: IdealHandle, d: int | None = None) -> bool:
    """f in the span of the degree-d multiples of the generators, by exact elimination"""
    if f.ring != ideal.ring:
        raise RingMismatch(f"{f.ring} vs {ideal.ring}")
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    if f.is_zero():
        return True
    d = f.degree() if d is None else d
    if f.degree() != d:
        raise NotHomogeneous(f"{f} does not have degree {d}")
    field = f.ring.field
    piece = graded_slice(ideal, d)
    echelon = _echelon(piece.rows, field)
    rest = _eliminate(piece.vector(f), echelon, field)
    return all(field.is_zero(x) for x in rest)


def monomial_membership_bruteforce(m: Exp | Polynomial, generators: Sequence[Exp | Polynomial]) -> bool:
    """Some generator divides m"""
    m = _exponent(m)
    return any(all(a <= b for a, b in zip(_exponent(g), m)) for g in generators)


def _exponent(m: Exp | Polynomial) -> Exp:
    if isinstance(m, Polynomial):
        if not m.is_monomial():
            raise ValueError(f"{m} is not a monomial")
        return m.terms[0][0]
    return tuple(m)


# --- seeded instances --------------------------------------------------------------------


class InstanceProfile(NamedTuple):
    p: int = 2
    variables: int = 3
    max_degree: int = 3
    generators: int = 2
    ideals: int = 1
    homogeneous: bool = True


def random_polynomial(rng: random.Random, ring: PolynomialRing, degree: int, terms: int = 3, homogeneous: bool = True) -> Polynomial:
    """Nonzero polynomial without constant term; homogeneous of `degree` when asked"""
    field = ring.field
    while True:
        out: dict[Exp, Coefficient] = {}
        for _ in range(terms):
            d = degree if homogeneous else rng.randint(1, degree)
            cuts = sorted(rng.randint(0, d) for _ in range(ring.nvars - 1))
            e = tuple(b - a for a, b in zip([0] + cuts, cuts + [d]))
            c = field.random_element(rng, allow_zero=False)
            out[e] = field.add(out[e], c) if e in out else c
        f = Polynomial(ring, out)
        if f:
            return f


def random_instance(seed: int, profile: InstanceProfile = InstanceProfile()) -> tuple[PolynomialRing, list[IdealHandle]]:
    """Deterministic for a fixed seed; every ideal is nonzero and proper"""
    rng = random.Random(seed)
    ring = PolynomialRing(FieldDescriptor(profile.p), VARIABLE_NAMES[: profile.variables])
    ideals = []
    for _ in range(profile.ideals):
        gens = [
            random_polynomial(rng, ring, rng.randint(1, profile.max_degree), homogeneous=profile.homogeneous)
            for _ in range(profile.generators)
        ]
        ideals.append(IdealHandle(ring, gens))
    return ring, ideals


def random_member(rng: random.Random, ideal: IdealHandle, degree: int) -> Polynomial:
    """Random homogeneous combination of the generators in the given degree"""
    ring = ideal.ring
    total = ring.zero()
    for g in ideal.generators:
        k = degree - g.degree()
        if k < 0:
            continue
        cofactor = random_polynomial(rng, ring, k) if k > 0 else ring.constant(ring.field.random_element(rng, allow_zero=False))
        total = total + cofactor * g
    return total


def random_monomial_ideal(rng: random.Random, ring: PolynomialRing, count: int = 3, max_degree: int = 4) -> IdealHandle:
    gens = []
    for _ in range(count):
        d = rng.randint(1, max_degree)
        cuts = sorted(rng.randint(0, d) for _ in range(ring.nvars - 1))
        gens.append(ring.monomial(tuple(b - a for a, b in zip([0] + cuts, cuts + [d]))))
    return IdealHandle(ring, gens)


def random_monomial_parameter_ideal(rng: random.Random, ring: PolynomialRing, max_exponent: int = 3) -> list[Polynomial]:
    """Pure powers x_1^a_1, ..., x_n^a_n: a monomial system of parameters"""
    return [ring.monomial(tuple(rng.randint(1, max_exponent) if j == i else 0 for j in range(ring.nvars))) for i in range(ring.nvars)]
