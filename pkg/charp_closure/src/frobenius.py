"""Bracket powers, Frobenius preimages and Frobenius closure chains."""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import NonPerfectCoefficients
from .ideals import IdealHandle, ideal_membership, is_m_primary, normal_form, ring_map_kernel
from .polyring import Polynomial, PolyLike, RingMap
from .quotient import QuotientIdeal, RingPresentation
from .scalar import Exp
from .verdicts import (
    Certificate,
    CertificateKind,
    MembershipClaim,
    Status,
    Verdict,
    equality_certificate,
    separation_certificate,
)

logger = logging.getLogger(__name__)


def bracket_power(ideal: QuotientIdeal, e: int) -> QuotientIdeal:
    """I^[p^e], generated by the p^e-th powers of the given generators"""
    if e == 0:
        return ideal
    return QuotientIdeal(ideal.ring, [g.frobenius(e) for g in ideal.generators])


# --- preimages ------------------------------------------------------------------------


def _monomials_of_degree(nvars: int, d: int) -> Iterable[Exp]:
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        yield tuple(combo.count(i) for i in range(nvars))


def _nullspace_mod_p(columns: Sequence[dict[Exp, int]], p: int) -> list[list[int]]:
    """Basis of {c : sum c_j * columns[j] = 0} over F_p"""
    rows = sorted({e for col in columns for e in col})
    index = {e: i for i, e in enumerate(rows)}
    n = len(columns)
    # one matrix row per monomial, one column per unknown
    matrix = [[0] * n for _ in rows]
    for j, col in enumerate(columns):
        for e, c in col.items():
            matrix[index[e]][j] = c % p
    pivots: list[int] = []
    r = 0
    for j in range(n):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][j]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = pow(matrix[r][j], -1, p)
        matrix[r] = [x * inv % p for x in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][j]:
                f = matrix[i][j]
                matrix[i] = [(x - f * y) % p for x, y in zip(matrix[i], matrix[r])]
        pivots.append(j)
        r += 1
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        vec = [0] * n
        vec[free] = 1
        for row, pj in enumerate(pivots):
            vec[pj] = -matrix[row][free] % p
        basis.append(vec)
    return basis


def _monomial_preimage(ideal: IdealHandle, q: int) -> IdealHandle:
    ring = ideal.ring
    gens = []
    for g in ideal.generators:
        alpha = g.terms[0][0]
        gens.append(ring.monomial(tuple(-(-a // q) for a in alpha)))
    return IdealHandle(ring, gens)


def _is_normal(e: Exp, lms: Sequence[Exp]) -> bool:
    return not any(all(a <= b for a, b in zip(lm, e)) for lm in lms)


def _nilpotency_index(ideal: IdealHandle) -> int | None:
    """Smallest s with m^s inside a zero-dimensional ideal, None if there is none"""
    basis = ideal.groebner_basis()
    ring = ideal.ring
    lms = basis.leading_monomials()
    colength = 0
    s = 0
    while True:
        normal = sum(1 for e in _monomials_of_degree(ring.nvars, s) if _is_normal(e, lms))
        if not normal:
            break
        colength += normal
        s += 1
    if all(g.is_homogeneous() for g in basis.elements):
        return s
    # m^colength lies in K exactly when K is primary to the variable ideal
    while s <= colength:
        if all(normal_form(ring.monomial(e), basis).is_zero() for e in _monomials_of_degree(ring.nvars, s)):
            return s
        s += 1
    return None


def _linear_preimage(ideal: IdealHandle, e: int, s: int) -> IdealHandle:
    """Kernel of f -> NF(f^q) on forms of degree < D, plus m^D, where m^(qD) lies in the ideal"""
    ring = ideal.ring
    p = ring.characteristic
    q = p**e
    bound = -(-s // q)
    basis = ideal.groebner_basis()
    monomials = [m for d in range(bound) for m in _monomials_of_degree(ring.nvars, d)]
    columns = [normal_form(ring.monomial(tuple(q * x for x in m)), basis).to_dict() for m in monomials]
    gens = [
        Polynomial(ring, {m: c for m, c in zip(monomials, vec) if c})
        for vec in _nullspace_mod_p(columns, p)
    ]
    gens.extend(ring.monomial(m) for m in _monomials_of_degree(ring.nvars, bound))
    logger.debug(f"[FROBENIUS] linear preimage: m^{s} in K, {len(monomials)} unknowns below degree {bound}")
    return IdealHandle(ring, gens)


def frobenius_preimage(ideal: IdealHandle, e: int) -> IdealHandle:
    """{f : f^(p^e) in ideal}; needs a prime coefficient field"""
    ring = ideal.ring
    if not ring.field.is_prime_field:
        raise NonPerfectCoefficients(f"no Frobenius preimages over {ring.field}")
    if e == 0 or ideal.is_zero():
        # the zero ideal of a polynomial ring is its own preimage
        return ideal
    if ideal.is_unit():
        return IdealHandle(ring, [ring.one()])
    if ideal.is_monomial():
        return _monomial_preimage(ideal, ring.characteristic**e)
    if is_m_primary(ideal):
        s = _nilpotency_index(ideal)
        if s is not None:
            return _linear_preimage(ideal, e, s)
    return ring_map_kernel(RingMap.frobenius(ring, e), ideal)


# --- closure chains -------------------------------------------------------------------


@dataclass
class ClosureChain:
    """C_e = {x : x^(p^e) in I^[p^e]} for e = 0, 1, ...; `stable` once window+1 entries agree"""

    base: QuotientIdeal
    window: int
    entries: list[tuple[int, QuotientIdeal]] = field(default_factory=list)
    stable: bool = False

    @property
    def closure(self) -> QuotientIdeal:
        return self.entries[-1][1]

    @property
    def last_exponent(self) -> int:
        return self.entries[-1][0]

    def append(self, e: int, ideal: QuotientIdeal) -> None:
        self.entries.append((e, ideal))
        tail = self.entries[-(self.window + 1) :]
        self.stable = len(tail) == self.window + 1 and all(c == ideal for _, c in tail[:-1])

    def summary(self) -> str:
        label = "stable (window-certified)" if self.stable else "not stable"
        return f"{self.closure} after e={self.last_exponent}, {label}"


def _require_prime_field(ring: RingPresentation) -> None:
    if not ring.field.is_prime_field:
        raise NonPerfectCoefficients(f"Frobenius closure chains need a prime field, not {ring.field}")


def closure_entry(ideal: QuotientIdeal, e: int) -> QuotientIdeal:
    """C_e: the preimage of I^[p^e] + J under the e-th Frobenius, read back in R"""
    preimage = frobenius_preimage(bracket_power(ideal, e).lift, e)
    return QuotientIdeal(ideal.ring, preimage.generators)


def frobenius_closure(ideal: QuotientIdeal, emax: int, window: int) -> ClosureChain:
    _require_prime_field(ideal.ring)
    chain = ClosureChain(ideal, window)
    for e in range(emax + 1):
        chain.append(e, closure_entry(ideal, e))
        if chain.stable:
            break
    logger.debug(f"[FROBENIUS] chain of {ideal}: {chain.summary()}")
    return chain


# --- memberships and checks ------------------------------------------------------------


def frobenius_membership(x: PolyLike | str, ideal: QuotientIdeal, emax: int) -> Verdict:
    """IN at the first e <= emax with x^(p^e) in I^[p^e]; UNKNOWN otherwise, never OUT"""
    x = ideal.ring.element(x)
    p = ideal.ring.characteristic
    for e in range(emax + 1):
        target = bracket_power(ideal, e).lift
        power = x.frobenius(e)
        if ideal_membership(power, target):
            claim = MembershipClaim(power, target, True)
            return Verdict(
                Status.IN,
                Certificate(CertificateKind.FROBENIUS, (claim,), exponent=e),
                f"x^{p**e} lies in I^[{p**e}]",
            )
    return Verdict.unknown(emax, f"x^q not in I^[q] for q <= {p**emax}")


def default_probes(ideal: QuotientIdeal, degree: int) -> list[Polynomial]:
    """Normal monomials outside I up to the larger of `degree` and the generator degrees"""
    ring = ideal.ring
    ambient = ring.ambient
    top = max([degree] + [g.degree() for g in ideal.generators])
    lms = ring.relations.groebner_basis().leading_monomials()
    probes = []
    for d in range(1, top + 1):
        for e in sorted(_monomials_of_degree(ambient.nvars, d), key=ambient.key):
            if any(all(a <= b for a, b in zip(lm, e)) for lm in lms):
                continue
            m = ambient.monomial(e)
            if not ideal.contains(m):
                probes.append(m)
    return probes


def _witness_verdict(x: Polynomial, e: int, ideal: QuotientIdeal, method: str) -> Verdict:
    p = ideal.ring.characteristic
    target = bracket_power(ideal, e).lift
    claims = (MembershipClaim(x.frobenius(e), target, True), MembershipClaim(x, ideal.lift, False))
    return Verdict(
        Status.OUT,
        Certificate(CertificateKind.WITNESS, claims, exponent=e, witness=x),
        f"{x} is outside I but its {p**e}-th power lies in I^[{p**e}] ({method})",
        {"witness": str(x), "exponent": e, "method": method},
    )


def find_witness(ideal: QuotientIdeal, probes: Iterable[Polynomial], emax: int) -> tuple[Polynomial, int] | None:
    """First probe x outside I with x^(p^e) in I^[p^e] for some 1 <= e <= emax"""
    brackets = {}
    for x in probes:
        if ideal.contains(x):
            continue
        for e in range(1, emax + 1):
            if e not in brackets:
                brackets[e] = bracket_power(ideal, e).lift
            if ideal_membership(x.frobenius(e), brackets[e]):
                return x, e
    return None


def is_frobenius_closed(
    ideal: QuotientIdeal,
    emax: int,
    window: int,
    probes: Sequence[PolyLike | str] = (),
    probe_degree: int = 2,
) -> Verdict:
    """OUT with a witness (x, e), or IN from a stable chain / an exhausted probe set"""
    ring = ideal.ring
    user = [ring.element(x) for x in probes]
    hit = find_witness(ideal, user, emax)
    if hit:
        return _witness_verdict(*hit, ideal, "user probe")
    if not ring.field.is_prime_field:
        candidates = default_probes(ideal, probe_degree)
        hit = find_witness(ideal, candidates, emax)
        if hit:
            return _witness_verdict(*hit, ideal, "probe search")
        return Verdict(
            Status.IN,
            Certificate(CertificateKind.EVIDENCE_RANGE, emax=emax),
            f"no witness among {len(candidates) + len(user)} probes (sampled evidence)",
            {"method": "probe search", "probes": len(candidates) + len(user)},
        )
    ambient = ring.ambient
    chain = ClosureChain(ideal, window)
    for e in range(emax + 1):
        entry = closure_entry(ideal, e)
        outside = [g for g in entry.generators if not ideal.contains(g)]
        if outside:
            x = min(outside, key=lambda g: (g.degree(), ambient.key(g.terms[0][0])))
            return _witness_verdict(x, e, ideal, "closure chain")
        chain.append(e, entry)
        if chain.stable:
            break
    details = {"method": "closure chain", "chain": chain.summary()}
    if chain.stable:
        return Verdict(
            Status.IN,
            equality_certificate(chain.closure.lift, ideal.lift),
            "closure chain stable at I (window-certified)",
            details,
        )
    return Verdict.unknown(emax, "closure chain did not stabilize", **details)


def bracket_commute_check(ideal: QuotientIdeal, emax: int, window: int) -> Verdict:
    """Compare (I^F)^[p] with (I^[p])^F"""
    ring = ideal.ring
    _require_prime_field(ring)
    closure_first = frobenius_closure(ideal, emax, window)
    bracket_first = frobenius_closure(bracket_power(ideal, 1), emax, window)
    left = bracket_power(closure_first.closure, 1)
    right = bracket_first.closure
    details = {
        "closure_then_bracket": str(left),
        "bracket_then_closure": str(right),
        "chains": [closure_first.summary(), bracket_first.summary()],
    }
    if left == right:
        status = Status.PASS if closure_first.stable and bracket_first.stable else Status.UNKNOWN
        return Verdict(status, equality_certificate(left.lift, right.lift), "(I^F)^[p] = (I^[p])^F", details)
    status = Status.FAIL if closure_first.stable and bracket_first.stable else Status.UNKNOWN
    return Verdict(status, separation_certificate(left.lift, right.lift), "(I^F)^[p] != (I^[p])^F", details)
