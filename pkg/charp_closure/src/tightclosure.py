"""Verdict-based tight closure: multipliers, memberships and the product/containment checks.

Tight closure membership is not decidable from its definition, so every answer here is
three-valued. IN comes from Frobenius closure (I^F lies in I^*), OUT needs a declared test
element, and everything else is reported with the exponent range that was explored.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .errors import EmptyJacobian
from .frobenius import (
    bracket_commute_check,
    bracket_power,
    default_probes,
    find_witness,
    frobenius_closure,
    frobenius_membership,
)
from .ideals import IdealHandle, ideal_colon, ideal_intersection, ideal_membership
from .ideals import monomial_irreducible_decomposition
from .polyring import Polynomial, PolynomialRing, PolyLike, RingMap
from .quotient import QuotientIdeal, RingPresentation, is_parameter_ideal, is_regular_sequence
from .verdicts import (
    Certificate,
    CertificateKind,
    MembershipClaim,
    Status,
    Verdict,
    equality_certificate,
    inclusion_claims,
    separation_certificate,
)

logger = logging.getLogger(__name__)


class TestElementStatus(str, Enum):
    ASSERTED = "asserted"
    JACOBIAN = "jacobian-derived"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class MultiplierCertificate:
    element: Polynomial
    status: TestElementStatus = TestElementStatus.NONE
    admissibility: str = "user-asserted"

    def __post_init__(self) -> None:
        if self.element.is_zero():
            raise ValueError("the multiplier c must be nonzero")

    @property
    def is_test_element(self) -> bool:
        return self.status is not TestElementStatus.NONE

    def to_dict(self) -> dict:
        return {
            "element": str(self.element),
            "status": self.status.value,
            "admissibility": self.admissibility,
        }


def admissibility_evidence(c: Polynomial, ring: RingPresentation) -> tuple[bool | None, str]:
    """Whether c avoids every minimal prime of R: True/False when decided, None otherwise"""
    if ring.is_zero(c):
        return False, "c is zero in R"
    if ring.is_polynomial_ring():
        return True, "exact: nonzero element of a polynomial ring"
    relations = ring.relations
    regular = ideal_colon(relations, IdealHandle(ring.ambient, [c])).issubset(relations)
    principal = len(relations.groebner_basis().elements) == 1
    if principal:
        if regular:
            return True, "exact: nonzerodivisor modulo a principal relation"
        return False, "exact: zero divisor modulo a principal relation"
    if regular:
        return True, "sufficient: c is a nonzerodivisor of R"
    return None, "user-asserted: c is a zero divisor, minimal primes not computed"


def make_multiplier(
    c: PolyLike | str, ring: RingPresentation, status: TestElementStatus = TestElementStatus.ASSERTED
) -> MultiplierCertificate:
    element = ring.element(c)
    admissible, evidence = admissibility_evidence(element, ring)
    if admissible is False:
        raise ValueError(f"{element} is not in R°: {evidence}")
    return MultiplierCertificate(element, status, evidence)


def partial_derivative(f: Polynomial, index: int) -> Polynomial:
    field = f.ring.field
    out = {}
    for e, c in f.terms:
        k = e[index]
        if k % field.characteristic:
            out[e[:index] + (k - 1,) + e[index + 1 :]] = field.mul(c, field.constant(k))
    return Polynomial(f.ring, out)


def jacobian_test_element_candidates(ring: RingPresentation) -> list[MultiplierCertificate]:
    """Admissible partial derivatives of the relations, or their sum when none qualifies"""
    if ring.is_polynomial_ring():
        return [MultiplierCertificate(ring.ambient.one(), TestElementStatus.JACOBIAN, "regular ring")]
    partials: list[Polynomial] = []
    for g in ring.relations.generators:
        for i in range(ring.ambient.nvars):
            d = ring.reduce(partial_derivative(g, i))
            if d and d not in partials:
                partials.append(d)
    if not partials:
        raise EmptyJacobian(f"every partial derivative of the relations of {ring} vanishes")
    out = []
    for d in partials:
        admissible, evidence = admissibility_evidence(d, ring)
        if admissible:
            out.append(MultiplierCertificate(d, TestElementStatus.JACOBIAN, evidence))
    if not out and len(partials) > 1:
        total = ring.reduce(sum(partials[1:], partials[0]))
        if total:
            admissible, evidence = admissibility_evidence(total, ring)
            if admissible:
                out.append(MultiplierCertificate(total, TestElementStatus.JACOBIAN, evidence))
    if not out:
        raise EmptyJacobian(f"no admissible element among the partial derivatives of {ring}")
    logger.debug(f"[TIGHT] jacobian candidates: {', '.join(str(c.element) for c in out)}")
    return out


def tight_membership(x: PolyLike | str, ideal: QuotientIdeal, c: MultiplierCertificate, emax: int) -> Verdict:
    ring = ideal.ring
    x = ring.element(x)
    frob = frobenius_membership(x, ideal, emax)
    if frob.status is Status.IN:
        return Verdict(Status.IN, frob.certificate, f"{frob.narrative}; I^F lies in I^*", {"route": "frobenius"})
    p = ring.characteristic
    evidence = []
    for e in range(emax + 1):
        target = bracket_power(ideal, e).lift
        element = c.element * x.frobenius(e)
        if ideal_membership(element, target):
            evidence.append(e)
        elif c.is_test_element and e >= 1:
            claim = MembershipClaim(element, target, False)
            return Verdict(
                Status.OUT,
                Certificate(CertificateKind.TEST_ELEMENT_REFUTATION, (claim,), exponent=e, multiplier=c.element),
                f"c*x^{p**e} is not in I^[{p**e}] for the test element c = {c.element} ({c.status.value})",
                {"multiplier": c.to_dict()},
            )
    refutations = emax + 1 - len(evidence)
    return Verdict.unknown(
        emax,
        f"c*x^q in I^[q] for {len(evidence)} of {emax + 1} exponents",
        positive_evidence=evidence,
        refutations=refutations,
        multiplier=c.to_dict(),
    )


def special_part_membership(x: PolyLike | str, ideal: QuotientIdeal, emax: int) -> Verdict:
    """IN once x^q1 lies in (m I^[q1])^F; both exponents range up to emax"""
    ring = ideal.ring
    x = ring.element(x)
    if ring.is_zero(x):
        claim = MembershipClaim(x, ideal.lift, True)
        return Verdict(Status.IN, Certificate(CertificateKind.FROBENIUS, (claim,), exponent=0), "x = 0")
    m = ring.maximal_ideal()
    p = ring.characteristic
    for e1 in range(emax + 1):
        inner = frobenius_membership(x.frobenius(e1), m * bracket_power(ideal, e1), emax)
        if inner.status is Status.IN:
            return Verdict(
                Status.IN,
                inner.certificate,
                f"x^{p**e1} lies in (m I^[{p**e1}])^F",
                {"outer_exponent": e1, "inner_exponent": inner.certificate.exponent},
            )
    return Verdict.unknown(emax, f"no q1, q <= {p**emax} certifies x^q1 in (m I^[q1])^F")


# --- identity checks ---------------------------------------------------------------------


def _frobenius_layer(
    ideals: dict[str, QuotientIdeal], emax: int, window: int, probes: Sequence[Polynomial], probe_degree: int
) -> dict[str, dict]:
    """Closure candidate or probe witness for each named ideal"""
    layer = {}
    prime = ideals[next(iter(ideals))].ring.field.is_prime_field
    for name, ideal in ideals.items():
        if prime:
            chain = frobenius_closure(ideal, emax, window)
            layer[name] = {
                "closure": chain.closure,
                "stable": chain.stable,
                "closed": chain.closure == ideal,
                "summary": chain.summary(),
            }
        else:
            candidates = list(probes) + default_probes(ideal, probe_degree)
            hit = find_witness(ideal, candidates, emax)
            layer[name] = {"witness": hit, "closed": hit is None, "probes": len(candidates)}
    return layer


def _describe(layer: dict[str, dict]) -> dict[str, str]:
    out = {}
    for name, info in layer.items():
        if "summary" in info:
            out[name] = info["summary"]
        elif info["witness"] is not None:
            x, e = info["witness"]
            out[name] = f"not Frobenius closed: witness ({x}, {e})"
        else:
            out[name] = f"no witness among {info['probes']} probes"
    return out


def product_identity_check(
    q1: QuotientIdeal,
    q2: QuotientIdeal,
    emax: int,
    window: int,
    multiplier: MultiplierCertificate | None = None,
    probes: Sequence[PolyLike | str] = (),
    probe_degree: int = 2,
) -> Verdict:
    """Compare (q1 q2)^F with q1^F q2^F, plus containment and parameter diagnostics"""
    ring = q1.ring
    product = q1 * q2
    probes = [ring.element(x) for x in probes]
    details: dict = {
        "q1_in_q2": q1.issubset(q2),
        "q1_parameter_ideal": is_parameter_ideal(q1),
        "q2_parameter_ideal": is_parameter_ideal(q2),
    }
    if not details["q1_in_q2"]:
        details["hypothesis"] = "q1 is not contained in q2"
    layer = _frobenius_layer({"q1q2": product, "q1": q1, "q2": q2}, emax, window, probes, probe_degree)
    details["frobenius"] = _describe(layer)

    if ring.field.is_prime_field:
        left = layer["q1q2"]["closure"]
        right = layer["q1"]["closure"] * layer["q2"]["closure"]
        stable = all(info["stable"] for info in layer.values())
        if left == right:
            status = Status.PASS if stable else Status.UNKNOWN
            verdict = Verdict(status, equality_certificate(left.lift, right.lift), "(q1q2)^F = q1^F q2^F", details)
        else:
            status = Status.FAIL if stable else Status.UNKNOWN
            verdict = Verdict(status, separation_certificate(left.lift, right.lift), "(q1q2)^F != q1^F q2^F", details)
    else:
        hit = layer["q1q2"]["witness"]
        if hit is None:
            verdict = Verdict(
                Status.PASS,
                Certificate(CertificateKind.EVIDENCE_RANGE, emax=emax),
                "no witness against the product identity (sampled evidence)",
                details,
            )
        else:
            x, e = hit
            target = bracket_power(product, e).lift
            claims = (MembershipClaim(x.frobenius(e), target, True), MembershipClaim(x, product.lift, False))
            certificate = Certificate(CertificateKind.WITNESS, claims, exponent=e, witness=x)
            if layer["q1"]["closed"] and layer["q2"]["closed"]:
                verdict = Verdict(
                    Status.FAIL,
                    certificate,
                    f"q1q2 is not Frobenius closed (witness {x}) while q1, q2 show no witness (sampled evidence)",
                    details,
                )
            else:
                verdict = Verdict(Status.UNKNOWN, certificate, "q1q2 and its factors all have witnesses", details)

    if multiplier is not None:
        tight = {}
        for x in probes:
            if not product.contains(x):
                tight[str(x)] = tight_membership(x, product, multiplier, emax).status.value
        verdict.details["tight"] = tight
    logger.info(f"[TIGHT] product identity for {q1} * {q2}: {verdict.status.value}")
    return verdict


def power_identity_check(
    q: QuotientIdeal, emax: int, window: int, probes: Sequence[PolyLike | str] = (), probe_degree: int = 2
) -> Verdict:
    """Compare (q^2)^F with (q^F)^2"""
    verdict = product_identity_check(q, q, emax, window, probes=probes, probe_degree=probe_degree)
    narrative = verdict.narrative.replace("(q1q2)^F", "(q^2)^F").replace("q1^F q2^F", "(q^F)^2")
    return Verdict(verdict.status, verdict.certificate, narrative, verdict.details)


def briancon_skoda_check(
    q: QuotientIdeal,
    multiplier: MultiplierCertificate | None,
    emax: int,
    window: int,
    probes: Sequence[PolyLike | str] = (),
    probe_degree: int = 2,
) -> Verdict:
    """Decidable surrogate (q^2)^F in q, plus tight-closure evidence on probes of q^2"""
    ring = q.ring
    square = q * q
    details: dict = {"parameter_ideal": is_parameter_ideal(q)}
    probes = [ring.element(x) for x in probes]
    verdict = None
    if ring.field.is_prime_field:
        chain = frobenius_closure(square, emax, window)
        details["chain"] = chain.summary()
        outside = [g for g in chain.closure.generators if not q.contains(g)]
        if outside:
            x = outside[0]
            e = next(e for e, entry in chain.entries if entry.contains(x))
            claims = (
                MembershipClaim(x.frobenius(e), bracket_power(square, e).lift, True),
                MembershipClaim(x, q.lift, False),
            )
            verdict = Verdict(
                Status.FAIL,
                Certificate(CertificateKind.WITNESS, claims, exponent=e, witness=x),
                f"(q^2)^F contains {x} outside q",
                details,
            )
        else:
            status = Status.PASS if chain.stable else Status.UNKNOWN
            certificate = Certificate(CertificateKind.IDEAL_EQUALITY, inclusion_claims(chain.closure.lift, q.lift))
            verdict = Verdict(status, certificate, "(q^2)^F lies in q", details)
    else:
        candidates = probes + default_probes(square, probe_degree)
        for x in candidates:
            if q.contains(x):
                continue
            hit = find_witness(square, [x], emax)
            if hit:
                e = hit[1]
                target = bracket_power(square, e).lift
                claims = (MembershipClaim(x.frobenius(e), target, True), MembershipClaim(x, q.lift, False))
                verdict = Verdict(
                    Status.FAIL,
                    Certificate(CertificateKind.WITNESS, claims, exponent=e, witness=x),
                    f"{x} lies in (q^2)^F but not in q",
                    details,
                )
                break
        if verdict is None:
            verdict = Verdict(
                Status.PASS,
                Certificate(CertificateKind.EVIDENCE_RANGE, emax=emax),
                f"no element of (q^2)^F outside q among {len(candidates)} probes (sampled evidence)",
                details,
            )
    if multiplier is not None:
        evidence = {}
        for x in probes or default_probes(square, probe_degree):
            if not q.contains(x):
                evidence[str(x)] = tight_membership(x, square, multiplier, emax).status.value
        verdict.details["tight"] = evidence
    return verdict


def colon_socle_bound(q: QuotientIdeal) -> QuotientIdeal:
    """q : m, a lower bound for q^* when R is Gorenstein and not F-rational"""
    return q.colon(q.ring.maximal_ideal())


def monomial_product_decomposition(q: QuotientIdeal, e: int) -> Verdict:
    """Decompose (X)(X)^[p^e] in F_p[X_1..X_t], map X_i to the generators of q, re-intersect"""
    ring = q.ring
    t = len(q.generators)
    names = tuple(f"X{i + 1}" for i in range(t))
    aux = PolynomialRing(ring.field, names)
    xs = aux.gens()
    qq = aux.characteristic**e
    monomial = IdealHandle(aux, [a * b**qq for a in xs for b in xs])
    components = monomial_irreducible_decomposition(monomial)
    to_ring = RingMap(aux, ring.ambient, q.generators)
    mapped = [QuotientIdeal(ring, [to_ring(g) for g in comp.generators]) for comp in components]
    meet = mapped[0].lift
    for comp in mapped[1:]:
        meet = ideal_intersection(meet, comp.lift)
    target = (q * bracket_power(q, e)).lift
    details = {
        "components": [str(c) for c in components],
        "mapped": [str(c) for c in mapped],
        "regular_sequence": is_regular_sequence(q.generators, ring),
    }
    if meet == target:
        return Verdict(Status.PASS, equality_certificate(meet, target), "q q^[q] is the intersection of the mapped components", details)
    return Verdict(Status.FAIL, separation_certificate(meet, target), "mapped components do not intersect to q q^[q]", details)


def rationality_conditions_check(q1: QuotientIdeal, q2: QuotientIdeal, emax: int, window: int) -> Verdict:
    """Frobenius-side conditions for one sampled pair q1 in q2"""
    parts = {}
    notes = {}
    if q1.ring.field.is_prime_field:
        parts["bracket_commute"] = bracket_commute_check(q1, emax, window)
    else:
        notes["bracket_commute"] = "skipped: needs a prime coefficient field"
    parts["product_identity"] = product_identity_check(q1, q2, emax, window)
    parts["product_with_bracket"] = product_identity_check(q1, bracket_power(q1, 1), emax, window)
    statuses = [v.status for v in parts.values()]
    if Status.FAIL in statuses:
        status = Status.FAIL
    elif all(s is Status.PASS for s in statuses):
        status = Status.PASS
    else:
        status = Status.UNKNOWN
    claims = tuple(claim for v in parts.values() for claim in v.certificate.claims)
    details = {name: f"{v.status.value}: {v.narrative}" for name, v in parts.items()} | notes
    return Verdict(
        status,
        Certificate(CertificateKind.IDEAL_EQUALITY if status is Status.PASS else CertificateKind.WITNESS, claims),
        "sampled evidence for one pair; says nothing about every parameter ideal",
        details,
    )
