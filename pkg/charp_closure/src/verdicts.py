"""Three-valued verdicts and the replayable certificates they carry."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .ideals import IdealHandle, ideal_membership
from .polyring import Polynomial


class Status(str, Enum):
    IN = "IN"
    OUT = "OUT"
    UNKNOWN = "UNKNOWN"
    PASS = "PASS"
    FAIL = "FAIL"
    RESOURCE_LIMIT = "RESOURCE_LIMIT"


class CertificateKind(str, Enum):
    FROBENIUS = "frobenius"
    TEST_ELEMENT_REFUTATION = "test_element_refutation"
    EVIDENCE_RANGE = "evidence_range"
    IDEAL_EQUALITY = "ideal_equality"
    WITNESS = "witness"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class MembershipClaim:
    """`element in ideal` is `expected`; replayed through the Gröbner engine"""

    element: Polynomial
    ideal: IdealHandle
    expected: bool

    def replay(self) -> bool:
        return ideal_membership(self.element, self.ideal) == self.expected

    def to_dict(self) -> dict[str, Any]:
        return {
            "ring": str(self.ideal.ring),
            "variables": list(self.ideal.ring.variables),
            "generators": [str(g) for g in self.ideal.generators],
            "element": str(self.element),
            "expected": self.expected,
        }


@dataclass(frozen=True, eq=False)
class Certificate:
    kind: CertificateKind = CertificateKind.NONE
    claims: tuple[MembershipClaim, ...] = ()
    exponent: int | None = None
    multiplier: Polynomial | None = None
    witness: Polynomial | None = None
    emax: int | None = None

    def replay(self) -> bool:
        return all(claim.replay() for claim in self.claims)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value}
        if self.exponent is not None:
            out["exponent"] = self.exponent
        if self.multiplier is not None:
            out["multiplier"] = str(self.multiplier)
        if self.witness is not None:
            out["witness"] = str(self.witness)
        if self.emax is not None:
            out["emax"] = self.emax
        out["claims"] = [claim.to_dict() for claim in self.claims]
        return out


NO_CERTIFICATE = Certificate()


@dataclass(frozen=True, eq=False)
class Verdict:
    status: Status
    certificate: Certificate = NO_CERTIFICATE
    narrative: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def verify(self) -> bool:
        return self.certificate.replay()

    @classmethod
    def unknown(cls, emax: int, narrative: str, **details: Any) -> "Verdict":
        return cls(Status.UNKNOWN, Certificate(CertificateKind.EVIDENCE_RANGE, emax=emax), narrative, details)

    def __str__(self) -> str:
        return f"{self.status.value}: {self.narrative}" if self.narrative else self.status.value


def inclusion_claims(small: IdealHandle, big: IdealHandle) -> tuple[MembershipClaim, ...]:
    return tuple(MembershipClaim(g, big, True) for g in small.generators)


def equality_certificate(a: IdealHandle, b: IdealHandle) -> Certificate:
    """Both inclusions, generator by generator"""
    return Certificate(CertificateKind.IDEAL_EQUALITY, inclusion_claims(a, b) + inclusion_claims(b, a))


def separation_certificate(a: IdealHandle, b: IdealHandle) -> Certificate:
    """One generator of a (or b) outside the other ideal; assumes a != b"""
    for g in a.generators:
        if not ideal_membership(g, b):
            return Certificate(CertificateKind.WITNESS, (MembershipClaim(g, b, False),), witness=g)
    for g in b.generators:
        if not ideal_membership(g, a):
            return Certificate(CertificateKind.WITNESS, (MembershipClaim(g, a, False),), witness=g)
    raise ValueError("the ideals are equal")
