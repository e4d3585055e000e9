import random

import pytest

from charp_closure.src.errors import EmptyJacobian
from charp_closure.src.frobenius import bracket_power, frobenius_membership
from charp_closure.src.ideals import ideal_intersection, monomial_irreducible_decomposition
from charp_closure.src.oracle import (
    InstanceProfile,
    linalg_membership,
    monomial_membership_bruteforce,
    monomials_of_degree,
    random_instance,
    random_member,
    random_monomial_parameter_ideal,
    random_polynomial,
)
from charp_closure.src.polyring import PolynomialRing
from charp_closure.src.quotient import quotient_ring
from charp_closure.src.scalar import FieldDescriptor
from charp_closure.src.tightclosure import (
    MultiplierCertificate,
    TestElementStatus,
    briancon_skoda_check,
    colon_socle_bound,
    jacobian_test_element_candidates,
    make_multiplier,
    monomial_product_decomposition,
    partial_derivative,
    power_identity_check,
    product_identity_check,
    rationality_conditions_check,
    special_part_membership,
    tight_membership,
)
from charp_closure.src.verdicts import CertificateKind, Status


@pytest.fixture
def cusp():
    """F_5[x, y]/(x^2 - y^3)"""
    return quotient_ring(PolynomialRing(FieldDescriptor(5), ("x", "y")), ["x^2 - y^3"])


def test_partial_derivative_drops_multiples_of_p(f2):
    ring = PolynomialRing(f2, ("x", "y", "z"))
    f = ring.parse("x^2 + y^3 + z^5")
    assert partial_derivative(f, 0).is_zero()
    assert partial_derivative(f, 1) == ring.parse("y^2")
    assert partial_derivative(f, 2) == ring.parse("z^4")


def test_jacobian_candidates_of_polynomial_ring(f2xy):
    (c,) = jacobian_test_element_candidates(f2xy)
    assert c.element == 1
    assert c.status is TestElementStatus.JACOBIAN


def test_jacobian_candidates_of_cusp(cusp):
    elements = [c.element for c in jacobian_test_element_candidates(cusp)]
    assert elements == [cusp.element("2*x"), cusp.element("2*y^2")]


def test_jacobian_candidates_of_hypersurface(hypersurface):
    candidates = jacobian_test_element_candidates(hypersurface)
    assert [str(c.element) for c in candidates] == ["y^2", "z^4"]
    assert all(c.admissibility.startswith("exact") for c in candidates)


def test_jacobian_of_double_line_is_empty(f2):
    ring = quotient_ring(PolynomialRing(f2, ("x", "y")), ["x^2"])
    with pytest.raises(EmptyJacobian):
        jacobian_test_element_candidates(ring)


def test_multiplier_must_be_nonzero(f2xy):
    with pytest.raises(ValueError):
        MultiplierCertificate(f2xy.ambient.zero())
    with pytest.raises(ValueError):
        make_multiplier("0", f2xy)


def test_multiplier_admissibility_on_crossing_lines(crossing):
    with pytest.raises(ValueError, match="zero divisor"):
        make_multiplier("x", crossing)
    c = make_multiplier("x + y", crossing)
    assert c.status is TestElementStatus.ASSERTED
    assert c.is_test_element
    assert c.to_dict() == {
        "element": "x + y",
        "status": "asserted",
        "admissibility": "exact: nonzerodivisor modulo a principal relation",
    }


def test_tight_membership_in_via_frobenius(hypersurface):
    c = jacobian_test_element_candidates(hypersurface)[0]
    verdict = tight_membership("x", hypersurface.ideal(["y", "z"]), c, emax=2)
    assert verdict.status is Status.IN
    assert verdict.details["route"] == "frobenius"
    assert verdict.verify()


def test_tight_membership_refuted_by_test_element(f2xyz):
    (c,) = jacobian_test_element_candidates(f2xyz)
    verdict = tight_membership("x", f2xyz.ideal(["y", "z"]), c, emax=1)
    assert verdict.status is Status.OUT
    assert verdict.certificate.kind is CertificateKind.TEST_ELEMENT_REFUTATION
    assert verdict.certificate.exponent == 1
    assert verdict.certificate.multiplier == f2xyz.element("1")
    assert "jacobian-derived" in verdict.narrative
    assert verdict.verify()


def test_tight_refutation_needs_a_positive_exponent(f2xyz):
    (c,) = jacobian_test_element_candidates(f2xyz)
    verdict = tight_membership("x", f2xyz.ideal(["y", "z"]), c, emax=0)
    assert verdict.status is Status.UNKNOWN
    assert verdict.details["refutations"] == 1


def test_tight_membership_without_test_element_stays_unknown(f2xyz):
    c = MultiplierCertificate(f2xyz.element("1"))
    verdict = tight_membership("x", f2xyz.ideal(["y", "z"]), c, emax=2)
    assert verdict.status is Status.UNKNOWN
    assert verdict.details["positive_evidence"] == []
    assert verdict.details["refutations"] == 3


def test_tight_membership_on_crossing_lines(crossing):
    g1 = crossing.ideal(["(x + u*y)*(x^2 + u^2*y^2)"])
    c = make_multiplier("x + y", crossing)
    verdict = tight_membership("x^3", g1, c, emax=4)
    assert verdict.status is Status.UNKNOWN
    assert verdict.details["positive_evidence"] == [0, 1, 2, 3, 4]
    assert verdict.certificate.emax == 4


def test_special_part_membership(f2xyz):
    q = f2xyz.ideal(["y", "z"])
    verdict = special_part_membership("x*y", q, emax=2)
    assert verdict.status is Status.IN
    assert verdict.details == {"outer_exponent": 0, "inner_exponent": 0}

    assert special_part_membership("0", q, emax=2).status is Status.IN
    assert special_part_membership("x", q, emax=3).status is Status.UNKNOWN


def test_special_part_inner_exponent_uses_full_range(f2):
    ring = quotient_ring(PolynomialRing(f2, ("x", "y")), ["x^8"])
    verdict = special_part_membership("x", ring.ideal(["y"]), emax=2)
    assert verdict.status is Status.IN
    assert verdict.details == {"outer_exponent": 1, "inner_exponent": 2}
    assert verdict.verify()


def test_product_identity_in_regular_ring(f2xy):
    m = f2xy.maximal_ideal()
    verdict = product_identity_check(m, m, emax=3, window=1)
    assert verdict.status is Status.PASS
    assert verdict.details["q1_in_q2"]
    assert verdict.details["q1_parameter_ideal"]
    assert "hypothesis" not in verdict.details
    assert set(verdict.details["frobenius"]) == {"q1q2", "q1", "q2"}
    assert verdict.verify()


def test_product_identity_reports_failed_hypothesis(f2xy):
    verdict = product_identity_check(f2xy.ideal(["x"]), f2xy.ideal(["y"]), emax=2, window=1)
    assert not verdict.details["q1_in_q2"]
    assert verdict.details["hypothesis"] == "q1 is not contained in q2"
    assert verdict.status is Status.PASS


def test_product_identity_with_multiplier(f2xy):
    (c,) = jacobian_test_element_candidates(f2xy)
    m = f2xy.maximal_ideal()
    verdict = product_identity_check(m, m, emax=2, window=1, multiplier=c, probes=["x", "x^2"])
    assert verdict.details["tight"] == {"x": "OUT"}


def test_power_identity(f2xy):
    verdict = power_identity_check(f2xy.maximal_ideal(), emax=3, window=1)
    assert verdict.status is Status.PASS
    assert "(q^2)^F" in verdict.narrative


def test_briancon_skoda_surrogate(f2xy):
    verdict = briancon_skoda_check(f2xy.maximal_ideal(), None, emax=3, window=1)
    assert verdict.status is Status.PASS
    assert verdict.details["parameter_ideal"]
    assert verdict.verify()


def test_briancon_skoda_failure_certifies_both_sides(f2):
    ring = quotient_ring(PolynomialRing(f2, ("x", "y")), ["x^2"])
    verdict = briancon_skoda_check(ring.ideal(["y"]), None, emax=3, window=1)
    assert verdict.status is Status.FAIL
    assert verdict.certificate.witness == ring.element("x")
    assert verdict.certificate.exponent == 1
    assert [claim.expected for claim in verdict.certificate.claims] == [True, False]
    assert verdict.verify()


def test_colon_socle_bound(hypersurface, f2xy):
    assert colon_socle_bound(hypersurface.ideal(["y", "z"])) == hypersurface.maximal_ideal()
    assert colon_socle_bound(f2xy.maximal_ideal()).is_unit()


def test_monomial_product_decomposition_in_regular_ring(f2xy):
    verdict = monomial_product_decomposition(f2xy.maximal_ideal(), 1)
    assert verdict.status is Status.PASS
    assert verdict.details["regular_sequence"]
    assert verdict.verify()


def test_monomial_product_decomposition_for_parameters_of_hypersurface(hypersurface):
    verdict = monomial_product_decomposition(hypersurface.ideal(["y", "z"]), 1)
    assert verdict.status is Status.PASS
    assert verdict.details["regular_sequence"]


def test_rationality_conditions_in_regular_ring(f2xy):
    verdict = rationality_conditions_check(f2xy.ideal(["x^2", "y^2"]), f2xy.maximal_ideal(), emax=3, window=1)
    assert verdict.status is Status.PASS
    assert set(verdict.details) == {"bracket_commute", "product_identity", "product_with_bracket"}


@pytest.mark.slow
@pytest.mark.parametrize("e", [1, 2])
def test_decomposition_of_maximal_ideal_times_its_bracket(f2xyz, e):
    q = f2xyz.maximal_ideal()
    verdict = monomial_product_decomposition(q, e)
    assert verdict.status is Status.PASS
    assert verdict.verify()

    product = (q * bracket_power(q, e)).lift
    components = monomial_irreducible_decomposition(product)
    for component in components:
        for g in component.generators:
            assert g.is_monomial()
            assert sum(1 for k in g.leading_monomial() if k) == 1
    meet = components[0]
    for component in components[1:]:
        meet = ideal_intersection(meet, component)
    assert meet == product

    ambient = f2xyz.ambient
    for d in range(1, 9):
        for exps in monomials_of_degree(ambient.nvars, d):
            in_product = linalg_membership(ambient.monomial(exps), product, d)
            in_components = all(monomial_membership_bruteforce(exps, c.generators) for c in components)
            assert in_product == in_components, exps


REGULAR_RINGS = [(2, ("x", "y", "z")), (3, ("x", "y"))]


@pytest.mark.slow
@pytest.mark.parametrize("p, variables", REGULAR_RINGS)
def test_product_identity_on_random_parameter_pairs(p, variables):
    ring = quotient_ring(PolynomialRing(FieldDescriptor(p), variables))
    rng = random.Random(4 + p)
    for _ in range(50):
        q1 = ring.ideal(random_monomial_parameter_ideal(rng, ring.ambient))
        q2 = ring.ideal(random_monomial_parameter_ideal(rng, ring.ambient))
        verdict = product_identity_check(q1, q2, emax=1, window=1)
        assert verdict.status is Status.PASS, verdict.details
        assert verdict.details["q1_parameter_ideal"]
        assert verdict.details["q2_parameter_ideal"]


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_tight_verdicts_in_regular_rings(p):
    profile = InstanceProfile(p=p, variables=3, max_degree=2, generators=2)
    for seed in range(20):
        ambient, (generators,) = random_instance(seed, profile)
        ring = quotient_ring(ambient)
        q = ring.ideal(generators.generators)
        (c,) = jacobian_test_element_candidates(ring)
        rng = random.Random(seed)

        member = random_member(rng, generators, 3)
        assert tight_membership(member, q, c, emax=1).status is Status.IN

        x = random_polynomial(rng, ambient, 2)
        frob = frobenius_membership(x, q, 1)
        tight = tight_membership(x, q, c, emax=1)
        if frob.status is Status.IN:
            assert tight.status is Status.IN
        else:
            assert tight.status is Status.OUT
        assert tight.verify()

        bigger = q + ring.ideal([random_polynomial(rng, ambient, 1)])
        for element in (member, x):
            if tight_membership(element, q, c, emax=1).status is Status.IN:
                assert tight_membership(element, bigger, c, emax=1).status is Status.IN
