import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from charp_closure.src.config import ResourceBudget, use_budget
from charp_closure.src.errors import EmptyRing, NotMonomial, ResourceLimit
from charp_closure.src.ideals import (
    IdealHandle,
    ideal_colon,
    ideal_intersection,
    ideal_membership,
    is_m_primary,
    krull_dimension,
    monomial_irreducible_decomposition,
    normal_form,
    ring_map_kernel,
    saturation,
)
from charp_closure.src.oracle import InstanceProfile, linalg_membership, random_instance, random_member, random_polynomial
from charp_closure.src.polyring import LEX, PolynomialRing, RingMap, monomial_lcm
from charp_closure.src.scalar import FieldDescriptor


def ideal(ring, *gens):
    return IdealHandle(ring, [ring.parse(g) for g in gens])


def s_polynomial(f, g):
    field = f.ring.field
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = monomial_lcm(lf, lg)
    a = f.shift(tuple(x - y for x, y in zip(lcm, lf)), field.inv(f.leading_coefficient()))
    b = g.shift(tuple(x - y for x, y in zip(lcm, lg)), field.inv(g.leading_coefficient()))
    return a - b


def assert_groebner(ideal_handle):
    basis = ideal_handle.groebner_basis()
    for g in ideal_handle.generators:
        assert normal_form(g, basis).is_zero()
    for i, f in enumerate(basis.elements):
        for g in basis.elements[i + 1 :]:
            assert normal_form(s_polynomial(f, g), basis).is_zero()


@pytest.fixture
def xyz(f2):
    return PolynomialRing(f2, ("x", "y", "z"))


@pytest.fixture
def xy(f2):
    return PolynomialRing(f2, ("x", "y"))


def test_groebner_basis_under_lex():
    ring = PolynomialRing(FieldDescriptor(5), ("x", "y"), LEX)
    basis = ideal(ring, "x^2 - y", "y").groebner_basis()
    assert set(basis.elements) == {ring.parse("x^2"), ring.parse("y")}


def test_groebner_basis_of_twisted_cubic_contains_substitution():
    ring = PolynomialRing(FieldDescriptor(2), ("z", "y", "x"), LEX)
    curve = ideal(ring, "y - x^2", "z - x^3")
    assert_groebner(curve)
    assert curve.contains(ring.parse("z*y - x^5"))
    assert not curve.contains(ring.parse("z - x^2"))


def test_principal_basis_is_itself(xy):
    assert ideal(xy, "x").groebner_basis().elements == (xy.parse("x"),)


def test_normal_form(xy):
    basis = ideal(xy, "x").groebner_basis()
    assert normal_form(xy.parse("x^2"), basis).is_zero()
    assert normal_form(xy.parse("x + y"), basis) == xy.parse("y")


def test_normal_form_modulo_hypersurface_under_lex(f2):
    ring = PolynomialRing(f2, ("x", "y", "z"), LEX)
    basis = ideal(ring, "x^2 + y^3 + z^5").groebner_basis()
    assert normal_form(ring.parse("x^2"), basis) == ring.parse("y^3 + z^5")


def test_membership(xyz):
    assert ideal_membership(xyz.parse("x^3*y^3"), ideal(xyz, "x^4", "y^4", "x^2*y^2"))
    assert not ideal_membership(xyz.parse("x"), ideal(xyz, "y", "z"))
    assert ideal_membership(xyz.zero(), ideal(xyz))


def test_sum_and_product(xyz):
    q1 = ideal(xyz, "x^2", "y^2")
    q2 = ideal(xyz, "x*y", "z^2")
    assert q1 * q2 == ideal(xyz, "x^3*y", "x^2*z^2", "x*y^3", "y^2*z^2")
    assert ideal(xyz, "x") * ideal(xyz, "y") == ideal(xyz, "x*y")
    assert (q1 * ideal(xyz)).is_zero()
    assert q1 + q2 == ideal(xyz, "x^2", "y^2", "x*y", "z^2")


def test_equality_ignores_generating_set(xy):
    assert ideal(xy, "x + y", "y") == ideal(xy, "x", "y")
    assert ideal(xy, "x") != ideal(xy, "y")
    assert ideal(xy, "x^2") <= ideal(xy, "x")


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (("x",), ("y",), ("x*y",)),
        (("x^2",), ("x",), ("x^2",)),
        (("x", "y^2"), ("x^2", "y"), ("x^2", "x*y", "y^2")),
    ],
)
def test_intersection(xy, a, b, expected):
    assert ideal_intersection(ideal(xy, *a), ideal(xy, *b)) == ideal(xy, *expected)


def test_intersection_with_zero(xy):
    assert ideal_intersection(ideal(xy, "x"), ideal(xy)).is_zero()


def test_colon(xy):
    assert ideal_colon(ideal(xy, "x*y"), ideal(xy, "x")) == ideal(xy, "y")
    assert ideal_colon(ideal(xy, "x^2"), ideal(xy, "x^3")).is_unit()
    assert ideal_colon(ideal(xy, "x^2", "y"), ideal(xy, "x", "y")) == ideal(xy, "x", "y")


def test_saturation(xy):
    assert saturation(ideal(xy, "x^2*y"), ideal(xy, "x")) == ideal(xy, "y")
    assert saturation(ideal(xy, "x^2"), ideal(xy, "x")).is_unit()
    assert saturation(ideal(xy, "x*y"), ideal(xy, "1")) == ideal(xy, "x*y")


def test_kernel_of_cusp_parametrization():
    field = FieldDescriptor(5)
    source = PolynomialRing(field, ("X", "Y"))
    target = PolynomialRing(field, ("x",))
    x = target.gen("x")
    kernel = ring_map_kernel(RingMap(source, target, (x**2, x**3)))
    assert kernel == ideal(source, "X^3 - Y^2")


def test_kernel_of_identity_is_zero(xy):
    kernel = ring_map_kernel(RingMap(xy, xy, xy.gens()))
    assert kernel == IdealHandle(xy)


def test_kernel_of_frobenius_modulo_square(f2):
    ring = PolynomialRing(f2, ("x",))
    kernel = ring_map_kernel(RingMap.frobenius(ring, 1), ideal(ring, "x^2"))
    assert kernel == ideal(ring, "x")


def test_krull_dimension(xyz):
    assert krull_dimension(IdealHandle(xyz)) == 3
    assert krull_dimension(ideal(xyz, "x^2 + y^3 + z^5")) == 2
    assert krull_dimension(ideal(xyz, "x", "y", "z")) == 0
    assert krull_dimension(ideal(xyz, "x*y", "x*z")) == 2
    with pytest.raises(EmptyRing):
        krull_dimension(ideal(xyz, "x", "x + 1"))


def test_m_primary(xyz, xy):
    assert is_m_primary(ideal(xyz, "y", "z"), ideal(xyz, "x^2 + y^3 + z^5"))
    assert not is_m_primary(ideal(xy, "y"))
    assert is_m_primary(ideal(xy, "x", "y"))
    assert not is_m_primary(ideal(xy, "1"))


def test_decomposition_of_mixed_monomial_ideal(xy):
    components = monomial_irreducible_decomposition(ideal(xy, "x^2", "x*y"))
    assert len(components) == 2
    assert any(c == ideal(xy, "x") for c in components)
    assert any(c == ideal(xy, "x^2", "y") for c in components)


def test_decomposition_of_irreducible_ideal(xy):
    components = monomial_irreducible_decomposition(ideal(xy, "x^3", "y^5"))
    assert len(components) == 1
    assert components[0] == ideal(xy, "x^3", "y^5")


def test_decomposition_of_product_with_bracket_power(xy):
    # (x, y)(x^2, y^2) = (x, y)^3
    target = ideal(xy, "x", "y") * ideal(xy, "x^2", "y^2")
    components = monomial_irreducible_decomposition(target)
    for c in components:
        assert all(g.is_monomial() and sum(1 for a in g.terms[0][0] if a) == 1 for g in c.generators)
    meet = components[0]
    for c in components[1:]:
        meet = ideal_intersection(meet, c)
    assert meet == target
    assert len(components) == 3


def test_decomposition_rejects_binomials(xy):
    with pytest.raises(NotMonomial):
        monomial_irreducible_decomposition(ideal(xy, "x + y"))


def test_budget_on_degree(xy):
    with use_budget(ResourceBudget(max_basis_size=100, max_degree=3)):
        with pytest.raises(ResourceLimit):
            ideal(xy, "x^4").groebner_basis()


def test_budget_on_basis_size(xyz):
    with use_budget(ResourceBudget(max_basis_size=2, max_degree=100)):
        with pytest.raises(ResourceLimit):
            ideal(xyz, "x", "y", "z").groebner_basis()


def test_concurrent_requests_share_one_basis(xyz):
    target = ideal(xyz, "x^3 + y*z", "y^3 + x*z", "z^3 + x*y")
    with ThreadPoolExecutor(max_workers=4) as pool:
        bases = list(pool.map(lambda _: target.groebner_basis(), range(8)))
    assert all(b is bases[0] for b in bases)


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3, 5])
def test_membership_agrees_with_linear_algebra(p):
    profile = InstanceProfile(p=p, variables=3, max_degree=3, generators=2)
    for seed in range(200 // 3 + 1):
        ring, (target,) = random_instance(seed, profile)
        rng = random.Random(seed)
        assert_groebner(target)
        d = rng.randint(max(g.degree() for g in target.generators), 5)
        member = random_member(rng, target, d)
        assert ideal_membership(member, target)
        assert linalg_membership(member, target)
        f = random_polynomial(rng, ring, d)
        assert ideal_membership(f, target) == linalg_membership(f, target)
