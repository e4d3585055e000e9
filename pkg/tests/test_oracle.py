import itertools
import random

import pytest

from charp_closure.src.errors import NotHomogeneous
from charp_closure.src.ideals import IdealHandle, ideal_membership
from charp_closure.src.oracle import (
    InstanceProfile,
    linalg_membership,
    monomial_membership_bruteforce,
    monomials_of_degree,
    random_instance,
    random_monomial_parameter_ideal,
)
from charp_closure.src.polyring import PolynomialRing


@pytest.fixture
def xyz(f2):
    return PolynomialRing(f2, ("x", "y", "z"))


def ideal(ring, *gens):
    return IdealHandle(ring, [ring.parse(g) for g in gens])


def test_monomials_of_degree():
    assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials_of_degree(3, 3)) == 10
    assert monomials_of_degree(3, 0) == [(0, 0, 0)]


@pytest.mark.parametrize(
    "element, gens, expected",
    [
        ("x^2", ("x",), True),
        ("x^2*y", ("x*y", "y^2"), True),
        ("x*y*z", ("x^2", "y^2"), False),
        ("x^2 + y^2", ("x + y",), True),
        ("0", ("x",), True),
    ],
)
def test_linalg_membership(xyz, element, gens, expected):
    assert linalg_membership(xyz.parse(element), ideal(xyz, *gens)) is expected


def test_linalg_membership_needs_homogeneous_input(xyz):
    with pytest.raises(NotHomogeneous):
        linalg_membership(xyz.parse("x^2 + y"), ideal(xyz, "x"))
    with pytest.raises(NotHomogeneous):
        linalg_membership(xyz.parse("x^2"), ideal(xyz, "x + y^2"))


def test_monomial_bruteforce(xyz):
    gens = [xyz.parse("x^2"), xyz.parse("x*y")]
    assert monomial_membership_bruteforce(xyz.parse("x^3*y"), gens)
    assert not monomial_membership_bruteforce(xyz.parse("y^3"), gens)
    assert monomial_membership_bruteforce((1, 1, 5), [(1, 1, 0)])
    with pytest.raises(ValueError):
        monomial_membership_bruteforce(xyz.parse("x + y"), gens)


def test_bruteforce_agrees_with_groebner_on_cube_of_maximal_ideal(xyz):
    cube = ideal(xyz, "x", "y", "z") * ideal(xyz, "x", "y", "z") * ideal(xyz, "x", "y", "z")
    for d in range(7):
        for e in monomials_of_degree(3, d):
            m = xyz.monomial(e)
            assert monomial_membership_bruteforce(m, cube.generators) == ideal_membership(m, cube)


def test_random_instance_is_deterministic():
    profile = InstanceProfile(p=3, variables=2, max_degree=3, generators=2, ideals=2)
    ring_a, ideals_a = random_instance(7, profile)
    ring_b, ideals_b = random_instance(7, profile)
    assert ring_a == ring_b
    assert [i.generators for i in ideals_a] == [i.generators for i in ideals_b]
    assert len(ideals_a) == 2
    assert all(not i.is_zero() and not i.is_unit() for i in ideals_a)


def test_random_instances_vary_with_seed():
    seen = set()
    for seed in range(1, 51):
        _, (target,) = random_instance(seed)
        seen.add(tuple(str(g) for g in target.generators))
    assert len(seen) >= 45


def test_random_parameter_ideal_is_pure_powers(xyz):
    gens = random_monomial_parameter_ideal(random.Random(3), xyz)
    for i, g in enumerate(gens):
        (e,) = [m for m, _ in g.terms]
        assert e[i] >= 1
        assert all(a == 0 for j, a in enumerate(e) if j != i)


def test_linalg_membership_against_groebner_on_small_grid(xyz):
    target = ideal(xyz, "x^2 + y*z", "y^2")
    for exps in itertools.islice(itertools.product(monomials_of_degree(3, 3), repeat=2), 40):
        f = xyz.monomial(exps[0]) + xyz.monomial(exps[1])
        assert linalg_membership(f, target) == ideal_membership(f, target)
