import random

import pytest

from charp_closure.src.polyring import PolynomialRing
from charp_closure.src.quotient import quotient_ring, veronese
from charp_closure.src.scalar import FieldDescriptor


@pytest.fixture
def f2():
    return FieldDescriptor(2)


@pytest.fixture
def f2u():
    return FieldDescriptor(2, ("u",))


@pytest.fixture
def f2xyz():
    """F_2[x, y, z], the regular comparison ring"""
    return quotient_ring(PolynomialRing(FieldDescriptor(2), ("x", "y", "z")))


@pytest.fixture
def f2xy():
    return quotient_ring(PolynomialRing(FieldDescriptor(2), ("x", "y")))


@pytest.fixture
def hypersurface():
    """F_2[x, y, z]/(x^2 + y^3 + z^5)"""
    ambient = PolynomialRing(FieldDescriptor(2), ("x", "y", "z"))
    return quotient_ring(ambient, ["x^2 + y^3 + z^5"])


@pytest.fixture
def crossing():
    """F_2(u)[x, y]/(xy): two lines through the origin"""
    ambient = PolynomialRing(FieldDescriptor(2, ("u",)), ("x", "y"))
    return quotient_ring(ambient, ["x*y"])


@pytest.fixture(scope="session")
def conic():
    """F_2(u, v)[x, y, z]/(x^2 + u y^2 + v z^2)"""
    ambient = PolynomialRing(FieldDescriptor(2, ("u", "v")), ("x", "y", "z"))
    return quotient_ring(ambient, ["x^2 + u*y^2 + v*z^2"])


@pytest.fixture(scope="session")
def conic_veronese(conic):
    return veronese(conic, 2)


@pytest.fixture
def rng():
    return random.Random(20240601)
