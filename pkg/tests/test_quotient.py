import pytest

from charp_closure.src.errors import NotHomogeneous, RingMismatch, TooManyElements, UnitRelation
from charp_closure.src.ideals import IdealHandle
from charp_closure.src.polyring import PolynomialRing
from charp_closure.src.quotient import (
    is_filter_regular_sequence,
    is_parameter_ideal,
    is_regular_sequence,
    is_system_of_parameters,
    quotient_ring,
    subring_presentation,
    veronese,
)
from charp_closure.src.scalar import FieldDescriptor


def test_dimensions(hypersurface, crossing, f2):
    assert hypersurface.dimension == 2
    assert crossing.dimension == 1
    assert quotient_ring(PolynomialRing(f2, ("x",))).dimension == 1


def test_unit_relation_is_rejected(f2):
    with pytest.raises(UnitRelation):
        quotient_ring(PolynomialRing(f2, ("x",)), ["x", "x + 1"])


def test_element_equality_modulo_relations(hypersurface):
    assert hypersurface.equal("x^2", "y^3 + z^5")
    assert hypersurface.is_zero("x^2*y + y^4 + y*z^5")
    assert not hypersurface.equal("x", "y")


def test_element_from_another_ring(hypersurface, f2):
    other = PolynomialRing(f2, ("x", "y"))
    with pytest.raises(RingMismatch):
        hypersurface.element(other.gen("x"))


def test_ideal_arithmetic_lifts(hypersurface):
    q = hypersurface.ideal(["y", "z"])
    assert hypersurface.ideal(["y^2", "z^2"]).contains("x^2")
    assert q.contains("x^2")
    assert not q.contains("x")
    assert q * q == hypersurface.ideal(["y^2", "y*z", "z^2"])
    assert q.power(2) == q * q
    assert q + hypersurface.ideal(["x"]) == hypersurface.maximal_ideal()
    assert hypersurface.ideal(["x^2 + y^3 + z^5"]).is_zero()
    assert hypersurface.ideal(["y^3 + z^5"]) == hypersurface.ideal(["x^2"])


def test_colon_by_maximal_ideal(hypersurface):
    q = hypersurface.ideal(["y", "z"])
    assert q.colon(hypersurface.maximal_ideal()) == hypersurface.maximal_ideal()


def test_regular_sequences(hypersurface, crossing, f2xy):
    assert is_regular_sequence(["y", "z"], hypersurface)
    assert not is_regular_sequence(["x", "y"], crossing)
    assert not is_regular_sequence(["x", "x"], f2xy)
    assert not is_regular_sequence(["1"], f2xy)


def test_filter_regular_sequences(crossing, f2xy):
    assert is_filter_regular_sequence(["x + y"], crossing)
    assert not is_filter_regular_sequence(["x"], crossing)
    assert is_filter_regular_sequence(["1"], crossing)
    assert is_filter_regular_sequence(["x", "y"], f2xy)


def test_regular_implies_filter_regular_and_parameters(hypersurface, f2xyz):
    for ring, xs in [(hypersurface, ["y", "z"]), (f2xyz, ["x", "y", "z"]), (f2xyz, ["x*y", "x + z"])]:
        assert is_regular_sequence(xs, ring)
        assert is_filter_regular_sequence(xs, ring)
        assert is_system_of_parameters(xs, ring)


def test_systems_of_parameters(hypersurface, f2xyz):
    assert is_system_of_parameters(["y", "z"], hypersurface)
    assert is_parameter_ideal(hypersurface.ideal(["y", "z"]))
    assert not is_parameter_ideal(hypersurface.ideal(["y"]))
    assert is_system_of_parameters(["x*y"], f2xyz)
    assert not is_system_of_parameters(["x", "x*y"], f2xyz)
    assert not is_system_of_parameters(["x + 1"], f2xyz)


def test_too_many_parameters(f2xyz):
    with pytest.raises(TooManyElements):
        is_system_of_parameters(["x", "y", "z", "x*y"], f2xyz)


def test_subring_of_single_square():
    ring = quotient_ring(PolynomialRing(FieldDescriptor(5), ("x",)))
    sub = subring_presentation(["x^2"], ring)
    assert sub.source.variables == ("a",)
    assert sub.kernel.is_zero()
    assert sub.lift("x^4") == sub.source.parse("a^2")
    assert sub.lift("x") is None


def test_subring_of_cusp():
    ring = quotient_ring(PolynomialRing(FieldDescriptor(5), ("x",)))
    sub = subring_presentation(["x^2", "x^3"], ring)
    assert sub.kernel == IdealHandle(sub.source, [sub.source.parse("a^3 - b^2")])
    assert sub.presentation.dimension == 1


def test_veronese_of_plane(f2xy):
    sub = veronese(f2xy, 2)
    assert [str(g) for g in sub.generators] == ["x^2", "x*y", "y^2"]
    assert sub.presentation.dimension == 2
    a, b, c = sub.source.gens()
    assert sub.kernel == IdealHandle(sub.source, [a * c - b**2])
    ideal = sub.lift_ideal(["x^2", "y^2"])
    assert ideal.contains(sub.lift("x^2*y^2"))
    assert not ideal.contains(sub.lift("x*y"))
    with pytest.raises(ValueError):
        sub.lift_ideal(["x"])


def test_veronese_needs_homogeneous_relations(f2):
    ring = quotient_ring(PolynomialRing(f2, ("x", "y")), ["x^2 + y^3"])
    with pytest.raises(NotHomogeneous):
        veronese(ring, 2)


@pytest.mark.slow
def test_conic_veronese_presentation(conic, conic_veronese):
    sub = conic_veronese
    assert [str(g) for g in sub.generators] == ["x*y", "x*z", "y^2", "y*z", "z^2"]
    assert sub.source.variables == ("a", "b", "c", "d", "e")
    assert sub.presentation.dimension == 2
    for g in sub.kernel.generators:
        assert conic.is_zero(sub.image(g))
    a, b, c, d, e = sub.source.gens()
    field = sub.source.field
    u, v = field.parameter("u"), field.parameter("v")
    for relation in [
        a * d + b * c,
        d**2 + c * e,
        a**2 + u * c**2 + v * c * e,
        b**2 + u * c * e + v * e**2,
        a * b + u * c * d + v * d * e,
        a * e + b * d,
    ]:
        assert sub.kernel.contains(relation)


@pytest.mark.slow
def test_conic_veronese_parameter_ideals(conic_veronese):
    q1 = conic_veronese.lift_ideal(["x^2", "y^2"])
    q2 = conic_veronese.lift_ideal(["x*y", "z^2"])
    assert is_parameter_ideal(q1)
    assert is_parameter_ideal(q2)
