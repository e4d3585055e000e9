import random

import pytest

from charp_closure.src.errors import DivisionByZero, NotPrime, ZeroInverse
from charp_closure.src.scalar import FieldDescriptor, Scalar, fp_inverse, is_prime, ratfunc_normalize, scalar_frobenius


@pytest.fixture
def f2uv():
    return FieldDescriptor(2, ("u", "v"))


@pytest.mark.parametrize("n, expected", [(2, True), (3, True), (7, True), (97, True), (0, False), (1, False), (4, False), (91, False)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_field_rejects_composite_characteristic():
    with pytest.raises(NotPrime, match="characteristic must be prime"):
        FieldDescriptor(4)


def test_field_rejects_repeated_parameters():
    with pytest.raises(ValueError):
        FieldDescriptor(2, ("u", "u"))


def test_field_str():
    assert str(FieldDescriptor(2)) == "F(2)"
    assert str(FieldDescriptor(2, ("u", "v"))) == "F(2, [u, v])"


@pytest.mark.parametrize("a, p, expected", [(1, 2, 1), (2, 5, 3), (4, 7, 2)])
def test_fp_inverse(a, p, expected):
    assert fp_inverse(a, p) == expected


def test_fp_inverse_of_zero():
    with pytest.raises(ZeroInverse):
        fp_inverse(5, 5)


def test_ratfunc_cancels_common_factor(f2uv):
    result = ratfunc_normalize(f2uv, {(1, 1): 1}, {(0, 1): 1})
    assert result == f2uv.parameter("u")


def test_ratfunc_cancels_frobenius_square(f2uv):
    # u^2 + v^2 = (u + v)^2 in characteristic 2
    result = ratfunc_normalize(f2uv, {(2, 0): 1, (0, 2): 1}, {(1, 0): 1, (0, 1): 1})
    assert result == f2uv.parameter("u") + f2uv.parameter("v")


def test_ratfunc_keeps_inverse_powers(f2uv):
    result = ratfunc_normalize(f2uv, {(0, 0): 1}, {(0, 3): 1})
    v = f2uv.parameter("v")
    assert result == 1 / v**3
    assert result == v ** -3
    assert str(result) == "1/v^3"


def test_ratfunc_zero_denominator(f2uv):
    with pytest.raises(DivisionByZero):
        ratfunc_normalize(f2uv, {(1, 0): 1}, {(0, 0): 2})


def test_scalar_frobenius_fixes_prime_field_constants():
    assert scalar_frobenius(3, 2, FieldDescriptor(5)) == 3


def test_scalar_frobenius_on_parameters(f2uv):
    u, v = f2uv.parameter("u"), f2uv.parameter("v")
    assert scalar_frobenius(u, 1) == u * u
    assert scalar_frobenius(u / v, 2) == (u / v) ** 4


def test_scalar_frobenius_needs_field_for_int():
    with pytest.raises(ValueError):
        scalar_frobenius(1, 1)


def test_characteristic_two_arithmetic(f2uv):
    u, v = f2uv.parameter("u"), f2uv.parameter("v")
    assert (u + u).is_zero()
    assert (u + v) * (u + v) == u**2 + v**2
    assert (u * v) / v == u
    assert (u / v) * (v / u) == 1


def test_scalar_inverse_of_zero(f2uv):
    with pytest.raises(ZeroInverse):
        f2uv.zero.inverse()
    with pytest.raises(DivisionByZero):
        f2uv.parameter("u") / 0


def test_scalar_is_immutable(f2uv):
    u = f2uv.parameter("u")
    with pytest.raises(AttributeError):
        u.num = ()


def test_constants_compare_across_fields(f2uv):
    one = Scalar(f2uv, {(0, 0): 3})
    assert one == 1
    assert one == FieldDescriptor(2).scalar(1)
    assert hash(one) == hash(1)


def test_raw_arithmetic_over_prime_field():
    field = FieldDescriptor(7)
    assert field.mul(3, 5) == 1
    assert field.inv(3) == 5
    assert field.power(3, -1) == 5
    assert field.frobenius(4, 3) == 4


SAMPLE_FIELDS = [
    FieldDescriptor(2),
    FieldDescriptor(5),
    pytest.param(FieldDescriptor(2, ("u", "v")), marks=pytest.mark.slow, id="F(2, [u, v])"),
    pytest.param(FieldDescriptor(3, ("u",)), marks=pytest.mark.slow, id="F(3, [u])"),
]


def random_scalar(rng, field):
    return field.scalar(field.random_element(rng, max_degree=1))


def random_param_poly(rng, field):
    terms = {tuple(rng.randint(0, 2) for _ in field.parameters): rng.randrange(1, field.p) for _ in range(rng.randint(1, 3))}
    return Scalar(field, terms)


@pytest.mark.parametrize("field", SAMPLE_FIELDS)
def test_field_axioms_on_random_samples(field):
    rng = random.Random(500 + field.p)
    for _ in range(500):
        a, b, c = (random_scalar(rng, field) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        assert a - a == 0
        if not a.is_zero():
            assert a * a.inverse() == 1


@pytest.mark.parametrize("field", SAMPLE_FIELDS)
def test_freshmans_dream(field):
    rng = random.Random(7 * field.p)
    for _ in range(50):
        a, b = random_scalar(rng, field), random_scalar(rng, field)
        for e in (1, 2):
            q = field.p**e
            assert (a + b) ** q == a**q + b**q
            assert (a + b).frobenius(e) == a.frobenius(e) + b.frobenius(e)


@pytest.mark.slow
@pytest.mark.parametrize("field", [FieldDescriptor(2, ("u", "v")), FieldDescriptor(3, ("u",))], ids=str)
def test_normalization_is_canonical(field):
    rng = random.Random(46)
    for _ in range(100):
        a = random_scalar(rng, field)
        g = random_param_poly(rng, field)
        num = (Scalar(field, a.numerator) * g).numerator
        den = (Scalar(field, a.denominator) * g).numerator
        b = ratfunc_normalize(field, num, den)
        assert (b.num, b.den) == (a.num, a.den)
