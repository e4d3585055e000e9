"""Exact scalars: the prime field F_p and rational function fields F_p(u_1, ..., u_m).

Polynomials store their coefficients "raw": plain ints in [0, p) over a prime field,
`Scalar` values over a parameter field. `FieldDescriptor` carries the arithmetic on raw
coefficients so the polynomial code never has to care which case it is in.

Parameter polynomials are dicts {exponent tuple: int mod p}; the leading term is the
lexicographically largest exponent (first parameter biggest).
"""

import random
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Union

from .errors import DivisionByZero, NotPrime, ZeroInverse

Exp = tuple[int, ...]
ParamPoly = dict[Exp, int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- parameter polynomial kernel -------------------------------------------------


def _pp_add(a: ParamPoly, b: ParamPoly, p: int) -> ParamPoly:
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) + c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pp_sub(a: ParamPoly, b: ParamPoly, p: int) -> ParamPoly:
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) - c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pp_scale(a: ParamPoly, c: int, p: int) -> ParamPoly:
    c %= p
    if not c:
        return {}
    return {e: v * c % p for e, v in a.items()}


def _pp_mul(a: ParamPoly, b: ParamPoly, p: int) -> ParamPoly:
    out: ParamPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def _pp_shift_mul(a: ParamPoly, shift: Exp, c: int, p: int) -> ParamPoly:
    return {tuple(x + y for x, y in zip(e, shift)): v * c % p for e, v in a.items()}


def _pp_lead(a: ParamPoly) -> tuple[Exp, int]:
    e = max(a)
    return e, a[e]


def _pp_monic(a: ParamPoly, p: int) -> ParamPoly:
    if not a:
        return {}
    _, c = _pp_lead(a)
    return _pp_scale(a, pow(c, -1, p), p)


def _pp_divexact(a: ParamPoly, b: ParamPoly, p: int) -> ParamPoly:
    """Quotient a / b, which must be exact"""
    if not b:
        raise DivisionByZero("division by the zero parameter polynomial")
    lb_e, lb_c = _pp_lead(b)
    inv = pow(lb_c, -1, p)
    quotient: ParamPoly = {}
    rest = dict(a)
    while rest:
        le, lc = _pp_lead(rest)
        shift = tuple(x - y for x, y in zip(le, lb_e))
        if any(s < 0 for s in shift):
            raise ValueError("parameter polynomial division is not exact")
        c = lc * inv % p
        quotient[shift] = c
        rest = _pp_sub(rest, _pp_shift_mul(b, shift, c, p), p)
    return quotient


def _pp_pow(a: ParamPoly, n: int, p: int, nvars: int) -> ParamPoly:
    result: ParamPoly = {(0,) * nvars: 1}
    base = a
    while n:
        if n & 1:
            result = _pp_mul(result, base, p)
        n >>= 1
        if n:
            base = _pp_mul(base, base, p)
    return result


def _split(a: ParamPoly) -> dict[int, ParamPoly]:
    """View a polynomial as univariate in the first parameter"""
    out: dict[int, ParamPoly] = {}
    for e, c in a.items():
        out.setdefault(e[0], {})[e[1:]] = c
    return out


def _join(u: dict[int, ParamPoly]) -> ParamPoly:
    return {(k,) + rest: c for k, coeffs in u.items() for rest, c in coeffs.items()}


def _content(u: dict[int, ParamPoly], p: int, nvars: int) -> ParamPoly:
    g: ParamPoly = {}
    for coeffs in u.values():
        g = _pp_gcd(g, coeffs, p, nvars)
        if g == {(0,) * nvars: 1}:
            break
    return g


def _uprimitive(u: dict[int, ParamPoly], p: int, nvars: int) -> dict[int, ParamPoly]:
    c = _content(u, p, nvars)
    return {k: _pp_divexact(v, c, p) for k, v in u.items()}


def _uprem(a: dict[int, ParamPoly], b: dict[int, ParamPoly], p: int) -> dict[int, ParamPoly]:
    """Pseudo-remainder of a by b in (F_p[rest])[t]"""
    db = max(b)
    lb = b[db]
    rest = dict(a)
    while rest and max(rest) >= db:
        dr = max(rest)
        lr = rest[dr]
        shift = dr - db
        rest = {k: _pp_mul(v, lb, p) for k, v in rest.items()}
        for k, v in b.items():
            t = _pp_sub(rest.get(k + shift, {}), _pp_mul(lr, v, p), p)
            if t:
                rest[k + shift] = t
            else:
                rest.pop(k + shift, None)
    return rest


def _pp_gcd(a: ParamPoly, b: ParamPoly, p: int, nvars: int) -> ParamPoly:
    """Monic gcd by recursive content / primitive-part reduction"""
    if not a:
        return _pp_monic(b, p)
    if not b:
        return _pp_monic(a, p)
    one = {(0,) * nvars: 1}
    if nvars == 0:
        return one
    ua, ub = _split(a), _split(b)
    ca, cb = _content(ua, p, nvars - 1), _content(ub, p, nvars - 1)
    c = _pp_gcd(ca, cb, p, nvars - 1)
    ua = {k: _pp_divexact(v, ca, p) for k, v in ua.items()}
    ub = {k: _pp_divexact(v, cb, p) for k, v in ub.items()}
    if max(ua) < max(ub):
        ua, ub = ub, ua
    while True:
        if not ub:
            g = ua
            break
        if max(ub) == 0:
            g = {0: {(0,) * (nvars - 1): 1}}
            break
        r = _uprem(ua, ub, p)
        ua, ub = ub, (_uprimitive(r, p, nvars - 1) if r else {})
    g = _uprimitive(g, p, nvars - 1)
    lifted_c = {(0,) + e: v for e, v in c.items()}
    return _pp_monic(_pp_mul(_join(g), lifted_c, p), p)


def _normalize(num: ParamPoly, den: ParamPoly, p: int, nvars: int) -> tuple[ParamPoly, ParamPoly]:
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return {}, {(0,) * nvars: 1}
    if nvars:
        g = _pp_gcd(num, den, p, nvars)
        if g != {(0,) * nvars: 1}:
            num = _pp_divexact(num, g, p)
            den = _pp_divexact(den, g, p)
    _, lc = _pp_lead(den)
    inv = pow(lc, -1, p)
    return _pp_scale(num, inv, p), _pp_scale(den, inv, p)


def _freeze(a: ParamPoly) -> tuple[tuple[Exp, int], ...]:
    return tuple(sorted(a.items(), reverse=True))


# --- public types ------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    characteristic: int
    parameters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not is_prime(self.characteristic):
            raise NotPrime(f"characteristic must be prime, got {self.characteristic}")
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if len(set(self.parameters)) != len(self.parameters):
            raise ValueError(f"parameter names must be distinct: {self.parameters}")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_prime_field(self) -> bool:
        return not self.parameters

    @property
    def zero(self) -> "Coefficient":
        return 0 if self.is_prime_field else Scalar._make(self, {}, None)

    @property
    def one(self) -> "Coefficient":
        return 1 if self.is_prime_field else self.constant(1)

    def constant(self, n: int) -> "Coefficient":
        n %= self.characteristic
        if self.is_prime_field:
            return n
        nv = len(self.parameters)
        return Scalar._make(self, {(0,) * nv: n} if n else {}, None)

    def parameter(self, name: str) -> "Scalar":
        i = self.parameters.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(self.parameters)))
        return Scalar._make(self, {e: 1}, None)

    def coerce(self, value: Union[int, "Scalar"]) -> "Coefficient":
        if isinstance(value, Scalar):
            if value.field != self:
                if value.is_constant():
                    return self.constant(value.constant_value())
                raise ValueError(f"scalar {value} does not live in {self}")
            return value.constant_value() if self.is_prime_field else value
        return self.constant(int(value))

    def scalar(self, raw: "Coefficient") -> "Scalar":
        """Wrap a raw coefficient as a Scalar value"""
        if isinstance(raw, Scalar):
            return raw
        return Scalar._make(self, {(0,) * len(self.parameters): raw % self.p} if raw % self.p else {}, None)

    # raw coefficient arithmetic
    def add(self, a, b):
        if self.is_prime_field:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a, b):
        if self.is_prime_field:
            return (a - b) % self.characteristic
        return a - b

    def neg(self, a):
        if self.is_prime_field:
            return -a % self.characteristic
        return -a

    def mul(self, a, b):
        if self.is_prime_field:
            return a * b % self.characteristic
        return a * b

    def inv(self, a):
        if self.is_prime_field:
            if a % self.characteristic == 0:
                raise ZeroInverse("0 has no inverse")
            return pow(a, -1, self.characteristic)
        return a.inverse()

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        if self.is_prime_field:
            if n < 0:
                return pow(self.inv(a), -n, self.characteristic)
            return pow(a, n, self.characteristic)
        return a**n

    def is_zero(self, a) -> bool:
        if self.is_prime_field:
            return a % self.characteristic == 0
        return a.is_zero()

    def is_one(self, a) -> bool:
        if self.is_prime_field:
            return a % self.characteristic == 1
        return a == 1

    def frobenius(self, a, e: int):
        """a^(p^e); constants of F_p are fixed"""
        if self.is_prime_field or e == 0:
            return a
        return a.frobenius(e)

    def format(self, a) -> str:
        return str(a)

    def random_element(self, rng: random.Random, max_degree: int = 2, allow_zero: bool = True):
        """Random raw coefficient; over parameter fields a small random fraction"""
        p = self.characteristic
        if self.is_prime_field:
            low = 0 if allow_zero else 1
            return rng.randrange(low, p)
        nv = len(self.parameters)

        def rand_poly(nonzero: bool) -> ParamPoly:
            while True:
                poly: ParamPoly = {}
                for _ in range(rng.randint(1, 3)):
                    e = tuple(rng.randint(0, max_degree) for _ in range(nv))
                    poly[e] = (poly.get(e, 0) + rng.randrange(1, p)) % p
                poly = {k: v for k, v in poly.items() if v}
                if poly or not nonzero:
                    return poly

        num = rand_poly(not allow_zero)
        den = rand_poly(True)
        return Scalar._make(self, num, den)

    def __str__(self) -> str:
        if self.is_prime_field:
            return f"F({self.characteristic})"
        return f"F({self.characteristic}, [{', '.join(self.parameters)}])"


class Scalar:
    """Normalized fraction num/den of parameter polynomials over F_p; immutable"""

    __slots__ = ("field", "num", "den")

    field: FieldDescriptor
    num: tuple[tuple[Exp, int], ...]
    den: tuple[tuple[Exp, int], ...]

    def __init__(self, field: FieldDescriptor, num: Mapping[Exp, int], den: Mapping[Exp, int] | None = None):
        nv = len(field.parameters)
        n, d = _normalize(
            {e: c % field.p for e, c in num.items() if c % field.p},
            {(0,) * nv: 1} if den is None else {e: c % field.p for e, c in den.items() if c % field.p},
            field.p,
            nv,
        )
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", _freeze(n))
        object.__setattr__(self, "den", _freeze(d))

    @classmethod
    def _make(cls, field: FieldDescriptor, num: ParamPoly, den: ParamPoly | None) -> "Scalar":
        return cls(field, num, den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar values are immutable")

    @property
    def numerator(self) -> ParamPoly:
        return dict(self.num)

    @property
    def denominator(self) -> ParamPoly:
        return dict(self.den)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        nv = len(self.field.parameters)
        zero = (0,) * nv
        return all(e == zero for e, _ in self.num) and self.den == ((zero, 1),)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0][1] if self.num else 0

    def _other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                if other.is_constant():
                    return Scalar._make(self.field, {(0,) * len(self.field.parameters): other.constant_value()}, None)
                raise ValueError("scalars from different fields")
            return other
        if isinstance(other, int):
            return Scalar._make(self.field, {(0,) * len(self.field.parameters): other}, None)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        a_n, a_d, b_n, b_d = self.numerator, self.denominator, other.numerator, other.denominator
        if a_d == b_d:
            return Scalar._make(self.field, _pp_add(a_n, b_n, p), a_d)
        num = _pp_add(_pp_mul(a_n, b_d, p), _pp_mul(b_n, a_d, p), p)
        return Scalar._make(self.field, num, _pp_mul(a_d, b_d, p))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(self.field, _pp_scale(self.numerator, -1, self.field.p), self.denominator)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        num = _pp_mul(self.numerator, other.numerator, p)
        return Scalar._make(self.field, num, _pp_mul(self.denominator, other.denominator, p))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroInverse("0 has no inverse")
        return Scalar._make(self.field, self.denominator, self.numerator)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        p, nv = self.field.p, len(self.field.parameters)
        # num and den are coprime, so their powers are too
        return Scalar._make(
            self.field,
            _pp_pow(self.numerator, n, p, nv),
            _pp_pow(self.denominator, n, p, nv),
        )

    def frobenius(self, e: int) -> "Scalar":
        q = self.field.p**e
        num = {tuple(q * x for x in k): c for k, c in self.num}
        den = {tuple(q * x for x in k): c for k, c in self.den}
        return Scalar._make(self.field, num, den)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            if other.field == self.field:
                return self.num == other.num and self.den == other.den
            if self.is_constant() and other.is_constant():
                return self.constant_value() == other.constant_value() and self.field.p == other.field.p
            return False
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.field, self.num, self.den))

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        names = self.field.parameters
        num = _format_param_poly(self.num, names)
        if self.den == (((0,) * len(names), 1),):
            return num
        den = _format_param_poly(self.den, names)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or _factor_count(self.den[0]) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def needs_parentheses(self) -> bool:
        """True when the printed form is a bare sum"""
        return len(self.num) > 1 and len(self.den) == 1 and _factor_count(self.den[0]) == 0


def _factor_count(term: tuple[Exp, int]) -> int:
    e, c = term
    return (1 if c != 1 else 0) + sum(1 for x in e if x)


def _format_param_poly(terms: tuple[tuple[Exp, int], ...], names: tuple[str, ...]) -> str:
    if not terms:
        return "0"
    parts = []
    for e, c in terms:
        factors = [n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return "+".join(parts)


Coefficient = Union[int, Scalar]


def fp_inverse(a: Union[int, Scalar], p: int) -> Scalar:
    """Inverse of a nonzero constant in F_p"""
    field = FieldDescriptor(p)
    value = a.constant_value() if isinstance(a, Scalar) else int(a)
    if value % p == 0:
        raise ZeroInverse(f"{value} has no inverse modulo {p}")
    return field.scalar(pow(value, -1, p))


def ratfunc_normalize(field: FieldDescriptor, num: Mapping[Exp, int], den: Mapping[Exp, int]) -> Scalar:
    """Canonical representative of num/den: coprime, monic denominator"""
    if not any(c % field.p for c in den.values()):
        raise DivisionByZero("zero denominator")
    return Scalar(field, num, den)


def scalar_frobenius(a: Union[int, Scalar], e: int, field: FieldDescriptor | None = None) -> Scalar:
    """a^(p^e)"""
    if isinstance(a, Scalar):
        return a.frobenius(e)
    if field is None:
        raise ValueError("an int scalar needs its field")
    return field.scalar(field.coerce(a))
