"""Exact scalar fields: the rationals and prime fields F_p with p odd."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@total_ordering
class Fp:
    """Element of a prime field. Immutable; mixes with plain ints."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> Fp:
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Fp):
            return self.v < other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def signed(self) -> int:
        """Representative in (-p/2, p/2], for printing."""
        return self.v - self.p if self.v > self.p // 2 else self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.signed())


class ScalarField:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    def __init__(self, p: int = 0):
        if p:
            if not _is_prime(p):
                raise FieldError(f"{p} is not prime")
            if p == 2:
                raise FieldError("characteristic 2 is not supported")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.p > 0

    def __call__(self, x) -> Fraction | Fp:
        if self.p == 0:
            if isinstance(x, Fp):
                raise FieldError("cannot coerce an F_p element into Q")
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldError(f"cannot coerce F_{x.p} into F_{self.p}")
            return x
        q = Fraction(x)
        if q.denominator % self.p == 0:
            raise FieldError(f"{x} is not defined in F_{self.p}")
        return Fp(q.numerator * pow(q.denominator, -1, self.p), self.p)

    def elements(self) -> list:
        if not self.p:
            raise FieldError("Q is infinite")
        return [Fp(i, self.p) for i in range(self.p)]

    def render(self, c) -> str:
        return str(c)

    def name(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    @classmethod
    def parse(cls, spec: str) -> ScalarField:
        s = spec.strip().replace("_", "")
        if s in ("Q", "QQ"):
            return cls(0)
        for prefix in ("GF(", "F("):
            if s.startswith(prefix) and s.endswith(")"):
                return cls(int(s[len(prefix):-1]))
        if s.startswith("F") and s[1:].isdigit():
            return cls(int(s[1:]))
        raise FieldError(f"unknown scalar field {spec!r} (use 'Q' or 'F<p>')")

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.p == self.p

    def __hash__(self):
        return hash(("ScalarField", self.p))

    def __repr__(self):
        return f"ScalarField({self.p})"


QQ = ScalarField(0)


def factorial_inverse(field: ScalarField, n: int):
    """1/n! in ``field``; raises if n! vanishes there."""
    f = 1
    for i in range(2, n + 1):
        f *= i
    if field.p and f % field.p == 0:
        raise FieldError(f"{n}! is not invertible in F_{field.p}")
    return field.one / field(f)
