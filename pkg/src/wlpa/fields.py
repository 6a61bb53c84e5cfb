"""Scalar fields for algebra coefficients: exact rationals and prime fields.

Coefficients are always exact; floating point is never used.  Scalars of a
field support ``+``, ``-``, ``*`` and truthiness (nonzero test) directly, so
the algebra engine can stay agnostic about which field is active.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


class Rationals:
    """The field of rational numbers, backed by ``fractions.Fraction``."""

    name = "rational"

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {text!r}") from exc

    def render(self, x) -> str:
        return str(x)

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rational")


class ModInt:
    """An element of Z/pZ.  Arithmetic only combines equal moduli."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _check(self, other) -> "ModInt":
        if not isinstance(other, ModInt) or other.modulus != self.modulus:
            raise FieldError("mixed scalar types")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ModInt(self.value + other.value, self.modulus)

    def __sub__(self, other):
        other = self._check(other)
        return ModInt(self.value - other.value, self.modulus)

    def __mul__(self, other):
        other = self._check(other)
        return ModInt(self.value * other.value, self.modulus)

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def inverse(self) -> "ModInt":
        if self.value == 0:
            raise FieldError("division by zero")
        return ModInt(pow(self.value, -1, self.modulus), self.modulus)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        return (
            isinstance(other, ModInt)
            and other.modulus == self.modulus
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"ModInt({self.value}, {self.modulus})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The prime field Z/pZ."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"mod:{p}"
        self.zero = ModInt(0, p)
        self.one = ModInt(1, p)

    def from_int(self, n: int) -> ModInt:
        return ModInt(n, self.p)

    def parse(self, text: str) -> ModInt:
        # Accept "a" or "a/b" with b invertible mod p.
        num, _, den = text.partition("/")
        try:
            value = ModInt(int(num), self.p)
        except ValueError as exc:
            raise FieldError(f"bad scalar literal {text!r}") from exc
        if den:
            try:
                value = value * ModInt(int(den), self.p).inverse()
            except ValueError as exc:
                raise FieldError(f"bad scalar literal {text!r}") from exc
        return value

    def render(self, x: ModInt) -> str:
        return str(x.value)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("mod", self.p))


RATIONALS = Rationals()


def field_from_name(text: str):
    """Resolve a field flag: ``rational`` or ``mod:<prime>``."""
    if text == "rational":
        return RATIONALS
    if text.startswith("mod:"):
        try:
            p = int(text[4:])
        except ValueError as exc:
            raise FieldError(f"bad field spec {text!r}") from exc
        return PrimeField(p)
    raise FieldError(f"bad field spec {text!r}")
