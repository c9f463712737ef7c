"""Coefficient fields: the rationals and prime fields F_p.

Rational coefficients are ``gmpy2.mpq`` values (always in lowest terms with a
positive denominator).  Residues mod ``p`` are plain ``int`` in ``[0, p)``.
Hot loops elsewhere in the package branch on ``field.characteristic`` instead
of calling methods on this class.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import is_prime, mpq

from .errors import AmbientMismatch

DEFAULT_PRIME = 32003


class Field:
    characteristic: int = 0
    tag: str = ""

    def __call__(self, value):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class RationalField(Field):
    characteristic = 0
    tag = "QQ"

    def __call__(self, value):
        if isinstance(value, str):
            return mpq(Fraction(value.strip()))
        return mpq(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return mpq(1) / a

    def bit_length(self, a) -> int:
        return max(int(a.numerator).bit_length(), int(a.denominator).bit_length())

    def to_fraction(self, a) -> Fraction:
        return Fraction(int(a.numerator), int(a.denominator))

    def format(self, a) -> str:
        return str(a)


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p >= 2**31 or not is_prime(p):
            raise ValueError(f"F_p requires a prime p < 2^31, got {p}")
        self.characteristic = p
        self.tag = f"Fp({p})"

    def __call__(self, value):
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction) or hasattr(value, "denominator"):
            num, den = int(value.numerator), int(value.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(value) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.characteristic)

    def bit_length(self, a) -> int:
        return int(a).bit_length()

    def to_fraction(self, a) -> Fraction:
        return Fraction(int(a))

    def format(self, a) -> str:
        # symmetric representative reads better for small negatives
        p = self.characteristic
        return str(a - p if a > p // 2 else a)


QQ = RationalField()
_prime_fields: dict[int, PrimeField] = {}


def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    """Return the (cached) prime field of characteristic ``p``."""
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_from_tag(tag: str) -> Field:
    """Parse ``QQ``, ``qq``, ``Fp(p)`` or ``fp:p``."""
    t = tag.strip()
    if t.lower() == "qq":
        return QQ
    low = t.lower()
    if low.startswith("fp(") and low.endswith(")"):
        return GF(int(t[3:-1]))
    if low.startswith("fp:"):
        return GF(int(t[3:]))
    if low == "fp":
        return GF()
    raise ValueError(f"unknown field {tag!r}")


def check_same_field(a: Field, b: Field) -> None:
    if a != b:
        raise AmbientMismatch(f"field mismatch: {a} vs {b}")
