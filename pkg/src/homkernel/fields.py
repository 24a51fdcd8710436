from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from src.homkernel.errors import DivisionByZero, NotPrime


FieldElement = Union[int, Fraction]

PRIME_FIELD = "prime"
RATIONALS = "rationals"
DEFAULT_PRIME = 32003


@dataclass(frozen=True)
class FieldDescriptor:
    """Coefficient field: GF(p) with elements as ints in [0, p), or QQ with reduced Fractions."""

    kind: str
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind == PRIME_FIELD:
            if not (2 <= self.p < 2 ** 31) or not isprime(self.p):
                raise NotPrime(f"{self.p} is not a prime below 2^31")
        elif self.kind == RATIONALS:
            if self.p != 0:
                raise ValueError("rationals take no modulus")
        else:
            raise ValueError(f"Unsupported field kind: {self.kind}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldDescriptor":
        return cls(PRIME_FIELD, p)

    @classmethod
    def rationals(cls) -> "FieldDescriptor":
        return cls(RATIONALS, 0)

    @classmethod
    def from_tag(cls, tag: str) -> "FieldDescriptor":
        """Parse config/CLI tags such as `gf32003`, `GF(7)` or `qq`."""
        text = tag.strip().lower().replace("(", "").replace(")", "")
        if text in {"qq", "q", "rationals"}:
            return cls.rationals()
        if text.startswith("gf"):
            return cls.prime(int(text[2:]))
        raise ValueError(f"Unsupported field tag: {tag}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def tag(self) -> str:
        return f"gf{self.p}" if self.is_prime_field else "qq"

    def __str__(self) -> str:
        return f"GF({self.p})" if self.is_prime_field else "QQ"

    def zero(self) -> FieldElement:
        return 0 if self.is_prime_field else Fraction(0)

    def one(self) -> FieldElement:
        return 1 if self.is_prime_field else Fraction(1)

    def coerce(self, value: Union[int, Fraction]) -> FieldElement:
        if self.is_prime_field:
            if isinstance(value, Fraction):
                return self.div(value.numerator % self.p, value.denominator % self.p)
            return int(value) % self.p
        return Fraction(value)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.is_prime_field:
            return (a + b) % self.p
        return a + b

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.is_prime_field:
            return (a - b) % self.p
        return a - b

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.is_prime_field:
            return (a * b) % self.p
        return a * b

    def neg(self, a: FieldElement) -> FieldElement:
        if self.is_prime_field:
            return (-a) % self.p
        return -a

    def inv(self, a: FieldElement) -> FieldElement:
        if self.is_zero(a):
            raise DivisionByZero(f"inverse of zero in {self}")
        if self.is_prime_field:
            return pow(int(a), -1, self.p)
        return 1 / Fraction(a)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: FieldElement) -> bool:
        return a == 0

    def is_one(self, a: FieldElement) -> bool:
        return a == 1

    def signed(self, a: FieldElement) -> Union[int, Fraction]:
        """Symmetric representative used for rendering prime-field coefficients."""
        if self.is_prime_field and a > self.p // 2:
            return a - self.p
        return a

    def render(self, a: FieldElement) -> str:
        value = self.signed(a)
        if isinstance(value, Fraction) and value.denominator == 1:
            return str(value.numerator)
        return str(value)
