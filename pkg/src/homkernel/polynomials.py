from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple, Union

from src.homkernel.errors import RingMismatch
from src.homkernel.fields import FieldDescriptor, FieldElement


Monomial = Tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


@lru_cache(maxsize=1 << 16)
def _grevlex_key(weights: Tuple[int, ...], mono: Monomial) -> tuple:
    return sum(w * e for w, e in zip(weights, mono)), tuple(-e for e in reversed(mono))


@dataclass(frozen=True)
class PolynomialRing:
    """The ambient ring A = k[x_1..x_n] with positive weights and weighted grevlex order."""

    field: FieldDescriptor
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.variables) != len(self.weights):
            raise ValueError("one weight per variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names: {self.variables}")
        if any(w <= 0 for w in self.weights):
            raise ValueError(f"weights must be positive: {self.weights}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def mono_key(self, mono: Monomial) -> tuple:
        return _grevlex_key(self.weights, mono)

    def mono_compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.mono_key(a), self.mono_key(b)
        return (ka > kb) - (ka < kb)

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def variable_monomial(self, index: int) -> Monomial:
        return tuple(1 if i == index else 0 for i in range(self.nvars))

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value: Union[int, FieldElement]) -> "Polynomial":
        return Polynomial.from_terms(self, [(self.field.coerce(value), self.one_monomial())])

    def monomial(self, mono: Monomial, coeff: Union[int, FieldElement] = 1) -> "Polynomial":
        return Polynomial.from_terms(self, [(self.field.coerce(coeff), tuple(mono))])

    def var(self, name: Union[str, int]) -> "Polynomial":
        index = name if isinstance(name, int) else self.variables.index(name)
        return self.monomial(self.variable_monomial(index))

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text: str) -> "Polynomial":
        from src.homkernel.lexer import parse_polynomial_text

        return parse_polynomial_text(self, text)

    def render_monomial(self, mono: Monomial) -> str:
        parts = []
        for name, exp in zip(self.variables, mono):
            if exp == 1:
                parts.append(name)
            elif exp > 1:
                parts.append(f"{name}^{exp}")
        return "*".join(parts)

    def monomials_of_degree(self, degree: int) -> List[Monomial]:
        """All monomials of the given weighted degree, descending in the ring order."""
        found: List[Monomial] = []

        def walk(index: int, remaining: int, prefix: List[int]) -> None:
            if index == self.nvars - 1:
                if remaining % self.weights[index] == 0:
                    found.append(tuple(prefix + [remaining // self.weights[index]]))
                return
            for exp in range(remaining // self.weights[index] + 1):
                walk(index + 1, remaining - exp * self.weights[index], prefix + [exp])

        if degree < 0:
            return []
        if self.nvars == 0:
            return [()] if degree == 0 else []
        walk(0, degree, [])
        return sorted(found, key=self.mono_key, reverse=True)


class Polynomial:
    """Immutable sparse polynomial; `terms` are (coefficient, monomial) strictly descending."""

    __slots__ = ("ring", "_data", "_terms")

    def __init__(self, ring: PolynomialRing, data: Dict[Monomial, FieldElement]):
        self.ring = ring
        self._data = data
        self._terms: Optional[Tuple[Tuple[FieldElement, Monomial], ...]] = None

    @classmethod
    def from_terms(cls, ring: PolynomialRing, terms: Iterable[Tuple[FieldElement, Monomial]]) -> "Polynomial":
        data: Dict[Monomial, FieldElement] = {}
        fld = ring.field
        for coeff, mono in terms:
            if len(mono) != ring.nvars:
                raise ValueError(f"monomial {mono} has the wrong number of exponents")
            data[mono] = fld.add(data.get(mono, fld.zero()), coeff)
        return cls(ring, {m: c for m, c in data.items() if c != 0})

    @property
    def terms(self) -> Tuple[Tuple[FieldElement, Monomial], ...]:
        if self._terms is None:
            ordered = sorted(self._data, key=self.ring.mono_key, reverse=True)
            self._terms = tuple((self._data[m], m) for m in ordered)
        return self._terms

    def as_dict(self) -> Dict[Monomial, FieldElement]:
        return dict(self._data)

    def coefficient(self, mono: Monomial) -> FieldElement:
        return self._data.get(tuple(mono), self.ring.field.zero())

    def is_zero(self) -> bool:
        return not self._data

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._data)

    def constant_term(self) -> FieldElement:
        return self.coefficient(self.ring.one_monomial())

    def leading_monomial(self) -> Monomial:
        return self.terms[0][1]

    def leading_coefficient(self) -> FieldElement:
        return self.terms[0][0]

    def homogeneity(self) -> Tuple[bool, Optional[int]]:
        """(True, degree) when all terms share one weighted degree; the zero polynomial reports (True, None)."""
        degrees = {self.ring.degree(m) for m in self._data}
        if not degrees:
            return True, None
        if len(degrees) == 1:
            return True, degrees.pop()
        return False, None

    def is_homogeneous(self) -> bool:
        return self.homogeneity()[0]

    def degree(self) -> Optional[int]:
        if not self._data:
            return None
        return max(self.ring.degree(m) for m in self._data)

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring.variables} vs {other.ring.variables}")

    def _lift(self, other: Union["Polynomial", int, FieldElement]) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        fld = self.ring.field
        data = dict(self._data)
        for mono, coeff in other._data.items():
            value = fld.add(data.get(mono, fld.zero()), coeff)
            if value == 0:
                data.pop(mono, None)
            else:
                data[mono] = value
        return Polynomial(self.ring, data)

    __radd__ = __add__

    def __neg__(self):
        fld = self.ring.field
        return Polynomial(self.ring, {m: fld.neg(c) for m, c in self._data.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, coeff: FieldElement) -> "Polynomial":
        fld = self.ring.field
        coeff = fld.coerce(coeff)
        if coeff == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: fld.mul(c, coeff) for m, c in self._data.items()})

    def mul_term(self, coeff: FieldElement, mono: Monomial) -> "Polynomial":
        fld = self.ring.field
        if coeff == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {mono_mul(m, mono): fld.mul(c, coeff) for m, c in self._data.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(self.ring.field.coerce(other))
        self._check(other)
        fld = self.ring.field
        data: Dict[Monomial, FieldElement] = {}
        for ma, ca in self._data.items():
            for mb, cb in other._data.items():
                mono = mono_mul(ma, mb)
                data[mono] = fld.add(data.get(mono, fld.zero()), fld.mul(ca, cb))
        return Polynomial(self.ring, {m: c for m, c in data.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._data == other._data
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.terms)

    def render(self) -> str:
        if not self._data:
            return "0"
        fld = self.ring.field
        pieces: List[str] = []
        for coeff, mono in self.terms:
            value = fld.signed(coeff)
            negative = value < 0
            magnitude = fld.render(-value if negative else value)
            body = self.ring.render_monomial(mono)
            if not body:
                text = magnitude
            elif magnitude == "1":
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f" - {text}" if negative else f" + {text}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Polynomial({self.render()!r})"


def homogeneity_check(poly: Polynomial) -> Tuple[bool, Optional[int]]:
    return poly.homogeneity()


def mono_compare(ring: PolynomialRing, a: Monomial, b: Monomial) -> int:
    return ring.mono_compare(a, b)
