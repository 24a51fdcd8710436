from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Optional, Sequence, Tuple, Union

from src.homkernel.errors import InhomogeneousInput, RingMismatch
from src.homkernel.fields import FieldDescriptor
from src.homkernel.groebner import reduce_polynomial, reduced_groebner_basis
from src.homkernel.polynomials import Polynomial, PolynomialRing


ORDER_TAG = "wgrevlex"


@dataclass(frozen=True)
class RingDescriptor:
    """R = A/J for A = k[x_1..x_n] with positive weights; J is kept as its reduced Groebner basis."""

    ambient: PolynomialRing
    quotient_gens: Tuple[Polynomial, ...] = dataclass_field(compare=False)
    quotient_gb: Tuple[Polynomial, ...]
    order: str = ORDER_TAG

    @property
    def field(self) -> FieldDescriptor:
        return self.ambient.field

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ambient.variables

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.ambient.weights

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    def is_polynomial_ring(self) -> bool:
        return not self.quotient_gb

    def var(self, name: Union[str, int]) -> Polynomial:
        return self.ambient.var(name)

    def gens(self):
        return self.ambient.gens()

    def zero(self) -> Polynomial:
        return self.ambient.zero()

    def one(self) -> Polynomial:
        return self.ambient.one()

    def parse(self, text: str) -> Polynomial:
        return self.ambient.parse(text)

    def coerce(self, value: Union[str, int, Polynomial]) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring != self.ambient:
                raise RingMismatch(f"{value} is not an element of {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.ambient.constant(value)

    def reduce(self, poly: Polynomial) -> Polynomial:
        """Canonical representative of the class of `poly` in R."""
        return reduce_polynomial(poly, self.quotient_gb)

    def is_zero(self, poly: Polynomial) -> bool:
        return self.reduce(poly).is_zero()

    def same_ring(self, other: "RingDescriptor") -> None:
        if other != self:
            raise RingMismatch(f"{self} vs {other}")

    def render(self) -> str:
        text = f"{self.field}[{','.join(self.variables)}]"
        if any(w != 1 for w in self.weights):
            text += f" weights ({','.join(str(w) for w in self.weights)})"
        if self.quotient_gb:
            text += " / (" + ", ".join(g.render() for g in self.quotient_gb) + ")"
        return text

    def __str__(self) -> str:
        return self.render()


def make_ring(
    field: FieldDescriptor,
    variables: Sequence[str],
    weights: Optional[Sequence[int]] = None,
    quotient_gens: Iterable[Union[str, Polynomial]] = (),
) -> RingDescriptor:
    variables = tuple(variables)
    weights = tuple(weights) if weights is not None else (1,) * len(variables)
    ambient = PolynomialRing(field, variables, weights)
    gens = []
    for gen in quotient_gens:
        poly = ambient.parse(gen) if isinstance(gen, str) else gen
        if poly.ring != ambient:
            raise RingMismatch(f"quotient generator {poly} lives in another ring")
        if not poly.is_homogeneous():
            raise InhomogeneousInput(poly.render(), f"weights {weights}")
        gens.append(poly)
    basis = reduced_groebner_basis(ambient, gens) if gens else []
    return RingDescriptor(ambient, tuple(gens), tuple(basis))
