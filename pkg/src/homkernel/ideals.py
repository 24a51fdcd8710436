import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from src.homkernel.errors import InhomogeneousInput, ZeroDivisorIdeal
from src.homkernel.groebner import VectorPoly, module_syzygies, reduce_polynomial, reduced_groebner_basis
from src.homkernel.polynomials import Polynomial
from src.homkernel.rings import RingDescriptor

logger = logging.getLogger("homkernel.groebner")


class Ideal:
    """Homogeneous ideal of R = A/J, carried as its full preimage in A (so J is always contained)."""

    def __init__(self, ring: RingDescriptor, gens: Iterable[Union[str, Polynomial]]):
        self.ring = ring
        polys: List[Polynomial] = []
        for gen in gens:
            poly = ring.coerce(gen)
            if not poly.is_homogeneous():
                raise InhomogeneousInput(poly.render())
            polys.append(poly)
        self.gens: Tuple[Polynomial, ...] = tuple(polys)
        self._gb: Optional[Tuple[Polynomial, ...]] = None

    @property
    def gb(self) -> Tuple[Polynomial, ...]:
        if self._gb is None:
            self._gb = tuple(reduced_groebner_basis(self.ring.ambient, self.gens, self.ring.quotient_gb))
        return self._gb

    def nonzero_gens(self) -> List[Polynomial]:
        """Generators reduced modulo J, zero classes dropped."""
        reduced = [self.ring.reduce(g) for g in self.gens]
        return [g for g in reduced if not g.is_zero()]

    def normal_form(self, poly: Polynomial) -> Polynomial:
        return reduce_polynomial(self.ring.coerce(poly), self.gb)

    def contains(self, poly: Union[str, Polynomial]) -> bool:
        return self.normal_form(self.ring.coerce(poly)).is_zero()

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb)

    def is_zero(self) -> bool:
        return self.gb == self.ring.quotient_gb

    def is_monomial(self) -> bool:
        return all(len(g.terms) == 1 for g in self.gb)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb == other.gb

    def __hash__(self) -> int:
        return hash(self.gb)

    def render(self) -> str:
        return "(" + ", ".join(g.render() for g in self.gens) + ")"

    def render_gb(self) -> List[str]:
        return [g.render() for g in self.gb]

    def __repr__(self) -> str:
        return f"Ideal{self.render()}"


def zero_ideal(ring: RingDescriptor) -> Ideal:
    return Ideal(ring, [])


def unit_ideal(ring: RingDescriptor) -> Ideal:
    return Ideal(ring, [ring.one()])


def maximal_ideal(ring: RingDescriptor) -> Ideal:
    return Ideal(ring, ring.gens())


def ideal_sum(first: Ideal, second: Ideal) -> Ideal:
    first.ring.same_ring(second.ring)
    return Ideal(first.ring, first.gens + second.gens)


def ideal_product(first: Ideal, second: Ideal) -> Ideal:
    first.ring.same_ring(second.ring)
    return Ideal(first.ring, [f * g for f in first.nonzero_gens() for g in second.nonzero_gens()])


def ideal_power(ideal: Ideal, exponent: int) -> Ideal:
    if exponent < 0:
        raise ValueError("negative ideal power")
    result = unit_ideal(ideal.ring)
    for _ in range(exponent):
        result = ideal_product(result, ideal)
    return result


def ideal_membership(poly: Union[str, Polynomial], ideal: Ideal) -> bool:
    return ideal.contains(poly)


def ideal_equal(first: Ideal, second: Ideal) -> bool:
    first.ring.same_ring(second.ring)
    return first.gb == second.gb


def _rank_one(ring: RingDescriptor, polys: Sequence[Polynomial]) -> List[VectorPoly]:
    return [VectorPoly(ring.ambient, (0,), (p,)) for p in polys]


def ideal_intersect(first: Ideal, second: Ideal) -> Ideal:
    """I cap K read off the syzygies of [gens I | -gens K]."""
    first.ring.same_ring(second.ring)
    ring = first.ring
    left, right = first.nonzero_gens(), second.nonzero_gens()
    if not left or not right:
        return zero_ideal(ring)
    columns = _rank_one(ring, left + [-g for g in right])
    syz = module_syzygies(columns, ring, [g.degree() for g in left + right])
    gens = []
    for vector in syz.generators:
        element = ring.reduce(sum((a * f for a, f in zip(vector.components, left)), ring.zero()))
        if not element.is_zero():
            gens.append(element)
    return Ideal(ring, gens)


def colon_element(ideal: Ideal, element: Union[str, Polynomial]) -> Ideal:
    """(I : g), the first coordinates of the syzygies of [g | gens I]."""
    ring = ideal.ring
    g = ring.reduce(ring.coerce(element))
    if not g.is_homogeneous():
        raise InhomogeneousInput(g.render())
    if g.is_zero() or ideal.contains(g):
        return unit_ideal(ring)
    gens = ideal.nonzero_gens()
    columns = _rank_one(ring, [g] + gens)
    syz = module_syzygies(columns, ring, [p.degree() for p in [g] + gens])
    return Ideal(ring, [v.components[0] for v in syz.generators if not ring.is_zero(v.components[0])])


def ideal_colon(ideal: Ideal, divisor: Ideal) -> Ideal:
    ideal.ring.same_ring(divisor.ring)
    gens = divisor.nonzero_gens()
    if not gens:
        raise ZeroDivisorIdeal(f"cannot take the colon by the zero ideal {divisor.render()}")
    result: Optional[Ideal] = None
    for g in gens:
        part = colon_element(ideal, g)
        result = part if result is None else ideal_intersect(result, part)
    logger.debug("colon %s : %s -> %s", ideal.render(), divisor.render(), result.render_gb())
    return result
