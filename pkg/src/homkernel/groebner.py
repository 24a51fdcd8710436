import heapq
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.homkernel.errors import InhomogeneousInput, RankMismatch, RingMismatch
from src.homkernel.fields import FieldElement
from src.homkernel.polynomials import (
    Monomial,
    Polynomial,
    PolynomialRing,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

logger = logging.getLogger("homkernel.groebner")

Term = Tuple[int, Monomial]
Vec = Dict[Term, FieldElement]


@dataclass(frozen=True)
class VectorPoly:
    """A column of a presentation matrix: one ambient polynomial per slot of a twisted free module."""

    ring: PolynomialRing
    twists: Tuple[int, ...]
    components: Tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        if len(self.twists) != len(self.components):
            raise RankMismatch(f"{len(self.components)} components for rank {len(self.twists)}")
        for comp in self.components:
            if comp.ring != self.ring:
                raise RingMismatch("vector component lives in another ring")

    @classmethod
    def zero(cls, ring: PolynomialRing, twists: Sequence[int]) -> "VectorPoly":
        return cls(ring, tuple(twists), tuple(ring.zero() for _ in twists))

    @classmethod
    def unit(cls, ring: PolynomialRing, twists: Sequence[int], index: int) -> "VectorPoly":
        comps = [ring.zero() for _ in twists]
        comps[index] = ring.one()
        return cls(ring, tuple(twists), tuple(comps))

    @classmethod
    def from_terms(cls, ring: PolynomialRing, twists: Sequence[int], vec: Vec) -> "VectorPoly":
        slots: List[Dict[Monomial, FieldElement]] = [{} for _ in twists]
        for (pos, mono), coeff in vec.items():
            slots[pos][mono] = coeff
        return cls(ring, tuple(twists), tuple(Polynomial(ring, slot) for slot in slots))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def terms(self) -> Vec:
        vec: Vec = {}
        for pos, comp in enumerate(self.components):
            for mono, coeff in comp.as_dict().items():
                vec[(pos, mono)] = coeff
        return vec

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def homogeneity(self) -> Tuple[bool, Optional[int]]:
        degrees = set()
        for twist, comp in zip(self.twists, self.components):
            ok, deg = comp.homogeneity()
            if not ok:
                return False, None
            if deg is not None:
                degrees.add(deg + twist)
        if len(degrees) > 1:
            return False, None
        return True, (degrees.pop() if degrees else None)

    def degree(self) -> Optional[int]:
        ok, deg = self.homogeneity()
        if not ok:
            raise InhomogeneousInput(self.render())
        return deg

    def __add__(self, other: "VectorPoly") -> "VectorPoly":
        self._check(other)
        return VectorPoly(self.ring, self.twists, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorPoly") -> "VectorPoly":
        self._check(other)
        return VectorPoly(self.ring, self.twists, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorPoly":
        return VectorPoly(self.ring, self.twists, tuple(-a for a in self.components))

    def scale(self, factor: Polynomial) -> "VectorPoly":
        return VectorPoly(self.ring, self.twists, tuple(a * factor for a in self.components))

    def with_twists(self, twists: Sequence[int]) -> "VectorPoly":
        return VectorPoly(self.ring, tuple(twists), self.components)

    def _check(self, other: "VectorPoly") -> None:
        if other.ring != self.ring:
            raise RingMismatch("vectors over different rings")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def render(self) -> str:
        return "(" + ", ".join(c.render() for c in self.components) + ")"

    def __str__(self) -> str:
        return self.render()


class TermOrder:
    """Position-over-term: slots ranked by ascending twist then index, grevlex inside a slot."""

    def __init__(self, ring: PolynomialRing, twists: Sequence[int]):
        self.ring = ring
        self.twists = tuple(twists)

    def key(self, term: Term) -> tuple:
        pos, mono = term
        return (-self.twists[pos], -pos, self.ring.mono_key(mono))

    def degree(self, term: Term) -> int:
        return self.ring.degree(term[1]) + self.twists[term[0]]

    def lead(self, vec: Vec) -> Term:
        return max(vec, key=self.key)


def _axpy(target: Vec, source: Vec, factor: FieldElement, shift: Monomial, fld) -> None:
    for (pos, mono), coeff in source.items():
        key = (pos, mono_mul(mono, shift))
        value = fld.add(target.get(key, fld.zero()), fld.mul(coeff, factor))
        if value == 0:
            target.pop(key, None)
        else:
            target[key] = value


class _Element:
    __slots__ = ("vec", "cof", "lead", "lc")

    def __init__(self, vec: Vec, cof: Optional[Vec], lead: Term):
        self.vec = vec
        self.cof = cof
        self.lead = lead
        self.lc = vec[lead]


def _reduce(vec: Vec, cof: Optional[Vec], elements: List[_Element], by_pos: Dict[int, List[int]],
            order: TermOrder, fld, skip: int = -1) -> Tuple[Vec, Optional[Vec]]:
    """Full normal form: always reduce the largest reducible term, by the first reducer in basis order."""
    vec = dict(vec)
    cof = dict(cof) if cof is not None else None
    remainder: Vec = {}
    while vec:
        term = order.lead(vec)
        pos, mono = term
        reducer = None
        for index in by_pos.get(pos, ()):
            if index != skip and mono_divides(elements[index].lead[1], mono):
                reducer = elements[index]
                break
        if reducer is None:
            remainder[term] = vec.pop(term)
            continue
        factor = fld.neg(fld.div(vec[term], reducer.lc))
        shift = mono_div(mono, reducer.lead[1])
        _axpy(vec, reducer.vec, factor, shift, fld)
        if cof is not None and reducer.cof:
            _axpy(cof, reducer.cof, factor, shift, fld)
    return remainder, cof


@dataclass
class EngineResult:
    basis: List[Vec]
    leads: List[Term]
    syzygies: List[Tuple[int, Vec]]
    independent: List[int]


def run_engine(
    ring: PolynomialRing,
    twists: Sequence[int],
    columns: Sequence[Vec],
    fixed: Sequence[Vec] = (),
    column_degrees: Optional[Sequence[int]] = None,
    track: bool = False,
) -> EngineResult:
    """Buchberger on homogeneous vectors, processed degree by degree.

    `fixed` vectors (the quotient relations) are adjoined without tracking. With `track`, every
    zero reduction contributes its cofactor in column coordinates; these generate the syzygies of
    `columns` modulo the fixed part. `independent` lists the columns that did not reduce to zero
    against everything of lower degree and earlier columns, i.e. a greedy minimal generating set.
    """
    order = TermOrder(ring, twists)
    fld = ring.field
    one = ring.one_monomial()
    items: List[Tuple[Vec, Optional[Vec], int, int]] = []
    syzygies: List[Tuple[int, Vec]] = []

    def _degree_of(vec: Vec, label: str) -> int:
        degrees = {order.degree(t) for t in vec}
        if len(degrees) != 1:
            raise InhomogeneousInput(VectorPoly.from_terms(ring, twists, vec).render(), label)
        return degrees.pop()

    for vec in fixed:
        if vec:
            items.append((vec, {} if track else None, _degree_of(vec, "quotient relation"), -1))
    for index, vec in enumerate(columns):
        cof = {(index, one): fld.one()} if track else None
        if not vec:
            if track:
                deg = column_degrees[index] if column_degrees is not None else 0
                syzygies.append((deg, cof))
            continue
        deg = _degree_of(vec, f"column {index}")
        if column_degrees is not None and column_degrees[index] != deg:
            raise InhomogeneousInput(
                VectorPoly.from_terms(ring, twists, vec).render(),
                f"column {index} has degree {deg}, expected {column_degrees[index]}",
            )
        items.append((vec, cof, deg, index))

    heap: List[tuple] = [(deg, 1, k, 0) for k, (_, _, deg, _) in enumerate(items)]
    heapq.heapify(heap)
    elements: List[_Element] = []
    by_pos: Dict[int, List[int]] = defaultdict(list)
    pending = set()
    independent: List[int] = []
    product_ok = len(twists) == 1 and not track

    def _chain_skip(i: int, j: int, lcm: Monomial, pos: int) -> bool:
        for k in by_pos[pos]:
            if k == i or k == j:
                continue
            if mono_divides(elements[k].lead[1], lcm):
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    return True
        return False

    while heap:
        deg, kind, a, b = heapq.heappop(heap)
        if kind == 0:
            pending.discard((a, b))
            ea, eb = elements[a], elements[b]
            lcm = mono_lcm(ea.lead[1], eb.lead[1])
            if _chain_skip(a, b, lcm, ea.lead[0]):
                continue
            vec: Vec = {}
            cof: Optional[Vec] = {} if track else None
            for elem, sign in ((ea, fld.one()), (eb, fld.neg(fld.one()))):
                factor = fld.mul(sign, fld.inv(elem.lc))
                shift = mono_div(lcm, elem.lead[1])
                _axpy(vec, elem.vec, factor, shift, fld)
                if track and elem.cof:
                    _axpy(cof, elem.cof, factor, shift, fld)
            column = -1
        else:
            vec, cof, _, column = items[a]
        vec, cof = _reduce(vec, cof, elements, by_pos, order, fld)
        if not vec:
            if track and cof:
                syzygies.append((deg, cof))
            continue
        if column >= 0:
            independent.append(column)
        new = len(elements)
        elem = _Element(vec, cof, order.lead(vec))
        elements.append(elem)
        pos = elem.lead[0]
        for old in by_pos[pos]:
            lcm = mono_lcm(elements[old].lead[1], elem.lead[1])
            if product_ok and mono_coprime(elements[old].lead[1], elem.lead[1]):
                continue
            pending.add((old, new))
            heapq.heappush(heap, (ring.degree(lcm) + twists[pos], 0, old, new))
        by_pos[pos].append(new)

    basis = _reduced_basis(elements, order, fld)
    logger.debug(
        "engine: rank=%d columns=%d fixed=%d basis=%d reduced=%d syzygies=%d",
        len(twists), len(columns), len(fixed), len(elements), len(basis), len(syzygies),
    )
    return EngineResult(basis, [order.lead(v) for v in basis], syzygies, sorted(independent))


def _reduced_basis(elements: List[_Element], order: TermOrder, fld) -> List[Vec]:
    kept: List[_Element] = []
    for index, elem in enumerate(elements):
        divisible = any(
            other.lead[0] == elem.lead[0] and mono_divides(other.lead[1], elem.lead[1])
            for j, other in enumerate(elements)
            if j != index
        )
        if not divisible:
            kept.append(elem)
    by_pos: Dict[int, List[int]] = defaultdict(list)
    for index, elem in enumerate(kept):
        by_pos[elem.lead[0]].append(index)
    basis: List[Vec] = []
    for index, elem in enumerate(kept):
        vec, _ = _reduce(elem.vec, None, kept, by_pos, order, fld, skip=index)
        inv = fld.inv(vec[elem.lead])
        basis.append({t: fld.mul(c, inv) for t, c in vec.items()})
    basis.sort(key=lambda v: order.key(order.lead(v)), reverse=True)
    return basis


def reduce_vec(vec: Vec, basis: Sequence[Vec], leads: Sequence[Term], order: TermOrder, fld) -> Vec:
    elements = [_Element(v, None, lead) for v, lead in zip(basis, leads)]
    by_pos: Dict[int, List[int]] = defaultdict(list)
    for index, elem in enumerate(elements):
        by_pos[elem.lead[0]].append(index)
    remainder, _ = _reduce(vec, None, elements, by_pos, order, fld)
    return remainder


def poly_vec(poly: Polynomial) -> Vec:
    return {(0, mono): coeff for mono, coeff in poly.as_dict().items()}


def vec_poly(ring: PolynomialRing, vec: Vec) -> Polynomial:
    return Polynomial(ring, {mono: coeff for (_, mono), coeff in vec.items()})


def reduced_groebner_basis(ambient: PolynomialRing, polys: Sequence[Polynomial],
                           fixed: Sequence[Polynomial] = ()) -> List[Polynomial]:
    """Reduced Groebner basis of the ideal generated by `polys` and `fixed` in the ambient ring."""
    for poly in list(polys) + list(fixed):
        if poly.ring != ambient:
            raise RingMismatch("generator lives in another ring")
        if not poly.is_homogeneous():
            raise InhomogeneousInput(poly.render())
    result = run_engine(ambient, (0,), [poly_vec(p) for p in polys], fixed=[poly_vec(p) for p in fixed])
    return [vec_poly(ambient, v) for v in result.basis]


def reduce_polynomial(poly: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    if not basis or poly.is_zero():
        return poly
    order = TermOrder(poly.ring, (0,))
    vecs = [poly_vec(b) for b in basis]
    leads = [(0, b.leading_monomial()) for b in basis]
    return vec_poly(poly.ring, reduce_vec(poly_vec(poly), vecs, leads, order, poly.ring.field))


def quotient_relations(ring, twists: Sequence[int]) -> List[Vec]:
    """The vectors f*e_p for f in the reduced basis of J and every slot p."""
    return [{(pos, mono): c for mono, c in g.as_dict().items()} for pos in range(len(twists)) for g in ring.quotient_gb]


class SubmoduleGB:
    """Submodule of a twisted free module over R = A/J, carried in A^rank together with J*e_p."""

    def __init__(self, ring, twists: Sequence[int], generators: Sequence[VectorPoly]):
        self.ring = ring
        self.twists = tuple(twists)
        self.generators = tuple(generators)
        for gen in self.generators:
            if gen.twists != self.twists:
                raise RankMismatch(f"generator twists {gen.twists} differ from {self.twists}")
        self._result: Optional[EngineResult] = None

    @property
    def order(self) -> TermOrder:
        return TermOrder(self.ring.ambient, self.twists)

    def _compute(self) -> EngineResult:
        if self._result is None:
            self._result = run_engine(
                self.ring.ambient,
                self.twists,
                [g.terms() for g in self.generators],
                fixed=quotient_relations(self.ring, self.twists),
            )
        return self._result

    @property
    def basis(self) -> Tuple[VectorPoly, ...]:
        return tuple(VectorPoly.from_terms(self.ring.ambient, self.twists, v) for v in self._compute().basis)

    @property
    def leading_terms(self) -> List[Term]:
        return list(self._compute().leads)

    def minimal_generator_indices(self) -> List[int]:
        return list(self._compute().independent)

    def normal_form_terms(self, vec: Vec) -> Vec:
        result = self._compute()
        return reduce_vec(vec, result.basis, result.leads, self.order, self.ring.field)

    def normal_form(self, vector: VectorPoly) -> VectorPoly:
        if vector.twists != self.twists:
            raise RankMismatch(f"vector twists {vector.twists} differ from {self.twists}")
        return VectorPoly.from_terms(self.ring.ambient, self.twists, self.normal_form_terms(vector.terms()))

    def contains(self, vector: VectorPoly) -> bool:
        return self.normal_form(vector).is_zero()


def buchberger(gens, ring=None):
    """Reduced Groebner basis of polynomials (an ideal) or vectors (a submodule), quotient relations included."""
    gens = list(gens)
    if gens and isinstance(gens[0], VectorPoly):
        if ring is None:
            raise ValueError("a ring descriptor is required for submodules")
        return list(SubmoduleGB(ring, gens[0].twists, gens).basis)
    if ring is None:
        if not gens:
            raise ValueError("cannot infer the ring of an empty generator list")
        return reduced_groebner_basis(gens[0].ring, gens)
    return reduced_groebner_basis(ring.ambient, gens, ring.quotient_gb)


def normal_form(f, target):
    """Normal form of a polynomial or vector against an Ideal, a SubmoduleGB or a reduced basis list."""
    if hasattr(target, "normal_form"):
        return target.normal_form(f)
    return reduce_polynomial(f, list(target))


def module_syzygies(columns: Sequence[VectorPoly], ring, source_twists: Optional[Sequence[int]] = None) -> SubmoduleGB:
    """Kernel of R^s -> R^r sending e_i to columns[i], as a submodule of R^s with the given source twists."""
    columns = list(columns)
    if source_twists is None:
        source_twists = [c.degree() for c in columns]
        if any(d is None for d in source_twists):
            raise ValueError("zero columns need explicit source twists")
    source_twists = tuple(source_twists)
    if not columns:
        return SubmoduleGB(ring, source_twists, [])
    twists = columns[0].twists
    ambient = ring.ambient
    result = run_engine(
        ambient,
        twists,
        [c.terms() for c in columns],
        fixed=quotient_relations(ring, twists),
        column_degrees=source_twists,
        track=True,
    )
    vectors: List[VectorPoly] = []
    for _, cof in result.syzygies:
        vector = VectorPoly.from_terms(ambient, source_twists, cof)
        if ring.quotient_gb:
            vector = VectorPoly(
                ambient, source_twists, tuple(reduce_polynomial(c, ring.quotient_gb) for c in vector.components)
            )
        if not vector.is_zero():
            vectors.append(vector)
    logger.debug("syzygies: %d columns -> %d kernel generators", len(columns), len(vectors))
    return SubmoduleGB(ring, source_twists, vectors)
