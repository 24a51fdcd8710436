import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from src.homkernel.errors import IndexOutOfRange, InhomogeneousInput, RingMismatch, ZeroModule
from src.homkernel.groebner import SubmoduleGB, VectorPoly, module_syzygies
from src.homkernel.modules import (
    PresentedModule,
    cycles,
    dual_power,
    free_module,
    hilbert_function,
    is_zero,
    minimal_presentation,
    subquotient,
    transposed_action,
)
from src.homkernel.polynomials import Polynomial
from src.homkernel.rings import RingDescriptor

logger = logging.getLogger("homkernel.homology")


@dataclass
class BettiTable:
    """(homological index, internal degree) -> multiplicity, for spots 0..bound."""

    entries: Dict[Tuple[int, int], int]
    bound: int

    def betti(self, index: int) -> int:
        return sum(v for (i, _), v in self.entries.items() if i == index)

    def totals(self) -> List[int]:
        return [self.betti(i) for i in range(self.bound + 1)]

    def to_dict(self) -> Dict:
        return {
            "bound": self.bound,
            "totals": self.totals(),
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }

    def render(self) -> str:
        """Macaulay layout: columns are homological indices, rows are internal degree minus index."""
        columns = list(range(self.bound + 1))
        totals = self.totals()
        rows = sorted({j - i for (i, j) in self.entries}) or [0]
        cell = {(j - i, i): v for (i, j), v in self.entries.items()}
        width = max([len(str(c)) for c in columns] + [len(str(t)) for t in totals] + [len(str(v)) for v in cell.values()] + [1])
        label_width = max(len("total:"), max(len(f"{r}:") for r in rows))
        lines = [" " * label_width + " " + " ".join(str(c).rjust(width) for c in columns)]
        lines.append("total:".rjust(label_width) + " " + " ".join(str(t).rjust(width) for t in totals))
        for r in rows:
            values = [str(cell[(r, c)]) if (r, c) in cell else "." for c in columns]
            lines.append(f"{r}:".rjust(label_width) + " " + " ".join(v.rjust(width) for v in values))
        return "\n".join(lines)


@dataclass
class FreeComplex:
    """F_0 <- F_1 <- ... <- F_L; differentials[i - 1] holds the columns of d_i in the twists of F_(i-1)."""

    ring: RingDescriptor
    spots: List[Tuple[int, ...]]
    differentials: List[List[VectorPoly]]
    resolution_of: Optional[PresentedModule] = None
    is_minimal: bool = False
    exact: bool = True
    presentations: List[PresentedModule] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.spots) - 1

    def rank(self, index: int) -> int:
        if 0 <= index <= self.length:
            return len(self.spots[index])
        return 0

    def differential(self, index: int) -> Optional[List[VectorPoly]]:
        """Columns of d_i, or None for the zero maps outside 1..L."""
        if 1 <= index <= self.length:
            return self.differentials[index - 1]
        return None

    def truncate(self, bound: int) -> "FreeComplex":
        return FreeComplex(
            self.ring,
            list(self.spots[: bound + 1]),
            list(self.differentials[:bound]),
            self.resolution_of,
            self.is_minimal,
            self.exact,
            list(self.presentations[: bound + 1]),
        )

    def betti_table(self) -> BettiTable:
        entries: Dict[Tuple[int, int], int] = {}
        for i, twists in enumerate(self.spots):
            for t in twists:
                entries[(i, t)] = entries.get((i, t), 0) + 1
        return BettiTable(entries, self.length)


@dataclass
class KoszulComplex(FreeComplex):
    sequence: List[Polynomial] = field(default_factory=list)
    subsets: List[List[Tuple[int, ...]]] = field(default_factory=list)


def _apply(columns: Sequence[VectorPoly], vector: VectorPoly, ring: RingDescriptor) -> List[Polynomial]:
    rows = columns[0].rank if columns else 0
    result = [ring.zero() for _ in range(rows)]
    for coeff, col in zip(vector.components, columns):
        if coeff.is_zero():
            continue
        result = [r + coeff * c for r, c in zip(result, col.components)]
    return [ring.reduce(r) for r in result]


def check_complex(complex_: FreeComplex) -> bool:
    """d_i o d_(i+1) = 0 in R for every consecutive pair."""
    ring = complex_.ring
    for i in range(1, complex_.length):
        lower, upper = complex_.differential(i), complex_.differential(i + 1)
        if not lower or not upper:
            continue
        for col in upper:
            if any(not c.is_zero() for c in _apply(lower, col, ring)):
                return False
    return True


def _next_syzygies(ring: RingDescriptor, columns: List[VectorPoly], twists: Tuple[int, ...]) -> Tuple[List[VectorPoly], PresentedModule, int]:
    """Minimal generators of the kernel of `columns`, the cokernel they present, and the top kernel degree."""
    if not twists:
        return [], PresentedModule(ring, ()), 0
    kernel = module_syzygies(columns, ring, twists)
    gens = list(kernel.generators)
    keep = SubmoduleGB(ring, twists, gens).minimal_generator_indices()
    chosen = [gens[k] for k in keep]
    top = max([g.degree() for g in gens] + list(twists))
    return chosen, PresentedModule(ring, twists, chosen, minimal=True), top


def _exact_at(ring: RingDescriptor, lower: List[VectorPoly], upper: List[VectorPoly], below: Tuple[int, ...],
              here: PresentedModule, previous: PresentedModule, kernel_top: int) -> bool:
    """ker d_i = im d_(i+1): the composite vanishes and HF(coker d_(i+1)) = HF(F_(i-1)) - HF(coker d_i)."""
    for col in upper:
        if any(not c.is_zero() for c in _apply(lower, col, ring)):
            return False
    if not here.twists:
        return True
    low = min(here.twists + below)
    high = max([kernel_top] + list(here.twists) + list(below))
    expected = [
        f - c for f, c in zip(
            hilbert_function(free_module(ring, below), high, low),
            hilbert_function(previous, high, low),
        )
    ]
    return list(hilbert_function(here, high, low)) == expected


def _extend(module: PresentedModule, cached: FreeComplex, bound: int) -> FreeComplex:
    ring = module.ring
    grown = cached.truncate(cached.length)
    while grown.length < bound:
        top = grown.length
        if top == 0:
            minimal = minimal_presentation(module)
            columns, presented, certified = list(minimal.relations), minimal, True
        else:
            lower = grown.differentials[top - 1]
            columns, presented, kernel_top = _next_syzygies(ring, lower, grown.spots[top])
            previous = grown.presentations[top - 1]
            certified = _exact_at(ring, lower, columns, grown.spots[top - 1], presented, previous, kernel_top)
            if not certified:
                logger.warning("resolution step %d failed its exactness check", top + 1)
        twists = tuple(c.degree() for c in columns)
        grown.spots.append(twists)
        grown.differentials.append(columns)
        grown.presentations.append(presented)
        grown.exact = grown.exact and certified
        logger.debug("resolution step %d: rank %d, degrees %s", top + 1, len(twists), twists)
    return grown


def resolve(module: PresentedModule, bound: int) -> Tuple[FreeComplex, BettiTable]:
    """Minimal free resolution truncated at homological degree `bound`, cached on the module."""
    if bound < 0:
        raise IndexOutOfRange(f"resolution bound must be nonnegative, got {bound}")
    with module._lock:
        cached: Optional[FreeComplex] = module._resolution
        if cached is None:
            minimal = minimal_presentation(module)
            cached = FreeComplex(module.ring, [minimal.twists], [], resolution_of=module, is_minimal=True)
        if cached.length < bound:
            cached = _extend(module, cached, bound)
        module._resolution = cached
        result = cached.truncate(bound)
    return result, result.betti_table()


def syzygy(module: PresentedModule, index: int) -> PresentedModule:
    """Syz_i(M) = coker(d_(i+1)) on F_i; Syz_0(M) = M."""
    if index < 0:
        raise IndexOutOfRange(f"syzygy index must be nonnegative, got {index}")
    if index == 0:
        return module
    complex_, _ = resolve(module, index + 1)
    return complex_.presentations[index]


def projective_dimension(module: PresentedModule, bound: int) -> Optional[int]:
    """pd M when the resolution reaches a zero module within `bound`, otherwise None."""
    if is_zero(module):
        raise ZeroModule("projective dimension of the zero module")
    complex_, _ = resolve(module, bound + 1)
    for index in range(1, bound + 2):
        if complex_.rank(index) == 0:
            return index - 1
    logger.warning("projective dimension exceeds the resolution bound %d", bound)
    return None


def koszul_complex(ring: RingDescriptor, sequence: Optional[Sequence[Polynomial]] = None) -> KoszulComplex:
    """Exterior-algebra complex with d(e_S) = sum_k (-1)^k s_k e_(S - s_k)."""
    sequence = list(sequence) if sequence is not None else ring.gens()
    degrees = []
    for element in sequence:
        if element.ring != ring.ambient:
            raise RingMismatch("Koszul sequence element lives in another ring")
        ok, degree = element.homogeneity()
        if not ok:
            raise InhomogeneousInput(element.render())
        degrees.append(degree or 0)
    n = len(sequence)
    subsets = [list(combinations(range(n), i)) for i in range(n + 1)]
    spots = [tuple(sum(degrees[s] for s in subset) for subset in level) for level in subsets]
    differentials: List[List[VectorPoly]] = []
    for i in range(1, n + 1):
        index = {subset: k for k, subset in enumerate(subsets[i - 1])}
        columns = []
        for subset in subsets[i]:
            comps = [ring.zero() for _ in subsets[i - 1]]
            for k, s in enumerate(subset):
                face = subset[:k] + subset[k + 1:]
                comps[index[face]] = sequence[s] if k % 2 == 0 else -sequence[s]
            columns.append(VectorPoly(ring.ambient, spots[i - 1], tuple(comps)))
        differentials.append(columns)
    return KoszulComplex(ring, spots, differentials, sequence=sequence, subsets=subsets)


def _tensor_spot(twists: Sequence[int], n: PresentedModule) -> Tuple[Tuple[int, ...], List[VectorPoly]]:
    """F (x) N = N^rank(F): slot (a, j) in degree t_a + u_j, relations copied into each block."""
    ring = n.ring
    size = len(twists) * n.rank
    slots = tuple(t + u for t in twists for u in n.twists)
    relations = []
    for a in range(len(twists)):
        for rel in n.relations:
            comps = [ring.zero()] * size
            for j in range(n.rank):
                comps[a * n.rank + j] = rel.components[j]
            relations.append(VectorPoly(ring.ambient, slots, tuple(comps)))
    return slots, relations


def _tensor_differential(columns: Sequence[VectorPoly], rows: int, n: PresentedModule,
                         target: Tuple[int, ...]) -> List[VectorPoly]:
    """Columns of d (x) id: generator (a, j) goes to sum_b d[b][a] e_(b, j)."""
    ring = n.ring
    result = []
    for col in columns:
        for j in range(n.rank):
            comps = [ring.zero()] * (rows * n.rank)
            for b in range(rows):
                comps[b * n.rank + j] = col.components[b]
            result.append(VectorPoly(ring.ambient, target, tuple(comps)))
    return result


def tensor_homology(complex_: FreeComplex, module: PresentedModule, index: int) -> PresentedModule:
    """H_i(F (x) N)."""
    ring = complex_.ring
    n = minimal_presentation(module)
    slots, relations = _tensor_spot(complex_.spots[index], n)
    if not slots:
        return PresentedModule(ring, ())
    lower = complex_.differential(index)
    if lower is None or index == 0:
        outgoing, target_relations = None, []
    else:
        below, target_relations = _tensor_spot(complex_.spots[index - 1], n)
        outgoing = _tensor_differential(lower, len(complex_.spots[index - 1]), n, below)
    upper = complex_.differential(index + 1) or []
    boundaries = _tensor_differential(upper, len(complex_.spots[index]), n, slots)
    kernel = cycles(ring, slots, outgoing, target_relations)
    return subquotient(ring, slots, kernel, boundaries + relations)


def hom_cohomology(complex_: FreeComplex, module: PresentedModule, index: int) -> PresentedModule:
    """H^i(Hom(F, N))."""
    ring = complex_.ring
    n = minimal_presentation(module)
    here = dual_power(complex_.spots[index], n)
    if not here.twists:
        return PresentedModule(ring, ())
    above = complex_.differential(index + 1)
    if not above:
        outgoing, target_relations = None, []
    else:
        there = dual_power(complex_.spots[index + 1], n)
        outgoing = transposed_action(above, n.rank, there.twists)
        target_relations = list(there.relations)
    incoming = transposed_action(complex_.differential(index) or [], n.rank, here.twists) if index > 0 else []
    kernel = cycles(ring, here.twists, outgoing, target_relations)
    return subquotient(ring, here.twists, kernel, incoming + list(here.relations))


def homology_at(complex_: FreeComplex, index: int) -> PresentedModule:
    if not 0 <= index <= complex_.length:
        raise IndexOutOfRange(f"spot {index} outside 0..{complex_.length}")
    return tensor_homology(complex_, free_module(complex_.ring, (0,)), index)


def _check_same_ring(first: PresentedModule, second: PresentedModule) -> None:
    if first.ring != second.ring:
        raise RingMismatch(f"{first.ring} vs {second.ring}")


def tor(index: int, first: PresentedModule, second: PresentedModule) -> PresentedModule:
    """Tor_i(M, N) from the minimal resolution of M."""
    if index < 0:
        raise IndexOutOfRange(f"Tor index must be nonnegative, got {index}")
    _check_same_ring(first, second)
    complex_, _ = resolve(first, index + 1)
    return tensor_homology(complex_, second, index)


def ext(index: int, first: PresentedModule, second: PresentedModule) -> PresentedModule:
    """Ext^i(M, N) from the minimal resolution of M."""
    if index < 0:
        raise IndexOutOfRange(f"Ext index must be nonnegative, got {index}")
    _check_same_ring(first, second)
    complex_, _ = resolve(first, index + 1)
    return hom_cohomology(complex_, second, index)


def koszul_homology(module: PresentedModule, index: int, sequence: Optional[Sequence[Polynomial]] = None) -> PresentedModule:
    complex_ = koszul_complex(module.ring, sequence)
    if not 0 <= index <= complex_.length:
        raise IndexOutOfRange(f"Koszul spot {index} outside 0..{complex_.length}")
    return tensor_homology(complex_, module, index)


def koszul_cohomology(module: PresentedModule, index: int, sequence: Optional[Sequence[Polynomial]] = None) -> PresentedModule:
    complex_ = koszul_complex(module.ring, sequence)
    if not 0 <= index <= complex_.length:
        raise IndexOutOfRange(f"Koszul spot {index} outside 0..{complex_.length}")
    return hom_cohomology(complex_, module, index)


def kdepth(module: PresentedModule) -> int:
    """d minus the top nonvanishing Koszul homology index on the variables."""
    if is_zero(module):
        raise ZeroModule("Koszul depth of the zero module")
    d = module.ring.nvars
    for index in range(d, -1, -1):
        if not is_zero(koszul_homology(module, index)):
            return d - index
    return d


def auslander_buchsbaum_holds(module: PresentedModule, bound: int) -> Optional[bool]:
    """pd M + depth M = depth R when pd M is certified within the bound; None otherwise."""
    pd = projective_dimension(module, bound)
    if pd is None:
        return None
    ring_module = free_module(module.ring, (0,))
    return pd + kdepth(module) == kdepth(ring_module)
