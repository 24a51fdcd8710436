import logging
import math
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.homkernel import monomial_ideals
from src.homkernel.errors import InhomogeneousInput, RankMismatch, RingMismatch, ZeroModule
from src.homkernel.groebner import SubmoduleGB, VectorPoly, module_syzygies
from src.homkernel.ideals import Ideal, ideal_intersect, ideal_power, maximal_ideal, unit_ideal
from src.homkernel.polynomials import Polynomial
from src.homkernel.rings import RingDescriptor

logger = logging.getLogger("homkernel.modules")

Length = Union[int, float]


@dataclass(frozen=True)
class FreeModule:
    ring: RingDescriptor
    twists: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)


class PresentedModule:
    """coker(F_1 -> F_0) over R; generator i of F_0 sits in degree twists[i], relations are the columns."""

    def __init__(self, ring: RingDescriptor, twists: Sequence[int], relations: Sequence[VectorPoly] = (),
                 minimal: bool = False):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        columns: List[VectorPoly] = []
        for col in relations:
            if col.rank != len(self.twists):
                raise RankMismatch(f"relation of rank {col.rank} for {len(self.twists)} generators")
            col = col.with_twists(self.twists)
            if ring.quotient_gb:
                col = VectorPoly(ring.ambient, self.twists, tuple(ring.reduce(c) for c in col.components))
            if col.is_zero():
                continue
            ok, _ = col.homogeneity()
            if not ok:
                raise InhomogeneousInput(col.render(), f"twists {self.twists}")
            columns.append(col)
        self.relations: Tuple[VectorPoly, ...] = tuple(columns)
        self._span: Optional[SubmoduleGB] = None
        self._minimal: Optional["PresentedModule"] = self if minimal else None
        self._resolution = None
        self._lock = threading.RLock()
        self.embedding: Optional[List[VectorPoly]] = None

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def free_cover(self) -> FreeModule:
        return FreeModule(self.ring, self.twists)

    @property
    def relation_degrees(self) -> List[int]:
        return [col.degree() for col in self.relations]

    @property
    def span(self) -> SubmoduleGB:
        if self._span is None:
            with self._lock:
                if self._span is None:
                    self._span = SubmoduleGB(self.ring, self.twists, self.relations)
        return self._span

    def unit(self, index: int) -> VectorPoly:
        return VectorPoly.unit(self.ring.ambient, self.twists, index)

    def vector(self, entries: Sequence[Union[str, int, Polynomial]]) -> VectorPoly:
        return VectorPoly(self.ring.ambient, self.twists, tuple(self.ring.coerce(e) for e in entries))

    def matrix(self) -> List[List[Polynomial]]:
        """Row-major relation matrix."""
        return [[col.components[i] for col in self.relations] for i in range(self.rank)]

    def render(self) -> str:
        rows = "; ".join("[" + ", ".join(c.render() for c in col.components) + "]" for col in self.relations)
        return f"coker twists ({', '.join(str(t) for t in self.twists)}) [{rows}]"

    def __repr__(self) -> str:
        return f"PresentedModule({self.render()})"


def free_module(ring: RingDescriptor, twists: Sequence[int]) -> PresentedModule:
    return PresentedModule(ring, twists, (), minimal=True)


def make_coker(ring: RingDescriptor, twists: Optional[Sequence[int]], columns: Sequence) -> PresentedModule:
    """Cokernel of the matrix whose columns are given as VectorPolys or entry lists (polynomials or text)."""
    columns = list(columns)
    if twists is None:
        if not columns:
            raise RankMismatch("twists are required when there are no relation columns")
        first = columns[0]
        twists = [0] * (first.rank if isinstance(first, VectorPoly) else len(first))
    twists = tuple(twists)
    vectors: List[VectorPoly] = []
    for index, col in enumerate(columns):
        if isinstance(col, VectorPoly):
            vec = col
        else:
            if len(col) != len(twists):
                raise RankMismatch(f"column {index} has {len(col)} entries, expected {len(twists)}")
            vec = VectorPoly(ring.ambient, twists, tuple(ring.coerce(e) for e in col))
        if vec.rank != len(twists):
            raise RankMismatch(f"column {index} has rank {vec.rank}, expected {len(twists)}")
        vectors.append(vec.with_twists(twists))
    return PresentedModule(ring, twists, vectors)


def quotient_ring(ring: RingDescriptor, ideal: Ideal) -> PresentedModule:
    """R/I as a cyclic module."""
    ring.same_ring(ideal.ring)
    return PresentedModule(ring, (0,), [VectorPoly(ring.ambient, (0,), (g,)) for g in ideal.gens])


def residue_field(ring: RingDescriptor) -> PresentedModule:
    return PresentedModule(ring, (0,), [VectorPoly(ring.ambient, (0,), (g,)) for g in ring.gens()])


def _same_ring(first: PresentedModule, second: PresentedModule) -> None:
    if first.ring != second.ring:
        raise RingMismatch(f"{first.ring} vs {second.ring}")


def minimal_presentation(module: PresentedModule) -> PresentedModule:
    """Graded Nakayama: drop unit pivots (first in row-major order), then keep minimal relations."""
    if module._minimal is not None:
        return module._minimal
    with module._lock:
        if module._minimal is None:
            module._minimal = _reduce_presentation(module)
        return module._minimal


def _reduce_presentation(module: PresentedModule) -> PresentedModule:
    ring = module.ring
    fld = ring.field
    twists = list(module.twists)
    columns = [list(col.components) for col in module.relations]
    while True:
        pivot = None
        for i in range(len(twists)):
            for j, col in enumerate(columns):
                if not col[i].is_zero() and col[i].constant_term() != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        inv = fld.inv(columns[j][i].constant_term())
        pivot_col = columns[j]
        updated = []
        for l, col in enumerate(columns):
            if l == j:
                continue
            factor = col[i] * inv
            if not factor.is_zero():
                col = [ring.reduce(c - factor * p) for c, p in zip(col, pivot_col)]
            updated.append(col[:i] + col[i + 1:])
        twists.pop(i)
        columns = [col for col in updated if any(not c.is_zero() for c in col)]
    vectors = [VectorPoly(ring.ambient, tuple(twists), tuple(col)) for col in columns]
    reduced = PresentedModule(ring, twists, vectors)
    keep = reduced.span.minimal_generator_indices()
    minimal = PresentedModule(ring, twists, [reduced.relations[k] for k in keep], minimal=True)
    minimal._span = reduced.span
    logger.debug(
        "minimal presentation: %dx%d -> %dx%d",
        module.rank, len(module.relations), minimal.rank, len(minimal.relations),
    )
    return minimal


def betti_numbers(module: PresentedModule) -> Tuple[int, int]:
    minimal = minimal_presentation(module)
    return minimal.rank, len(minimal.relations)


def is_zero(module: PresentedModule) -> bool:
    return minimal_presentation(module).rank == 0


def is_free(module: PresentedModule) -> Tuple[bool, int, Tuple[int, ...]]:
    """(free?, rank, generator degrees); the zero module counts as free of rank 0."""
    minimal = minimal_presentation(module)
    if minimal.relations:
        return False, minimal.rank, minimal.twists
    return True, minimal.rank, minimal.twists


def _slot_ideals(module: PresentedModule) -> List[np.ndarray]:
    nvars = module.ring.nvars
    per_slot: List[List[Tuple[int, ...]]] = [[] for _ in module.twists]
    for pos, mono in module.span.leading_terms:
        per_slot[pos].append(mono)
    return [monomial_ideals.minimalize(monomial_ideals.exponent_matrix(m, nvars)) for m in per_slot]


def length(module: PresentedModule) -> Length:
    """Length over R; math.inf when some slot of the initial module lacks a pure power of a variable."""
    total = 0
    for slot in _slot_ideals(module):
        count = monomial_ideals.standard_monomial_count(slot)
        if count == math.inf:
            return math.inf
        total += count
    return total


def hilbert_function(module: PresentedModule, d_max: int, d_min: int = 0) -> Tuple[int, ...]:
    if d_max < d_min:
        raise ValueError("d_max must not be below d_min")
    ambient = module.ring.ambient
    slots = _slot_ideals(module)
    values = []
    for degree in range(d_min, d_max + 1):
        values.append(sum(
            monomial_ideals.standard_monomials_of_degree(slot, ambient.monomials_of_degree(degree - twist))
            for slot, twist in zip(slots, module.twists)
        ))
    return tuple(values)


def direct_sum(first: PresentedModule, second: PresentedModule) -> PresentedModule:
    _same_ring(first, second)
    ring = first.ring
    twists = first.twists + second.twists
    zeros_first = tuple(ring.zero() for _ in first.twists)
    zeros_second = tuple(ring.zero() for _ in second.twists)
    columns = [VectorPoly(ring.ambient, twists, c.components + zeros_second) for c in first.relations]
    columns += [VectorPoly(ring.ambient, twists, zeros_first + c.components) for c in second.relations]
    return PresentedModule(ring, twists, columns)


def direct_sum_all(modules: Sequence[PresentedModule], ring: RingDescriptor) -> PresentedModule:
    result = PresentedModule(ring, ())
    for module in modules:
        result = direct_sum(result, module)
    return result


def twist(module: PresentedModule, shift: int) -> PresentedModule:
    """Shift every degree by `shift`: hilbert_function(twist(M, d))(n) = hilbert_function(M)(n - d)."""
    twists = tuple(t + shift for t in module.twists)
    return PresentedModule(module.ring, twists, [c.with_twists(twists) for c in module.relations])


@dataclass
class ModuleMap:
    """Degree-0 map; columns[j] is the image of source generator j in the target free cover."""

    source: PresentedModule
    target: PresentedModule
    columns: Tuple[VectorPoly, ...]

    def __post_init__(self) -> None:
        _same_ring(self.source, self.target)
        self.columns = tuple(c.with_twists(self.target.twists) for c in self.columns)
        if len(self.columns) != self.source.rank:
            raise RankMismatch(f"{len(self.columns)} images for {self.source.rank} source generators")
        for twist_j, col in zip(self.source.twists, self.columns):
            ok, deg = col.homogeneity()
            if not ok or (deg is not None and deg != twist_j):
                raise InhomogeneousInput(col.render(), f"image of a generator of degree {twist_j}")

    def apply(self, vector: VectorPoly) -> VectorPoly:
        result = VectorPoly.zero(self.source.ring.ambient, self.target.twists)
        for coeff, col in zip(vector.components, self.columns):
            if not coeff.is_zero():
                result = result + col.scale(coeff)
        return result

    def is_well_defined(self) -> bool:
        return all(self.target.span.contains(self.apply(rel)) for rel in self.source.relations)


def cycles(ring: RingDescriptor, twists: Sequence[int], outgoing: Optional[Sequence[VectorPoly]],
           target_relations: Sequence[VectorPoly]) -> List[VectorPoly]:
    """Generators of {v : outgoing(v) lies in the target relation span}; `None` means the zero map."""
    twists = tuple(twists)
    if outgoing is None:
        return [VectorPoly.unit(ring.ambient, twists, i) for i in range(len(twists))]
    if not twists:
        return []
    outgoing = list(outgoing)
    target_relations = list(target_relations)
    degrees = list(twists) + [r.degree() for r in target_relations]
    syz = module_syzygies(outgoing + target_relations, ring, degrees)
    result = []
    for vector in syz.generators:
        head = VectorPoly(ring.ambient, twists, vector.components[: len(twists)])
        if not head.is_zero():
            result.append(head)
    return result


def subquotient(ring: RingDescriptor, twists: Sequence[int], kernel: Sequence[VectorPoly],
                image: Sequence[VectorPoly]) -> PresentedModule:
    """(K + Q)/Q re-presented as a cokernel whose generators are K reduced modulo Q."""
    twists = tuple(twists)
    image = [v.with_twists(twists) for v in image]
    span = SubmoduleGB(ring, twists, image)
    gens = []
    for vector in kernel:
        reduced = span.normal_form(vector.with_twists(twists))
        if not reduced.is_zero():
            gens.append(reduced)
    if not gens:
        return PresentedModule(ring, (), ())
    degrees = [g.degree() for g in gens]
    syz = module_syzygies(gens + image, ring, degrees + [v.degree() for v in image])
    relations = [
        VectorPoly(ring.ambient, tuple(degrees), v.components[: len(gens)]) for v in syz.generators
    ]
    result = PresentedModule(ring, degrees, relations)
    result.embedding = gens
    return result


def kernel_of_map(f: ModuleMap) -> PresentedModule:
    ring = f.source.ring
    kernel = cycles(ring, f.source.twists, f.columns, f.target.relations)
    return subquotient(ring, f.source.twists, kernel, f.source.relations)


def image_of_map(f: ModuleMap) -> PresentedModule:
    return subquotient(f.source.ring, f.target.twists, f.columns, f.target.relations)


def cokernel_of_map(f: ModuleMap) -> PresentedModule:
    return PresentedModule(f.target.ring, f.target.twists, f.target.relations + f.columns)


def multiplication_map(module: PresentedModule, element: Polynomial) -> ModuleMap:
    """Multiplication by a homogeneous element f as a degree-0 map M -> twist(M, -deg f)."""
    ok, degree = element.homogeneity()
    if not ok:
        raise InhomogeneousInput(element.render())
    degree = degree or 0
    target = twist(module, -degree)
    columns = [module.unit(i).scale(element).with_twists(target.twists) for i in range(module.rank)]
    return ModuleMap(module, target, tuple(columns))


def colon_in_module(module: PresentedModule, element: Union[str, Polynomial]) -> PresentedModule:
    """(0 :_M f), the kernel of multiplication by f."""
    element = module.ring.coerce(element)
    return kernel_of_map(multiplication_map(minimal_presentation(module), element))


def socle(module: PresentedModule) -> PresentedModule:
    """(0 :_M m), the kernel of M -> direct sum of twist(M, -w_k) given by the variables."""
    ring = module.ring
    minimal = minimal_presentation(module)
    if minimal.rank == 0:
        return minimal
    targets = [twist(minimal, -w) for w in ring.weights]
    target = direct_sum_all(targets, ring)
    columns = []
    for i in range(minimal.rank):
        comps: List[Polynomial] = []
        for k in range(ring.nvars):
            comps.extend(ring.var(k) if j == i else ring.zero() for j in range(minimal.rank))
        columns.append(VectorPoly(ring.ambient, target.twists, tuple(comps)))
    return kernel_of_map(ModuleMap(minimal, target, tuple(columns)))


def depth_zero_test(module: PresentedModule) -> bool:
    if is_zero(module):
        raise ZeroModule("depth of the zero module is undefined")
    return not is_zero(socle(module))


def tensor(first: PresentedModule, second: PresentedModule) -> PresentedModule:
    _same_ring(first, second)
    ring = first.ring
    m = minimal_presentation(first)
    n = minimal_presentation(second)
    twists = tuple(t + u for t in m.twists for u in n.twists)
    size = len(twists)
    columns: List[VectorPoly] = []

    def _vector(entries: Dict[int, Polynomial]) -> VectorPoly:
        return VectorPoly(ring.ambient, twists, tuple(entries.get(k, ring.zero()) for k in range(size)))

    for rel in m.relations:
        for j in range(n.rank):
            columns.append(_vector({i * n.rank + j: rel.components[i] for i in range(m.rank)}))
    for i in range(m.rank):
        for rel in n.relations:
            columns.append(_vector({i * n.rank + j: rel.components[j] for j in range(n.rank)}))
    return PresentedModule(ring, twists, columns)


def quotient_by_ideal(module: PresentedModule, ideal: Ideal) -> PresentedModule:
    """M / IM."""
    module.ring.same_ring(ideal.ring)
    columns = list(module.relations)
    for i in range(module.rank):
        for g in ideal.nonzero_gens():
            columns.append(module.unit(i).scale(g))
    return PresentedModule(module.ring, module.twists, columns)


def power_of_maximal(ring: RingDescriptor, exponent: int) -> PresentedModule:
    """R/m^n."""
    return quotient_ring(ring, ideal_power(maximal_ideal(ring), exponent))


def hom_blocks(first: PresentedModule, second: PresentedModule) -> Tuple[PresentedModule, List[VectorPoly], PresentedModule]:
    """Hom(F_0, N) -> Hom(F_1, N) for the minimal presentation F_1 -> F_0 of the first module."""
    _same_ring(first, second)
    m = minimal_presentation(first)
    n = minimal_presentation(second)
    source = dual_power(m.twists, n)
    target = dual_power([r.degree() for r in m.relations], n)
    columns = transposed_action(m.relations, n.rank, target.twists)
    return source, columns, target


def dual_power(degrees: Sequence[int], module: PresentedModule) -> PresentedModule:
    """Hom(F, N) = N^rank(F), slot (a, j) in degree u_j - t_a."""
    ring = module.ring
    parts = [twist(module, -t) for t in degrees]
    return direct_sum_all(parts, ring)


def transposed_action(differential: Sequence[VectorPoly], n_rank: int, target_twists: Sequence[int]) -> List[VectorPoly]:
    """Columns of d^T (x) id: generator (a, j) goes to sum_c d[a][c] e_(c, j)."""
    columns: List[VectorPoly] = []
    if not differential:
        return columns
    ring_ambient = differential[0].ring
    rows = differential[0].rank
    size = len(differential) * n_rank
    for a in range(rows):
        for j in range(n_rank):
            comps = [ring_ambient.zero()] * size
            for c, col in enumerate(differential):
                comps[c * n_rank + j] = col.components[a]
            columns.append(VectorPoly(ring_ambient, tuple(target_twists), tuple(comps)))
    return columns


def hom_module(first: PresentedModule, second: PresentedModule) -> PresentedModule:
    source, columns, target = hom_blocks(first, second)
    if not minimal_presentation(first).relations:
        return source
    return kernel_of_map(ModuleMap(source, target, tuple(columns)))


def transpose(module: PresentedModule) -> PresentedModule:
    """coker of the transposed minimal presentation matrix, with negated degrees."""
    minimal = minimal_presentation(module)
    ring = minimal.ring
    twists = tuple(-d for d in minimal.relation_degrees)
    columns = []
    for i in range(minimal.rank):
        columns.append(VectorPoly(ring.ambient, twists, tuple(col.components[i] for col in minimal.relations)))
    return PresentedModule(ring, twists, columns)


def annihilator(module: PresentedModule) -> Ideal:
    """intersection over generators of (U : e_i), U the relation span."""
    ring = module.ring
    minimal = minimal_presentation(module)
    if minimal.rank == 0:
        return unit_ideal(ring)
    result: Optional[Ideal] = None
    relations = list(minimal.relations)
    for i in range(minimal.rank):
        unit = minimal.unit(i)
        degrees = [minimal.twists[i]] + [r.degree() for r in relations]
        syz = module_syzygies([unit] + relations, ring, degrees)
        part = Ideal(ring, [v.components[0] for v in syz.generators if not ring.is_zero(v.components[0])])
        result = part if result is None else ideal_intersect(result, part)
    return result


def hilbert_window(module: PresentedModule, prefix: int) -> Tuple[int, Tuple[int, ...]]:
    """(start degree, values) over `prefix` graded pieces starting at the lowest generator degree."""
    minimal = minimal_presentation(module)
    start = min(minimal.twists) if minimal.twists else 0
    return start, hilbert_function(minimal, start + prefix - 1, start)


def summary(module: PresentedModule, prefix: int = 6) -> Dict:
    """Module summary for reports: Betti numbers, degrees, Hilbert prefix, length, annihilator."""
    minimal = minimal_presentation(module)
    if minimal.rank == 0:
        return {"beta0": 0, "beta1": 0, "length": 0}
    start, values = hilbert_window(minimal, prefix)
    size = length(minimal)
    return {
        "beta0": minimal.rank,
        "beta1": len(minimal.relations),
        "degrees": list(minimal.twists),
        "hilbert_start": start,
        "hilbert": list(values),
        "length": "infinite" if size == math.inf else size,
        "annihilator": annihilator(minimal).render_gb(),
    }
