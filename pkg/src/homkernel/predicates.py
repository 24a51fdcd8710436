import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.homkernel import monomial_ideals
from src.homkernel.errors import NotBurch, NotMonomial, NotRegularSequence, PdNotOne, UnitIdeal, ZeroModule
from src.homkernel.homology import projective_dimension, tor
from src.homkernel.ideals import (
    Ideal,
    ideal_colon,
    ideal_equal,
    ideal_power,
    ideal_product,
    maximal_ideal,
)
from src.homkernel.models import (
    EXHAUSTED,
    LICHTENBAUM_VIOLATION,
    QUASI_VIOLATION,
    TORRIGID_VIOLATION,
    ArtinReesReport,
    ArtinReesStep,
    BurchReport,
    BurchSharpEntry,
    BurchSharpReport,
    Cor55Report,
    MpowerEntry,
    Witness,
)
from src.homkernel.groebner import SubmoduleGB, VectorPoly
from src.homkernel.modules import (
    PresentedModule,
    colon_in_module,
    cycles,
    is_free,
    is_zero,
    length,
    minimal_presentation,
    power_of_maximal,
    quotient_by_ideal,
    quotient_ring,
    socle,
    summary,
)
from src.homkernel.polynomials import Polynomial
from src.homkernel.rings import RingDescriptor

logger = logging.getLogger("homkernel.predicates")

CYCLIC = "cyclic-monomial"
EXPLICIT = "explicit"


@dataclass
class CandidateFamily:
    """Bounded, deterministic stand-in for "all finitely generated modules"."""

    ring: RingDescriptor
    shape: str = CYCLIC
    max_degree: int = 3
    max_gens: int = 2
    modules: List[Tuple[str, PresentedModule]] = field(default_factory=list)
    _members: Optional[List[Tuple[str, PresentedModule]]] = field(default=None, repr=False)

    @classmethod
    def cyclic(cls, ring: RingDescriptor, max_degree: int, max_gens: int = 2) -> "CandidateFamily":
        return cls(ring, CYCLIC, max_degree, max_gens)

    @classmethod
    def explicit(cls, ring: RingDescriptor, modules: Sequence[Union[PresentedModule, Tuple[str, PresentedModule]]]) -> "CandidateFamily":
        labelled = []
        for index, item in enumerate(modules):
            labelled.append(item if isinstance(item, tuple) else (f"F{index + 1}", item))
        return cls(ring, EXPLICIT, 0, 0, labelled)

    def bounds(self) -> Dict:
        if self.shape == CYCLIC:
            return {"family": CYCLIC, "max_degree": self.max_degree, "max_gens": self.max_gens, "size": len(self.members())}
        return {"family": EXPLICIT, "size": len(self.members())}

    def members(self) -> List[Tuple[str, PresentedModule]]:
        if self._members is None:
            self._members = self._enumerate() if self.shape == CYCLIC else list(self.modules)
            logger.debug("family %s: %d members", self.shape, len(self._members))
        return self._members

    def ideals(self) -> List[Ideal]:
        """The enumerated cyclic ideals, in family order."""
        return [self._ideals[label] for label, _ in self.members()] if self.shape == CYCLIC else []

    def _enumerate(self) -> List[Tuple[str, PresentedModule]]:
        ring = self.ring
        ambient = ring.ambient
        leads = monomial_ideals.exponent_matrix([g.leading_monomial() for g in ring.quotient_gb], ring.nvars)
        standard = []
        for degree in range(1, self.max_degree + 1):
            candidates = ambient.monomials_of_degree(degree)
            if not candidates:
                continue
            mask = monomial_ideals.divisible(monomial_ideals.exponent_matrix(candidates, ring.nvars), leads)
            standard.extend(m for m, hit in zip(candidates, mask) if not hit)
        subsets = []
        for size in range(1, self.max_gens + 1):
            for subset in combinations(standard, size):
                total = sum(ambient.degree(m) for m in subset)
                subsets.append((total, tuple(sorted(subset, reverse=True)), subset))
        subsets.sort(key=lambda item: (item[0], item[1]))
        members: List[Tuple[str, PresentedModule]] = []
        seen = set()
        self._ideals: Dict[str, Ideal] = {}
        for _, _, subset in subsets:
            ideal = Ideal(ring, [ambient.monomial(m) for m in subset])
            if ideal.gb in seen:
                continue
            seen.add(ideal.gb)
            label = "R/(" + ", ".join(ambient.render_monomial(m) for m in sorted(subset, reverse=True)) + ")"
            self._ideals[label] = ideal
            members.append((label, quotient_ring(ring, ideal)))
        return members


def _tor_certificate(module: PresentedModule, indices: Sequence[int], subject: PresentedModule) -> Dict:
    return {f"tor{i}": summary(tor(i, subject, module)) for i in indices}


def _require_nonzero(module: PresentedModule, what: str) -> None:
    if is_zero(module):
        raise ZeroModule(f"{what} of the zero module")


def falsify_lichtenbaum(subject: PresentedModule, family: CandidateFamily, label: str = "L") -> Witness:
    """First F in the family with Tor_1(L, F) = 0 and F not free."""
    _require_nonzero(subject, "Lichtenbaum search")
    for name, module in family.members():
        if is_free(module)[0]:
            continue
        if is_zero(tor(1, subject, module)):
            logger.info("Lichtenbaum violation for %s: %s", label, name)
            return Witness(LICHTENBAUM_VIOLATION, label, name, None, _tor_certificate(module, [1], subject) | {"free": False},
                           family.bounds(), subject, module)
    logger.info("no Lichtenbaum counterexample for %s in family", label)
    return Witness(EXHAUSTED, label, bounds=family.bounds(), subject_module=subject)


def falsify_quasi_lichtenbaum(subject: PresentedModule, family: CandidateFamily, label: str = "L") -> Witness:
    """First F with Tor_1(L, F) = Tor_2(L, F) = 0 and F not free."""
    _require_nonzero(subject, "quasi-Lichtenbaum search")
    for name, module in family.members():
        if is_free(module)[0]:
            continue
        if is_zero(tor(1, subject, module)) and is_zero(tor(2, subject, module)):
            logger.info("quasi-Lichtenbaum violation for %s: %s", label, name)
            return Witness(QUASI_VIOLATION, label, name, None, _tor_certificate(module, [1, 2], subject) | {"free": False},
                           family.bounds(), subject, module)
    logger.info("no quasi-Lichtenbaum counterexample for %s in family", label)
    return Witness(EXHAUSTED, label, bounds=family.bounds(), subject_module=subject)


def falsify_torrigid(subject: PresentedModule, family: CandidateFamily, i_max: int, label: str = "T") -> Witness:
    """First (M, i) with 1 <= i < i_max, Tor_i(T, M) = 0 and Tor_(i+1)(T, M) != 0."""
    _require_nonzero(subject, "tor-rigidity search")
    if i_max < 1:
        raise ValueError("imax must be at least 1")
    bounds = dict(family.bounds(), imax=i_max)
    for name, module in family.members():
        vanishing = [is_zero(tor(i, subject, module)) for i in range(1, i_max + 1)]
        for i in range(1, i_max):
            if vanishing[i - 1] and not vanishing[i]:
                logger.info("tor-rigidity violation for %s: %s at %d", label, name, i)
                return Witness(TORRIGID_VIOLATION, label, name, i, _tor_certificate(module, [i, i + 1], subject),
                               bounds, subject, module)
    logger.info("no tor-rigidity counterexample for %s in family", label)
    return Witness(EXHAUSTED, label, bounds=bounds, subject_module=subject)


def _fresh(module: PresentedModule) -> PresentedModule:
    return PresentedModule(module.ring, module.twists, module.relations)


def verify_witness(witness: Witness) -> bool:
    """Replay a violation on fresh copies of both modules; exhausted results have nothing to replay."""
    if not witness.is_violation:
        return True
    subject, module = _fresh(witness.subject_module), _fresh(witness.module)
    if witness.kind == TORRIGID_VIOLATION:
        i = witness.index
        return is_zero(tor(i, subject, module)) and not is_zero(tor(i + 1, subject, module))
    if is_free(module)[0] or not is_zero(tor(1, subject, module)):
        return False
    if witness.kind == QUASI_VIOLATION:
        return is_zero(tor(2, subject, module))
    return True


def burch_test(ideal: Ideal) -> BurchReport:
    """I is Burch when m(I : m) != I m."""
    if ideal.is_unit():
        raise UnitIdeal(f"{ideal.render()} is the unit ideal")
    m = maximal_ideal(ideal.ring)
    left = ideal_product(m, ideal_colon(ideal, m))
    right = ideal_product(ideal, m)
    return BurchReport(ideal.render(), not ideal_equal(left, right), left.render_gb(), right.render_gb())


def regular_sequence_check(module: PresentedModule, sequence: Sequence[Polynomial]) -> bool:
    """Each element must be a nonzero divisor on the successive quotient M/(x_1..x_(i-1))M."""
    ring = module.ring
    current = module
    for step, element in enumerate(sequence, start=1):
        colon = colon_in_module(current, element)
        if not is_zero(colon):
            witness = colon.embedding[0].render() if colon.embedding else "nonzero colon"
            raise NotRegularSequence(step, element.render(), witness)
        current = quotient_by_ideal(current, Ideal(ring, [element]))
        if is_zero(current):
            raise NotRegularSequence(step, element.render(), "the quotient vanishes")
    return True


def power_intersection_holds(module: PresentedModule, ideal: Ideal, n: int) -> bool:
    """I^n F meet K == I^n K for the minimal cover F -> M with kernel K."""
    ring = module.ring
    minimal = minimal_presentation(module)
    relations = list(minimal.relations)
    if minimal.rank == 0 or not relations:
        return True
    power = ideal_power(ideal, n).nonzero_gens()
    scaled = [minimal.unit(i).scale(g) for i in range(minimal.rank) for g in power]
    if not scaled:
        return True
    coefficients = cycles(ring, [v.degree() for v in scaled], scaled, relations)
    target = SubmoduleGB(ring, minimal.twists, [rel.scale(g) for rel in relations for g in power])
    for vector in coefficients:
        element = VectorPoly.zero(ring.ambient, minimal.twists)
        for coeff, column in zip(vector.components, scaled):
            if not coeff.is_zero():
                element = element + column.scale(coeff)
        if not target.contains(element):
            return False
    return True


def check_artin_rees_qs(module: PresentedModule, sequence: Sequence[Polynomial], n_max: int, label: str = "M") -> ArtinReesReport:
    """Tor_1(M, R/I^n) = 0 and I^n F meet K = I^n K for n = 1..n_max, I generated by an M-regular sequence."""
    regular_sequence_check(module, sequence)
    ring = module.ring
    base = Ideal(ring, sequence)
    steps = []
    for n in range(1, n_max + 1):
        t1 = tor(1, module, quotient_ring(ring, ideal_power(base, n)))
        vanishes = is_zero(t1)
        equal = power_intersection_holds(module, base, n)
        if vanishes != equal:
            logger.warning("n=%d: Tor_1 vanishing (%s) disagrees with the intersection check (%s)", n, vanishes, equal)
        steps.append(ArtinReesStep(n, vanishes and equal, summary(t1), equal))
    return ArtinReesReport(label, [s.render() for s in sequence], steps)


def ass_monomial(ideal: Ideal) -> List[Ideal]:
    """Ass(A/I) for a monomial I: the prime colons (I : m), m running below the lcm of the generators."""
    ring = ideal.ring
    if not ideal.is_monomial():
        raise NotMonomial(f"{ideal.render()} is not a monomial ideal")
    if ideal.is_unit():
        raise UnitIdeal(f"{ideal.render()} is the unit ideal")
    A = monomial_ideals.exponent_matrix([g.leading_monomial() for g in ideal.gb], ring.nvars)
    top = A.max(axis=0) if A.shape[0] else [0] * ring.nvars
    primes = set()
    for exps in product(*(range(int(t) + 1) for t in top)):
        if monomial_ideals.contains(A, exps):
            continue
        colon = monomial_ideals.colon(A, exps)
        if monomial_ideals.is_variable_prime(colon):
            primes.add(tuple(sorted(int(row.argmax()) for row in colon)))
    if not A.shape[0]:
        primes.add(())
    ordered = sorted(primes, key=lambda p: (len(p), p))
    return [Ideal(ring, [ring.var(i) for i in p]) for p in ordered]


def check_cor55_at_m(first: PresentedModule, second: PresentedModule, bound: int = 2) -> Cor55Report:
    """socle(Tor_1(M, N)) != 0 iff (socle(N) != 0 and M not free), for pd M <= 1."""
    pd = projective_dimension(first, bound)
    if pd is None or pd > 1:
        raise PdNotOne(f"projective dimension {pd if pd is not None else 'unknown'} is not at most one")
    t1 = tor(1, first, second)
    tor_side = not is_zero(t1) and not is_zero(socle(t1))
    n_side = not is_zero(second) and not is_zero(socle(second))
    return Cor55Report(pd, tor_side, n_side, is_free(first)[0])


def check_burch_sharp(ideal: Ideal, family: CandidateFamily, t: int, bound: int) -> BurchSharpReport:
    """For Burch I: Tor_t(R/I, M) = Tor_(t+1)(R/I, M) = 0 forces pd M <= t - 1."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if not burch_test(ideal).is_burch:
        raise NotBurch(f"{ideal.render()} is not Burch")
    quotient = quotient_ring(ideal.ring, ideal)
    entries = []
    for name, module in family.members():
        if not (is_zero(tor(t, quotient, module)) and is_zero(tor(t + 1, quotient, module))):
            entries.append(BurchSharpEntry(name, False, note="hypothesis not met"))
            continue
        pd = projective_dimension(module, bound) if not is_zero(module) else 0
        passed = pd is not None and pd <= t - 1
        entries.append(BurchSharpEntry(name, True, pd, passed, "" if passed else "projective dimension too large"))
    return BurchSharpReport(ideal.render(), t, bound, entries)


def mpower_lichtenbaum_scan(ring: RingDescriptor, n_max: int, family: CandidateFamily) -> List[MpowerEntry]:
    """Falsify R/m^n for n = 1..n_max against one family."""
    entries = []
    for n in range(1, n_max + 1):
        subject = power_of_maximal(ring, n)
        entries.append(MpowerEntry(n, falsify_lichtenbaum(subject, family, label=f"R/m^{n}")))
    return entries


def finite_length(module: PresentedModule) -> bool:
    return length(module) != float("inf")
