"""Regression registry: one pinned script per worked example, replayed over GF(32003) and QQ."""

import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from src.homkernel.errors import UnknownExampleId
from src.homkernel.fields import FieldDescriptor
from src.homkernel.journal import ReproduceJournal
from src.homkernel.reporting import SCHEMA
from src.homkernel.script import run_text

logger = logging.getLogger("homkernel.reproduce")

FIELDS = (FieldDescriptor.prime(32003), FieldDescriptor.rationals())

R0 = "ring R = GF(32003)[x,y] / (x^2, x*y);\n"
TORIC = (
    "ring T = GF(32003)[a,b,c,d] / (c*d - a*b, c^3 - a^2*d, d^3 - b^2*c, b*c^2 - a*d^2);\n"
    "module B = coker T twists (0, 1) [[c^2, -a]; [d^2, -b]; [a*d, -c]; [b*c, -d]];\n"
)


@dataclass(frozen=True)
class ReproduceCase:
    example_id: str
    description: str
    script: str


CASES = [
    ReproduceCase(
        "burch-y2",
        "(y^2) is Burch in k[x,y]/(x^2,xy) while (y) is not; m is Burch in k[x,y]",
        R0 + """
ideal I = (y^2) in R;
ideal J = (y) in R;
check burch(I);
assert not burch(J);
assert equal(product(maximal(R), colon(I, maximal(R))), (y^2) in R);
assert equal(product(I, maximal(R)), (y^3) in R);
ring A = GF(32003)[x,y];
check burch(maximal(A));
""",
    ),
    ReproduceCase(
        "lichtenbaum-R0-yR",
        "Tor_1(R/yR, R/xR) = 0 with R/xR not free, so R/yR is not Lichtenbaum; k survives the search",
        R0 + """
module M = quotient(R, (y) in R);
module F = quotient(R, (x) in R);
assert zero(tor(1, M, F));
assert not free(F);
search lichtenbaum(M, family cyclic deg 3) expect violation;
search lichtenbaum(residue(R), family cyclic deg 4) expect exhausted;
assert length(hom(M, coker R twists (0) [])) == 1;
assert equal(ann(hom(M, coker R twists (0) [])), maximal(R));
""",
    ),
    ReproduceCase(
        "quasi-R0-y2",
        "R/y^2R is quasi-Lichtenbaum in the bounded family but not Lichtenbaum: Tor_1 against R/xR vanishes, Tor_2 does not",
        R0 + """
module N = quotient(R, (y^2) in R);
module F = quotient(R, (x) in R);
check burch((y^2) in R);
assert zero(tor(1, N, F));
assert not zero(tor(2, N, F));
assert not free(F);
search quasilichtenbaum(N, family cyclic deg 3) expect exhausted;
search lichtenbaum(N, family [F]) expect violation;
""",
    ),
    ReproduceCase(
        "syz2-length",
        "second syzygies of R/yR and R/y^2R have length one",
        R0 + """
module M = quotient(R, (y) in R);
module N = quotient(R, (y^2) in R);
print betti(resolve(M, 3));
assert betti(resolve(M, 3)) == (1, 1, 1, 2);
assert length(syzygy(M, 2)) == 1;
assert length(syzygy(N, 2)) == 1;
""",
    ),
    ReproduceCase(
        "prop20-witness",
        "R/m^n is not Lichtenbaum for n >= 2: (x) meets m^n trivially",
        R0 + """
module L2 = quotient(R, power(maximal(R), 2));
module L3 = quotient(R, power(maximal(R), 3));
assert equal(intersect((x) in R, power(maximal(R), 2)), (0) in R);
assert zero(tor(1, L2, quotient(R, (x) in R)));
search lichtenbaum(L2, family cyclic deg 3) expect violation;
search lichtenbaum(L3, family cyclic deg 3) expect violation;
""",
    ),
    ReproduceCase(
        "kx-x4-torrigid",
        "Tor_i(R/m^3, R/m^3) over k[x]/(x^4) for i = 1..6, and the bounded tor-rigidity search",
        """
ring S = GF(32003)[x] / (x^4);
module T = quotient(S, power(maximal(S), 3));
assert length(tor(1, T, T)) == 1;
assert length(tor(2, T, T)) == 1;
assert length(tor(3, T, T)) == 1;
assert length(tor(4, T, T)) == 1;
assert length(tor(5, T, T)) == 1;
assert length(tor(6, T, T)) == 1;
search torrigid(T, family [T], imax 4) expect exhausted;
""",
    ),
    ReproduceCase(
        "kx-x2-rigid",
        "the residue field of k[x]/(x^2) shows no tor-rigidity violation",
        """
ring S = GF(32003)[x] / (x^2);
search torrigid(residue(S), family cyclic deg 2, imax 4) expect exhausted;
""",
    ),
    ReproduceCase(
        "toric-e1",
        "toric ring k[x^4,y^4,x^3y,xy^3] with I = (a,b): lengths 5 and 4, Tor_1(R/I, B) = 0",
        TORIC + """
module Q = quotient(T, (a, b) in T);
assert length(Q) == 5;
assert length(tensor(B, Q)) == 4;
assert zero(tor(1, Q, B));
check regular(B, (a, b));
assert length(coker T twists (0, 1) [[c^2, -a]; [d^2, -b]; [a*d, -c]; [b*c, -d]; [1, 0]]) == 1;
""",
    ),
    ReproduceCase(
        "qs-artinrees",
        "Tor_1(M, R/I^n) = 0 for I generated by an M-regular sequence",
        R0 + TORIC + """
ring A = GF(32003)[x,y];
check artinrees(quotient(R, (x) in R), (y), 3);
check artinrees(B, (a, b), 2);
check artinrees(coker A twists (0) [], (x, y), 3);
""",
    ),
    ReproduceCase(
        "cor26-ann",
        "Tor over k[x,y,z] against the prime p = (x,y): annihilator p, shifted Hilbert functions",
        """
ring A = GF(32003)[x,y,z];
module P = quotient(A, (x, y) in A);
assert equal(ann(tor(1, P, P)), (x, y) in A);
assert equal(ann(tor(2, P, P)), (x, y) in A);
assert hilbert(tor(1, P, P), 5) == (0, 2, 2, 2, 2, 2);
assert hilbert(tor(2, P, P), 5) == (0, 0, 1, 1, 1, 1);
assert zero(tor(3, P, P));
""",
    ),
    ReproduceCase(
        "fact11-koszul",
        "Tor_i(k, k) over k[x,y] is k^C(2,i) shifted by i",
        """
ring A = GF(32003)[x,y];
module K = residue(A);
print betti(resolve(K, 2));
assert betti(resolve(K, 2)) == (1, 2, 1);
assert hilbert(tor(1, K, K), 3) == (0, 2, 0, 0);
assert hilbert(tor(2, K, K), 3) == (0, 0, 1, 0);
""",
    ),
    ReproduceCase(
        "kdepth-table",
        "Koszul depth of k[x,y]/(x^2,xy), k[x,y] and the toric ring",
        R0 + TORIC + """
ring A = GF(32003)[x,y];
assert kdepth(coker R twists (0) []) == 0;
assert kdepth(coker A twists (0) []) == 2;
assert kdepth(coker T twists (0) []) == 1;
""",
    ),
    ReproduceCase(
        "ext-erigid",
        "Ext^1(k, k) is nonzero for the Lichtenbaum module k",
        R0 + """
ring P = GF(32003)[t];
assert length(ext(1, residue(R), residue(R))) == 2;
assert not zero(ext(1, residue(R), residue(R)));
assert length(ext(1, residue(P), residue(P))) == 1;
""",
    ),
    ReproduceCase(
        "nonCM-toric-depth",
        "the toric ring is a domain of dimension two and depth one",
        TORIC + """
module O = coker T twists (0) [];
assert zero(socle(O));
assert length(O) == infinite;
assert kdepth(O) == 1;
assert not kdepth(O) == 2;
""",
    ),
    ReproduceCase(
        "mpowers-depth-zero",
        "R/m^n is not Lichtenbaum for n >= 3 over k[x,y]/(x^3,x^2y) and k[x,y]/(x^3,x^2y,xy^2): x^2 m = 0",
        """
ring R = GF(32003)[x,y] / (x^3, x^2*y);
ring S = GF(32003)[x,y] / (x^3, x^2*y, x*y^2);
assert equal(product((x^2) in R, maximal(R)), (0) in R);
assert zero(tor(1, quotient(R, power(maximal(R), 3)), quotient(R, (x^2) in R)));
assert not free(quotient(R, (x^2) in R));
search lichtenbaum(quotient(R, power(maximal(R), 3)), family cyclic deg 3) expect violation;
search mpowers(R, 3, family cyclic deg 3);
assert equal(product((x^2) in S, maximal(S)), (0) in S);
assert zero(tor(1, quotient(S, power(maximal(S), 3)), quotient(S, (x^2) in S)));
search lichtenbaum(quotient(S, power(maximal(S), 3)), family cyclic deg 3) expect violation;
search mpowers(S, 3, family cyclic deg 3);
""",
    ),
    ReproduceCase(
        "syz-infinite-length",
        "syzygies of k over k[x,y]/(x^2,xy) have infinite length",
        R0 + """
module K = residue(R);
assert length(syzygy(K, 1)) == infinite;
assert length(syzygy(K, 2)) == infinite;
assert length(syzygy(K, 3)) == infinite;
""",
    ),
]

REGISTRY: Dict[str, ReproduceCase] = {case.example_id: case for case in CASES}


def _failures(document: Dict[str, Any]) -> List[str]:
    return [
        f"{record['line']}:{record['column']} {record['status']} {record['statement']}"
        for record in document["records"]
        if record["status"] not in ("ok", "pass")
    ]


def reproduce(example_id: str, config: Optional[Dict] = None, journal: Optional[ReproduceJournal] = None) -> Dict[str, Any]:
    """Run one registered example over every field; the result carries one script document per field."""
    case = REGISTRY.get(example_id)
    if case is None:
        raise UnknownExampleId(f"unknown example id {example_id!r}; known: {', '.join(REGISTRY)}")
    runs = []
    for fld in FIELDS:
        started = time.perf_counter()
        document = run_text(case.script, config, source=f"{example_id}", field_override=fld)
        elapsed = time.perf_counter() - started
        failures = _failures(document)
        if journal is not None:
            journal.record_run(example_id, fld.tag, document["passed"], failures, elapsed)
        logger.info("%s over %s: %s", example_id, fld.tag, "PASS" if document["passed"] else f"FAIL ({len(failures)})")
        runs.append(document)
    exit_code = max(run["exit_code"] for run in runs)
    return {
        "schema": SCHEMA,
        "example_id": example_id,
        "description": case.description,
        "runs": runs,
        "passed": exit_code == 0,
        "exit_code": exit_code,
    }


def reproduce_all(config: Optional[Dict] = None, journal: Optional[ReproduceJournal] = None) -> Dict[str, Any]:
    results = [reproduce(example_id, config, journal) for example_id in REGISTRY]
    exit_code = max(result["exit_code"] for result in results)
    return {
        "schema": SCHEMA,
        "example_id": "all",
        "results": results,
        "passed": exit_code == 0,
        "exit_code": exit_code,
    }
