"""Line-oriented script language: declarations, computations, checks, searches and assertions.

Parsing type-checks every statement against the declared rings; running executes the
statements in order and collects one record per statement into a report document.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.homkernel.config import load_config
from src.homkernel.errors import HomkernelError, NotPrime, NotRegularSequence, ParseError, TypeMismatch, UndeclaredIdentifier
from src.homkernel.fields import FieldDescriptor
from src.homkernel.homology import ext, kdepth, projective_dimension, resolve, syzygy, tor
from src.homkernel.ideals import (
    Ideal,
    ideal_colon,
    ideal_equal,
    ideal_intersect,
    ideal_power,
    ideal_product,
    ideal_sum,
    maximal_ideal,
)
from src.homkernel.lexer import EOF, NAME, SYM, Token, TokenStream, parse_polynomial
from src.homkernel.modules import (
    annihilator,
    direct_sum,
    hilbert_function,
    hom_module,
    is_free,
    is_zero,
    length,
    make_coker,
    quotient_ring,
    residue_field,
    socle,
    summary,
    tensor,
    transpose,
    twist,
)
from src.homkernel.polynomials import Polynomial, PolynomialRing
from src.homkernel.predicates import (
    CandidateFamily,
    ass_monomial,
    burch_test,
    check_artin_rees_qs,
    check_burch_sharp,
    check_cor55_at_m,
    falsify_lichtenbaum,
    falsify_quasi_lichtenbaum,
    falsify_torrigid,
    mpower_lichtenbaum_scan,
    regular_sequence_check,
    verify_witness,
)
from src.homkernel.reporting import new_document
from src.homkernel.rings import RingDescriptor, make_ring

logger = logging.getLogger("homkernel.script")

MODULE = "module"
IDEAL = "ideal"
RING = "ring"
INT = "int"

STATEMENT_KEYWORDS = ("assert", "check", "ideal", "let", "module", "print", "ring", "search")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_RUNTIME_ERROR = 3

# name -> (argument kinds, result kind); "same" means module or ideal, matching the first argument
FUNCTIONS: Dict[str, Tuple[Tuple[str, ...], str]] = {
    "tor": ((INT, MODULE, MODULE), MODULE),
    "ext": ((INT, MODULE, MODULE), MODULE),
    "hom": ((MODULE, MODULE), MODULE),
    "tensor": ((MODULE, MODULE), MODULE),
    "syzygy": ((MODULE, INT), MODULE),
    "socle": ((MODULE,), MODULE),
    "transpose": ((MODULE,), MODULE),
    "twist": ((MODULE, INT), MODULE),
    "quotient": ((RING, IDEAL), MODULE),
    "residue": ((RING,), MODULE),
    "sum": (("same", "same"), "same"),
    "colon": ((IDEAL, IDEAL), IDEAL),
    "product": ((IDEAL, IDEAL), IDEAL),
    "intersect": ((IDEAL, IDEAL), IDEAL),
    "power": ((IDEAL, INT), IDEAL),
    "ann": ((MODULE,), IDEAL),
    "maximal": ((RING,), IDEAL),
}


@dataclass
class RingDecl:
    name: str
    field: FieldDescriptor
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]
    quotient: Tuple[Polynomial, ...]
    ambient: PolynomialRing


@dataclass
class Node:
    op: str
    args: Tuple[Any, ...]
    kind: str
    ring: str
    line: int
    column: int


@dataclass
class FamilySpec:
    shape: str
    max_degree: Optional[int] = None
    max_gens: Optional[int] = None
    modules: Tuple[Tuple[str, Node], ...] = ()


@dataclass
class Statement:
    kind: str
    name: str
    args: Tuple[Any, ...]
    line: int
    column: int
    text: str
    target: Optional[str] = None
    negate: bool = False
    expect: Optional[str] = None


@dataclass
class Script:
    statements: List[Statement]
    rings: Dict[str, RingDecl] = field(default_factory=dict)


class ScriptParser:
    """Recursive-descent parser; polynomials are read against the ring the statement names."""

    def __init__(self, text: str, field_override: Optional[FieldDescriptor] = None,
                 default_field: Optional[FieldDescriptor] = None):
        self.stream = TokenStream(text)
        self.lines = text.split("\n")
        self.field_override = field_override
        self.default_field = default_field or FieldDescriptor.prime(32003)
        self.rings: Dict[str, RingDecl] = {}
        self.symbols: Dict[str, Tuple[str, str]] = {}

    # -- helpers --------------------------------------------------------------
    def _mismatch(self, message: str, token: Token) -> TypeMismatch:
        return TypeMismatch(message, token.line, token.column)

    def _span(self, start: Token, end: Token) -> str:
        if start.line == end.line:
            text = self.lines[start.line - 1][start.column - 1: end.column - 1 + len(end.text)]
        else:
            parts = [self.lines[start.line - 1][start.column - 1:]]
            parts.extend(self.lines[start.line: end.line - 1])
            parts.append(self.lines[end.line - 1][: end.column - 1 + len(end.text)])
            text = " ".join(parts)
        return " ".join(text.split())

    def _previous(self) -> Token:
        return self.stream.tokens[max(self.stream.position - 1, 0)]

    def _declare(self, token: Token, kind: str, ring: str) -> None:
        if token.text in self.symbols:
            raise self._mismatch(f"{token.text!r} is already declared", token)
        self.symbols[token.text] = (kind, ring)

    def _ring_ref(self) -> RingDecl:
        token = self.stream.eat_name()
        kind = self.symbols.get(token.text, (None, None))[0]
        if kind is None:
            raise UndeclaredIdentifier(f"undeclared identifier {token.text!r}", token.line, token.column)
        if kind != RING:
            raise self._mismatch(f"{token.text!r} is a {kind}, expected a ring", token)
        return self.rings[token.text]

    def _polys(self, ambient: PolynomialRing) -> Tuple[Polynomial, ...]:
        self.stream.eat("(")
        polys: List[Polynomial] = []
        if not self.stream.next_is(")"):
            polys.append(parse_polynomial(self.stream, ambient))
            while self.stream.accept(","):
                polys.append(parse_polynomial(self.stream, ambient))
        self.stream.eat(")")
        return tuple(polys)

    def _ints(self) -> Tuple[int, ...]:
        self.stream.eat("(")
        values: List[int] = []
        if not self.stream.next_is(")"):
            values.append(self.stream.eat_int())
            while self.stream.accept(","):
                values.append(self.stream.eat_int())
        self.stream.eat(")")
        return tuple(values)

    def _typed(self, expected: str, ring: Optional[str] = None) -> Node:
        token = self.stream.next()
        node = self._expr()
        if expected != "same" and node.kind != expected:
            raise self._mismatch(f"expected a {expected}, got a {node.kind}", token)
        if ring is not None and node.ring != ring:
            raise self._mismatch(f"expected an object over {ring}, got one over {node.ring}", token)
        return node

    # -- statements -----------------------------------------------------------
    def parse(self) -> Script:
        statements: List[Statement] = []
        while not self.stream.at_eof():
            statements.append(self._statement())
        return Script(statements, dict(self.rings))

    def _statement(self) -> Statement:
        start = self.stream.next()
        if start.kind != NAME or start.text not in STATEMENT_KEYWORDS:
            raise self.stream.fail(f"unexpected {start.describe()}", STATEMENT_KEYWORDS)
        self.stream.advance()
        handler: Callable[[Token], Statement] = getattr(self, f"_stmt_{start.text}")
        statement = handler(start)
        end = self.stream.eat(";")
        statement.text = self._span(start, end)
        return statement

    def _stmt_ring(self, start: Token) -> Statement:
        name = self.stream.eat_name()
        self.stream.eat("=")
        field_token = self.stream.eat_name()
        if field_token.text == "GF":
            self.stream.eat("(")
            p_token = self.stream.next()
            p = self.stream.eat_int()
            self.stream.eat(")")
            try:
                declared = FieldDescriptor.prime(p)
            except (NotPrime, ValueError) as exc:
                raise self._mismatch(str(exc), p_token) from exc
        elif field_token.text == "QQ":
            declared = FieldDescriptor.rationals()
        elif field_token.text == "k":
            declared = self.default_field
        else:
            raise self.stream.fail(f"unexpected {field_token.describe()}", ["GF", "QQ", "k"], field_token)
        fld = self.field_override or declared
        self.stream.eat("[")
        variables = [self.stream.eat_name()]
        while self.stream.accept(","):
            variables.append(self.stream.eat_name())
        self.stream.eat("]")
        names = tuple(v.text for v in variables)
        if len(set(names)) != len(names):
            raise self._mismatch(f"duplicate variable names {names}", variables[0])
        weights = (1,) * len(names)
        if self.stream.accept("weights"):
            weight_token = self.stream.next()
            weights = self._ints()
            if len(weights) != len(names) or any(w <= 0 for w in weights):
                raise self._mismatch(f"need {len(names)} positive weights, got {weights}", weight_token)
        ambient = PolynomialRing(fld, names, weights)
        quotient: Tuple[Polynomial, ...] = ()
        if self.stream.accept("/"):
            quotient = self._polys(ambient)
        self._declare(name, RING, name.text)
        self.rings[name.text] = RingDecl(name.text, fld, names, weights, quotient, ambient)
        return Statement(RING, name.text, (), start.line, start.column, "", target=name.text)

    def _stmt_ideal(self, start: Token) -> Statement:
        name = self.stream.eat_name()
        self.stream.eat("=")
        node = self._typed(IDEAL)
        self._declare(name, IDEAL, node.ring)
        return Statement("let", IDEAL, (node,), start.line, start.column, "", target=name.text)

    def _stmt_module(self, start: Token) -> Statement:
        name = self.stream.eat_name()
        self.stream.eat("=")
        node = self._typed(MODULE)
        self._declare(name, MODULE, node.ring)
        return Statement("let", MODULE, (node,), start.line, start.column, "", target=name.text)

    def _stmt_let(self, start: Token) -> Statement:
        name = self.stream.eat_name()
        self.stream.eat("=")
        node = self._expr()
        self._declare(name, node.kind, node.ring)
        return Statement("let", node.kind, (node,), start.line, start.column, "", target=name.text)

    def _stmt_print(self, start: Token) -> Statement:
        what = self.stream.eat_name()
        self.stream.eat("(")
        if what.text == "betti":
            self.stream.eat("resolve")
            self.stream.eat("(")
            module = self._typed(MODULE)
            self.stream.eat(",")
            bound = self.stream.eat_int()
            self.stream.eat(")")
            args: Tuple[Any, ...] = (module, bound)
        elif what.text in ("length", "ann", "kdepth", "summary", "pd"):
            args = (self._typed(MODULE),)
        elif what.text == "hilbert":
            module = self._typed(MODULE)
            self.stream.eat(",")
            args = (module, self.stream.eat_int())
        elif what.text in ("ass", "gb"):
            args = (self._typed(IDEAL),)
        else:
            raise self.stream.fail(f"unexpected {what.describe()}", ["ann", "ass", "betti", "gb", "hilbert", "kdepth", "length", "pd", "summary"], what)
        self.stream.eat(")")
        return Statement("print", what.text, args, start.line, start.column, "")

    def _stmt_check(self, start: Token) -> Statement:
        what = self.stream.eat_name()
        self.stream.eat("(")
        if what.text == "burch":
            args: Tuple[Any, ...] = (self._typed(IDEAL),)
        elif what.text == "cor55":
            first = self._typed(MODULE)
            self.stream.eat(",")
            args = (first, self._typed(MODULE, first.ring))
        elif what.text in ("artinrees", "regular"):
            module = self._typed(MODULE)
            self.stream.eat(",")
            polys = self._polys(self.rings[module.ring].ambient)
            if what.text == "artinrees":
                self.stream.eat(",")
                args = (module, polys, self.stream.eat_int())
            else:
                args = (module, polys)
        elif what.text == "burchsharp":
            ideal = self._typed(IDEAL)
            self.stream.eat(",")
            family = self._family(ideal.ring)
            self.stream.eat(",")
            t = self.stream.eat_int()
            self.stream.eat(",")
            args = (ideal, family, t, self.stream.eat_int())
        else:
            raise self.stream.fail(f"unexpected {what.describe()}", ["artinrees", "burch", "burchsharp", "cor55", "regular"], what)
        self.stream.eat(")")
        return Statement("check", what.text, args, start.line, start.column, "")

    def _stmt_search(self, start: Token) -> Statement:
        what = self.stream.eat_name()
        self.stream.eat("(")
        if what.text in ("lichtenbaum", "quasilichtenbaum", "torrigid"):
            subject = self._typed(MODULE)
            self.stream.eat(",")
            family = self._family(subject.ring)
            i_max = None
            if what.text == "torrigid" and self.stream.accept(","):
                self.stream.eat("imax")
                i_max = self.stream.eat_int()
            args: Tuple[Any, ...] = (subject, family, i_max)
        elif what.text == "mpowers":
            ring = self._ring_ref()
            self.stream.eat(",")
            n_max = self.stream.eat_int()
            self.stream.eat(",")
            args = (ring.name, n_max, self._family(ring.name))
        else:
            raise self.stream.fail(f"unexpected {what.describe()}", ["lichtenbaum", "mpowers", "quasilichtenbaum", "torrigid"], what)
        self.stream.eat(")")
        expect = None
        if self.stream.accept("expect"):
            token = self.stream.eat_name()
            if token.text not in ("violation", "exhausted"):
                raise self.stream.fail(f"unexpected {token.describe()}", ["exhausted", "violation"], token)
            if what.text == "mpowers":
                raise self._mismatch("mpowers scans report every power and take no expectation", token)
            expect = token.text
        return Statement("search", what.text, args, start.line, start.column, "", expect=expect)

    def _stmt_assert(self, start: Token) -> Statement:
        negate = self.stream.accept("not")
        what = self.stream.eat_name()
        self.stream.eat("(")
        if what.text in ("zero", "free"):
            args: Tuple[Any, ...] = (self._typed(MODULE),)
            self.stream.eat(")")
        elif what.text == "burch":
            args = (self._typed(IDEAL),)
            self.stream.eat(")")
        elif what.text == "equal":
            first = self._typed(IDEAL)
            self.stream.eat(",")
            args = (first, self._typed(IDEAL, first.ring))
            self.stream.eat(")")
        elif what.text in ("length", "kdepth"):
            module = self._typed(MODULE)
            self.stream.eat(")")
            self.stream.eat("==")
            if what.text == "length" and self.stream.accept("infinite"):
                args = (module, math.inf)
            else:
                args = (module, self.stream.eat_int())
        elif what.text == "hilbert":
            module = self._typed(MODULE)
            self.stream.eat(",")
            d_max = self.stream.eat_int()
            self.stream.eat(")")
            self.stream.eat("==")
            args = (module, d_max, self._ints())
        elif what.text == "betti":
            self.stream.eat("resolve")
            self.stream.eat("(")
            module = self._typed(MODULE)
            self.stream.eat(",")
            bound = self.stream.eat_int()
            self.stream.eat(")")
            self.stream.eat(")")
            self.stream.eat("==")
            args = (module, bound, self._ints())
        else:
            raise self.stream.fail(f"unexpected {what.describe()}", ["betti", "burch", "equal", "free", "hilbert", "kdepth", "length", "zero"], what)
        return Statement("assert", what.text, args, start.line, start.column, "", negate=negate)

    # -- expressions ----------------------------------------------------------
    def _family(self, ring: str) -> FamilySpec:
        self.stream.eat("family")
        if self.stream.accept("cyclic"):
            degree = self.stream.eat_int() if self.stream.accept("deg") else None
            gens = self.stream.eat_int() if self.stream.accept("gens") else None
            return FamilySpec("cyclic", degree, gens)
        self.stream.eat("[")
        modules: List[Tuple[str, Node]] = []
        while True:
            begin = self.stream.next()
            node = self._typed(MODULE, ring)
            modules.append((self._span(begin, self._previous()), node))
            if not self.stream.accept(","):
                break
        self.stream.eat("]")
        return FamilySpec("explicit", modules=tuple(modules))

    def _expr(self) -> Node:
        token = self.stream.next()
        if token.kind == NAME and token.text == "coker":
            return self._coker()
        if token.kind == NAME and token.text in FUNCTIONS and self.stream.peek().text == "(":
            return self._call()
        if token.kind == NAME:
            self.stream.advance()
            if token.text not in self.symbols:
                raise UndeclaredIdentifier(f"undeclared identifier {token.text!r}", token.line, token.column)
            kind, ring = self.symbols[token.text]
            if kind == RING:
                raise self._mismatch(f"{token.text!r} is a ring, expected a module or an ideal", token)
            return Node("ref", (token.text,), kind, ring, token.line, token.column)
        if token.kind == SYM and token.text == "(":
            return self._ideal_literal()
        raise self.stream.fail(f"unexpected {token.describe()}", ["(", "<identifier>", "coker"] + sorted(FUNCTIONS))

    def _ideal_literal(self) -> Node:
        token = self.stream.next()
        start = self.stream.position
        depth = 0
        while True:
            current = self.stream.advance()
            if current.kind == EOF:
                raise self.stream.fail("unbalanced parenthesis", [")"], current)
            if current.kind == SYM and current.text == "(":
                depth += 1
            elif current.kind == SYM and current.text == ")":
                depth -= 1
                if depth == 0:
                    break
        self.stream.eat("in")
        ring = self._ring_ref()
        after = self.stream.position
        self.stream.position = start
        polys = self._polys(ring.ambient)
        self.stream.position = after
        return Node("ideal", (polys,), IDEAL, ring.name, token.line, token.column)

    def _coker(self) -> Node:
        token = self.stream.advance()
        ring = self._ring_ref()
        twists: Optional[Tuple[int, ...]] = None
        if self.stream.accept("twists"):
            twists = self._ints()
        self.stream.eat("[")
        columns: List[Tuple[Polynomial, ...]] = []
        if self.stream.next_is("["):
            while True:
                column_token = self.stream.eat("[")
                entries = [parse_polynomial(self.stream, ring.ambient)]
                while self.stream.accept(","):
                    entries.append(parse_polynomial(self.stream, ring.ambient))
                self.stream.eat("]")
                expected = len(twists) if twists is not None else len(columns[0]) if columns else len(entries)
                if len(entries) != expected:
                    raise self._mismatch(f"column has {len(entries)} entries, expected {expected}", column_token)
                columns.append(tuple(entries))
                if not (self.stream.accept(";") or self.stream.accept(",")):
                    break
        self.stream.eat("]")
        if twists is None and not columns:
            raise self._mismatch("twists are required for a module without relations", token)
        return Node("coker", (twists, tuple(columns)), MODULE, ring.name, token.line, token.column)

    def _call(self) -> Node:
        token = self.stream.advance()
        kinds, result = FUNCTIONS[token.text]
        self.stream.eat("(")
        args: List[Any] = []
        ring: Optional[str] = None
        first_kind: Optional[str] = None
        for index, kind in enumerate(kinds):
            if index:
                self.stream.eat(",")
            if kind == INT:
                args.append(self.stream.eat_int())
                continue
            if kind == RING:
                decl = self._ring_ref()
                ring = decl.name
                args.append(decl.name)
                continue
            expected = first_kind if kind == "same" and first_kind else kind
            if expected == "same":
                arg_token = self.stream.next()
                node = self._typed("same", ring)
                if node.kind not in (MODULE, IDEAL):
                    raise self._mismatch(f"expected a module or an ideal, got a {node.kind}", arg_token)
            else:
                node = self._typed(expected, ring)
            first_kind = first_kind or node.kind
            ring = node.ring
            args.append(node)
        self.stream.eat(")")
        kind = first_kind if result == "same" else result
        return Node(token.text, tuple(args), kind, ring or "", token.line, token.column)


def parse_script(text: str, field_override: Optional[FieldDescriptor] = None,
                 default_field: Optional[FieldDescriptor] = None) -> Script:
    """`default_field` is the field of rings declared over `k`; `field_override` replaces every declared field."""
    try:
        return ScriptParser(text, field_override, default_field).parse()
    except RecursionError as exc:
        raise ParseError("expression nested too deeply") from exc


def _label(node: Node, default: str) -> str:
    return node.args[0] if node.op == "ref" else default


class ScriptRunner:
    """Executes a parsed script; every statement yields one record, failures never abort the run."""

    def __init__(self, config: Optional[Dict] = None):
        self.config = config or load_config()
        kernel = self.config["kernel"]
        self.resolution_bound = int(kernel["resolution_bound"])
        self.hilbert_prefix = int(kernel["hilbert_prefix"])
        self.family_max_degree = int(kernel["family_max_degree"])
        self.family_max_gens = int(kernel["family_max_gens"])
        self.torrigid_imax = int(kernel["torrigid_imax"])
        self.report_timings = bool(kernel.get("report_timings", False))
        self.rings: Dict[str, RingDescriptor] = {}
        self.values: Dict[str, Any] = {}
        self.failed: Dict[str, str] = {}

    # -- evaluation -------------------------------------------------------------
    def _ring(self, name: str) -> RingDescriptor:
        if name in self.failed:
            raise HomkernelError(f"{name} is unavailable: {self.failed[name]}")
        return self.rings[name]

    def evaluate(self, node: Node) -> Any:
        op = node.op
        if op == "ref":
            name = node.args[0]
            if name in self.failed:
                raise HomkernelError(f"{name} is unavailable: {self.failed[name]}")
            return self.values[name]
        ring = self._ring(node.ring) if node.ring else None
        if op == "ideal":
            return Ideal(ring, node.args[0])
        if op == "coker":
            twists, columns = node.args
            return make_coker(ring, twists, [list(c) for c in columns])
        args = [self.evaluate(a) if isinstance(a, Node) else a for a in node.args]
        if op in ("quotient", "residue", "maximal"):
            args[0] = self._ring(args[0])
        if op == "tor":
            return tor(*args)
        if op == "ext":
            return ext(*args)
        if op == "hom":
            return hom_module(*args)
        if op == "tensor":
            return tensor(*args)
        if op == "syzygy":
            return syzygy(*args)
        if op == "socle":
            return socle(*args)
        if op == "transpose":
            return transpose(*args)
        if op == "twist":
            return twist(*args)
        if op == "quotient":
            return quotient_ring(*args)
        if op == "residue":
            return residue_field(*args)
        if op == "sum":
            return direct_sum(*args) if node.kind == MODULE else ideal_sum(*args)
        if op == "colon":
            return ideal_colon(*args)
        if op == "product":
            return ideal_product(*args)
        if op == "intersect":
            return ideal_intersect(*args)
        if op == "power":
            return ideal_power(*args)
        if op == "ann":
            return annihilator(*args)
        if op == "maximal":
            return maximal_ideal(*args)
        raise HomkernelError(f"unknown operation {op}")

    def _family(self, spec: FamilySpec, ring: RingDescriptor) -> CandidateFamily:
        if spec.shape == "cyclic":
            gens = spec.max_gens if spec.max_gens is not None else self.family_max_gens
            degree = spec.max_degree if spec.max_degree is not None else self.family_max_degree
            return CandidateFamily.cyclic(ring, degree, gens)
        return CandidateFamily.explicit(ring, [(label, self.evaluate(node)) for label, node in spec.modules])

    # -- statements ---------------------------------------------------------------
    def _run_let(self, statement: Statement) -> Tuple[str, Dict]:
        value = self.evaluate(statement.args[0])
        self.values[statement.target] = value
        if statement.name == MODULE:
            return "ok", {"module": summary(value, self.hilbert_prefix)}
        return "ok", {"gb": value.render_gb()}

    def _run_ring(self, statement: Statement, decl: RingDecl) -> Tuple[str, Dict]:
        ring = make_ring(decl.field, decl.variables, decl.weights, decl.quotient)
        self.rings[decl.name] = ring
        return "ok", {"ring": ring.render()}

    def _run_print(self, statement: Statement) -> Tuple[str, Dict]:
        name, args = statement.name, statement.args
        target = self.evaluate(args[0])
        if name == "betti":
            complex_, table = resolve(target, args[1])
            return "ok", {"betti": table.to_dict(), "exact": complex_.exact}
        if name == "length":
            size = length(target)
            return "ok", {"length": "infinite" if size == math.inf else size}
        if name == "ann":
            return "ok", {"annihilator": annihilator(target).render_gb()}
        if name == "kdepth":
            return "ok", {"kdepth": kdepth(target)}
        if name == "summary":
            return "ok", {"module": summary(target, self.hilbert_prefix)}
        if name == "pd":
            pd = projective_dimension(target, self.resolution_bound)
            return "ok", {"pd": "unknown" if pd is None else pd, "bound": self.resolution_bound}
        if name == "hilbert":
            return "ok", {"hilbert": list(hilbert_function(target, args[1]))}
        if name == "ass":
            return "ok", {"ass": [prime.render_gb() for prime in ass_monomial(target)]}
        return "ok", {"gb": target.render_gb()}

    def _run_check(self, statement: Statement) -> Tuple[str, Dict]:
        name, args = statement.name, statement.args
        if name == "burch":
            report = burch_test(self.evaluate(args[0]))
            return ("pass" if report.is_burch else "fail"), report.to_dict()
        if name == "cor55":
            report = check_cor55_at_m(self.evaluate(args[0]), self.evaluate(args[1]))
            return ("pass" if report.holds else "fail"), report.to_dict()
        if name == "regular":
            module = self.evaluate(args[0])
            try:
                regular_sequence_check(module, args[1])
            except NotRegularSequence as exc:
                return "fail", {"regular": False, "step": exc.step, "element": exc.element, "witness": exc.witness}
            return "pass", {"regular": True}
        if name == "artinrees":
            module = self.evaluate(args[0])
            report = check_artin_rees_qs(module, args[1], args[2], label=_label(args[0], "M"))
            return ("pass" if report.passed else "fail"), report.to_dict()
        ideal = self.evaluate(args[0])
        report = check_burch_sharp(ideal, self._family(args[1], ideal.ring), args[2], args[3])
        return ("pass" if report.passed else "fail"), report.to_dict()

    def _run_search(self, statement: Statement) -> Tuple[str, Dict]:
        name, args = statement.name, statement.args
        if name == "mpowers":
            ring = self._ring(args[0])
            entries = mpower_lichtenbaum_scan(ring, args[1], self._family(args[2], ring))
            return "ok", {"scan": [entry.to_dict() for entry in entries]}
        subject_node, spec, i_max = args
        subject = self.evaluate(subject_node)
        family = self._family(spec, subject.ring)
        label = _label(subject_node, "L")
        if name == "lichtenbaum":
            witness = falsify_lichtenbaum(subject, family, label)
        elif name == "quasilichtenbaum":
            witness = falsify_quasi_lichtenbaum(subject, family, label)
        else:
            witness = falsify_torrigid(subject, family, i_max or self.torrigid_imax, label)
        verified = verify_witness(witness)
        result = {"witness": witness.to_dict(), "verified": verified}
        if statement.expect is None:
            return ("ok" if verified else "fail"), result
        met = witness.is_violation == (statement.expect == "violation")
        return ("pass" if met and verified else "fail"), result

    def _run_assert(self, statement: Statement) -> Tuple[str, Dict]:
        name, args = statement.name, statement.args
        if name == "zero":
            value = is_zero(self.evaluate(args[0]))
            result: Dict[str, Any] = {"zero": value}
        elif name == "free":
            free, rank, degrees = is_free(self.evaluate(args[0]))
            value = free
            result = {"free": free, "rank": rank, "degrees": list(degrees)}
        elif name == "burch":
            report = burch_test(self.evaluate(args[0]))
            value = report.is_burch
            result = report.to_dict()
        elif name == "equal":
            first, second = self.evaluate(args[0]), self.evaluate(args[1])
            value = ideal_equal(first, second)
            result = {"first": first.render_gb(), "second": second.render_gb()}
        elif name == "length":
            size = length(self.evaluate(args[0]))
            value = size == args[1]
            result = {"length": "infinite" if size == math.inf else size}
        elif name == "kdepth":
            depth = kdepth(self.evaluate(args[0]))
            value = depth == args[1]
            result = {"kdepth": depth}
        elif name == "betti":
            _, table = resolve(self.evaluate(args[0]), args[1])
            value = tuple(table.totals()) == tuple(args[2])
            result = {"betti": table.to_dict()}
        else:
            values = hilbert_function(self.evaluate(args[0]), args[1])
            value = tuple(values) == tuple(args[2])
            result = {"hilbert": list(values)}
        if statement.negate:
            value = not value
        return ("pass" if value else "fail"), result

    def run(self, script: Script, source: str = "<script>") -> Dict[str, Any]:
        field_tags = sorted({decl.field.tag for decl in script.rings.values()})
        document = new_document(source, ",".join(field_tags) or "none")
        started = time.perf_counter()
        errors = failures = 0
        for statement in script.statements:
            record: Dict[str, Any] = {"line": statement.line, "column": statement.column, "statement": statement.text, "kind": statement.kind}
            began = time.perf_counter()
            try:
                if statement.kind == RING:
                    status, result = self._run_ring(statement, script.rings[statement.target])
                else:
                    status, result = getattr(self, f"_run_{statement.kind}")(statement)
            except (HomkernelError, ArithmeticError, ValueError, IndexError, KeyError, RuntimeError) as exc:
                logger.warning("line %d: %s failed: %s", statement.line, statement.kind, exc)
                if statement.target:
                    self.failed[statement.target] = str(exc)
                status, result = "error", {}
                record["error"] = f"{type(exc).__name__}: {exc}"
            record["status"] = status
            record["result"] = result
            if self.report_timings:
                record["elapsed_sec"] = round(time.perf_counter() - began, 6)
            errors += status == "error"
            failures += status == "fail"
            document["records"].append(record)
        document["exit_code"] = EXIT_RUNTIME_ERROR if errors else EXIT_FAILURE if failures else EXIT_OK
        document["passed"] = document["exit_code"] == EXIT_OK
        if self.report_timings:
            document["elapsed_sec"] = round(time.perf_counter() - started, 6)
        logger.info("%s: %d statements, %d failures, %d errors", source, len(script.statements), failures, errors)
        return document


def run_script(script: Script, config: Optional[Dict] = None, source: str = "<script>") -> Dict[str, Any]:
    return ScriptRunner(config).run(script, source)


def _parse_error_document(source: str, exc: ParseError, field_override: Optional[FieldDescriptor]) -> Dict[str, Any]:
    document = new_document(source, field_override.tag if field_override else "none")
    document["records"].append({
        "line": exc.line,
        "column": exc.column,
        "statement": "",
        "kind": "parse",
        "status": "error",
        "error": f"{type(exc).__name__}: {exc}",
        "expected": exc.expected,
        "result": {},
    })
    document["exit_code"] = EXIT_PARSE_ERROR
    document["passed"] = False
    return document


def run_text(text: str, config: Optional[Dict] = None, source: str = "<script>",
             field_override: Optional[FieldDescriptor] = None) -> Dict[str, Any]:
    """Parse and run; a parse error becomes a single error record with exit code 2."""
    config = config or load_config()
    default_field = FieldDescriptor.from_tag(config["kernel"]["default_field"])
    try:
        script = parse_script(text, field_override, default_field)
    except ParseError as exc:
        return _parse_error_document(source, exc, field_override)
    return run_script(script, config, source)


def run_file(path: str, config: Optional[Dict] = None,
             field_override: Optional[FieldDescriptor] = None) -> Dict[str, Any]:
    """run_text on a script file; unreadable or non-UTF-8 input is reported as a parse error."""
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        logger.error("cannot read %s: %s", path, exc)
        return _parse_error_document(path, ParseError(f"cannot read script: {exc.strerror or exc}"), field_override)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        before = raw[: exc.start]
        line = before.count(b"\n") + 1
        column = exc.start - (before.rfind(b"\n") + 1) + 1
        error = ParseError(f"invalid UTF-8 byte 0x{raw[exc.start]:02x}", line, column)
        return _parse_error_document(path, error, field_override)
    return run_text(text, config, path, field_override)
