"""
Serialization: TPTP FOF problem files for bundles, a reader and guard audit for the
emitted fragment, and the S-expression container formats.

Two-sorted formulas are collapsed to unsorted FOF with the guards ``num/1`` and
``idx/1``; every quantifier binds one variable and its body starts with the guard.
Number variables are written ``N_x``, index variables ``I_a``. Quoted formulas
become literal successor towers over ``zero``, or named constants when
``opaque_codes`` is set and the tower would be too tall.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pyparsing as pp

from services.axioms import AXIOM, CONJECTURE, OBLIGATION, AxiomBundle, NamedSentence
from services.diagonal import FixedPointResult
from services.goedel import encode
from services.interp import Interpretation
from services.semantics import CheckInstance, CheckReport, TriBool
from services.sexpr import (
    SList,
    expect_arity,
    expect_int,
    expect_symbol,
    expect_text,
    formula_from_sexpr,
    head_of,
    quote_text,
    read_sexpr,
    render,
)
from services.syntax import (
    BOUNDED_QUANTIFIERS,
    FALSUM,
    Ack,
    Add,
    And,
    Diag,
    Eq,
    ExistsIdx,
    ExistsNum,
    ExpRel,
    ForallIdx,
    ForallNum,
    Formula,
    Iff,
    IEq,
    Imp,
    ITru,
    Lt,
    Mul,
    Node,
    Not,
    NumVar,
    Or,
    Prec,
    Quote,
    SentA,
    SubT,
    Succ,
    Term,
    Tru,
    Zero,
    expand_bounded,
)
from utils.config import DEFAULT_TOWER_LIMIT
from utils.errors import BudgetExceededError, ParseError, WorkbenchError

logger = logging.getLogger(__name__)

TOWER_WARNING = 1000
NUMBER_PREFIX = "N_"
INDEX_PREFIX = "I_"
NUM_GUARD = "num"
IDX_GUARD = "idx"

_PREDICATES = {
    Lt: "lt",
    Ack: "ack",
    Diag: "diag",
    ExpRel: "expr",
    SubT: "subt",
    Tru: "tru",
    SentA: "sent_a",
}
_CONNECTIVES = {Or: "|", And: "&", Imp: "=>", Iff: "<=>"}

GUARD_AXIOMS = [
    ("num_zero", f"{NUM_GUARD}(zero)"),
    ("num_succ", f"(! [N_x] : ({NUM_GUARD}(N_x) => {NUM_GUARD}(s(N_x))))"),
    (
        "num_plus",
        f"(! [N_x] : ({NUM_GUARD}(N_x) => (! [N_y] : ({NUM_GUARD}(N_y) => {NUM_GUARD}(plus(N_x,N_y)))))))",
    ),
    (
        "num_times",
        f"(! [N_x] : ({NUM_GUARD}(N_x) => (! [N_y] : ({NUM_GUARD}(N_y) => {NUM_GUARD}(times(N_x,N_y)))))))",
    ),
    ("sorts_disjoint", f"(! [N_x] : ({NUM_GUARD}(N_x) => ~ {IDX_GUARD}(N_x)))"),
]


# ============================================================================
# TPTP EMISSION
# ============================================================================


class _FofWriter:
    """Renders formulas as FOF text, tracking opaque code constants."""

    def __init__(self, tower_limit: int, opaque_codes: bool):
        self.tower_limit = tower_limit
        self.opaque_codes = opaque_codes
        self.constants: Dict[Formula, str] = {}

    def tower(self, value: int) -> str:
        return "s(" * value + "zero" + ")" * value

    def quote(self, formula: Formula) -> str:
        code = encode(formula)
        if code > self.tower_limit:
            if self.opaque_codes:
                if formula not in self.constants:
                    self.constants[formula] = f"code_{len(self.constants)}"
                return self.constants[formula]
            digits = len(str(code))
            raise BudgetExceededError(
                f"numeral tower for a code with {digits} digits exceeds the limit of {self.tower_limit} nodes; "
                "use a smaller pool or opaque codes"
            )
        if code > TOWER_WARNING:
            logger.warning(f"Emitting a numeral tower of {code + 1} nodes")
        return self.tower(code)

    def term(self, term: Term) -> str:
        depth = 0
        while isinstance(term, Succ):
            depth += 1
            term = term.arg
        if isinstance(term, Zero):
            text = "zero"
        elif isinstance(term, NumVar):
            text = NUMBER_PREFIX + term.name
        elif isinstance(term, Add):
            text = f"plus({self.term(term.left)},{self.term(term.right)})"
        elif isinstance(term, Mul):
            text = f"times({self.term(term.left)},{self.term(term.right)})"
        elif isinstance(term, Quote):
            text = self.quote(term.formula)
        else:
            raise TypeError(f"not a term: {term!r}")
        return "s(" * depth + text + ")" * depth

    def formula(self, formula: Formula) -> str:
        if isinstance(formula, Eq):
            return f"({self.term(formula.left)} = {self.term(formula.right)})"
        if isinstance(formula, IEq):
            return f"({INDEX_PREFIX}{formula.left} = {INDEX_PREFIX}{formula.right})"
        if isinstance(formula, Prec):
            return f"prec({INDEX_PREFIX}{formula.left},{INDEX_PREFIX}{formula.right})"
        if isinstance(formula, ITru):
            return f"itru({INDEX_PREFIX}{formula.index},{self.term(formula.arg)})"
        if type(formula) in _PREDICATES:
            args = [getattr(formula, name) for name in formula.__dataclass_fields__]
            return f"{_PREDICATES[type(formula)]}({','.join(self.term(arg) for arg in args)})"
        if isinstance(formula, Not):
            return f"~ {self.formula(formula.body)}"
        if type(formula) in _CONNECTIVES:
            return f"({self.formula(formula.left)} {_CONNECTIVES[type(formula)]} {self.formula(formula.right)})"
        if isinstance(formula, BOUNDED_QUANTIFIERS):
            return self.formula(expand_bounded(formula))
        if isinstance(formula, (ExistsNum, ForallNum)):
            return self._quantifier(formula, NUMBER_PREFIX + formula.var, NUM_GUARD)
        if isinstance(formula, (ExistsIdx, ForallIdx)):
            return self._quantifier(formula, INDEX_PREFIX + formula.var, IDX_GUARD)
        raise TypeError(f"not a formula: {formula!r}")

    def _quantifier(self, formula: Formula, variable: str, guard: str) -> str:
        body = self.formula(formula.body)
        if isinstance(formula, (ExistsNum, ExistsIdx)):
            return f"(? [{variable}] : ({guard}({variable}) & {body}))"
        return f"(! [{variable}] : ({guard}({variable}) => {body}))"

    def constant_axioms(self) -> List[Tuple[str, str]]:
        return [(f"{name}_num", f"{NUM_GUARD}({name})") for name in self.constants.values()]


def _annotated(name: str, role: str, text: str) -> str:
    return f"fof({name}, {role}, {text})."


def _statement(writer: _FofWriter, role: str, formula: Formula) -> str:
    """Formula text; only a conjecture that is exactly 0 = 1 is written as $false."""
    if role == CONJECTURE and formula == FALSUM:
        return "$false"
    return writer.formula(formula)


def _header(bundle: AxiomBundle, opaque: bool) -> List[str]:
    lines = [f"% Bundle: {bundle.name}", f"% Provenance: {bundle.provenance}", "% Generated by ct-workbench"]
    if opaque:
        lines.append("% Oversized numerals replaced by opaque constants code_<k>")
    return lines


def _emit(
    bundle: AxiomBundle,
    sentences: Sequence[Tuple[str, str, Formula]],
    tower_limit: int,
    opaque_codes: bool,
) -> str:
    writer = _FofWriter(tower_limit, opaque_codes)
    body = [_annotated(name, role, _statement(writer, role, formula)) for name, role, formula in sentences]

    lines = _header(bundle, opaque_codes)
    skipped = [s.name for s in bundle.sentences if s.role == OBLIGATION]
    if skipped:
        lines.append(f"% Obligations exported separately: {', '.join(skipped)}")
    lines.append("")
    lines.extend(_annotated(name, AXIOM, text) for name, text in GUARD_AXIOMS)
    lines.extend(_annotated(name, AXIOM, text) for name, text in writer.constant_axioms())
    lines.extend(body)
    return "\n".join(lines) + "\n"


def to_tptp(bundle: AxiomBundle, tower_limit: int = DEFAULT_TOWER_LIMIT, opaque_codes: bool = False) -> str:
    """
    TPTP FOF problem text for a bundle; conjectures are kept, obligations skipped.

    Raises:
        BudgetExceededError: a numeral tower is over ``tower_limit`` without ``opaque_codes``.
    """
    sentences = [(s.name, s.role, s.body) for s in bundle.sentences if s.role != OBLIGATION]
    text = _emit(bundle, sentences, tower_limit, opaque_codes)
    logger.info(f"Exported bundle {bundle.name} with {len(sentences)} formulas to TPTP")
    return text


def obligation_tasks(
    bundle: AxiomBundle,
    tower_limit: int = DEFAULT_TOWER_LIMIT,
    opaque_codes: bool = False,
) -> Dict[str, str]:
    """One problem per obligation: the bundle's axioms, its premise, and its body as conjecture."""
    axioms = [(s.name, AXIOM, s.body) for s in bundle.sentences if s.role == AXIOM]
    tasks = {}
    for obligation in bundle.with_role(OBLIGATION):
        sentences = list(axioms)
        if obligation.premise is not None:
            sentences.append((f"{obligation.name}_premise", AXIOM, obligation.premise))
        sentences.append((obligation.name, CONJECTURE, obligation.body))
        task_bundle = AxiomBundle(obligation.name, (), f"{bundle.provenance}; obligation {obligation.name}")
        tasks[obligation.name] = _emit(task_bundle, sentences, tower_limit, opaque_codes)
    return tasks


# ============================================================================
# FOF READER
# ============================================================================


@dataclass(frozen=True)
class FofTerm:
    functor: str
    args: Tuple["FofTerm", ...] = ()

    @property
    def is_variable(self) -> bool:
        return self.functor[:1].isupper()


@dataclass(frozen=True)
class FofFormula:
    """``kind`` is one of atom, eq, true, false, not, binary, quant."""

    kind: str
    symbol: str = ""
    args: Tuple[Union["FofFormula", FofTerm], ...] = ()
    variables: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FofAnnotated:
    name: str
    role: str
    formula: FofFormula


_COMMENT = re.compile(r"%[^\n]*")
_TOWER_START = re.compile(r"(?<![\w$])((?:s\(\s*)+)zero")


def _collapse_towers(text: str) -> str:
    """Replace pure successor towers by ``tower_<k>`` so the reader stays shallow."""
    out = []
    position = 0
    for match in _TOWER_START.finditer(text):
        if match.start() < position:
            continue
        depth = match.group(1).count("(")
        closing = re.match(r"(?:\s*\)){%d}" % depth, text[match.end():])
        if closing is None:
            continue
        out.append(text[position:match.start()])
        out.append(f"tower_{depth}")
        position = match.end() + closing.end()
    out.append(text[position:])
    return "".join(out)


def _fold_binary(tokens):
    items = list(tokens)
    result = items[0]
    for i in range(1, len(items), 2):
        result = FofFormula("binary", items[i], (result, items[i + 1]))
    return result


def _make_reader() -> pp.ParserElement:
    lpar, rpar, lbrack, rbrack, colon, comma, dot = map(pp.Suppress, "()[]:,.")
    variable = pp.Regex(r"[A-Z][A-Za-z0-9_]*")
    lower_word = pp.Regex(r"[a-z][A-Za-z0-9_]*")

    term = pp.Forward()
    arguments = lpar + pp.DelimitedList(term) + rpar
    term <<= (variable | lower_word + pp.Optional(pp.Group(arguments), default=[])).set_parse_action(
        lambda toks: FofTerm(toks[0], tuple(toks[1]) if len(toks) > 1 else ())
    )

    formula = pp.Forward()
    unit = pp.Forward()

    equality = (term + pp.one_of("= !=") + term).set_parse_action(
        lambda toks: FofFormula("eq", toks[1], (toks[0], toks[2]))
    )
    constant = pp.one_of("$true $false").set_parse_action(lambda toks: FofFormula(toks[0][1:]))
    predicate = term.copy().add_parse_action(lambda toks: FofFormula("atom", toks[0].functor, toks[0].args))
    atom = constant | equality | predicate

    quantified = (
        pp.one_of("! ?") + lbrack + pp.Group(pp.DelimitedList(variable)) + rbrack + colon + unit
    ).set_parse_action(lambda toks: FofFormula("quant", toks[0], (toks[2],), tuple(toks[1])))
    negation = (pp.Suppress("~") + unit).set_parse_action(lambda toks: FofFormula("not", "~", (toks[0],)))
    unit <<= quantified | negation | (lpar + formula + rpar) | atom

    connective = pp.one_of("<=> => | &")
    formula <<= (unit + pp.ZeroOrMore(connective + unit)).set_parse_action(_fold_binary)

    annotated = (
        pp.Keyword("fof") + lpar + lower_word + comma + lower_word + comma + formula + rpar + dot
    ).set_parse_action(lambda toks: FofAnnotated(toks[1], toks[2], toks[3]))
    return pp.ZeroOrMore(annotated)


_READER = _make_reader()


def read_fof(text: str) -> List[FofAnnotated]:
    """
    Parse the FOF fragment emitted by ``to_tptp``.

    Raises:
        ParseError: the text is not in the fragment, with the failing position.
    """
    try:
        return list(_READER.parse_string(_collapse_towers(_COMMENT.sub("", text)), parse_all=True))
    except pp.ParseBaseException as e:
        raise ParseError(f"invalid FOF: {e.msg}", e.loc) from e


def _guard_for(variable: str) -> Optional[str]:
    if variable.startswith(NUMBER_PREFIX):
        return NUM_GUARD
    if variable.startswith(INDEX_PREFIX):
        return IDX_GUARD
    return None


def _audit(formula: FofFormula, where: str, problems: List[str]) -> None:
    if formula.kind == "quant":
        body = formula.args[0]
        expected = "&" if formula.symbol == "?" else "=>"
        guarded = (
            len(formula.variables) == 1
            and body.kind == "binary"
            and body.symbol == expected
            and body.args[0].kind == "atom"
            and body.args[0].symbol == _guard_for(formula.variables[0])
            and body.args[0].args == (FofTerm(formula.variables[0]),)
        )
        if not guarded:
            problems.extend(f"{where}:{variable}" for variable in formula.variables)
    for child in formula.args:
        if isinstance(child, FofFormula):
            _audit(child, where, problems)


def guard_audit(text: str) -> List[str]:
    """Variables (as ``formula:variable``) not bound under exactly one matching sort guard."""
    problems: List[str] = []
    for annotated in read_fof(text):
        _audit(annotated.formula, annotated.name, problems)
    return problems


# ============================================================================
# S-EXPRESSION CONTAINERS
# ============================================================================


def _interp_to_sexpr(iota: Interpretation) -> str:
    pool = "".join(f" {render(sentence)}" for sentence in iota.pool)
    return (
        f"(interp {iota.n} (psi {render(iota.psi)}) (pool{pool}) "
        f"(domain {render(iota.domain_formula)}) (truth {render(iota.truth_formula)}))"
    )


def _sentence_to_sexpr(sentence: NamedSentence) -> str:
    parts = [f"(ax {sentence.name} {sentence.role} {render(sentence.body)}"]
    if sentence.flags:
        parts.append(f" (flags {' '.join(sentence.flags)})")
    if sentence.premise is not None:
        parts.append(f" (premise {render(sentence.premise)})")
    parts.append(")")
    return "".join(parts)


def _bundle_to_sexpr(bundle: AxiomBundle) -> str:
    lines = [f"(bundle {bundle.name} (provenance {quote_text(bundle.provenance)})"]
    lines.extend(f"  {_sentence_to_sexpr(sentence)}" for sentence in bundle.sentences)
    return "\n".join(lines) + ")"


def _report_to_sexpr(report: CheckReport) -> str:
    lines = [
        f"(report {report.check} (pass {str(report.passed).lower()}) (fuel {report.fuel}) "
        f"(flags{''.join(' ' + flag for flag in report.flags)})"
    ]
    lines.extend(
        f"  (instance {quote_text(i.input)} {i.expected} {i.got} {i.verdict})" for i in report.instances
    )
    return "\n".join(lines) + ")"


def _fixed_point_to_sexpr(result: FixedPointResult) -> str:
    return (
        f"(fixedpoint (delta {render(result.delta)}) (delta-prime {render(result.delta_prime)}) "
        f"(gamma {render(result.gamma)}) (unfolded {render(result.unfolded)}))"
    )


def to_sexpr(value) -> str:
    """Canonical S-expression for a formula, term or container."""
    if isinstance(value, (Formula, Term)):
        return render(value)
    if isinstance(value, Interpretation):
        return _interp_to_sexpr(value)
    if isinstance(value, AxiomBundle):
        return _bundle_to_sexpr(value)
    if isinstance(value, CheckReport):
        return _report_to_sexpr(value)
    if isinstance(value, FixedPointResult):
        return _fixed_point_to_sexpr(value)
    raise TypeError(f"no S-expression form for {type(value).__name__}")


def _sections(tree: SList, start: int) -> Dict[str, SList]:
    sections = {}
    for item in tree.items[start:]:
        sections[head_of(item)] = item
    return sections


def _section(sections: Dict[str, SList], key: str, parent: SList) -> SList:
    if key not in sections:
        raise ParseError(f"missing ({key} ...) section", parent.position)
    return sections[key]


def _single_formula(section: SList) -> Formula:
    (body,) = expect_arity(section, 1)
    return formula_from_sexpr(body)


def _interp_from_tree(tree: SList) -> Interpretation:
    n = expect_int(tree.items[1])
    sections = _sections(tree, 2)
    pool = _section(sections, "pool", tree)
    return Interpretation(
        n=n,
        psi=_single_formula(_section(sections, "psi", tree)),
        pool=tuple(formula_from_sexpr(item) for item in pool.items[1:]),
        domain_formula=_single_formula(_section(sections, "domain", tree)),
        truth_formula=_single_formula(_section(sections, "truth", tree)),
    )


def _sentence_from_tree(tree: SList) -> NamedSentence:
    if head_of(tree) != "ax" or len(tree.items) < 4:
        raise ParseError("expected (ax name role formula ...)", tree.position)
    name = expect_symbol(tree.items[1], "sentence name")
    role = expect_symbol(tree.items[2], "role")
    body = formula_from_sexpr(tree.items[3])
    sections = _sections(tree, 4)
    flags = ()
    if "flags" in sections:
        flags = tuple(expect_symbol(item, "flag") for item in sections["flags"].items[1:])
    premise = _single_formula(sections["premise"]) if "premise" in sections else None
    try:
        return NamedSentence(name, role, body, flags, premise)
    except WorkbenchError as e:
        raise ParseError(str(e), tree.position) from e


def _bundle_from_tree(tree: SList) -> AxiomBundle:
    name = expect_symbol(tree.items[1], "bundle name")
    provenance = ""
    sentences = []
    for item in tree.items[2:]:
        if head_of(item) == "provenance":
            (text,) = expect_arity(item, 1)
            provenance = expect_text(text)
        else:
            sentences.append(_sentence_from_tree(item))
    try:
        return AxiomBundle(name, tuple(sentences), provenance)
    except WorkbenchError as e:
        raise ParseError(str(e), tree.position) from e


def _tribool(tree) -> TriBool:
    text = expect_symbol(tree, "truth value")
    try:
        return TriBool(text)
    except ValueError as e:
        raise ParseError(f"expected true, false or unknown, got {text!r}", tree.position) from e


def _report_from_tree(tree: SList) -> CheckReport:
    check = expect_symbol(tree.items[1], "check name")
    fuel = 0
    flags: Tuple[str, ...] = ()
    instances = []
    for item in tree.items[2:]:
        head = head_of(item)
        if head == "fuel":
            (value,) = expect_arity(item, 1)
            fuel = expect_int(value)
        elif head == "flags":
            flags = tuple(expect_symbol(flag, "flag") for flag in item.items[1:])
        elif head == "instance":
            text, expected, got, _verdict = expect_arity(item, 4)
            instances.append(CheckInstance(expect_text(text), _tribool(expected), _tribool(got)))
        elif head != "pass":
            raise ParseError(f"unknown report section {head!r}", item.position)
    return CheckReport(check, fuel, tuple(instances), flags)


def _fixed_point_from_tree(tree: SList) -> FixedPointResult:
    sections = _sections(tree, 1)
    return FixedPointResult(
        gamma=_single_formula(_section(sections, "gamma", tree)),
        delta=_single_formula(_section(sections, "delta", tree)),
        unfolded=_single_formula(_section(sections, "unfolded", tree)),
        delta_prime=_single_formula(_section(sections, "delta-prime", tree)),
    )


_CONTAINERS = {
    "interp": _interp_from_tree,
    "bundle": _bundle_from_tree,
    "report": _report_from_tree,
    "fixedpoint": _fixed_point_from_tree,
}


def from_sexpr(text: str) -> Union[Node, Interpretation, AxiomBundle, CheckReport, FixedPointResult]:
    """
    Inverse of ``to_sexpr``; the head symbol selects the container, anything else
    is read as a formula.

    Raises:
        ParseError: malformed text, with the offending position.
    """
    tree = read_sexpr(text)
    head = head_of(tree)
    if head in _CONTAINERS:
        if len(tree.items) < 2:
            raise ParseError(f"empty ({head}) container", tree.position)
        return _CONTAINERS[head](tree)
    return formula_from_sexpr(tree)
