"""
S-expression reading and printing.

Tokens are recognised with pyparsing; nesting is assembled with an explicit stack so
deep numerals do not exhaust the interpreter stack. Every tree node keeps its source
offset, which ends up in ``ParseError.position``.

Grammar (whitespace-insensitive, ``;`` starts a comment)::

    term    ::= z | (s t) | (+ t t) | (* t t) | (var x) | (quote f)
    iv      ::= a | (ivar a)
    formula ::= (eq t t) | (lt t t) | (tru t) | (itru iv t) | (prec iv iv)
              | (ack t t) | (diag t t) | (exp t t) | (ieq iv iv) | (sent t) | (subt t t)
              | (not f) | (or f f) | (and f f) | (imp f f) | (iff f f)
              | (ex v f) | (all v f) | (ex-i iv f) | (all-i iv f)
              | (ex-le v t f) | (all-le v t f)
"""

import re
from dataclasses import dataclass
from typing import Iterator, List, Tuple, Union

import pyparsing as pp

from services.syntax import (
    Ack,
    Add,
    And,
    BoundedExists,
    BoundedForall,
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
    check_sorts,
    is_identifier,
)
from utils.errors import ParseError, SortError

# ============================================================================
# TREES
# ============================================================================


@dataclass(frozen=True)
class Atom:
    text: str
    position: int


@dataclass(frozen=True)
class Text:
    value: str
    position: int


@dataclass(frozen=True)
class SList:
    items: Tuple["SExpr", ...]
    position: int


SExpr = Union[Atom, Text, SList]


# Tokenizer
# -----------------------------------------------------------------------------

_COMMENT = pp.Regex(r";[^\n]*")
_OPEN = pp.Literal("(")
_CLOSE = pp.Literal(")")
_STRING = pp.QuotedString('"', esc_char="\\", convert_whitespace_escapes=True).set_parse_action(
    lambda s, loc, toks: Text(toks[0], loc)
)
_SYMBOL = pp.Regex(r'[^\s()";]+').set_parse_action(lambda s, loc, toks: Atom(toks[0], loc))
_TOKEN = (_OPEN | _CLOSE | _STRING | _SYMBOL).ignore(_COMMENT)

_SKIPPABLE = re.compile(r"(?:\s|;[^\n]*)*")


def _check_gap(text: str, start: int, end: int) -> None:
    gap = _SKIPPABLE.match(text, start, end)
    if gap.end() < end:
        position = gap.end()
        if text[position] == '"':
            raise ParseError("unterminated string", position)
        raise ParseError(f"unexpected character {text[position]!r}", position)


def read_sexprs(text: str) -> List[SExpr]:
    """Read every top-level S-expression in ``text``."""
    stack: List[List[SExpr]] = [[]]
    opens: List[int] = []
    previous = 0

    for tokens, start, end in _TOKEN.scan_string(text):
        _check_gap(text, previous, start)
        previous = end
        token = tokens[0]
        if token == "(":
            opens.append(start)
            stack.append([])
        elif token == ")":
            if not opens:
                raise ParseError("unbalanced ')'", start)
            items = stack.pop()
            stack[-1].append(SList(tuple(items), opens.pop()))
        else:
            stack[-1].append(token)

    _check_gap(text, previous, len(text))
    if opens:
        raise ParseError("unclosed '('", opens[-1])
    return stack[0]


def read_sexpr(text: str) -> SExpr:
    """Read exactly one S-expression."""
    trees = read_sexprs(text)
    if len(trees) != 1:
        position = trees[1].position if len(trees) > 1 else len(text)
        raise ParseError(f"expected one expression, found {len(trees)}", position)
    return trees[0]


# Tree helpers
# -----------------------------------------------------------------------------


def head_of(tree: SExpr) -> str:
    """Head symbol of a list, e.g. ``eq`` for ``(eq z z)``."""
    if not isinstance(tree, SList) or not tree.items or not isinstance(tree.items[0], Atom):
        raise ParseError("expected a list starting with a symbol", tree.position)
    return tree.items[0].text


def expect_arity(tree: SList, count: int) -> Tuple[SExpr, ...]:
    args = tree.items[1:]
    if len(args) != count:
        raise ParseError(f"'{head_of(tree)}' expects {count} argument(s), got {len(args)}", tree.position)
    return args


def expect_symbol(tree: SExpr, what: str = "symbol") -> str:
    if not isinstance(tree, Atom):
        raise ParseError(f"expected {what}", tree.position)
    return tree.text


def expect_int(tree: SExpr) -> int:
    text = expect_symbol(tree, "natural number")
    if not text.isdigit():
        raise ParseError(f"expected natural number, got {text!r}", tree.position)
    return int(text)


def expect_text(tree: SExpr) -> str:
    if not isinstance(tree, Text):
        raise ParseError("expected a quoted string", tree.position)
    return tree.value


# ============================================================================
# FORMULAS AND TERMS
# ============================================================================

_TERM_BINARY = {"+": Add, "*": Mul}
_ATOM_BINARY = {"eq": Eq, "lt": Lt, "ack": Ack, "diag": Diag, "exp": ExpRel, "subt": SubT}
_ATOM_UNARY = {"tru": Tru, "sent": SentA}
_CONNECTIVES = {"or": Or, "and": And, "imp": Imp, "iff": Iff}
_NUMBER_BINDERS = {"ex": ExistsNum, "all": ForallNum}
_INDEX_BINDERS = {"ex-i": ExistsIdx, "all-i": ForallIdx}
_BOUNDED_BINDERS = {"ex-le": BoundedExists, "all-le": BoundedForall}


def _identifier(tree: SExpr, wrapper: str) -> str:
    if isinstance(tree, SList) and head_of(tree) == wrapper:
        (inner,) = expect_arity(tree, 1)
        tree = inner
    name = expect_symbol(tree, "variable")
    if not is_identifier(name):
        raise ParseError(f"invalid identifier {name!r}", tree.position)
    return name


def _index_variable(tree: SExpr) -> str:
    if isinstance(tree, SList) and head_of(tree) == "var":
        raise SortError(f"number variable used where an index variable is required (at position {tree.position})")
    return _identifier(tree, "ivar")


def term_from_sexpr(tree: SExpr) -> Term:
    successors = 0
    while isinstance(tree, SList) and head_of(tree) == "s":
        (tree,) = expect_arity(tree, 1)
        successors += 1

    if isinstance(tree, Atom):
        if tree.text != "z":
            raise ParseError(f"expected a term, got {tree.text!r}", tree.position)
        term: Term = Zero()
    elif isinstance(tree, Text):
        raise ParseError("expected a term, got a string", tree.position)
    else:
        head = head_of(tree)
        if head in _TERM_BINARY:
            left, right = expect_arity(tree, 2)
            term = _TERM_BINARY[head](term_from_sexpr(left), term_from_sexpr(right))
        elif head == "var":
            term = NumVar(_identifier(tree, "var"))
        elif head == "quote":
            (inner,) = expect_arity(tree, 1)
            term = Quote(_formula(inner))
        elif head == "ivar":
            raise SortError(f"index variable used as a number term (at position {tree.position})")
        else:
            raise ParseError(f"unknown term constructor {head!r}", tree.position)

    for _ in range(successors):
        term = Succ(term)
    return term


def _formula(tree: SExpr) -> Formula:
    head = head_of(tree)
    if head in _ATOM_BINARY:
        left, right = expect_arity(tree, 2)
        return _ATOM_BINARY[head](term_from_sexpr(left), term_from_sexpr(right))
    if head in _ATOM_UNARY:
        (arg,) = expect_arity(tree, 1)
        return _ATOM_UNARY[head](term_from_sexpr(arg))
    if head == "itru":
        index, arg = expect_arity(tree, 2)
        return ITru(_index_variable(index), term_from_sexpr(arg))
    if head in ("prec", "ieq"):
        left, right = expect_arity(tree, 2)
        cls = Prec if head == "prec" else IEq
        return cls(_index_variable(left), _index_variable(right))
    if head == "not":
        (body,) = expect_arity(tree, 1)
        return Not(_formula(body))
    if head in _CONNECTIVES:
        left, right = expect_arity(tree, 2)
        return _CONNECTIVES[head](_formula(left), _formula(right))
    if head in _NUMBER_BINDERS:
        var, body = expect_arity(tree, 2)
        return _NUMBER_BINDERS[head](_identifier(var, "var"), _formula(body))
    if head in _INDEX_BINDERS:
        var, body = expect_arity(tree, 2)
        return _INDEX_BINDERS[head](_index_variable(var), _formula(body))
    if head in _BOUNDED_BINDERS:
        var, bound, body = expect_arity(tree, 3)
        return _BOUNDED_BINDERS[head](_identifier(var, "var"), term_from_sexpr(bound), _formula(body))
    raise ParseError(f"unknown formula constructor {head!r}", tree.position)


def formula_from_sexpr(tree: SExpr) -> Formula:
    """Build and sort-check a formula from a tree."""
    formula = _formula(tree)
    check_sorts(formula)
    return formula


def parse(text: str) -> Formula:
    """
    Parse the canonical S-expression text of a formula.

    Raises:
        ParseError: malformed text, with the offending position.
        SortError: a variable used with the wrong sort.
    """
    return formula_from_sexpr(read_sexpr(text))


def parse_term(text: str) -> Term:
    return term_from_sexpr(read_sexpr(text))


def parse_formulas(text: str) -> List[Formula]:
    """Parse a sequence of formulas, e.g. a pool file with one sentence per line."""
    return [formula_from_sexpr(tree) for tree in read_sexprs(text)]


# ============================================================================
# PRINTING
# ============================================================================

_HEADS = {
    Add: "+",
    Mul: "*",
    Eq: "eq",
    Lt: "lt",
    Ack: "ack",
    Diag: "diag",
    ExpRel: "exp",
    SubT: "subt",
    Tru: "tru",
    SentA: "sent",
    Prec: "prec",
    IEq: "ieq",
    Or: "or",
    And: "and",
    Imp: "imp",
    Iff: "iff",
    ExistsNum: "ex",
    ForallNum: "all",
    ExistsIdx: "ex-i",
    ForallIdx: "all-i",
    BoundedExists: "ex-le",
    BoundedForall: "all-le",
}


def _render_parts(node: Node) -> Iterator[str]:
    if isinstance(node, Succ):
        depth = 0
        while isinstance(node, Succ):
            depth += 1
            node = node.arg
        yield "(s " * depth
        yield from _render_parts(node)
        yield ")" * depth
    elif isinstance(node, Zero):
        yield "z"
    elif isinstance(node, NumVar):
        yield f"(var {node.name})"
    elif isinstance(node, Quote):
        yield "(quote "
        yield from _render_parts(node.formula)
        yield ")"
    elif isinstance(node, Not):
        yield "(not "
        yield from _render_parts(node.body)
        yield ")"
    elif isinstance(node, ITru):
        yield f"(itru {node.index} "
        yield from _render_parts(node.arg)
        yield ")"
    elif isinstance(node, (Prec, IEq)):
        yield f"({_HEADS[type(node)]} {node.left} {node.right})"
    elif isinstance(node, (Tru, SentA)):
        yield f"({_HEADS[type(node)]} "
        yield from _render_parts(node.arg)
        yield ")"
    elif isinstance(node, (BoundedExists, BoundedForall)):
        yield f"({_HEADS[type(node)]} {node.var} "
        yield from _render_parts(node.bound)
        yield " "
        yield from _render_parts(node.body)
        yield ")"
    elif isinstance(node, (ExistsNum, ForallNum, ExistsIdx, ForallIdx)):
        yield f"({_HEADS[type(node)]} {node.var} "
        yield from _render_parts(node.body)
        yield ")"
    else:
        yield f"({_HEADS[type(node)]} "
        yield from _render_parts(node.left)
        yield " "
        yield from _render_parts(node.right)
        yield ")"


def render(node: Node) -> str:
    """Canonical single-line text of a formula or term; ``parse`` inverts it."""
    return "".join(_render_parts(node))


def quote_text(value: str) -> str:
    """A single-line string literal for container formats; the reader undoes every escape."""
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return '"' + escaped.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t") + '"'
