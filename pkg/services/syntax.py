"""
Abstract syntax of the two-sorted language and its structural transformations.

Terms and formulas are immutable dataclasses. Number variables are ``NumVar`` nodes;
index variables are plain identifier strings held by the index atoms (``ITru``,
``Prec``, ``IEq``) and the index quantifiers. A ``Quote`` term stands for the Goedel
code of its formula and is opaque to every transformation in this module.

Sugar nodes (``And``, ``Imp``, ``Iff``, the universal and bounded quantifiers) are
kept in the tree so rendered output matches the input; ``desugar`` removes them.
"""

from __future__ import annotations

import functools
import logging
import re
from dataclasses import dataclass, fields, replace
from typing import Callable, FrozenSet, Iterator, List, Sequence, Set, Tuple, Union

from utils.errors import ArityError, EmptyListError, SortError

logger = logging.getLogger(__name__)

NUMBER = "number"
INDEX = "index"

IDENTIFIER_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
FIRST_CHARS = "abcdefghijklmnopqrstuvwxyz"
NEXT_CHARS = FIRST_CHARS + "0123456789_"


# ============================================================================
# TERMS
# ============================================================================


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class NumVar(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Quote(Term):
    """The numeral of the code of ``formula``."""

    formula: "Formula"


# ============================================================================
# FORMULAS
# ============================================================================


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Tru(Formula):
    arg: Term


@dataclass(frozen=True)
class ITru(Formula):
    index: str
    arg: Term


@dataclass(frozen=True)
class Prec(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Ack(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Diag(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class ExpRel(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsNum(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsIdx(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForallNum(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallIdx(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedExists(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class BoundedForall(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class IEq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class SentA(Formula):
    arg: Term


@dataclass(frozen=True)
class SubT(Formula):
    left: Term
    right: Term


Node = Union[Term, Formula]

# Constructor order fixes the Goedel tags: terms first, then formulas.
TERM_TYPES: Tuple[type, ...] = (NumVar, Zero, Succ, Add, Mul, Quote)
FORMULA_TYPES: Tuple[type, ...] = (
    Eq,
    Lt,
    Tru,
    ITru,
    Prec,
    Ack,
    Diag,
    ExpRel,
    Not,
    Or,
    ExistsNum,
    ExistsIdx,
    And,
    Imp,
    Iff,
    ForallNum,
    ForallIdx,
    BoundedExists,
    BoundedForall,
    IEq,
    SentA,
    SubT,
)

NUMBER_QUANTIFIERS = (ExistsNum, ForallNum)
INDEX_QUANTIFIERS = (ExistsIdx, ForallIdx)
BOUNDED_QUANTIFIERS = (BoundedExists, BoundedForall)
INDEX_NODES = (ITru, Prec, IEq, ExistsIdx, ForallIdx)
TRUTH_NODES = (Tru, ITru, SubT)
SUGAR_NODES = (And, Imp, Iff, ForallNum, ForallIdx, BoundedExists, BoundedForall)

# Canonical closed sentences used where a constant truth value is needed.
VERUM = Not(Eq(Zero(), Succ(Zero())))
FALSUM = Eq(Zero(), Succ(Zero()))


# ============================================================================
# IDENTIFIERS AND FRESH NAMES
# ============================================================================


def is_identifier(name: str) -> bool:
    return isinstance(name, str) and IDENTIFIER_RE.match(name) is not None


def _check_identifier(name: str) -> None:
    if not is_identifier(name):
        raise SortError(f"not a variable identifier: {name!r}")


def _count_of_length(length: int) -> int:
    return len(FIRST_CHARS) * len(NEXT_CHARS) ** (length - 1)


def identifier_index(name: str) -> int:
    """Position of ``name`` in the shortlex identifier order (``a`` is 0)."""
    _check_identifier(name)
    offset = sum(_count_of_length(k) for k in range(1, len(name)))
    rank = FIRST_CHARS.index(name[0])
    for char in name[1:]:
        rank = rank * len(NEXT_CHARS) + NEXT_CHARS.index(char)
    return offset + rank


def identifier_at(index: int) -> str:
    """Inverse of ``identifier_index``."""
    if index < 0:
        raise ValueError(f"identifier index must be non-negative, got {index}")
    length = 1
    while index >= _count_of_length(length):
        index -= _count_of_length(length)
        length += 1
    tail = []
    for _ in range(length - 1):
        index, digit = divmod(index, len(NEXT_CHARS))
        tail.append(NEXT_CHARS[digit])
    return FIRST_CHARS[index] + "".join(reversed(tail))


def fresh_name(used: Set[str]) -> str:
    """Least identifier not in ``used``."""
    index = 0
    while identifier_at(index) in used:
        index += 1
    return identifier_at(index)


def identifier_sort_key(name: str) -> int:
    return identifier_index(name)


# ============================================================================
# GENERIC TRAVERSAL
# ============================================================================


@functools.lru_cache(maxsize=None)
def _field_names(cls: type) -> Tuple[str, ...]:
    if cls is Quote:
        return ()
    return tuple(f.name for f in fields(cls))


def _child_names(node: Node) -> List[str]:
    return [name for name in _field_names(type(node)) if isinstance(getattr(node, name), (Term, Formula))]


def children(node: Node) -> Tuple[Node, ...]:
    """Immediate term/formula children; a quotation has none."""
    return tuple(getattr(node, name) for name in _child_names(node))


def map_children(node: Node, fn: Callable[[Node], Node]) -> Node:
    names = _child_names(node)
    if not names:
        return node
    return replace(node, **{name: fn(getattr(node, name)) for name in names})


def walk(node: Node) -> Iterator[Node]:
    """Pre-order iteration over every node outside quotations."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(children(current)))


def _names_of(node: Node) -> Iterator[str]:
    if isinstance(node, NumVar):
        yield node.name
    elif isinstance(node, ITru):
        yield node.index
    elif isinstance(node, (Prec, IEq)):
        yield node.left
        yield node.right
    elif isinstance(node, (NUMBER_QUANTIFIERS, INDEX_QUANTIFIERS, BOUNDED_QUANTIFIERS)):
        yield node.var


def all_names(node: Node) -> Set[str]:
    """Every identifier occurring in ``node`` (free or bound, both sorts)."""
    return {name for sub in walk(node) for name in _names_of(sub)}


# ============================================================================
# FREE VARIABLES AND LANGUAGE CLASSIFICATION
# ============================================================================


def free_variables(node: Node) -> FrozenSet[Tuple[str, str]]:
    """Free variables of both sorts as ``(name, sort)`` pairs."""
    if isinstance(node, NumVar):
        return frozenset({(node.name, NUMBER)})
    if isinstance(node, Term):
        return frozenset((sub.name, NUMBER) for sub in walk(node) if isinstance(sub, NumVar))
    if isinstance(node, ITru):
        return frozenset({(node.index, INDEX)}) | free_variables(node.arg)
    if isinstance(node, (Prec, IEq)):
        return frozenset({(node.left, INDEX), (node.right, INDEX)})
    if isinstance(node, NUMBER_QUANTIFIERS):
        return free_variables(node.body) - {(node.var, NUMBER)}
    if isinstance(node, INDEX_QUANTIFIERS):
        return free_variables(node.body) - {(node.var, INDEX)}
    if isinstance(node, BOUNDED_QUANTIFIERS):
        return free_variables(node.bound) | (free_variables(node.body) - {(node.var, NUMBER)})
    result: FrozenSet[Tuple[str, str]] = frozenset()
    for child in children(node):
        result |= free_variables(child)
    return result


def free_number_variables(node: Node) -> List[str]:
    return sorted((name for name, sort in free_variables(node) if sort == NUMBER), key=identifier_sort_key)


def is_closed(node: Node) -> bool:
    return not free_variables(node)


def has_index_syntax(formula: Formula) -> bool:
    return any(isinstance(sub, INDEX_NODES) for sub in walk(formula))


def has_truth(formula: Formula) -> bool:
    return any(isinstance(sub, TRUTH_NODES) for sub in walk(formula))


def is_arithmetical(formula: Formula) -> bool:
    """Purely arithmetical: no truth predicate and no index syntax."""
    return not any(isinstance(sub, INDEX_NODES + TRUTH_NODES) for sub in walk(formula))


def is_desugared(formula: Formula) -> bool:
    return not any(isinstance(sub, SUGAR_NODES) for sub in walk(formula))


def is_sentence(formula: Formula) -> bool:
    return isinstance(formula, Formula) and is_closed(formula)


def unary_variable(formula: Formula) -> str:
    """The single free number variable of a unary formula."""
    free = free_variables(formula)
    numbers = [name for name, sort in free if sort == NUMBER]
    if len(numbers) != 1 or len(free) != 1:
        raise ArityError(f"expected exactly one free number variable, found {sorted(free)}")
    return numbers[0]


def check_sorts(formula: Formula) -> None:
    """
    Reject formulas that use one name with both sorts in the same scope.

    Raises:
        SortError: e.g. ``Prec`` applied to a name bound by a number quantifier.
    """
    free_sorts: dict = {}

    def use(name: str, sort: str, scope: dict) -> None:
        _check_identifier(name)
        bound_sort = scope.get(name)
        if bound_sort is not None:
            if bound_sort != sort:
                raise SortError(f"{name} is a {bound_sort} variable, used as {sort} variable")
            return
        previous = free_sorts.setdefault(name, sort)
        if previous != sort:
            raise SortError(f"{name} is used both as {previous} and as {sort} variable")

    def visit(node: Node, scope: dict) -> None:
        if isinstance(node, NumVar):
            use(node.name, NUMBER, scope)
        elif isinstance(node, ITru):
            use(node.index, INDEX, scope)
            visit(node.arg, scope)
        elif isinstance(node, (Prec, IEq)):
            use(node.left, INDEX, scope)
            use(node.right, INDEX, scope)
        elif isinstance(node, NUMBER_QUANTIFIERS):
            _check_identifier(node.var)
            visit(node.body, {**scope, node.var: NUMBER})
        elif isinstance(node, INDEX_QUANTIFIERS):
            _check_identifier(node.var)
            visit(node.body, {**scope, node.var: INDEX})
        elif isinstance(node, BOUNDED_QUANTIFIERS):
            _check_identifier(node.var)
            visit(node.bound, scope)
            visit(node.body, {**scope, node.var: NUMBER})
        else:
            for child in children(node):
                visit(child, scope)

    visit(formula, {})


# ============================================================================
# SUBSTITUTION AND RENAMING
# ============================================================================


def _rename_index(node: Node, old: str, new: str) -> Node:
    """Rename free occurrences of index variable ``old``; ``new`` must be unused."""
    if isinstance(node, ITru):
        return ITru(new if node.index == old else node.index, node.arg)
    if isinstance(node, Prec):
        return Prec(new if node.left == old else node.left, new if node.right == old else node.right)
    if isinstance(node, IEq):
        return IEq(new if node.left == old else node.left, new if node.right == old else node.right)
    if isinstance(node, INDEX_QUANTIFIERS) and node.var == old:
        return node
    if isinstance(node, Term):
        return node
    return map_children(node, lambda child: _rename_index(child, old, new))


def _substitute(node: Node, var: str, term: Term, term_names: Set[str], used: Set[str]) -> Node:
    if isinstance(node, NumVar):
        return term if node.name == var else node
    if isinstance(node, Term):
        core, depth = node, 0
        while isinstance(core, Succ):
            core, depth = core.arg, depth + 1
        if not any(isinstance(sub, NumVar) and sub.name == var for sub in walk(core)):
            return node
        if depth == 0:
            return map_children(node, lambda child: _substitute(child, var, term, term_names, used))
        core = _substitute(core, var, term, term_names, used)
        for _ in range(depth):
            core = Succ(core)
        return core

    if isinstance(node, (NUMBER_QUANTIFIERS, BOUNDED_QUANTIFIERS, INDEX_QUANTIFIERS)):
        bound = None
        if isinstance(node, BOUNDED_QUANTIFIERS):
            bound = _substitute(node.bound, var, term, term_names, used)
        sort = INDEX if isinstance(node, INDEX_QUANTIFIERS) else NUMBER
        body, binder = node.body, node.var
        if sort == NUMBER and binder == var:
            return node if bound is None else replace(node, bound=bound)
        if binder in term_names and (var, NUMBER) in free_variables(body):
            renamed = fresh_name(used)
            used.add(renamed)
            logger.debug(f"Renaming bound {binder} to {renamed} to avoid capture")
            if sort == NUMBER:
                body = _substitute(body, binder, NumVar(renamed), {renamed}, used)
            else:
                body = _rename_index(body, binder, renamed)
            binder = renamed
        body = _substitute(body, var, term, term_names, used)
        if bound is None:
            return type(node)(binder, body)
        return type(node)(binder, bound, body)

    return map_children(node, lambda child: _substitute(child, var, term, term_names, used))


def substitute(node: Node, var: str, term: Term) -> Node:
    """
    Capture-avoiding replacement of the free number variable ``var`` by ``term``.

    Bound variables that would capture a variable of ``term`` are renamed to the
    least identifier unused in the formula, the term and ``var``.

    Raises:
        SortError: when ``term`` is not a term or ``var`` is an index variable of ``node``.
    """
    _check_identifier(var)
    if not isinstance(term, Term):
        raise SortError(f"cannot substitute a non-term for {var}: {term!r}")
    free = free_variables(node)
    if (var, INDEX) in free:
        raise SortError(f"{var} is an index variable; only number terms can be substituted")
    if (var, NUMBER) not in free:
        return node
    term_names = {name for name, _ in free_variables(term)}
    used = all_names(node) | all_names(term) | {var}
    return _substitute(node, var, term, term_names, used)


def instantiate(formula: Formula, term: Term) -> Formula:
    """Substitute ``term`` for the single free number variable of ``formula``."""
    return substitute(formula, unary_variable(formula), term)


# ============================================================================
# CLOSURE, NUMERALS, BIG CONNECTIVES
# ============================================================================


def universal_closure(formula: Formula) -> Formula:
    """Universally bind every free variable; number variables outermost, in identifier order."""
    free = free_variables(formula)
    numbers = sorted((name for name, sort in free if sort == NUMBER), key=identifier_sort_key)
    indices = sorted((name for name, sort in free if sort == INDEX), key=identifier_sort_key)
    result = formula
    for name in reversed(indices):
        result = ForallIdx(name, result)
    for name in reversed(numbers):
        result = ForallNum(name, result)
    return result


def numeral(n: int) -> Term:
    """The term S(S(...S(0))) with ``n`` successors."""
    if n < 0:
        raise ValueError(f"numerals denote naturals, got {n}")
    term: Term = Zero()
    for _ in range(n):
        term = Succ(term)
    return term


def big_or(formulas: Sequence[Formula]) -> Formula:
    """Left-grouped disjunction ((f0 v f1) v f2) v ... of a nonempty list."""
    if not formulas:
        raise EmptyListError("big disjunction of an empty list is undefined")
    return functools.reduce(Or, formulas)


def big_and(formulas: Sequence[Formula]) -> Formula:
    """The abbreviation not(big_or of the negations)."""
    if not formulas:
        raise EmptyListError("big conjunction of an empty list is undefined")
    return Not(big_or([Not(formula) for formula in formulas]))


# ============================================================================
# DESUGARING
# ============================================================================


def expand_bounded(node: Formula) -> Formula:
    """
    One bounded quantifier as an unbounded one with an explicit guard:
    ``exists x <= t f`` becomes ``exists x (not (t < x) and f)``, dually for forall.
    The bound variable is renamed first when it occurs in ``t``.
    """
    var, body = node.var, node.body
    if (var, NUMBER) in free_variables(node.bound):
        var = fresh_name(all_names(node))
        body = substitute(body, node.var, NumVar(var))
    guard = Not(Lt(node.bound, NumVar(var)))
    if isinstance(node, BoundedExists):
        return ExistsNum(var, And(guard, body))
    return ForallNum(var, Imp(guard, body))


def desugar(node: Node) -> Node:
    """Rewrite into the primitive connectives not, or, exists (both sorts)."""
    if isinstance(node, Term):
        return node
    if isinstance(node, And):
        return Not(Or(Not(desugar(node.left)), Not(desugar(node.right))))
    if isinstance(node, Imp):
        return Or(Not(desugar(node.left)), desugar(node.right))
    if isinstance(node, Iff):
        left, right = desugar(node.left), desugar(node.right)
        return Not(Or(Not(Or(Not(left), right)), Not(Or(Not(right), left))))
    if isinstance(node, ForallNum):
        return Not(ExistsNum(node.var, Not(desugar(node.body))))
    if isinstance(node, ForallIdx):
        return Not(ExistsIdx(node.var, Not(desugar(node.body))))
    if isinstance(node, BOUNDED_QUANTIFIERS):
        return desugar(expand_bounded(node))
    return map_children(node, desugar)


# ============================================================================
# RELATIVIZATION
# ============================================================================


def _rename_bound(node: Node, name: str, used: Set[str]) -> Node:
    """Rename every binder (of either sort) called ``name``."""
    if isinstance(node, Term):
        return node
    if isinstance(node, (NUMBER_QUANTIFIERS, INDEX_QUANTIFIERS, BOUNDED_QUANTIFIERS)) and node.var == name:
        renamed = fresh_name(used)
        used.add(renamed)
        if isinstance(node, INDEX_QUANTIFIERS):
            body = _rename_index(node.body, name, renamed)
        else:
            body = _substitute(node.body, name, NumVar(renamed), {renamed}, used)
        node = replace(node, var=renamed, body=body)
    return map_children(node, lambda child: _rename_bound(child, name, used))


def _relativize(node: Node, alpha: str) -> Node:
    if isinstance(node, Term):
        return node
    if isinstance(node, ExistsIdx):
        return ExistsIdx(node.var, And(Prec(node.var, alpha), _relativize(node.body, alpha)))
    if isinstance(node, ForallIdx):
        return ForallIdx(node.var, Imp(Prec(node.var, alpha), _relativize(node.body, alpha)))
    return map_children(node, lambda child: _relativize(child, alpha))


def relativize(formula: Formula, alpha: str) -> Formula:
    """
    Restrict every index quantifier to the indices below ``alpha``.

    Index quantifiers become guarded (``exists b (b < alpha and ...)``,
    ``forall b (b < alpha -> ...)``); number quantifiers are untouched. Binders named
    ``alpha`` are renamed first so the guard's ``alpha`` stays free.

    Raises:
        SortError: ``alpha`` is not an identifier or is a free number variable of the formula.
    """
    _check_identifier(alpha)
    if (alpha, NUMBER) in free_variables(formula):
        raise SortError(f"{alpha} is a number variable of the formula, not an index variable")
    if not any(isinstance(sub, INDEX_QUANTIFIERS) for sub in walk(formula)):
        return formula
    used = all_names(formula) | {alpha}
    renamed = _rename_bound(formula, alpha, used)
    return _relativize(renamed, alpha)
