"""
The interpretations iota_n of iterated truth into arithmetic plus T.

Stage n interprets indices as the numbers below n that fail psi, the index order as
<, and T_a(x) by a truth formula IT(y, x) assembled from the translations of the
pool sentences at every earlier stage. Translations are embedded literally, so sizes
grow quickly with n; ``size_profile`` measures both the literal tree size and the
size of the shared DAG.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import pandas as pd

from services.axioms import biconditional
from services.syntax import (
    VERUM,
    And,
    Eq,
    ExistsIdx,
    ExistsNum,
    ForallIdx,
    ForallNum,
    Formula,
    IEq,
    Imp,
    ITru,
    Lt,
    Node,
    Not,
    NumVar,
    Prec,
    Quote,
    Term,
    all_names,
    big_and,
    check_sorts,
    children,
    fresh_name,
    free_number_variables,
    free_variables,
    has_index_syntax,
    is_arithmetical,
    is_closed,
    map_children,
    numeral,
    substitute,
)
from utils.config import DEFAULT_NODE_BUDGET
from utils.errors import ArityError, BudgetExceededError, IndexSyntaxError, OpenFormulaError, TranslationError

logger = logging.getLogger(__name__)

DOMAIN_VARIABLE = "x"
INDEX_VARIABLE = "y"
LITERAL, SHARED = "literal", "shared"
SIZE_MODES = (LITERAL, SHARED)


# ============================================================================
# INTERPRETATIONS
# ============================================================================


@dataclass(frozen=True)
class Interpretation:
    """
    Stage ``n`` of the interpretation family.

    ``domain_formula`` is free in x, ``truth_formula`` in y (the index) and x (the code).
    """

    n: int
    psi: Formula
    pool: Tuple[Formula, ...]
    domain_formula: Formula
    truth_formula: Formula
    _truth_names: Set[str] = field(default_factory=set, init=False, repr=False, compare=False)

    def truth_names(self) -> Set[str]:
        if not self._truth_names:
            self._truth_names.update(all_names(self.truth_formula) | {DOMAIN_VARIABLE, INDEX_VARIABLE})
        return self._truth_names

    def domain_at(self, term: Term) -> Formula:
        """D(term)."""
        return substitute(self.domain_formula, DOMAIN_VARIABLE, term)

    def truth_at(self, index: str, term: Term) -> Formula:
        """IT(index, term), substituting both variables simultaneously."""
        used = self.truth_names() | all_names(term) | {index}
        y_tmp = fresh_name(used)
        used.add(y_tmp)
        x_tmp = fresh_name(used)
        renamed = substitute(self.truth_formula, INDEX_VARIABLE, NumVar(y_tmp))
        renamed = substitute(renamed, DOMAIN_VARIABLE, NumVar(x_tmp))
        return substitute(substitute(renamed, y_tmp, NumVar(index)), x_tmp, term)


def apply_psi(psi: Formula, term: Term) -> Formula:
    """psi(term); a closed psi is returned unchanged."""
    variables = free_number_variables(psi)
    if not variables:
        return psi
    return substitute(psi, variables[0], term)


def _check_psi(psi: Formula) -> None:
    check_sorts(psi)
    if not is_arithmetical(psi):
        raise IndexSyntaxError("psi must be purely arithmetical")
    if len(free_variables(psi)) > 1:
        raise ArityError(f"psi must have at most one free variable, found {sorted(free_variables(psi))}")


def _check_pool(pool: Sequence[Formula]) -> None:
    for i, formula in enumerate(pool):
        check_sorts(formula)
        if not is_closed(formula):
            raise OpenFormulaError(f"pool sentence {i} has free variables")


def domain_formula(psi: Formula, n: int) -> Formula:
    """D(x) := x < n & not psi(x)."""
    x = NumVar(DOMAIN_VARIABLE)
    return And(Lt(x, numeral(n)), Not(apply_psi(psi, x)))


def truth_formula(psi: Formula, pool: Sequence[Formula], translations: Sequence[Sequence[Formula]]) -> Formula:
    """
    IT(y, x) := big_and over i of (x = <phi_i> -> big_and over m of
    ((y = m & not psi(m)) -> iota_m(phi_i))).

    ``translations[m][i]`` is the translation of pool sentence i at stage m; empty
    conjunctions are replaced by the true sentence.
    """
    x, y = NumVar(DOMAIN_VARIABLE), NumVar(INDEX_VARIABLE)
    blocks = []
    for i, sentence in enumerate(pool):
        inner = [
            Imp(And(Eq(y, numeral(m)), Not(apply_psi(psi, numeral(m)))), stage[i])
            for m, stage in enumerate(translations)
        ]
        blocks.append(Imp(Eq(x, Quote(sentence)), big_and(inner) if inner else VERUM))
    return big_and(blocks) if blocks else VERUM


@functools.lru_cache(maxsize=64)
def _build_stages(psi: Formula, pool: Tuple[Formula, ...], n: int) -> Tuple[Interpretation, ...]:
    stages: List[Interpretation] = []
    translations: List[List[Formula]] = []
    for m in range(n + 1):
        stage = Interpretation(
            n=m,
            psi=psi,
            pool=pool,
            domain_formula=domain_formula(psi, m),
            truth_formula=truth_formula(psi, pool, translations),
        )
        stages.append(stage)
        if m < n:
            translations.append([translate(stage, sentence) for sentence in pool])
    return tuple(stages)


def build_iota(psi: Formula, pool: Sequence[Formula], n: int) -> Interpretation:
    """
    Stage ``n`` of the interpretation family, built by recursion on the stage.

    Raises:
        ArityError: psi has more than one free variable.
        OpenFormulaError: a pool member is not a sentence.
    """
    if n < 0:
        raise ValueError(f"stage must be non-negative, got {n}")
    _check_psi(psi)
    _check_pool(pool)
    stages = _build_stages(psi, tuple(pool), n)
    logger.debug(f"Built interpretation stage {n} over a pool of {len(pool)}")
    return stages[-1]


# ============================================================================
# TRANSLATION
# ============================================================================


def _translate(node: Node, iota: Interpretation, mapping: Dict[str, str], used: Set[str]) -> Node:
    if isinstance(node, Term):
        return node
    if isinstance(node, (Prec, IEq)):
        for name in (node.left, node.right):
            if name not in mapping:
                raise TranslationError(f"free index variable {name} has no number variable assigned")
        cls = Lt if isinstance(node, Prec) else Eq
        return cls(NumVar(mapping[node.left]), NumVar(mapping[node.right]))
    if isinstance(node, ITru):
        if node.index not in mapping:
            raise TranslationError(f"free index variable {node.index} has no number variable assigned")
        return iota.truth_at(mapping[node.index], node.arg)
    if isinstance(node, (ExistsIdx, ForallIdx)):
        y = fresh_name(used)
        used.add(y)
        body = _translate(node.body, iota, {**mapping, node.var: y}, used)
        guard = iota.domain_at(NumVar(y))
        if isinstance(node, ExistsIdx):
            return ExistsNum(y, And(guard, body))
        return ForallNum(y, Imp(guard, body))
    return map_children(node, lambda child: _translate(child, iota, mapping, used))


def translate(iota: Interpretation, formula: Formula, mapping: Optional[Dict[str, str]] = None) -> Formula:
    """
    Translate a formula with index syntax into arithmetic plus T through ``iota``.

    Arithmetic and T atoms are kept; a < b becomes y_a < y_b, a = b becomes
    y_a = y_b, T_a(t) becomes IT(y_a, t), and index quantifiers become number
    quantifiers guarded by the domain formula. ``mapping`` assigns number variables
    to free index variables.

    Raises:
        TranslationError: a free index variable is not covered by ``mapping``.
    """
    mapping = dict(mapping or {})
    if not has_index_syntax(formula):
        return formula
    used = all_names(formula) | all_names(iota.domain_formula) | iota.truth_names() | set(mapping.values())
    return _translate(formula, iota, mapping, used)


# ============================================================================
# SIZE PROFILING
# ============================================================================


def node_count(node: Node) -> int:
    """Literal tree size; shared sub-objects are counted once per occurrence."""
    memo: Dict[int, int] = {}
    keep = []

    def count(current: Node) -> int:
        key = id(current)
        if key not in memo:
            keep.append(current)
            memo[key] = 1 + sum(count(child) for child in children(current))
        return memo[key]

    return count(node)


class _Interner:
    """Assigns one number per distinct subtree; the table size is the DAG size."""

    def __init__(self):
        self.table: Dict[tuple, int] = {}
        self._by_id: Dict[int, int] = {}
        self._keep: List[Node] = []

    def intern(self, node: Node) -> int:
        key = id(node)
        if key in self._by_id:
            return self._by_id[key]
        child_ids = tuple(self.intern(child) for child in children(node))
        leaves = tuple(
            value
            for name, value in vars(node).items()
            if not isinstance(value, (Term, Formula)) or isinstance(node, Quote)
        )
        identity = (type(node), child_ids, leaves)
        number = self.table.setdefault(identity, len(self.table))
        self._by_id[key] = number
        self._keep.append(node)
        return number


@dataclass(frozen=True)
class SizeRow:
    n: int
    literal: int
    shared: int


@dataclass(frozen=True)
class SizeReport:
    psi: Formula
    pool: Tuple[Formula, ...]
    mode: str
    rows: Tuple[SizeRow, ...]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{"n": row.n, "literal": row.literal, "shared": row.shared} for row in self.rows], columns=["n", "literal", "shared"])

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False)


def size_profile(
    psi: Formula,
    pool: Sequence[Formula],
    n_max: int,
    mode: str = LITERAL,
    budget: int = DEFAULT_NODE_BUDGET,
) -> SizeReport:
    """
    Node counts of the translated biconditionals of the pool for n = 0..n_max.

    ``literal`` is the tree size, ``shared`` the number of distinct subtrees. The
    count selected by ``mode`` is checked against ``budget``.

    Raises:
        BudgetExceededError: a row goes past the budget.
    """
    if mode not in SIZE_MODES:
        raise ValueError(f"mode must be one of {SIZE_MODES}, got {mode!r}")
    biconditionals = [biconditional(sentence) for sentence in pool]

    rows = []
    for n in range(n_max + 1):
        iota = build_iota(psi, pool, n)
        translated = [translate(iota, formula) for formula in biconditionals]
        literal = sum(node_count(formula) for formula in translated)
        interner = _Interner()
        for formula in translated:
            interner.intern(formula)
        shared = len(interner.table)
        rows.append(SizeRow(n, literal, shared))
        logger.debug(f"Stage {n}: literal={literal} shared={shared}")

        measured = literal if mode == LITERAL else shared
        if measured > budget:
            raise BudgetExceededError(f"stage {n} has {measured} {mode} nodes, over the budget of {budget}")

    return SizeReport(psi=psi, pool=tuple(pool), mode=mode, rows=tuple(rows))
