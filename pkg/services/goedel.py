"""
Goedel numbering of terms and formulas.

Every node is coded as ``pair(tag, payload) + 1`` with the Cantor pairing
``pair(a, b) = (a + b)(a + b + 1) / 2 + b``; 0 is therefore never a code. Tags follow
the constructor order of ``services.syntax`` (terms first). The payload packs the
node's fields by right-nested pairing of fixed arity: no field gives 0, one field
gives its value, two give ``pair(f1, f2)``, three give ``pair(f1, pair(f2, f3))``.
Sub-nodes contribute their own code, variables their identifier index, and a
``Quote`` the code of its formula.

Codes grow doubly exponentially with nesting depth; small numerals keep them usable.
"""

import functools
import logging
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple, Union

from services.syntax import (
    FORMULA_TYPES,
    TERM_TYPES,
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
    FALSUM,
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
    free_variables,
    has_index_syntax,
    identifier_at,
    identifier_index,
    is_arithmetical,
    substitute,
    unary_variable,
)
from utils.errors import ArityError, EmptyListError, MissingBindingError, NotACodeError, OpenTermError

logger = logging.getLogger(__name__)

GoedelNumber = int

CONSTRUCTORS: Tuple[type, ...] = TERM_TYPES + FORMULA_TYPES
TAGS: Dict[type, int] = {cls: tag for tag, cls in enumerate(CONSTRUCTORS)}

TERM, FORMULA, NAME = "term", "formula", "name"

# Field kinds in dataclass field order; decoding checks each child against them.
FIELD_KINDS: Dict[type, Tuple[str, ...]] = {
    NumVar: (NAME,),
    Zero: (),
    Succ: (TERM,),
    Add: (TERM, TERM),
    Mul: (TERM, TERM),
    Quote: (FORMULA,),
    Eq: (TERM, TERM),
    Lt: (TERM, TERM),
    Tru: (TERM,),
    ITru: (NAME, TERM),
    Prec: (NAME, NAME),
    Ack: (TERM, TERM),
    Diag: (TERM, TERM),
    ExpRel: (TERM, TERM),
    Not: (FORMULA,),
    Or: (FORMULA, FORMULA),
    ExistsNum: (NAME, FORMULA),
    ExistsIdx: (NAME, FORMULA),
    And: (FORMULA, FORMULA),
    Imp: (FORMULA, FORMULA),
    Iff: (FORMULA, FORMULA),
    ForallNum: (NAME, FORMULA),
    ForallIdx: (NAME, FORMULA),
    BoundedExists: (NAME, TERM, FORMULA),
    BoundedForall: (NAME, TERM, FORMULA),
    IEq: (NAME, NAME),
    SentA: (TERM,),
    SubT: (TERM, TERM),
}

_SUCC_TAG = TAGS[Succ]


# ============================================================================
# CANTOR PAIRING
# ============================================================================


def pair(a: int, b: int) -> int:
    """Cantor pairing; a bijection from pairs of naturals onto the naturals."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(z: int) -> Tuple[int, int]:
    """Inverse of ``pair``."""
    if z < 0:
        raise NotACodeError(f"cannot unpair a negative number: {z}")
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def _pack(values: Sequence[int]) -> int:
    if not values:
        return 0
    packed = values[-1]
    for value in reversed(values[:-1]):
        packed = pair(value, packed)
    return packed


def _unpack(payload: int, arity: int) -> List[int]:
    if arity == 0:
        if payload != 0:
            raise NotACodeError(f"nullary constructor with nonzero payload {payload}")
        return []
    values = []
    for _ in range(arity - 1):
        head, payload = unpair(payload)
        values.append(head)
    values.append(payload)
    return values


def tuple_code(values: Sequence[int]) -> int:
    """
    Canonical code of a nonempty tuple by left-nested pairing, without offset.

    ``tuple_code([x0]) = x0`` and ``tuple_code([x0, .., xk]) = pair(tuple_code([x0, .., xk-1]), xk)``.
    """
    if not values:
        raise EmptyListError("tuple code of an empty sequence is undefined")
    return functools.reduce(pair, values)


def pairing_formula(a: Term, b: Term, p: Term) -> Formula:
    """Object formula stating ``p = pair(a, b)``, written ``p + p = (a+b)*S(a+b) + (b+b)``."""
    total = Add(a, b)
    return Eq(Add(p, p), Add(Mul(total, Succ(total)), Add(b, b)))


# ============================================================================
# ENCODING AND DECODING
# ============================================================================


def _field_code(value: Union[Node, str]) -> int:
    if isinstance(value, str):
        return identifier_index(value)
    return _encode(value)


def _encode(node: Node) -> int:
    successors = 0
    while isinstance(node, Succ):
        successors += 1
        node = node.arg

    cls = type(node)
    if cls is Quote:
        code = pair(TAGS[Quote], encode(node.formula)) + 1
    else:
        values = [_field_code(getattr(node, name)) for name in node.__dataclass_fields__]
        code = pair(TAGS[cls], _pack(values)) + 1

    for _ in range(successors):
        code = pair(_SUCC_TAG, code) + 1
    return code


@functools.lru_cache(maxsize=4096)
def encode(node: Node) -> GoedelNumber:
    """
    Goedel number of a term or formula.

    Examples:
        >>> encode(Zero())
        2
        >>> encode(Eq(Zero(), Zero()))
        184
    """
    if not isinstance(node, (Term, Formula)):
        raise TypeError(f"can only encode terms and formulas, got {type(node).__name__}")
    return _encode(node)


def _split(code: int) -> Tuple[type, int]:
    if code < 1:
        raise NotACodeError(f"{code} is not a code")
    tag, payload = unpair(code - 1)
    if tag >= len(CONSTRUCTORS):
        raise NotACodeError(f"{code} has unknown tag {tag}")
    return CONSTRUCTORS[tag], payload


def _decode_kind(code: int, kind: str) -> Union[Node, str]:
    if kind == NAME:
        return identifier_at(code)
    node = _decode(code)
    expected = Term if kind == TERM else Formula
    if not isinstance(node, expected):
        raise NotACodeError(f"{code} codes a {type(node).__name__} where a {kind} is required")
    return node


def _decode(code: int) -> Node:
    successors = 0
    cls, payload = _split(code)
    while cls is Succ:
        successors += 1
        code = payload
        cls, payload = _split(code)

    kinds = FIELD_KINDS[cls]
    values = _unpack(payload, len(kinds))
    node: Node = cls(*(_decode_kind(value, kind) for value, kind in zip(values, kinds)))

    if successors:
        if not isinstance(node, Term):
            raise NotACodeError(f"successor applied to a formula in code {code}")
        for _ in range(successors):
            node = Succ(node)
    return node


@functools.lru_cache(maxsize=4096)
def decode(code: GoedelNumber) -> Node:
    """
    Inverse of ``encode``.

    Raises:
        NotACodeError: ``code`` is 0, negative, or packs fields of the wrong kind.
    """
    return _decode(code)


def try_decode(code: GoedelNumber) -> Optional[Node]:
    try:
        return decode(code)
    except NotACodeError:
        return None


# ============================================================================
# RECOGNIZERS
# ============================================================================


def is_sentence_a(code: GoedelNumber) -> bool:
    """True iff ``code`` codes a closed, purely arithmetical formula."""
    node = try_decode(code)
    return isinstance(node, Formula) and is_arithmetical(node) and not free_variables(node)


def is_form_an(code: GoedelNumber, n: int) -> bool:
    """True iff ``code`` codes a purely arithmetical formula with exactly ``n`` free number variables."""
    node = try_decode(code)
    if not isinstance(node, Formula) or not is_arithmetical(node):
        return False
    return len(free_variables(node)) == n


def is_sentence_at(code: GoedelNumber) -> bool:
    """True iff ``code`` codes a closed formula of arithmetic plus T (no index syntax)."""
    node = try_decode(code)
    return isinstance(node, Formula) and not has_index_syntax(node) and not free_variables(node)


def ack_bit(x: int, y: int) -> bool:
    """Ackermann membership: bit ``x`` of the binary expansion of ``y`` is 1."""
    return (y >> x) & 1 == 1


def sentence_sequence(u: int) -> List[Formula]:
    """The sentences coded by 0..u-1, with ``0 = 1`` standing in for every non-sentence."""
    return [decode(i) if is_sentence_a(i) else FALSUM for i in range(u)]


# ============================================================================
# TERM EVALUATION AND DIAGONALIZATION
# ============================================================================


def eval_term(term: Term, env: Optional[Dict[str, int]] = None) -> int:
    """
    Standard-model value of ``term``.

    Without ``env`` the term must be closed; with it, every variable must be bound.
    """
    successors = 0
    while isinstance(term, Succ):
        successors += 1
        term = term.arg

    if isinstance(term, Zero):
        value = 0
    elif isinstance(term, NumVar):
        if env is None:
            raise OpenTermError(f"term contains the variable {term.name}")
        if term.name not in env:
            raise MissingBindingError(f"no value bound for {term.name}")
        value = env[term.name]
    elif isinstance(term, Add):
        value = eval_term(term.left, env) + eval_term(term.right, env)
    elif isinstance(term, Mul):
        value = eval_term(term.left, env) * eval_term(term.right, env)
    elif isinstance(term, Quote):
        value = encode(term.formula)
    else:
        raise TypeError(f"not a term: {term!r}")
    return value + successors


def eval_closed_term(term: Term) -> int:
    """
    Value of a closed term.

    Raises:
        OpenTermError: the term contains a variable.
    """
    return eval_term(term)


def diagonal_formula(formula: Formula) -> Formula:
    """``formula`` applied to the quotation of itself."""
    variable = unary_variable(formula)
    return substitute(formula, variable, Quote(formula))


def diagonal_code(code: GoedelNumber) -> GoedelNumber:
    """
    Code of phi(<phi>) for the unary formula phi coded by ``code``.

    The free variable is replaced by the quotation term ``Quote(phi)``, which
    denotes the same number as the numeral of ``code``; the numeral itself
    would need ``code`` successor nodes and is never built.

    Raises:
        NotACodeError: ``code`` does not code a formula.
        ArityError: the formula does not have exactly one free number variable.
    """
    formula = decode(code)
    if not isinstance(formula, Formula):
        raise NotACodeError(f"{code} codes a term, not a formula")
    return encode(diagonal_formula(formula))


@functools.lru_cache(maxsize=1024)
def try_diagonal_code(code: GoedelNumber) -> Optional[GoedelNumber]:
    try:
        return diagonal_code(code)
    except (NotACodeError, ArityError):
        return None
