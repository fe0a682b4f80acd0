"""
Three-valued standard-model evaluation and the desk-scale check suites.

``Evaluator`` decides closed formulas of arithmetic plus T with a fuel bound: each
unfolding of T costs one unit, and an unbounded existential with no usable bound is
searched below the remaining fuel. Bounded searches, pinned witnesses and T on a
non-sentence are exact; everything else that stays open is ``UNKNOWN``. Raising the
fuel can only turn ``UNKNOWN`` into a decided value.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from services.axioms import (
    biconditional,
    cc_instance,
    code_instance,
    dc_instance,
    descending_axiom,
    ind_sentence,
    nonempty_axiom,
    quoted_truth,
    require_arithmetical_sentence,
    require_unary,
    theta_disjunction,
)
from services.goedel import ack_bit, eval_term, is_sentence_a, try_decode, try_diagonal_code
from services.interp import build_iota, node_count, translate
from services.sexpr import render
from services.syntax import (
    INDEX_NODES,
    Ack,
    And,
    BoundedExists,
    BoundedForall,
    Diag,
    Eq,
    ExistsNum,
    ExpRel,
    ForallNum,
    Formula,
    Iff,
    Imp,
    Lt,
    Not,
    NumVar,
    Or,
    Quote,
    SentA,
    SubT,
    Term,
    Tru,
    free_number_variables,
    free_variables,
    has_index_syntax,
    is_closed,
    numeral,
    substitute,
    unary_variable,
)
from utils.config import DEFAULT_FUEL, DEFAULT_MAX_POOL, DEFAULT_NODE_BUDGET
from utils.errors import (
    IndexSyntaxError,
    OpenFormulaError,
    PoolTooLargeError,
    UnboundedQuantifierError,
    WorkbenchError,
)

logger = logging.getLogger(__name__)

# Exponents above this are too large to pin a witness 2^x by computation.
EXP_PIN_LIMIT = 4096
DIGEST_THRESHOLD = 200
DERIVED_EXPECTATION = "derived-expectation"


# ============================================================================
# THREE-VALUED TRUTH
# ============================================================================


class TriBool(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "TriBool":
        return cls.TRUE if value else cls.FALSE

    @property
    def decided(self) -> bool:
        return self is not TriBool.UNKNOWN

    def __invert__(self) -> "TriBool":
        if self is TriBool.TRUE:
            return TriBool.FALSE
        if self is TriBool.FALSE:
            return TriBool.TRUE
        return TriBool.UNKNOWN

    def __or__(self, other: "TriBool") -> "TriBool":
        if TriBool.TRUE in (self, other):
            return TriBool.TRUE
        if self is TriBool.FALSE and other is TriBool.FALSE:
            return TriBool.FALSE
        return TriBool.UNKNOWN

    def __and__(self, other: "TriBool") -> "TriBool":
        return ~(~self | ~other)

    def implies(self, other: "TriBool") -> "TriBool":
        return ~self | other

    def iff(self, other: "TriBool") -> "TriBool":
        return self.implies(other) & other.implies(self)

    def __str__(self) -> str:
        return self.value


T, F, U = TriBool.TRUE, TriBool.FALSE, TriBool.UNKNOWN

Env = Dict[str, int]


def conjuncts(formula: Formula) -> List[Formula]:
    """Top-level conjuncts, looking through and, not-or, not-not and not-imp."""
    result = []
    stack = [formula]
    while stack:
        current = stack.pop()
        if isinstance(current, And):
            stack.extend([current.right, current.left])
        elif isinstance(current, Not) and isinstance(current.body, Or):
            stack.extend([Not(current.body.right), Not(current.body.left)])
        elif isinstance(current, Not) and isinstance(current.body, Not):
            stack.append(current.body.body)
        elif isinstance(current, Not) and isinstance(current.body, Imp):
            stack.extend([Not(current.body.right), current.body.left])
        else:
            result.append(current)
    return result


def _is_var(term: Term, name: str) -> bool:
    return isinstance(term, NumVar) and term.name == name


def _mentions(term: Term, name: str) -> bool:
    return any(var == name for var, _ in free_variables(term))


def exp_holds(x: int, y: int) -> bool:
    """y = 2^x, without computing 2^x."""
    return y > 0 and y & (y - 1) == 0 and y.bit_length() - 1 == x


# ============================================================================
# EVALUATOR
# ============================================================================


class Evaluator:
    """
    Fuel-bounded evaluator for closed formulas of arithmetic plus T.

    In strict mode (Delta_0 evaluation) unbounded quantifiers and truth atoms raise
    instead of degrading to ``UNKNOWN``.
    """

    def __init__(self, fuel: int = DEFAULT_FUEL, strict: bool = False):
        self.fuel = fuel
        self.strict = strict
        self._active: set = set()

    def sentence(self, formula: Formula) -> TriBool:
        return self.evaluate(formula, {}, self.fuel)

    def evaluate(self, formula: Formula, env: Env, fuel: int) -> TriBool:
        handler = self._HANDLERS.get(type(formula))
        if handler is None:
            if isinstance(formula, INDEX_NODES):
                raise IndexSyntaxError(f"index syntax cannot be evaluated directly: {type(formula).__name__}")
            raise TypeError(f"not a formula: {formula!r}")
        return handler(self, formula, env, fuel)

    # Atoms
    # -------------------------------------------------------------------------

    def _value(self, term: Term, env: Env) -> int:
        return eval_term(term, env)

    def _eq(self, formula: Eq, env: Env, fuel: int) -> TriBool:
        return TriBool.of(self._value(formula.left, env) == self._value(formula.right, env))

    def _lt(self, formula: Lt, env: Env, fuel: int) -> TriBool:
        return TriBool.of(self._value(formula.left, env) < self._value(formula.right, env))

    def _ack(self, formula: Ack, env: Env, fuel: int) -> TriBool:
        return TriBool.of(ack_bit(self._value(formula.left, env), self._value(formula.right, env)))

    def _diag(self, formula: Diag, env: Env, fuel: int) -> TriBool:
        image = try_diagonal_code(self._value(formula.left, env))
        return TriBool.of(image is not None and image == self._value(formula.right, env))

    def _exp(self, formula: ExpRel, env: Env, fuel: int) -> TriBool:
        return TriBool.of(exp_holds(self._value(formula.left, env), self._value(formula.right, env)))

    def _sent(self, formula: SentA, env: Env, fuel: int) -> TriBool:
        return TriBool.of(is_sentence_a(self._value(formula.arg, env)))

    # Truth
    # -------------------------------------------------------------------------

    def _truth_of(self, sentence: Formula, fuel: int) -> TriBool:
        if self.strict:
            raise WorkbenchError("truth atoms are not Delta_0")
        if fuel <= 0 or sentence in self._active:
            return U
        self._active.add(sentence)
        try:
            return self.evaluate(sentence, {}, fuel - 1)
        finally:
            self._active.discard(sentence)

    @staticmethod
    def _coded_sentence(term: Term, value: Callable[[], int]) -> Optional[Formula]:
        candidate = term.formula if isinstance(term, Quote) else try_decode(value())
        if not isinstance(candidate, Formula) or has_index_syntax(candidate) or not is_closed(candidate):
            return None
        return candidate

    def _tru(self, formula: Tru, env: Env, fuel: int) -> TriBool:
        """
        T of any closed code of arithmetic plus T, so truth is type-free and
        ``tarski_0`` (only arithmetical sentences are true) fails in this model.
        False on codes of terms, open formulas and index syntax.
        """
        if self.strict:
            raise WorkbenchError("truth atoms are not Delta_0")
        sentence = self._coded_sentence(formula.arg, lambda: self._value(formula.arg, env))
        if sentence is None:
            return F
        return self._truth_of(sentence, fuel)

    def _subt(self, formula: SubT, env: Env, fuel: int) -> TriBool:
        if self.strict:
            raise WorkbenchError("truth atoms are not Delta_0")
        term = formula.left
        coded = term.formula if isinstance(term, Quote) else try_decode(self._value(term, env))
        if not isinstance(coded, Formula) or has_index_syntax(coded):
            return F
        variables = free_number_variables(coded)
        if len(variables) != 1 or len(free_variables(coded)) != 1:
            return F
        instance = substitute(coded, variables[0], numeral(self._value(formula.right, env)))
        return self._truth_of(instance, fuel)

    # Connectives
    # -------------------------------------------------------------------------

    def _not(self, formula: Not, env: Env, fuel: int) -> TriBool:
        return ~self.evaluate(formula.body, env, fuel)

    def _or(self, formula: Or, env: Env, fuel: int) -> TriBool:
        left = self.evaluate(formula.left, env, fuel)
        if left is T:
            return T
        return left | self.evaluate(formula.right, env, fuel)

    def _and(self, formula: And, env: Env, fuel: int) -> TriBool:
        left = self.evaluate(formula.left, env, fuel)
        if left is F:
            return F
        return left & self.evaluate(formula.right, env, fuel)

    def _imp(self, formula: Imp, env: Env, fuel: int) -> TriBool:
        left = self.evaluate(formula.left, env, fuel)
        if left is F:
            return T
        return left.implies(self.evaluate(formula.right, env, fuel))

    def _iff(self, formula: Iff, env: Env, fuel: int) -> TriBool:
        return self.evaluate(formula.left, env, fuel).iff(self.evaluate(formula.right, env, fuel))

    # Quantifiers
    # -------------------------------------------------------------------------

    def _search(self, var: str, body: Formula, env: Env, fuel: int, values: Iterable[int]) -> TriBool:
        result = F
        for k in values:
            result = result | self.evaluate(body, {**env, var: k}, fuel)
            if result is T:
                return T
        return result

    def _bounded_exists(self, formula: BoundedExists, env: Env, fuel: int) -> TriBool:
        bound = self._value(formula.bound, env)
        return self._search(formula.var, formula.body, env, fuel, range(bound + 1))

    def _bounded_forall(self, formula: BoundedForall, env: Env, fuel: int) -> TriBool:
        bound = self._value(formula.bound, env)
        return ~self._search(formula.var, Not(formula.body), env, fuel, range(bound + 1))

    def _pinned(self, var: str, parts: Sequence[Formula], env: Env) -> Optional[Tuple[bool, int]]:
        """A single candidate witness forced by a conjunct, as (exists, value)."""
        for part in parts:
            if isinstance(part, Eq):
                for this, other in ((part.left, part.right), (part.right, part.left)):
                    if _is_var(this, var) and not _mentions(other, var):
                        return True, self._value(other, env)
            elif isinstance(part, Diag) and _is_var(part.right, var) and not _mentions(part.left, var):
                image = try_diagonal_code(self._value(part.left, env))
                return (False, 0) if image is None else (True, image)
            elif isinstance(part, ExpRel) and _is_var(part.right, var) and not _mentions(part.left, var):
                exponent = self._value(part.left, env)
                if exponent <= EXP_PIN_LIMIT:
                    return True, 2**exponent
        return None

    def _upper_bound(self, var: str, parts: Sequence[Formula], env: Env) -> Optional[int]:
        """Exclusive bound on the witness implied by a conjunct var < t or not(t < var)."""
        bounds = []
        for part in parts:
            if isinstance(part, Lt) and _is_var(part.left, var) and not _mentions(part.right, var):
                bounds.append(self._value(part.right, env))
            elif (
                isinstance(part, Not)
                and isinstance(part.body, Lt)
                and _is_var(part.body.right, var)
                and not _mentions(part.body.left, var)
            ):
                bounds.append(self._value(part.body.left, env) + 1)
        return min(bounds) if bounds else None

    def _exists(self, var: str, body: Formula, env: Env, fuel: int) -> TriBool:
        parts = conjuncts(body)
        pinned = self._pinned(var, parts, env)
        if pinned is not None:
            found, value = pinned
            return self.evaluate(body, {**env, var: value}, fuel) if found else F

        bound = self._upper_bound(var, parts, env)
        if bound is not None:
            return self._search(var, body, env, fuel, range(bound))

        if self.strict:
            raise UnboundedQuantifierError(f"unbounded quantifier over {var}")
        result = self._search(var, body, env, fuel, range(fuel))
        return T if result is T else U

    def _exists_num(self, formula: ExistsNum, env: Env, fuel: int) -> TriBool:
        return self._exists(formula.var, formula.body, env, fuel)

    def _forall_num(self, formula: ForallNum, env: Env, fuel: int) -> TriBool:
        return ~self._exists(formula.var, Not(formula.body), env, fuel)

    _HANDLERS: Dict[type, Callable] = {
        Eq: _eq,
        Lt: _lt,
        Ack: _ack,
        Diag: _diag,
        ExpRel: _exp,
        SentA: _sent,
        Tru: _tru,
        SubT: _subt,
        Not: _not,
        Or: _or,
        And: _and,
        Imp: _imp,
        Iff: _iff,
        ExistsNum: _exists_num,
        ForallNum: _forall_num,
        BoundedExists: _bounded_exists,
        BoundedForall: _bounded_forall,
    }


def eval_sentence(sentence: Formula, fuel: int = DEFAULT_FUEL) -> TriBool:
    """
    Three-valued standard-model value of a closed formula without index syntax.

    Raises:
        OpenFormulaError: the formula has free variables.
        IndexSyntaxError: the formula has index syntax (translate it first).
    """
    if not is_closed(sentence):
        raise OpenFormulaError(f"cannot evaluate an open formula, free variables: {sorted(free_variables(sentence))}")
    if has_index_syntax(sentence):
        raise IndexSyntaxError("translate formulas with index syntax before evaluating them")
    return Evaluator(fuel).sentence(sentence)


def eval_delta0(formula: Formula, env: Optional[Env] = None) -> bool:
    """
    Exact truth value of a bounded formula under ``env``.

    Raises:
        UnboundedQuantifierError: the formula has an unbounded quantifier.
        MissingBindingError: ``env`` misses a free variable.
    """
    if has_index_syntax(formula):
        raise IndexSyntaxError("index syntax is not Delta_0")
    return Evaluator(fuel=0, strict=True).evaluate(formula, dict(env or {}), 0) is T


# ============================================================================
# CHECK REPORTS
# ============================================================================


def digest(text: str) -> str:
    """Short texts verbatim, longer ones as a sha1 digest."""
    if len(text) <= DIGEST_THRESHOLD:
        return text
    return "sha1:" + hashlib.sha1(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CheckInstance:
    input: str
    expected: TriBool
    got: TriBool

    @property
    def verdict(self) -> TriBool:
        if self.got is self.expected:
            return T
        if self.got.decided and self.expected.decided:
            return F
        return U

    def to_dict(self) -> dict:
        return {"input": self.input, "expected": str(self.expected), "got": str(self.got), "verdict": str(self.verdict)}


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a check suite; it passes unless an instance has a decided mismatch."""

    check: str
    fuel: int
    instances: Tuple[CheckInstance, ...] = ()
    flags: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(instance.verdict is not F for instance in self.instances)

    def counts(self) -> Dict[str, int]:
        counts = {str(value): 0 for value in TriBool}
        for instance in self.instances:
            counts[str(instance.verdict)] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "pass": self.passed,
            "fuel": self.fuel,
            "flags": list(self.flags),
            "instances": [instance.to_dict() for instance in self.instances],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "CheckReport":
        instances = tuple(
            CheckInstance(item["input"], TriBool(item["expected"]), TriBool(item["got"])) for item in data["instances"]
        )
        return cls(data["check"], int(data["fuel"]), instances, tuple(data.get("flags", ())))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([instance.to_dict() for instance in self.instances], columns=["input", "expected", "got", "verdict"])


def _log_report(report: CheckReport) -> CheckReport:
    counts = report.counts()
    logger.info(
        f"Check {report.check}: {'PASS' if report.passed else 'FAIL'} "
        f"({len(report.instances)} instances, {counts['false']} mismatches, {counts['unknown']} unknown)"
    )
    return report


def _check_pool_size(formulas: Sequence[Formula], max_pool: int) -> None:
    if len(formulas) > max_pool:
        raise PoolTooLargeError(f"pool of {len(formulas)} sentences exceeds the bound of {max_pool}")


# ============================================================================
# CHECK SUITES
# ============================================================================


def _sign_variants(formulas: Sequence[Formula]) -> Iterable[List[Formula]]:
    for mask in range(2 ** len(formulas)):
        yield [Not(f) if mask >> i & 1 else f for i, f in enumerate(formulas)]


def _check_correctness(name: str, build: Callable, formulas: Sequence[Formula], fuel: int, max_pool: int) -> CheckReport:
    _check_pool_size(formulas, max_pool)
    evaluator = Evaluator(fuel)
    instances = []
    for variant in _sign_variants(formulas):
        instance = build(variant)
        got = evaluator.sentence(instance.left)
        expected = evaluator.sentence(instance.right)
        instances.append(CheckInstance(digest(render(instance)), expected, got))
    return _log_report(CheckReport(name, fuel, tuple(instances)))


def check_dc(formulas: Sequence[Formula], fuel: int = DEFAULT_FUEL, max_pool: int = DEFAULT_MAX_POOL) -> CheckReport:
    """
    Both sides of the disjunctive correctness instance for the pool and for every
    pattern of negated members (2^s instances).
    """
    return _check_correctness("dc", dc_instance, formulas, fuel, max_pool)


def check_cc(formulas: Sequence[Formula], fuel: int = DEFAULT_FUEL, max_pool: int = DEFAULT_MAX_POOL) -> CheckReport:
    """Conjunctive dual of ``check_dc``."""
    return _check_correctness("cc", cc_instance, formulas, fuel, max_pool)


def check_claim_star(formulas: Sequence[Formula], fuel: int = DEFAULT_FUEL, max_pool: int = 32) -> CheckReport:
    """T(phi_i) against T(theta(i)) for every i < u, theta the indexed disjunction."""
    _check_pool_size(formulas, max_pool)
    theta = theta_disjunction(formulas)
    variable = unary_variable(theta)
    evaluator = Evaluator(fuel)
    instances = []
    for i, formula in enumerate(formulas):
        expected = evaluator.sentence(quoted_truth(formula))
        got = evaluator.sentence(quoted_truth(substitute(theta, variable, numeral(i))))
        instances.append(CheckInstance(f"i={i} {digest(render(formula))}", expected, got))
    return _log_report(CheckReport("star", fuel, tuple(instances)))


def check_triangle(
    psi: Formula,
    pool: Sequence[Formula],
    n: int,
    s: int,
    fuel: int = DEFAULT_FUEL,
    budget: int = DEFAULT_NODE_BUDGET,
) -> CheckReport:
    """
    Evaluate the stage-n translation of the biconditional for pool sentence s;
    expected true. Translations past the node budget are reported unknown.
    """
    if not 0 <= s < len(pool):
        raise WorkbenchError(f"sentence index {s} outside a pool of {len(pool)}")
    iota = build_iota(psi, pool, n)
    translated = translate(iota, biconditional(pool[s]))
    size = node_count(translated)
    if size > budget:
        logger.warning(f"Translation at stage {n} has {size} nodes, over the budget of {budget}; not evaluated")
        got = U
    else:
        got = eval_sentence(translated, fuel)
    instance = CheckInstance(f"n={n} s={s} {digest(render(pool[s]))}", T, got)
    return _log_report(CheckReport("triangle", fuel, (instance,), (DERIVED_EXPECTATION,)))


def predecessors_code(u: int) -> int:
    """Ackermann code of {0, .., u-1}: 2^u - 1."""
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u}")
    return 2**u - 1


def piecewise_code(formula: Formula, u: int) -> int:
    """Sum of 2^i over the i < u satisfying the unary bounded formula."""
    variable = require_unary(formula, "piecewise formula")
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u}")
    return sum(1 << i for i in range(u) if eval_delta0(formula, {variable: i}))


def check_piecewise(formula: Formula, u: int, fuel: int = DEFAULT_FUEL) -> CheckReport:
    """
    The code c of {i < u : phi(i)}: each bit against phi, Code(c, phi, u) under the
    evaluator, and c <= 2^u - 1.
    """
    variable = require_unary(formula, "piecewise formula")
    c = piecewise_code(formula, u)
    instances = [
        CheckInstance(f"bit {i}", TriBool.of(eval_delta0(formula, {variable: i})), TriBool.of(ack_bit(i, c)))
        for i in range(u)
    ]
    instances.append(CheckInstance(f"Code(c={c}, u={u})", T, eval_sentence(code_instance(formula, c, u), fuel)))
    instances.append(CheckInstance(f"c={c} <= 2^u-1", T, TriBool.of(c <= predecessors_code(u))))
    return _log_report(CheckReport("pc", fuel, tuple(instances)))


def check_dtb_finite(psi: Formula, pool: Sequence[Formula], n_max: int, fuel: int = DEFAULT_FUEL) -> CheckReport:
    """
    No minimal index and a nonempty index domain, translated at every stage up to
    n_max; expected false each time since a finite order has a minimal element.
    """
    claim = And(descending_axiom(), nonempty_axiom())
    instances = []
    for n in range(n_max + 1):
        translated = translate(build_iota(psi, pool, n), claim)
        instances.append(CheckInstance(f"n={n}", F, eval_sentence(translated, fuel)))
    return _log_report(CheckReport("dtb", fuel, tuple(instances)))


def check_ind(psis: Sequence[Formula], fuel: int = DEFAULT_FUEL) -> CheckReport:
    """Induction instances are never refuted; unbounded ones may stay unknown."""
    evaluator = Evaluator(fuel)
    instances = []
    for psi in psis:
        sentence = ind_sentence(psi)
        instances.append(CheckInstance(digest(render(psi)), T, evaluator.sentence(sentence)))
    return _log_report(CheckReport("ind", fuel, tuple(instances)))


def truth_table(formulas: Sequence[Formula], fuel: int = DEFAULT_FUEL) -> List[TriBool]:
    """Values of a list of arithmetical sentences."""
    for i, formula in enumerate(formulas):
        require_arithmetical_sentence(formula, f"sentence {i}")
    evaluator = Evaluator(fuel)
    return [evaluator.sentence(formula) for formula in formulas]
