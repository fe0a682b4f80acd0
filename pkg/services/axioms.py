"""
Axiom generators and object formulas.

Produces concrete sentences for the compositional truth axioms over finite pools,
disjunctive/conjunctive correctness instances, induction and internal induction,
iterated truth biconditionals, piecewise-coding formulas, the indexed disjunction
used to code a set of true sentences, Robinson's Q, the index order axioms and the
descending-truth bundle.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from services.syntax import (
    FALSUM,
    Ack,
    Add,
    And,
    Eq,
    ExistsIdx,
    ExistsNum,
    ForallIdx,
    ForallNum,
    Formula,
    Iff,
    IEq,
    Imp,
    ITru,
    Lt,
    Mul,
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
    all_names,
    big_and,
    big_or,
    check_sorts,
    fresh_name,
    free_number_variables,
    free_variables,
    has_index_syntax,
    is_arithmetical,
    is_closed,
    numeral,
    relativize,
    substitute,
    unary_variable,
)
from services.goedel import eval_closed_term, pairing_formula
from utils.errors import ArityError, EmptyListError, IndexSyntaxError, OpenFormulaError, OpenTermError, WorkbenchError

logger = logging.getLogger(__name__)

AXIOM = "axiom"
CONJECTURE = "conjecture"
OBLIGATION = "obligation"
ROLES = (AXIOM, CONJECTURE, OBLIGATION)


# ============================================================================
# BUNDLES
# ============================================================================


@dataclass(frozen=True)
class NamedSentence:
    """A closed sentence with a name and a role; obligations may carry a premise."""

    name: str
    role: str
    body: Formula
    flags: Tuple[str, ...] = ()
    premise: Optional[Formula] = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise WorkbenchError(f"unknown role {self.role!r} for {self.name}")
        if not is_closed(self.body):
            raise OpenFormulaError(f"{self.name} is not closed")
        if self.premise is not None and not is_closed(self.premise):
            raise OpenFormulaError(f"premise of {self.name} is not closed")


@dataclass(frozen=True)
class AxiomBundle:
    name: str
    sentences: Tuple[NamedSentence, ...] = field(default_factory=tuple)
    provenance: str = ""

    def __post_init__(self):
        seen = set()
        for sentence in self.sentences:
            if sentence.name in seen:
                raise WorkbenchError(f"duplicate sentence name {sentence.name!r} in bundle {self.name}")
            seen.add(sentence.name)

    def names(self) -> List[str]:
        return [sentence.name for sentence in self.sentences]

    def with_role(self, role: str) -> List[NamedSentence]:
        return [sentence for sentence in self.sentences if sentence.role == role]

    def get(self, name: str) -> NamedSentence:
        for sentence in self.sentences:
            if sentence.name == name:
                return sentence
        raise KeyError(name)

    def extend(self, sentences: Iterable[NamedSentence], name: Optional[str] = None, provenance: Optional[str] = None) -> "AxiomBundle":
        """A new bundle with ``sentences`` appended."""
        return AxiomBundle(
            name=name or self.name,
            sentences=self.sentences + tuple(sentences),
            provenance=self.provenance if provenance is None else provenance,
        )


def axiom(name: str, body: Formula, *flags: str) -> NamedSentence:
    return NamedSentence(name, AXIOM, body, tuple(flags))


def inconsistency_target(name: str = "inconsistency") -> NamedSentence:
    """The conjecture ``false``; a prover that proves it shows the axioms inconsistent."""
    return NamedSentence(name, CONJECTURE, FALSUM)


# Checks
# -----------------------------------------------------------------------------


def require_sentence(formula: Formula, what: str = "formula") -> None:
    check_sorts(formula)
    if not is_closed(formula):
        raise OpenFormulaError(f"{what} must be a sentence, free variables: {sorted(free_variables(formula))}")


def require_arithmetical_sentence(formula: Formula, what: str = "formula") -> None:
    require_sentence(formula, what)
    if not is_arithmetical(formula):
        raise IndexSyntaxError(f"{what} must be purely arithmetical")


def require_unary(formula: Formula, what: str = "formula", arithmetical: bool = True) -> str:
    check_sorts(formula)
    if arithmetical and not is_arithmetical(formula):
        raise IndexSyntaxError(f"{what} must be purely arithmetical")
    if has_index_syntax(formula):
        raise IndexSyntaxError(f"{what} must not contain index syntax")
    return unary_variable(formula)


def quoted_truth(formula: Formula) -> Formula:
    """The atom T(<formula>)."""
    return Tru(Quote(formula))


# ============================================================================
# COMPOSITIONAL TRUTH
# ============================================================================


def tarski_0() -> Formula:
    """Only sentences are true: forall x (T x -> Sent_A x)."""
    x = NumVar("x")
    return ForallNum("x", Imp(Tru(x), SentA(x)))


def tarski_instances(
    sent_pool: Sequence[Formula] = (),
    term_pool: Sequence[Tuple[Term, Term]] = (),
    form_pool: Sequence[Tuple[Formula, int]] = (),
) -> AxiomBundle:
    """
    Instances of the compositional truth axioms over finite pools.

    Args:
        sent_pool: closed arithmetical sentences (negation and disjunction clauses)
        term_pool: pairs of closed terms (atomic clause)
        form_pool: unary arithmetical formulas with a witness bound (quantifier
            clause, emitted as a bounded surrogate flagged ``surrogate``)

    Returns:
        The bundle; with empty pools it holds ``tarski_0`` alone.
    """
    sentences = [axiom("tarski_0", tarski_0())]

    for i, (left, right) in enumerate(term_pool):
        if not is_closed(left) or not is_closed(right):
            raise OpenTermError(f"term pair {i} is not closed")
        n, m = eval_closed_term(left), eval_closed_term(right)
        sentences.append(axiom(f"tarski_1_{i}", Iff(quoted_truth(Eq(left, right)), Eq(numeral(n), numeral(m)))))

    for i, formula in enumerate(sent_pool):
        require_arithmetical_sentence(formula, f"sentence {i}")
        sentences.append(axiom(f"tarski_2_{i}", Iff(quoted_truth(Not(formula)), Not(quoted_truth(formula)))))

    for i, left in enumerate(sent_pool):
        for j, right in enumerate(sent_pool):
            body = Iff(quoted_truth(Or(left, right)), Or(quoted_truth(left), quoted_truth(right)))
            sentences.append(axiom(f"tarski_3_{i}_{j}", body))

    for i, (formula, bound) in enumerate(form_pool):
        variable = require_unary(formula, f"pool formula {i}")
        if bound < 1:
            raise EmptyListError(f"witness bound for pool formula {i} must be >= 1")
        instances = [quoted_truth(substitute(formula, variable, numeral(k))) for k in range(bound)]
        body = Iff(quoted_truth(ExistsNum(variable, formula)), big_or(instances))
        sentences.append(axiom(f"tarski_4_{i}", body, "surrogate"))

    logger.debug(f"Built {len(sentences)} compositional truth instances")
    return AxiomBundle("tarski", tuple(sentences), "compositional truth axioms tarski_0..tarski_4 over finite pools")


# ============================================================================
# DISJUNCTIVE, CONJUNCTIVE AND INDUCTIVE CORRECTNESS
# ============================================================================


def dc_instance(formulas: Sequence[Formula]) -> Formula:
    """T(<f0 v .. v fs-1>) <-> T(<f0>) v .. v T(<fs-1>), both sides grouped to the left."""
    if not formulas:
        raise EmptyListError("a disjunctive correctness instance needs at least one sentence")
    for i, formula in enumerate(formulas):
        require_arithmetical_sentence(formula, f"disjunct {i}")
    return Iff(quoted_truth(big_or(formulas)), big_or([quoted_truth(f) for f in formulas]))


def cc_instance(formulas: Sequence[Formula]) -> Formula:
    """T(<big_and fs>) <-> T(<f0>) & .. & T(<fs-1>); a single conjunct stands alone."""
    if not formulas:
        raise EmptyListError("a conjunctive correctness instance needs at least one sentence")
    for i, formula in enumerate(formulas):
        require_arithmetical_sentence(formula, f"conjunct {i}")
    return Iff(quoted_truth(big_and(formulas)), functools.reduce(And, [quoted_truth(f) for f in formulas]))


def ind_sentence(psi: Formula) -> Formula:
    """psi(0) -> (forall v (psi(v) -> psi(v+1)) -> forall v psi(v))."""
    v = require_unary(psi, "induction formula")
    step = substitute(psi, v, Add(NumVar(v), Succ(Zero())))
    return Imp(substitute(psi, v, Zero()), Imp(ForallNum(v, Imp(psi, step)), ForallNum(v, psi)))


def ic_instance(psi: Formula) -> Formula:
    return quoted_truth(ind_sentence(psi))


# ============================================================================
# ITERATED TRUTH BICONDITIONALS
# ============================================================================


def biconditional(formula: Formula) -> Formula:
    """
    forall a (T_a(<phi>) <-> phi relativized below a), with a fresh for phi.

    Raises:
        OpenFormulaError: phi has free variables.
    """
    require_sentence(formula, "biconditional formula")
    alpha = fresh_name(all_names(formula))
    return ForallIdx(alpha, Iff(ITru(alpha, Quote(formula)), relativize(formula, alpha)))


# ============================================================================
# PIECEWISE CODING
# ============================================================================


def pc_u() -> Formula:
    """forall u exists y forall x ((T x & x < u) <-> x Ack y)."""
    x, y, u = NumVar("x"), NumVar("y"), NumVar("u")
    return ForallNum("u", ExistsNum("y", ForallNum("x", Iff(And(Tru(x), Lt(x, u)), Ack(x, y)))))


def pc_phi(formula: Formula) -> Formula:
    """
    Piecewise coding of an n-ary formula (n >= 1): forall u exists y forall x0..xn-1
    [(phi & <x> < u) <-> <x> Ack y], where the tuple code <x> is pinned down by
    universally quantified pairing intermediates.
    """
    check_sorts(formula)
    if has_index_syntax(formula):
        raise IndexSyntaxError("piecewise coding formula must not contain index syntax")
    variables = free_number_variables(formula)
    if not variables or len(variables) != len(free_variables(formula)):
        raise ArityError("piecewise coding needs at least one free number variable and no free index variables")

    used = all_names(formula)

    def fresh() -> str:
        name = fresh_name(used)
        used.add(name)
        return name

    u, y = fresh(), fresh()
    code: Term = NumVar(variables[0])
    links: List[Formula] = []
    intermediates: List[str] = []
    for name in variables[1:]:
        p = fresh()
        intermediates.append(p)
        links.append(pairing_formula(code, NumVar(name), NumVar(p)))
        code = NumVar(p)

    body: Formula = Iff(And(formula, Lt(code, NumVar(u))), Ack(code, NumVar(y)))
    if links:
        body = Imp(functools.reduce(And, links), body)
    for name in reversed(variables + intermediates):
        body = ForallNum(name, body)
    return ForallNum(u, ExistsNum(y, body))


def code_of(formula: Formula) -> Formula:
    """Code(c, phi, u): forall x (x < u -> (T(phi(x)) <-> x Ack c)), free in c and u."""
    require_unary(formula, "coded formula", arithmetical=False)
    x, c, u = NumVar("x"), NumVar("c"), NumVar("u")
    return ForallNum("x", Imp(Lt(x, u), Iff(SubT(Quote(formula), x), Ack(x, c))))


def pc_of(formula: Formula) -> Formula:
    """forall u exists c Code(c, phi, u)."""
    return ForallNum("u", ExistsNum("c", code_of(formula)))


def code_instance(formula: Formula, c: int, u: int) -> Formula:
    """Code(c, phi, u) with numerals for c and u."""
    return substitute(substitute(code_of(formula), "c", numeral(c)), "u", numeral(u))


def theta_disjunction(formulas: Sequence[Formula], variable: str = "x") -> Formula:
    """theta(x) := big_or over i of ((x = i) & phi_i)."""
    if not formulas:
        raise EmptyListError("the indexed disjunction needs at least one sentence")
    for i, formula in enumerate(formulas):
        require_arithmetical_sentence(formula, f"sentence {i}")
    x = NumVar(variable)
    return big_or([And(Eq(x, numeral(i)), formula) for i, formula in enumerate(formulas)])


# ============================================================================
# ARITHMETIC, ORDER AND THE DESCENDING-TRUTH BUNDLE
# ============================================================================


def q_axioms() -> AxiomBundle:
    x, y, z = NumVar("x"), NumVar("y"), NumVar("z")
    zero = Zero()
    bodies = [
        ForallNum("x", ForallNum("y", Imp(Eq(Succ(x), Succ(y)), Eq(x, y)))),
        ForallNum("x", Not(Eq(zero, Succ(x)))),
        ForallNum("x", Imp(Not(Eq(x, zero)), ExistsNum("y", Eq(x, Succ(y))))),
        ForallNum("x", Eq(Add(x, zero), x)),
        ForallNum("x", ForallNum("y", Eq(Add(x, Succ(y)), Succ(Add(x, y))))),
        ForallNum("x", Eq(Mul(x, zero), zero)),
        ForallNum("x", ForallNum("y", Eq(Mul(x, Succ(y)), Add(Mul(x, y), x)))),
        ForallNum("x", ForallNum("y", Iff(Lt(x, y), ExistsNum("z", Eq(Add(Succ(z), x), y))))),
    ]
    sentences = tuple(axiom(f"q{i}", body) for i, body in enumerate(bodies, start=1))
    return AxiomBundle("q", sentences, "Robinson arithmetic Q")


def order_axioms() -> AxiomBundle:
    irreflexive = ForallIdx("a", Not(Prec("a", "a")))
    transitive = ForallIdx(
        "a", ForallIdx("b", ForallIdx("c", Imp(And(Prec("a", "b"), Prec("b", "c")), Prec("a", "c"))))
    )
    sentences = (axiom("order_irreflexive", irreflexive), axiom("order_transitive", transitive))
    return AxiomBundle("order", sentences, "strict partial order on truth indices")


def descending_axiom() -> Formula:
    """forall a exists b (b < a): no minimal index."""
    return ForallIdx("a", ExistsIdx("b", Prec("b", "a")))


def nonempty_axiom() -> Formula:
    """exists a (a = a)."""
    return ExistsIdx("a", IEq("a", "a"))


def dtb_bundle(pool: Sequence[Formula]) -> AxiomBundle:
    """
    Finite descending-truth theory over a pool of sentences.

    Q, the order axioms, no minimal index, a nonempty index domain and one
    biconditional per pool sentence, with the conjecture ``false``.
    """
    sentences: List[NamedSentence] = list(q_axioms().sentences) + list(order_axioms().sentences)
    sentences.append(axiom("dtb_descending", descending_axiom()))
    sentences.append(axiom("dtb_nonempty", nonempty_axiom()))
    for i, formula in enumerate(pool):
        sentences.append(axiom(f"b_{i}", biconditional(formula)))
    sentences.append(inconsistency_target())

    logger.info(f"Built descending-truth bundle over a pool of {len(pool)} sentence(s)")
    return AxiomBundle("dtb", tuple(sentences), f"finite descending truth theory DTB- over {len(pool)} biconditional(s)")
