"""
Diagonalization: fixed-point sentences, the indexed theta, and the obligation
bundles behind the inconsistency of descending truth.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

from services.axioms import (
    OBLIGATION,
    AxiomBundle,
    NamedSentence,
    axiom,
    dtb_bundle,
    require_sentence,
)
from services.syntax import (
    FALSUM,
    And,
    Diag,
    ExistsNum,
    ForallIdx,
    Formula,
    Iff,
    Imp,
    ITru,
    Not,
    NumVar,
    Quote,
    all_names,
    fresh_name,
    substitute,
    unary_variable,
)

logger = logging.getLogger(__name__)

THETA_VARIABLE = "x"
THETA_INDEX = "a"


@dataclass(frozen=True)
class FixedPointResult:
    """gamma is equivalent to delta(<gamma>), which is ``unfolded``."""

    gamma: Formula
    delta: Formula
    unfolded: Formula
    delta_prime: Formula


def fixed_point(delta: Formula) -> FixedPointResult:
    """
    Fixed point of a unary formula through the diagonal relation.

    With delta'(v) := exists y (Diag(v, y) & delta(y)), gamma is delta'(<delta'>) and
    unfolded is delta(<gamma>). Diag(a, b) holds iff b is the code of the formula
    coded by a applied to its own quotation, so gamma and unfolded agree in the
    standard model.

    Raises:
        ArityError: delta does not have exactly one free number variable.
    """
    variable = unary_variable(delta)
    used = all_names(delta)
    v = fresh_name(used)
    used.add(v)
    y = fresh_name(used)

    delta_prime = ExistsNum(y, And(Diag(NumVar(v), NumVar(y)), substitute(delta, variable, NumVar(y))))
    gamma = substitute(delta_prime, v, Quote(delta_prime))
    unfolded = substitute(delta, variable, Quote(gamma))

    logger.debug(f"Fixed point built with diagonal variable {v} and witness {y}")
    return FixedPointResult(gamma=gamma, delta=delta, unfolded=unfolded, delta_prime=delta_prime)


def theta_indexed() -> Formula:
    """theta(x) := forall a T_a(x)."""
    return ForallIdx(THETA_INDEX, ITru(THETA_INDEX, NumVar(THETA_VARIABLE)))


def theta_of(formula: Formula) -> Formula:
    """theta(<formula>)."""
    return substitute(theta_indexed(), THETA_VARIABLE, Quote(formula))


def hbl_obligations(phi: Formula, psi: Formula, prefix: str = "hbl") -> AxiomBundle:
    """
    Derivability conditions for theta on a pair of sentences.

    Two sentences (distribution over implication and the nesting condition) and one
    obligation record: if phi is derivable then so is theta(<phi>). The obligation
    is meta-level and is exported as a separate prover task.
    """
    require_sentence(phi, "first HBL sentence")
    require_sentence(psi, "second HBL sentence")

    distribution = Imp(theta_of(Imp(phi, psi)), Imp(theta_of(phi), theta_of(psi)))
    nesting = Imp(theta_of(phi), theta_of(theta_of(phi)))
    necessitation = NamedSentence(f"{prefix}1", OBLIGATION, theta_of(phi), premise=phi)

    sentences = (necessitation, axiom(f"{prefix}2", distribution), axiom(f"{prefix}3", nesting))
    return AxiomBundle(prefix, sentences, "Hilbert-Bernays-Loeb derivability conditions for theta")


def loeb_bundle(pool: Sequence[Formula]) -> AxiomBundle:
    """
    The descending-truth bundle with the lemmas of the Loeb-style argument.

    Adds the consistency statement not theta(<0=1>), the fixed point
    gamma <-> not theta(<gamma>), and derivability conditions for (gamma, 0=1) and
    (theta(<gamma>), 0=1).
    """
    base = dtb_bundle(pool)
    liar = fixed_point(Not(theta_indexed()))
    gamma = liar.gamma

    lemmas = [
        axiom("loeb_consistency", Not(theta_of(FALSUM)), "lemma"),
        axiom("loeb_fixed_point", Iff(gamma, liar.unfolded), "lemma"),
    ]
    lemmas.extend(hbl_obligations(gamma, FALSUM, "hbl_gamma_").sentences)
    lemmas.extend(hbl_obligations(theta_of(gamma), FALSUM, "hbl_theta_").sentences)

    logger.info(f"Built Loeb bundle with {len(lemmas)} additional sentences")
    return base.extend(lemmas, name="loeb", provenance=base.provenance + "; Loeb-style lemmas for theta(x) := forall a T_a(x)")
