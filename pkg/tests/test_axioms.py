"""
Tests unitaires pour services/axioms.py.

Ce module teste :
- les instances des axiomes de vérité compositionnelle
- les instances DC / CC, l'induction et l'induction interne
- les biconditionnelles itérées et la disjonction indexée
- le codage par morceaux et les bundles Q, ordre, DTB
"""

import pytest

from services.axioms import (
    AXIOM,
    CONJECTURE,
    AxiomBundle,
    NamedSentence,
    axiom,
    biconditional,
    cc_instance,
    code_instance,
    code_of,
    dc_instance,
    dtb_bundle,
    ic_instance,
    ind_sentence,
    order_axioms,
    pc_of,
    pc_phi,
    pc_u,
    q_axioms,
    quoted_truth,
    tarski_0,
    tarski_instances,
    theta_disjunction,
)
from services.semantics import T, F, eval_sentence
from services.syntax import (
    FALSUM,
    Add,
    And,
    Ack,
    Eq,
    ExistsIdx,
    ExistsNum,
    ForallIdx,
    ForallNum,
    IEq,
    Iff,
    Imp,
    ITru,
    Lt,
    Not,
    NumVar,
    Or,
    Prec,
    Quote,
    Succ,
    Tru,
    Zero,
    big_and,
    is_closed,
    numeral,
)
from utils.errors import ArityError, EmptyListError, IndexSyntaxError, OpenFormulaError, OpenTermError, WorkbenchError

x = NumVar("x")
A = Eq(Zero(), Zero())
B = Lt(Zero(), Succ(Zero()))


class TestTarski:
    """Tests pour les instances des axiomes de vérité compositionnelle."""

    def test_empty_pools(self):
        """Avec des pools vides, seul tarski_0 est produit."""
        bundle = tarski_instances()
        assert bundle.names() == ["tarski_0"]
        assert bundle.get("tarski_0").body == tarski_0()

    def test_sentence_pool(self):
        """s clauses de négation et s^2 clauses de disjonction."""
        bundle = tarski_instances(sent_pool=[A, B])
        assert bundle.names() == [
            "tarski_0",
            "tarski_2_0",
            "tarski_2_1",
            "tarski_3_0_0",
            "tarski_3_0_1",
            "tarski_3_1_0",
            "tarski_3_1_1",
        ]
        assert bundle.get("tarski_2_1").body == Iff(quoted_truth(Not(B)), Not(quoted_truth(B)))
        assert bundle.get("tarski_3_0_1").body == Iff(
            quoted_truth(Or(A, B)), Or(quoted_truth(A), quoted_truth(B))
        )

    def test_term_pool_uses_values(self):
        """La clause atomique compare les numéraux des valeurs."""
        bundle = tarski_instances(term_pool=[(Add(numeral(1), numeral(1)), numeral(2))])
        body = bundle.get("tarski_1_0").body
        assert body == Iff(quoted_truth(Eq(Add(numeral(1), numeral(1)), numeral(2))), Eq(numeral(2), numeral(2)))

    def test_quantifier_surrogate(self):
        bundle = tarski_instances(form_pool=[(Lt(x, numeral(2)), 2)])
        sentence = bundle.get("tarski_4_0")
        assert sentence.flags == ("surrogate",)
        assert sentence.body == Iff(
            quoted_truth(ExistsNum("x", Lt(x, numeral(2)))),
            Or(quoted_truth(Lt(Zero(), numeral(2))), quoted_truth(Lt(numeral(1), numeral(2)))),
        )

    def test_zero_witness_bound(self):
        with pytest.raises(EmptyListError):
            tarski_instances(form_pool=[(Lt(x, numeral(2)), 0)])

    def test_invalid_pools(self):
        with pytest.raises(OpenTermError):
            tarski_instances(term_pool=[(x, Zero())])
        with pytest.raises(OpenFormulaError):
            tarski_instances(sent_pool=[Eq(x, x)])
        with pytest.raises(IndexSyntaxError):
            tarski_instances(sent_pool=[Tru(Zero())])


class TestCorrectness:
    """Tests pour DC, CC et l'induction."""

    def test_dc_single(self):
        assert dc_instance([A]) == Iff(quoted_truth(A), quoted_truth(A))

    def test_dc_groups_left(self):
        C = Not(A)
        expected = Iff(
            quoted_truth(Or(Or(A, B), C)),
            Or(Or(quoted_truth(A), quoted_truth(B)), quoted_truth(C)),
        )
        assert dc_instance([A, B, C]) == expected

    def test_cc(self):
        expected = Iff(quoted_truth(big_and([A, B])), And(quoted_truth(A), quoted_truth(B)))
        assert cc_instance([A, B]) == expected

    def test_empty_pool(self):
        with pytest.raises(EmptyListError):
            dc_instance([])
        with pytest.raises(EmptyListError):
            cc_instance([])

    def test_ind_sentence(self):
        psi = Eq(x, x)
        step = Eq(Add(x, Succ(Zero())), Add(x, Succ(Zero())))
        expected = Imp(A, Imp(ForallNum("x", Imp(psi, step)), ForallNum("x", psi)))
        assert ind_sentence(psi) == expected
        assert ic_instance(psi) == Tru(Quote(expected))

    def test_ind_requires_unary(self):
        with pytest.raises(ArityError):
            ind_sentence(A)


class TestBiconditional:
    """Tests pour les biconditionnelles itérées."""

    def test_arithmetical(self):
        assert biconditional(A) == ForallIdx("a", Iff(ITru("a", Quote(A)), A))

    def test_index_quantifier_relativized(self):
        """alpha est frais pour phi : ici b, puisque a est lié dans phi."""
        phi = ExistsIdx("a", IEq("a", "a"))
        expected = ForallIdx("b", Iff(ITru("b", Quote(phi)), ExistsIdx("a", And(Prec("a", "b"), IEq("a", "a")))))
        assert biconditional(phi) == expected

    def test_open_formula(self):
        with pytest.raises(OpenFormulaError):
            biconditional(Eq(x, x))


class TestPiecewiseCoding:
    """Tests pour PC_u, PC_phi et Code."""

    def test_pc_u_closed(self):
        assert is_closed(pc_u())

    def test_pc_phi_unary(self):
        """u et y prennent les premiers noms frais."""
        a, b = NumVar("a"), NumVar("b")
        body = ForallNum("x", Iff(And(Eq(x, x), Lt(x, a)), Ack(x, b)))
        assert pc_phi(Eq(x, x)) == ForallNum("a", ExistsNum("b", body))

    def test_pc_phi_binary_is_closed(self):
        formula = Lt(x, NumVar("y"))
        assert is_closed(pc_phi(formula))

    def test_pc_phi_closed_formula(self):
        with pytest.raises(ArityError):
            pc_phi(A)

    def test_code_instance_values(self):
        """7 = 111 code {0, 1, 2} ; 6 = 110 ne contient pas 0."""
        assert eval_sentence(code_instance(Eq(x, x), 7, 3)) is T
        assert eval_sentence(code_instance(Eq(x, x), 6, 3)) is F

    def test_code_of_free_in_c_and_u(self):
        assert not is_closed(code_of(Eq(x, x)))
        assert is_closed(pc_of(Eq(x, x)))


class TestThetaAndBundles:
    """Tests pour la disjonction indexée et les bundles."""

    def test_theta_disjunction(self):
        expected = Or(And(Eq(x, Zero()), A), And(Eq(x, numeral(1)), B))
        assert theta_disjunction([A, B]) == expected

    def test_theta_empty(self):
        with pytest.raises(EmptyListError):
            theta_disjunction([])

    def test_q_and_order(self):
        assert q_axioms().names() == [f"q{i}" for i in range(1, 9)]
        assert order_axioms().names() == ["order_irreflexive", "order_transitive"]

    def test_dtb_bundle(self):
        bundle = dtb_bundle([A, B])
        assert bundle.name == "dtb"
        assert bundle.names()[-3:] == ["b_0", "b_1", "inconsistency"]
        assert bundle.get("inconsistency").role == CONJECTURE
        assert bundle.get("inconsistency").body == FALSUM
        assert len(bundle.with_role(AXIOM)) == 14

    def test_duplicate_names(self):
        with pytest.raises(WorkbenchError):
            AxiomBundle("bad", (axiom("same", A), axiom("same", B)))

    def test_invalid_role(self):
        with pytest.raises(WorkbenchError):
            NamedSentence("bad", "lemma", A)

    def test_open_sentence(self):
        with pytest.raises(OpenFormulaError):
            axiom("bad", Eq(x, x))

    def test_extend(self):
        bundle = q_axioms().extend([axiom("extra", A)], name="q_plus")
        assert bundle.name == "q_plus"
        assert bundle.names()[-1] == "extra"
        assert bundle.provenance == q_axioms().provenance
