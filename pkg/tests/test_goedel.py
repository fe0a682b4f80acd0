"""
Tests unitaires pour services/goedel.py.

Ce module teste :
- l'appariement de Cantor et les codes de tuples
- le codage / décodage et les valeurs de référence
- les reconnaisseurs Sent_A, Form_A^n, Sent_AT et la relation d'Ackermann
- l'évaluation des termes et la diagonalisation
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import formulas, terms

from services.goedel import (
    ack_bit,
    decode,
    diagonal_code,
    diagonal_formula,
    encode,
    eval_closed_term,
    eval_term,
    is_form_an,
    is_sentence_a,
    is_sentence_at,
    pair,
    pairing_formula,
    sentence_sequence,
    try_decode,
    tuple_code,
    unpair,
)
from services.semantics import eval_delta0
from services.syntax import (
    FALSUM,
    Add,
    Eq,
    ITru,
    Lt,
    Mul,
    Not,
    NumVar,
    Quote,
    Succ,
    Tru,
    Zero,
    numeral,
)
from utils.errors import ArityError, EmptyListError, MissingBindingError, NotACodeError, OpenTermError

x = NumVar("x")
zero = Zero()
one = Succ(Zero())


class TestPairing:
    """Tests pour l'appariement de Cantor."""

    def test_small_values(self):
        assert pair(0, 0) == 0
        assert pair(1, 0) == 1
        assert pair(0, 1) == 2
        assert pair(2, 2) == 12

    @given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=0, max_value=10**30))
    def test_unpair_inverts_pair(self, a, b):
        assert unpair(pair(a, b)) == (a, b)

    @given(st.integers(min_value=0, max_value=10**30))
    def test_pair_inverts_unpair(self, z):
        assert pair(*unpair(z)) == z

    def test_tuple_code(self):
        """Appariement imbriqué à gauche."""
        assert tuple_code([5]) == 5
        assert tuple_code([1, 2]) == 8
        assert tuple_code([1, 2, 3]) == pair(8, 3)

    def test_tuple_code_empty(self):
        with pytest.raises(EmptyListError):
            tuple_code([])

    @pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 1), (4, 4)])
    def test_pairing_formula_holds(self, a, b):
        """La formule objet de l'appariement est vraie sur le bon triplet."""
        formula = pairing_formula(numeral(a), numeral(b), numeral(pair(a, b)))
        assert eval_delta0(formula)

    def test_pairing_formula_rejects_wrong_value(self):
        formula = pairing_formula(numeral(1), numeral(2), numeral(9))
        assert not eval_delta0(formula)


class TestEncoding:
    """Tests pour le codage de Gödel."""

    @pytest.mark.parametrize(
        "node,code",
        [
            (Zero(), 2),
            (NumVar("a"), 1),
            (Succ(Zero()), 13),
            (Eq(zero, zero), 184),
            (Eq(zero, one), 9864),
            (Lt(zero, one), 10004),
            (Lt(one, zero), 8508),
            (Not(Eq(zero, zero)), 19886),
        ],
    )
    def test_reference_values(self, node, code):
        assert encode(node) == code
        assert decode(code) == node

    def test_zero_is_not_a_code(self):
        with pytest.raises(NotACodeError):
            decode(0)

    def test_successor_of_formula(self):
        """S appliqué au code d'une formule n'est pas un code."""
        with pytest.raises(NotACodeError):
            decode(pair(2, 184) + 1)

    def test_nullary_with_payload(self):
        with pytest.raises(NotACodeError):
            decode(pair(1, 5) + 1)

    def test_unknown_tag(self):
        with pytest.raises(NotACodeError):
            decode(pair(100, 0) + 1)
        assert try_decode(pair(100, 0) + 1) is None

    def test_encode_rejects_non_nodes(self):
        with pytest.raises(TypeError):
            encode("eq")

    def test_quote_payload_is_formula_code(self):
        assert encode(Quote(Eq(zero, zero))) == pair(5, 184) + 1

    @given(formulas)
    def test_decode_inverts_encode(self, formula):
        assert decode(encode(formula)) == formula

    @given(terms)
    def test_decode_inverts_encode_terms(self, term):
        assert decode(encode(term)) == term


class TestRecognizers:
    """Tests pour Sent_A, Form_A^n, Sent_AT et Ack."""

    def test_sentence_a(self):
        assert is_sentence_a(184)
        assert not is_sentence_a(1)
        assert not is_sentence_a(0)
        assert not is_sentence_a(encode(Tru(zero)))

    def test_form_an(self):
        assert is_form_an(encode(Eq(x, x)), 1)
        assert not is_form_an(encode(Eq(x, x)), 0)
        assert is_form_an(184, 0)

    def test_sentence_at(self):
        assert is_sentence_at(encode(Tru(zero)))
        assert not is_sentence_at(encode(ITru("a", zero)))
        assert not is_sentence_at(encode(Eq(x, zero)))

    def test_ack_bit(self):
        """6 = 110 en binaire."""
        assert ack_bit(1, 6)
        assert ack_bit(2, 6)
        assert not ack_bit(0, 6)
        assert not ack_bit(3, 6)

    def test_sentence_sequence(self):
        """Les non-phrases sont remplacées par 0 = 1."""
        sequence = sentence_sequence(185)
        assert len(sequence) == 185
        assert sequence[184] == Eq(zero, zero)
        assert sequence[0] == FALSUM
        assert sequence[2] == FALSUM


class TestTermsAndDiagonal:
    """Tests pour l'évaluation des termes et la diagonalisation."""

    def test_eval_closed_term(self):
        assert eval_closed_term(Add(numeral(2), Mul(numeral(3), numeral(4)))) == 14
        assert eval_closed_term(Quote(Eq(zero, zero))) == 184
        assert eval_closed_term(Succ(Quote(Eq(zero, zero)))) == 185

    def test_open_term(self):
        with pytest.raises(OpenTermError):
            eval_closed_term(Add(x, zero))

    def test_missing_binding(self):
        assert eval_term(Add(x, one), {"x": 4}) == 5
        with pytest.raises(MissingBindingError):
            eval_term(Add(x, NumVar("y")), {"x": 4})

    def test_diagonal_code(self):
        formula = Eq(x, x)
        quoted = Quote(formula)
        assert diagonal_formula(formula) == Eq(quoted, quoted)
        assert diagonal_code(encode(formula)) == encode(Eq(quoted, quoted))

    def test_diagonal_quotation_denotes_the_code(self):
        """La citation substituée a pour valeur le code de phi, sans numéral construit."""
        formula = Lt(x, Succ(x))
        quoted = Quote(formula)
        assert eval_closed_term(quoted) == encode(formula)
        assert decode(diagonal_code(encode(formula))) == Lt(quoted, Succ(quoted))

    def test_diagonal_of_closed_formula(self):
        with pytest.raises(ArityError):
            diagonal_code(184)

    def test_diagonal_of_term(self):
        with pytest.raises(NotACodeError):
            diagonal_code(2)
