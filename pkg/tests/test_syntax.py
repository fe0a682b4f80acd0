"""
Tests unitaires pour services/syntax.py.

Ce module teste :
- l'ordre des identifiants et les noms frais
- les variables libres, la classification et le contrôle des sortes
- la substitution sans capture, la clôture universelle et les numéraux
- les grands connecteurs, la désucrage et la relativisation
"""

import pytest
from hypothesis import given
from strategies import arithmetical_formulas, closed_terms, formulas

from services.syntax import (
    FALSUM,
    INDEX,
    NUMBER,
    VERUM,
    Add,
    And,
    BoundedExists,
    BoundedForall,
    Diag,
    Eq,
    ExistsIdx,
    ExistsNum,
    ForallIdx,
    ForallNum,
    IEq,
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
    all_names,
    big_and,
    big_or,
    check_sorts,
    children,
    desugar,
    expand_bounded,
    free_number_variables,
    free_variables,
    fresh_name,
    has_index_syntax,
    identifier_at,
    identifier_index,
    instantiate,
    is_arithmetical,
    is_closed,
    is_desugared,
    numeral,
    relativize,
    substitute,
    unary_variable,
    universal_closure,
)
from utils.errors import ArityError, EmptyListError, SortError

x, y, z = NumVar("x"), NumVar("y"), NumVar("z")
A = Eq(Zero(), Zero())
B = Lt(Zero(), Succ(Zero()))
C = Lt(Succ(Zero()), Zero())


class TestIdentifiers:
    """Tests pour l'ordre des identifiants et les noms frais."""

    def test_first_identifiers(self):
        """Les 26 premiers identifiants sont les lettres."""
        assert identifier_at(0) == "a"
        assert identifier_at(25) == "z"
        assert identifier_at(26) == "aa"

    def test_index_of_two_letter_names(self):
        """Ordre shortlex sur l'alphabet lettres, chiffres, soulignement."""
        assert identifier_index("aa") == 26
        assert identifier_index("a0") == 52
        assert identifier_index("a_") == 62

    @pytest.mark.parametrize("index", [0, 1, 25, 26, 100, 961, 962, 5000])
    def test_index_round_trip(self, index):
        """identifier_index inverse identifier_at."""
        assert identifier_index(identifier_at(index)) == index

    def test_fresh_name_is_least_unused(self):
        """Le nom frais est le plus petit identifiant non utilisé."""
        assert fresh_name(set()) == "a"
        assert fresh_name({"a", "b"}) == "c"
        assert fresh_name({"b"}) == "a"

    def test_invalid_identifier(self):
        """Un identifiant invalide est refusé."""
        with pytest.raises(SortError):
            identifier_index("Abc")


class TestFreeVariables:
    """Tests pour les variables libres et la classification."""

    def test_free_variables_of_both_sorts(self):
        """T_a(x) a une variable d'indice et une variable numérique libres."""
        assert free_variables(ITru("a", x)) == {("a", INDEX), ("x", NUMBER)}

    def test_bound_variables_are_not_free(self):
        """Les quantificateurs lient leur variable."""
        assert free_variables(ExistsNum("x", Eq(x, y))) == {("y", NUMBER)}
        assert free_variables(ExistsIdx("a", Prec("a", "b"))) == {("b", INDEX)}

    def test_bounded_quantifier_bound_is_free(self):
        """La borne d'un quantificateur borné reste libre."""
        formula = BoundedExists("x", y, Eq(x, x))
        assert free_variables(formula) == {("y", NUMBER)}

    def test_quote_has_no_free_variables(self):
        """Une citation est close même si sa formule ne l'est pas."""
        assert is_closed(Tru(Quote(Eq(x, x))))
        assert children(Quote(Eq(x, x))) == ()

    def test_free_number_variables_sorted(self):
        """Les variables numériques libres sont triées par identifiant."""
        assert free_number_variables(Eq(Add(y, x), z)) == ["x", "y", "z"]

    def test_classification(self):
        """Arithmétique pure, syntaxe d'indices."""
        assert is_arithmetical(Diag(x, y))
        assert not is_arithmetical(Tru(Zero()))
        assert has_index_syntax(IEq("a", "a"))
        assert not has_index_syntax(Tru(Zero()))

    def test_unary_variable(self):
        """Une formule unaire a exactement une variable libre."""
        assert unary_variable(Eq(x, x)) == "x"
        with pytest.raises(ArityError):
            unary_variable(Eq(x, y))
        with pytest.raises(ArityError):
            unary_variable(A)

    def test_all_names(self):
        """Tous les identifiants, libres et liés."""
        assert all_names(ExistsNum("x", ITru("a", y))) == {"x", "a", "y"}


class TestSorts:
    """Tests pour la discipline des sortes."""

    def test_index_use_of_number_variable(self):
        """Une variable numérique liée ne peut pas servir d'indice."""
        with pytest.raises(SortError):
            check_sorts(ExistsNum("x", Prec("x", "a")))

    def test_free_name_with_two_sorts(self):
        """Un même nom libre ne peut pas avoir deux sortes."""
        with pytest.raises(SortError):
            check_sorts(And(Eq(NumVar("a"), Zero()), IEq("a", "a")))

    def test_well_sorted(self):
        """Une formule bien sortée passe."""
        check_sorts(ForallIdx("a", Imp(ITru("a", x), ExistsIdx("b", Prec("b", "a")))))


class TestSubstitution:
    """Tests pour la substitution sans capture."""

    def test_simple_substitution(self):
        """Remplacement des occurrences libres."""
        assert substitute(Eq(x, y), "x", Zero()) == Eq(Zero(), y)

    def test_bound_occurrence_untouched(self):
        """Les occurrences liées ne sont pas remplacées."""
        formula = Or(Eq(x, x), ExistsNum("x", Eq(x, Zero())))
        assert substitute(formula, "x", Zero()) == Or(Eq(Zero(), Zero()), ExistsNum("x", Eq(x, Zero())))

    def test_capture_avoided(self):
        """La variable liée capturante est renommée."""
        result = substitute(ExistsNum("y", Eq(x, y)), "x", y)
        assert result == ExistsNum("a", Eq(y, NumVar("a")))

    def test_no_substitution_into_quote(self):
        """Une citation est opaque pour la substitution."""
        formula = Eq(x, Quote(Eq(x, x)))
        assert substitute(formula, "x", Zero()) == Eq(Zero(), Quote(Eq(x, x)))

    def test_deep_numeral(self):
        """Un numéral de 2^16 - 1 traverse substitution et variables libres sans récursion."""
        deep = numeral(2**16 - 1)
        formula = substitute(Lt(x, NumVar("c")), "c", deep)
        assert free_variables(formula) == {("x", NUMBER)}
        result = substitute(formula, "x", Zero())
        assert result.left == Zero()
        assert result.right is deep

    def test_substitution_under_successors(self):
        assert substitute(Eq(Succ(Succ(x)), y), "x", Succ(Zero())) == Eq(numeral(3), y)

    def test_index_variable_refused(self):
        """On ne substitue pas un terme à une variable d'indice."""
        with pytest.raises(SortError):
            substitute(ITru("a", Zero()), "a", Zero())

    def test_instantiate(self):
        """instantiate remplace l'unique variable libre."""
        assert instantiate(Lt(x, Zero()), Succ(Zero())) == Lt(Succ(Zero()), Zero())

    @given(formulas, closed_terms)
    def test_substituted_variable_disappears(self, formula, term):
        """Après substitution d'un terme clos, x n'est plus libre."""
        result = substitute(formula, "x", term)
        assert ("x", NUMBER) not in free_variables(result)


class TestClosureAndConnectives:
    """Tests pour la clôture, les numéraux et les grands connecteurs."""

    def test_universal_closure(self):
        """Variables numériques à l'extérieur, dans l'ordre des identifiants."""
        assert universal_closure(Eq(y, x)) == ForallNum("x", ForallNum("y", Eq(y, x)))
        closed = universal_closure(ITru("a", x))
        assert closed == ForallNum("x", ForallIdx("a", ITru("a", x)))
        assert is_closed(closed)

    def test_numeral(self):
        """numeral(n) a n successeurs."""
        assert numeral(0) == Zero()
        assert numeral(2) == Succ(Succ(Zero()))
        with pytest.raises(ValueError):
            numeral(-1)

    def test_big_or_groups_left(self):
        """((A v B) v C)."""
        assert big_or([A]) == A
        assert big_or([A, B, C]) == Or(Or(A, B), C)

    def test_big_and_is_an_abbreviation(self):
        """not(not A v not B)."""
        assert big_and([A, B]) == Not(Or(Not(A), Not(B)))

    def test_empty_lists(self):
        """Les grands connecteurs exigent une liste non vide."""
        with pytest.raises(EmptyListError):
            big_or([])
        with pytest.raises(EmptyListError):
            big_and([])

    def test_constants(self):
        """VERUM est la négation de FALSUM."""
        assert VERUM == Not(FALSUM)


class TestDesugar:
    """Tests pour l'élimination du sucre syntaxique."""

    def test_and(self):
        assert desugar(And(A, B)) == Not(Or(Not(A), Not(B)))

    def test_imp(self):
        assert desugar(Imp(A, B)) == Or(Not(A), B)

    def test_forall(self):
        assert desugar(ForallNum("x", Eq(x, x))) == Not(ExistsNum("x", Not(Eq(x, x))))

    def test_bounded_exists(self):
        """Le quantificateur borné devient un existentiel gardé."""
        two = numeral(2)
        expected = ExistsNum("x", Not(Or(Not(Not(Lt(two, x))), Not(Eq(x, x)))))
        assert desugar(BoundedExists("x", two, Eq(x, x))) == expected

    def test_expand_bounded_renames_variable_in_bound(self):
        """La variable liée est renommée si elle apparaît dans la borne."""
        result = expand_bounded(BoundedExists("x", x, Eq(x, Zero())))
        assert result == ExistsNum("a", And(Not(Lt(x, NumVar("a"))), Eq(NumVar("a"), Zero())))

    def test_expand_bounded_forall(self):
        result = expand_bounded(BoundedForall("x", Zero(), Lt(x, y)))
        assert result == ForallNum("x", Imp(Not(Lt(Zero(), x)), Lt(x, y)))

    @given(formulas)
    def test_desugar_leaves_primitives_only(self, formula):
        """Après désucrage seuls not, or et exists subsistent."""
        assert is_desugared(desugar(formula))

    @given(formulas)
    def test_desugar_keeps_free_variables(self, formula):
        assert free_variables(desugar(formula)) == free_variables(formula)


class TestRelativize:
    """Tests pour la relativisation sous un indice."""

    def test_existential_guarded(self):
        formula = ExistsIdx("b", IEq("b", "b"))
        assert relativize(formula, "a") == ExistsIdx("b", And(Prec("b", "a"), IEq("b", "b")))

    def test_universal_guarded(self):
        formula = ForallIdx("b", ITru("b", Zero()))
        assert relativize(formula, "a") == ForallIdx("b", Imp(Prec("b", "a"), ITru("b", Zero())))

    def test_binder_named_alpha_is_renamed(self):
        """Un lieur nommé comme alpha est renommé, alpha reste libre."""
        formula = ExistsIdx("a", IEq("a", "a"))
        assert relativize(formula, "a") == ExistsIdx("b", And(Prec("b", "a"), IEq("b", "b")))

    def test_number_variable_refused(self):
        with pytest.raises(SortError):
            relativize(Eq(NumVar("a"), Zero()), "a")

    @given(arithmetical_formulas)
    def test_identity_on_arithmetical_formulas(self, formula):
        """La relativisation d'une formule arithmétique est la formule elle-même."""
        assert relativize(formula, "a") == formula
