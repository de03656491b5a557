import pytest

from modules.errors import GroundingError, NotReducibleError
from modules.formula import TOP, Signature
from modules.lp_parser import parse_formula
from modules.oracle import evaluate, interpretations
from modules.safety import (
    COMPLETE_SET_PATH, SAFETY_PATH, reduce_sm_to_fol, rv, u_f, unsafe_vars,
)
from modules.second_order import sm


def test_restricted_variables():
    assert rv(parse_formula("p(X, Y)")) == {"X", "Y"}
    assert rv(parse_formula("X = Y")) == set()
    assert rv(parse_formula("X = a")) == {"X"}
    assert rv(parse_formula("p(X) | q(Y)")) == set()
    assert rv(parse_formula("p(X) | q(X)")) == {"X"}
    assert rv(parse_formula("-p(X)")) == set()


def test_insurance_has_unsafe_existential(corpus):
    report = unsafe_vars(corpus("insurance").fol_representation())
    assert not report.safe
    assert report.unsafe_variables == {"W"}
    assert report.render() == "unsafe variables: W"


def test_fact_with_variable_is_unsafe():
    assert not unsafe_vars(parse_formula("forall X p(X)")).safe


def test_restricted_head_variable_is_safe():
    report = unsafe_vars(parse_formula("forall X forall Y ((q(X) & p(Y)) -> p(X))"))
    assert report.safe
    assert report.render() == "safe: no unsafe variables"


def test_equality_occurrences_count():
    report = unsafe_vars(parse_formula("forall X forall Y (p(X) -> X = Y)"))
    assert report.unsafe_variables == {"Y"}


def test_antecedent_occurrences_count():
    report = unsafe_vars(parse_formula("forall X ((q(X) | r) -> s)"))
    assert report.unsafe_variables == {"X"}


def test_negation_restricts_its_own_variables():
    assert unsafe_vars(parse_formula("forall X (p(X) -> -exists Z q(X, Z))")).safe
    report = unsafe_vars(parse_formula("forall X forall Y (p(X) -> -(q(Y) | r))"))
    assert report.unsafe_variables == {"Y"}


def test_pxy_is_unsafe(corpus):
    assert unsafe_vars(corpus("pxy").fol_representation()).unsafe_variables == {"X"}


def test_example_program_is_safe(corpus):
    assert unsafe_vars(corpus("ex1").fol_representation()).safe


def test_domain_closure_formula():
    f = u_f(parse_formula("p(a) & forall X (p(X) -> q(X, b))"))
    expected = parse_formula(
        "forall X ((p(X) -> (X = a | X = b)))"
        " & forall X1 X2 (q(X1, X2) -> ((X1 = a | X1 = b) & (X2 = a | X2 = b)))")
    assert f == expected


def test_domain_closure_edge_cases():
    assert u_f(parse_formula("forall X (X = X)")) == TOP
    with pytest.raises(GroundingError):
        u_f(parse_formula("forall X p(X)"))


def test_reduction_prefers_complete_set(corpus):
    reduction = reduce_sm_to_fol(corpus("pqr"))
    assert reduction.path == COMPLETE_SET_PATH
    assert len(reduction.loop_formulas) == 4


def test_safe_sentence_reduces_via_safety():
    f = parse_formula("forall X forall Y ((q(X) & p(Y)) -> p(X)) & q(a)")
    reduction = reduce_sm_to_fol(f, bound=3)
    assert reduction.path == SAFETY_PATH
    assert reduction.safety.safe


def test_pxy_is_not_reducible(corpus):
    with pytest.raises(NotReducibleError) as info:
        reduce_sm_to_fol(corpus("pxy"), bound=3)
    assert info.value.safety.unsafe_variables == {"X"}
    assert not info.value.complete.complete


def test_insurance_reduces_with_six_loops(corpus):
    reduction = reduce_sm_to_fol(corpus("insurance"))
    assert reduction.path == COMPLETE_SET_PATH
    assert len(reduction.loops) == 6


@pytest.mark.parametrize("name", ["ex1", "pqr", "pabc"])
def test_reduction_is_equivalent_to_sm(corpus, name):
    program = corpus(name)
    f = program.fol_representation()
    reduced = reduce_sm_to_fol(program).formula
    signature = Signature.of(f)
    for size in (1, 2):
        for interp in interpretations(signature, size):
            assert evaluate(sm(f), interp) == evaluate(reduced, interp), interp.render()


def test_safety_reduction_is_equivalent_to_sm():
    f = parse_formula("forall X forall Y ((q(X) & p(Y)) -> p(X)) & q(a)")
    reduced = reduce_sm_to_fol(f, bound=3).formula
    signature = Signature.of(f)
    for size in (1, 2):
        for interp in interpretations(signature, size):
            assert evaluate(sm(f), interp) == evaluate(reduced, interp), interp.render()


@pytest.mark.parametrize("size", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
def test_reductions_of_corpus_are_equivalent_to_sm(sentences_within, size):
    reduced = 0
    for label, f in sentences_within(size):
        try:
            reduction = reduce_sm_to_fol(f, bound=3)
        except (NotReducibleError, GroundingError):
            continue
        reduced += 1
        for interp in interpretations(Signature.of(f), size):
            assert evaluate(sm(f), interp) == evaluate(reduction.formula, interp), (label, interp.render())
    assert reduced >= 10


@pytest.mark.parametrize("name", ["insurance", "insurance_marge", "insurance_homer"])
def test_insurance_reductions_are_equivalent_to_sm(corpus, name):
    program = corpus(name)
    f = program.fol_representation()
    reduced = reduce_sm_to_fol(program).formula
    signature = Signature.of(f).merge(Signature.of(reduced))
    for interp in interpretations(signature, 1):
        assert evaluate(sm(f), interp) == evaluate(reduced, interp), interp.render()
