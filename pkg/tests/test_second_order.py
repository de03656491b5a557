import pytest

from modules.errors import FolfError
from modules.formula import (
    BOTTOM, And, Atom, Exists, Forall, Implies, Or, Signature, Var, conj, neg,
)
from modules.lp_parser import parse_formula, parse_program
from modules.oracle import evaluate, interpretations, is_stable
from modules.second_order import (
    SOExists, SOForall, PredVarAtom, edge_formula, is_second_order, nes,
    nonempty, pred_leq, pred_lt, pred_vars, predicate_list, prop2_form, sc,
    sm, star,
)

X, Y = Var("X"), Var("Y")

EXAMPLE_COMPLETION = (
    "forall X (p(X) <-> X = a) & forall X (q(X) <-> X = b)"
    " & forall X (r(X) <-> (p(X) & -q(X)))"
)


def _agree_everywhere(f, g, sizes, signature=None):
    signature = signature or Signature.of(f).merge(Signature.of(g))
    for size in sizes:
        for interp in interpretations(signature, size):
            assert evaluate(f, interp) == evaluate(g, interp), interp.render()


def test_star_of_an_implication():
    f = parse_formula("forall X (q(X) -> p(X))")
    us = pred_vars(predicate_list(f))
    starred = star(f, us)
    u_p, u_q = PredVarAtom((X,), "__u_p"), PredVarAtom((X,), "__u_q")
    p, q = Atom((X,), "p"), Atom((X,), "q")
    assert starred == Forall("X", And(Implies(u_q, u_p), Implies(q, p)))


def test_sm_is_second_order_and_closed():
    f = parse_formula("forall X (q(X) -> p(X))")
    g = sm(f)
    assert is_second_order(g)
    assert not is_second_order(f)


def test_sm_requires_a_sentence():
    with pytest.raises(FolfError):
        sm(parse_formula("p(X)"))


def test_sm_without_predicates_is_identity():
    f = parse_formula("forall X (X = X)")
    assert sm(f) == f


def test_empty_tuple_has_no_proper_subtuple():
    assert pred_lt([], []) == BOTTOM


def test_nes_marks_atoms_outside_u():
    f = parse_formula("p(a)")
    us = pred_vars(predicate_list(f))
    assert nes(f, us).render() == "(p(a) & -__u_p(a))"


def test_sm_matches_is_stable(corpus):
    f = corpus("ex1").fol_representation()
    for size in (1, 2):
        for interp in interpretations(Signature.of(f), size):
            assert evaluate(sm(f), interp) == is_stable(f, interp)


def test_sm_of_example_program_is_its_completion(corpus):
    f = corpus("ex1").fol_representation()
    _agree_everywhere(sm(f), parse_formula(EXAMPLE_COMPLETION), (1, 2))


@pytest.mark.slow
def test_sm_of_example_program_is_its_completion_size_three(corpus):
    f = corpus("ex1").fol_representation()
    _agree_everywhere(sm(f), parse_formula(EXAMPLE_COMPLETION), (3,))


@pytest.mark.parametrize("text", [
    "forall X ((q(X) -> p(X)) & (p(X) -> q(X)) & (-r(X) -> p(X)))",
    "forall X forall Y (p(Y) -> p(X))",
    "p(a) & q(b) & forall X ((p(X) & -q(X)) -> r(X))",
    "forall X (p(X) | q(X))",
    "forall X (--p(X) -> p(X))",
])
def test_nonempty_variant_agrees_with_sm(text):
    f = parse_formula(text)
    _agree_everywhere(sm(f), prop2_form(f, "b"), (1, 2))


@pytest.mark.parametrize("text", [
    "forall X ((q(X) -> p(X)) & (p(X) -> q(X)) & (-r(X) -> p(X)))",
    "forall X forall Y (p(Y) -> p(X))",
    "forall X (p(X) | q(X))",
])
def test_loop_variant_agrees_with_sm(text):
    f = parse_formula(text)
    _agree_everywhere(sm(f), prop2_form(f, "c"), (1,))


@pytest.mark.slow
def test_loop_variant_agrees_with_sm_size_two():
    f = parse_formula("forall X forall Y (p(Y) -> p(X))")
    _agree_everywhere(sm(f), prop2_form(f, "c"), (2,))


def test_unknown_variant():
    with pytest.raises(FolfError):
        prop2_form(parse_formula("p(a)"), "d")


# ---------------------------------------------------------------- pqr goldens

PQR = "p(X) :- q(X).\nq(Y) :- p(Y).\np(X) :- not r(X)."


def pqr_symbols():
    f = parse_program(PQR).fol_representation()
    ps = predicate_list(f)
    return f, ps, pred_vars(ps, "u"), pred_vars(ps, "v")


def test_nonempty_of_three_unary_variables():
    _, _, us, _ = pqr_symbols()
    u_p, u_q, u_r = (u.atom((X,)) for u in us)
    assert nonempty(us) == Or(Or(Exists("X", u_p), Exists("X", u_q)), Exists("X", u_r))
    assert nonempty([]) == BOTTOM


def test_edge_formula_of_pqr():
    _, _, us, vs = pqr_symbols()
    u_p, u_q, _ = (u.atom((X,)) for u in us)
    v_p, v_q, _ = (v.atom((X,)) for v in vs)
    u_p_y, _, _ = (u.atom((Y,)) for u in us)
    v_p_y, v_q_y, _ = (v.atom((Y,)) for v in vs)
    expected = Or(Exists("X", conj([v_p, u_q, neg(v_q)])),
                  Exists("Y", conj([v_q_y, u_p_y, neg(v_p_y)])))
    assert edge_formula(parse_program(PQR), vs, us) == expected


def test_strongly_connected_condition_of_pqr():
    program = parse_program(PQR)
    _, _, us, vs = pqr_symbols()
    expected = And(nonempty(us), SOForall(
        tuple(vs),
        Implies(And(pred_lt(vs, us), nonempty(vs)), edge_formula(program, vs, us)),
        tuple(us)))
    assert sc(program, us) == expected


def test_sm_of_pqr_matches_its_simplified_form():
    f, ps, us, _ = pqr_symbols()
    u_p, u_q, _ = (u.atom((X,)) for u in us)
    u_p_y, u_q_y, _ = (u.atom((Y,)) for u in us)
    r = Atom((X,), "r")
    body = Forall("X", Forall("Y", conj([
        Implies(u_q, u_p), Implies(u_p_y, u_q_y), Implies(neg(r), u_p)])))
    simplified = And(f, neg(SOExists(tuple(us), And(pred_lt(us, ps), body), tuple(ps))))
    _agree_everywhere(sm(f), simplified, (1, 2))


def test_nonempty_variant_of_pqr_matches_its_simplified_form():
    f, ps, us, _ = pqr_symbols()
    p, q, r = (Atom((X,), n) for n in "pqr")
    p_y, q_y = Atom((Y,), "p"), Atom((Y,), "q")
    u_p, u_q, _ = (u.atom((X,)) for u in us)
    u_p_y, u_q_y, _ = (u.atom((Y,)) for u in us)
    nes_body = Forall("X", Forall("Y", conj([
        Implies(And(q, neg(u_q)), And(p, neg(u_p))),
        Implies(And(p_y, neg(u_p_y)), And(q_y, neg(u_q_y))),
        Implies(neg(r), And(p, neg(u_p))),
    ])))
    simplified = And(f, SOForall(tuple(us), Implies(And(pred_leq(us, ps), nonempty(us)), neg(nes_body)),
                                 tuple(ps)))
    _agree_everywhere(prop2_form(f, "b"), simplified, (1, 2))


# ---------------------------------------------------------------- sentence corpus

CORPUS_SIZES = [1, 2, pytest.param(3, marks=pytest.mark.slow)]


def test_corpus_has_twenty_sentences(sentence_corpus):
    assert len(sentence_corpus) == 20


@pytest.mark.parametrize("size", CORPUS_SIZES)
def test_nonempty_variant_agrees_with_sm_on_corpus(sentences_within, size):
    for label, f in sentences_within(size):
        for interp in interpretations(Signature.of(f), size):
            assert evaluate(sm(f), interp) == evaluate(prop2_form(f, "b"), interp), (label, interp.render())


@pytest.mark.parametrize("size", [1, pytest.param(2, marks=pytest.mark.slow),
                                  pytest.param(3, marks=pytest.mark.slow)])
def test_loop_variant_agrees_with_sm_on_corpus(sentences_within, size):
    for label, f in sentences_within(size, max_atoms=6):
        for interp in interpretations(Signature.of(f), size):
            assert evaluate(sm(f), interp) == evaluate(prop2_form(f, "c"), interp), (label, interp.render())
