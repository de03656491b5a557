import pytest

from modules.errors import ArityError, ParseError
from modules.formula import (
    BOTTOM, And, Atom, Const, Eq, Exists, Forall, Implies, Or, Var, neg,
)
from modules.lp_parser import (
    DISJUNCTIVE, EXTENDED, NONDISJUNCTIVE, load_program, parse_formula,
    parse_program,
)

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def test_nondisjunctive_rule_with_negation_as_failure():
    program = parse_program("r(X) :- p(X), not q(X).")
    rule = program.rules[0]
    assert rule.kind == NONDISJUNCTIVE
    assert rule.head_atoms == (Atom((X,), "r"),)
    assert rule.positive == (Atom((X,), "p"),)
    assert rule.negative == (neg(Atom((X,), "q")),)
    assert rule.render() == "r(X) :- p(X), not q(X)."


def test_disjunctive_rule():
    program = parse_program("p(X,Y) ; p(Y,Z) :- q(X).")
    assert program.kind == DISJUNCTIVE
    assert program.rules[0].head == Or(Atom((X, Y), "p"), Atom((Y, Z), "p"))


def test_constraint_has_empty_head():
    rule = parse_program(":- p(a).").rules[0]
    assert rule.head_items == ()
    assert rule.head == BOTTOM


def test_extended_rule_with_quantifiers(corpus):
    program = corpus("insurance")
    assert program.kind == EXTENDED
    discount = program.rules[2]
    assert discount.kind == EXTENDED
    assert discount.head == Exists("W", Atom((X, Var("W")), "discount"))
    assert len(program.queries) == 2


def test_implication_outside_negative_part_is_rejected():
    with pytest.raises(ParseError):
        parse_program("(q(X) -> p(X)) :- r(X).")


def test_fol_representation_of_example_program(corpus):
    f = corpus("ex1").fol_representation()
    p_a = Atom((Const("a"),), "p")
    q_b = Atom((Const("b"),), "q")
    body = And(Atom((X,), "p"), neg(Atom((X,), "q")))
    assert f == And(And(p_a, q_b), Forall("X", Implies(body, Atom((X,), "r"))))


def test_normal_form_of_pabc(corpus):
    program = corpus("pabc")
    assert not program.is_normal_form()
    normal = program.normal_form()
    assert normal.is_normal_form()
    assert normal.rules[0].render() == "p(X1) :- X1 = a, p(b)."
    assert normal.rules[1].render() == "p(X1) :- X1 = b, p(c)."


def test_normal_form_of_extended_heads():
    program = parse_program("exists Y gotMarried(marge,Y).\ngotMarried(X,Y) :- spouse(X,Y).\n")
    assert not program.is_normal_form()
    normal = program.normal_form()
    assert normal.is_normal_form()
    rule = normal.rules[0]
    assert rule.kind == EXTENDED
    assert rule.head == Exists("Y", Atom((Var("X1"), Y), "gotMarried"))
    assert rule.body_items == (Eq(Var("X1"), Const("marge")),)
    assert normal.rules[1] == program.rules[1]


def test_normal_form_keeps_constants_of_negative_heads():
    program = parse_program("(p(a) | -q(b)) :- r.")
    rule = program.normal_form().rules[0]
    assert rule.head == Or(Atom((Var("X1"),), "p"), neg(Atom((Const("b"),), "q")))
    assert rule.body_items == (Eq(Var("X1"), Const("a")), Atom((), "r"))


@pytest.mark.parametrize("name", ["insurance_marge", "insurance_homer"])
def test_insurance_programs_normalize(corpus, name):
    normal = corpus(name).normal_form()
    assert normal.is_normal_form()
    assert normal.kind == EXTENDED


def test_formula_precedence():
    f = parse_formula("p | q & r -> s")
    p, q, r, s = (Atom((), n) for n in "pqrs")
    assert f == Implies(Or(p, And(q, r)), s)


def test_equality_and_inequality():
    assert parse_formula("X = a") == Eq(X, Const("a"))
    assert parse_formula("X != a") == neg(Eq(X, Const("a")))


def test_arity_clash():
    with pytest.raises(ArityError):
        parse_program("p(a). p(a,b).")


def test_reserved_predicate_names():
    with pytest.raises(ParseError):
        parse_formula("__u_p(X)")


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_program("p(a).\nq(b) :- .")
    assert info.value.line == 2


def test_query_section(corpus):
    program = corpus("insurance_marge")
    assert len(program.rules) == 4
    assert program.queries[1] == Forall("X", Implies(Atom((X, Const("plan1")), "discount"), Eq(X, Const("marge"))))


def test_render_round_trip(programs_dir):
    program = load_program(f"{programs_dir}/pqr.lp")
    assert parse_program(program.render()) == program
