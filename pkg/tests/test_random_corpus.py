import random

import pytest

from modules.formula import And, Implies, Signature, iff, is_negative, universal_closure
from modules.loops import flf, nfes, subsumes
from modules.lp_parser import parse_formula, parse_program
from modules.oracle import evaluate, interpretations, prop1_harness
from scripts.random_corpus import (
    PREDICATES, random_corpus, random_extended_program, random_instance,
    random_loop_atoms, random_negative_formula, random_program, random_rule,
)

SIZES = [1, 2, pytest.param(3, marks=pytest.mark.slow)]


def valid(f, size):
    signature = Signature.of(f, ["a"])
    return all(evaluate(f, i) for i in interpretations(signature, size))


def atoms(texts):
    return [parse_formula(t) for t in texts]


def test_random_rules_parse():
    rng = random.Random(3)
    for _ in range(50):
        rule = parse_program(random_rule(rng)).rules[0]
        assert rule.head_atoms[0].pred in PREDICATES


def test_random_programs_use_small_signatures():
    rng = random.Random(5)
    arities = set()
    for _ in range(100):
        signature = parse_program(random_program(rng)).signature
        assert len(signature.predicates) <= 2
        assert len(signature.constants) <= 2
        arities |= {arity for _, arity in signature.predicates}
    assert arities == {1, 2}


def test_corpus_is_reproducible():
    assert random_corpus(5, seed=11) == random_corpus(5, seed=11)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(4))
def test_answer_set_characterizations_agree_on_random_programs(seed):
    for text in random_corpus(25, seed=seed):
        report = prop1_harness(parse_program(text), ["a"])
        assert report.ok, (text, report.disagreements)


# ---------------------------------------------------------------- random lemma suites

@pytest.mark.parametrize("size", SIZES)
def test_nfes_of_random_negative_formulas(size):
    rng = random.Random(17)
    for _ in range(50):
        f = parse_formula(random_negative_formula(rng))
        assert is_negative(f)
        y = atoms(random_loop_atoms(rng))
        assert valid(universal_closure(iff(nfes(f, y), f)), size), (f.render(), y)


@pytest.mark.parametrize("size", SIZES)
def test_efes_agrees_with_nfes_on_random_extended_programs(size):
    rng = random.Random(23)
    for _ in range(50):
        program = parse_program(random_extended_program(rng))
        f = program.fol_representation()
        y = atoms(random_loop_atoms(rng))
        claim = iff(And(f, flf(program, y)), And(f, flf(f, y)))
        assert valid(claim, size), (program.render(), y)


@pytest.mark.parametrize("size", SIZES)
def test_subsumed_loop_formulas_are_entailed_on_random_triples(size):
    rng = random.Random(29)
    for _ in range(100):
        program = parse_program("\n".join(random_rule(rng, {"p": 1, "q": 1}) for _ in range(2)))
        y1 = random_loop_atoms(rng)
        theta, y2 = random_instance(rng, y1)
        assert subsumes(atoms(y1), atoms(y2)) is not None, (y1, theta)
        claim = Implies(flf(program, atoms(y1)), flf(program, atoms(y2)))
        assert valid(claim, size), (program.render(), y1, theta)
