import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))

from modules.formula import predicates  # noqa: E402
from modules.lp_parser import load_program, parse_formula  # noqa: E402

PROGRAMS = os.path.join(ROOT, "programs")


@pytest.fixture
def programs_dir():
    return PROGRAMS


@pytest.fixture
def corpus():
    """load a program from programs/ by stem, e.g. corpus("pqr")"""
    def load(name):
        return load_program(os.path.join(PROGRAMS, f"{name}.lp"))
    return load


def load_sentences():
    """programs/sentences.txt plus the FOL-representations of the named programs"""
    found = []
    for name in ("pqr", "pxy", "ex1", "disj"):
        found.append((name, load_program(os.path.join(PROGRAMS, f"{name}.lp")).fol_representation()))
    with open(os.path.join(PROGRAMS, "sentences.txt"), encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("%"):
                found.append((line, parse_formula(line.rstrip("."))))
    return found


@pytest.fixture(scope="session")
def sentence_corpus():
    return load_sentences()


@pytest.fixture(scope="session")
def sentences_within(sentence_corpus):
    """corpus members with at most max_atoms ground atoms over a universe of the given size"""
    def pick(size, max_atoms=9):
        return [(label, f) for label, f in sentence_corpus
                if sum(size ** arity for arity in predicates(f).values()) <= max_atoms]
    return pick
