from .formula import Atom, Const, Formula, Signature, Var, to_text
from .lp_parser import Program, Rule, parse_formula, parse_program, load_program
from .loops import complete_set, depends_pairs, enumerate_loops, flf, subsumes
from .grounder import ground_program, ground_sentence, prop_loop_formula
from .safety import reduce_sm_to_fol, u_f, unsafe_vars
from .oracle import answer_sets, entails_sm, evaluate, is_stable, stable_models
from .second_order import prop2_form, sm

__all__ = [
    "Atom", "Const", "Formula", "Signature", "Var", "to_text",
    "Program", "Rule", "parse_formula", "parse_program", "load_program",
    "complete_set", "depends_pairs", "enumerate_loops", "flf", "subsumes",
    "ground_program", "ground_sentence", "prop_loop_formula",
    "reduce_sm_to_fol", "u_f", "unsafe_vars",
    "answer_sets", "entails_sm", "evaluate", "is_stable", "stable_models",
    "prop2_form", "sm",
]
