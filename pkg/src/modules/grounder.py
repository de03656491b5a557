"""
Herbrand grounding of programs and sentences, constant folding of ground
equalities, ground loops and propositional loop formulas.
"""
from __future__ import annotations

import itertools
import logging
from typing import Iterable, List, Sequence, Union

import networkx as nx

from .errors import GroundingError
from .formula import (
    BOTTOM, TOP, And, Atom, Bottom, Const, Eq, Forall, Formula,
    Implies, Or, Quantifier, Signature, apply_subst, atoms_of, conj,
    disj, free_vars, is_top, neg,
)
from .lp_parser import Program, make_rule
from .loops import atom_key, depends_pairs, nfes, sorted_atoms, support_formula

logger = logging.getLogger(__name__)

Subject = Union[Program, Formula]


def simplify(f: Formula) -> Formula:
    """Decide ground equalities and fold true/false away"""
    if isinstance(f, Eq):
        if isinstance(f.lhs, Const) and isinstance(f.rhs, Const):
            return TOP if f.lhs == f.rhs else BOTTOM
        return f
    if is_top(f) or not isinstance(f, (And, Or, Implies, Quantifier)):
        return f
    if isinstance(f, Quantifier):
        body = simplify(f.body)
        if f.var not in free_vars(body):
            return body
        return type(f)(f.var, body)
    left, right = simplify(f.left), simplify(f.right)
    if isinstance(f, And):
        if isinstance(left, Bottom) or isinstance(right, Bottom):
            return BOTTOM
        if is_top(left):
            return right
        if is_top(right):
            return left
        return And(left, right)
    if isinstance(f, Or):
        if is_top(left) or is_top(right):
            return TOP
        if isinstance(left, Bottom):
            return right
        if isinstance(right, Bottom):
            return left
        return Or(left, right)
    if isinstance(left, Bottom) or is_top(right):
        return TOP
    if is_top(left):
        return right
    return Implies(left, right)


def herbrand_universe(signature: Signature, extra: Iterable[str] = ()) -> List[str]:
    universe = sorted(set(signature.constants) | set(extra))
    if not universe:
        raise GroundingError("empty Herbrand universe")
    return universe


def ground_atoms(signature: Signature, universe: Sequence[str]) -> List[Atom]:
    """(sigma)^g: every ground non-equality atom over the universe"""
    atoms = []
    for pred, arity in signature.predicates:
        for args in itertools.product([Const(c) for c in universe], repeat=arity):
            atoms.append(Atom(tuple(args), pred))
    return atoms


def _expand(f: Formula, universe: Sequence[str]) -> Formula:
    if isinstance(f, Quantifier):
        instances = [_expand(apply_subst(f.body, {f.var: Const(c)}), universe) for c in universe]
        return conj(instances) if isinstance(f, Forall) else disj(instances)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_expand(f.left, universe), _expand(f.right, universe))
    return f


def ground_sentence(f: Formula, constants: Iterable[str] = ()) -> Formula:
    """Quantifiers become conjunctions / disjunctions over the constants"""
    universe = herbrand_universe(Signature.of(f), constants)
    return simplify(_expand(f, universe))


def ground_program(program: Program, constants: Iterable[str] = ()) -> Program:
    universe = herbrand_universe(program.signature, constants)
    rules = []
    for rule in program.rules:
        names = sorted(free_vars(rule.implication()))
        for values in itertools.product(universe, repeat=len(names)):
            theta = {n: Const(v) for n, v in zip(names, values)}
            body = [simplify(_expand(apply_subst(b, theta), universe)) for b in rule.body_items]
            if any(isinstance(b, Bottom) for b in body):
                continue
            heads = [simplify(_expand(apply_subst(h, theta), universe)) for h in rule.head_items]
            if any(is_top(h) for h in heads):
                continue
            ground = make_rule([h for h in heads if not isinstance(h, Bottom)],
                               [b for b in body if not is_top(b)])
            if ground not in rules:
                rules.append(ground)
    logger.debug("ground program: %d rules over %d constants", len(rules), len(universe))
    return Program(tuple(rules), program.queries)


def _occurring_atoms(subject: Subject) -> List[Atom]:
    f = subject if isinstance(subject, Formula) else subject.fol_representation()
    return sorted_atoms(atoms_of(f))


def ground_dependency_graph(subject: Subject) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(_occurring_atoms(subject))
    for t in depends_pairs(subject):
        graph.add_edge(t.head, t.body)
    return graph


def ground_loops(subject: Subject) -> List[tuple]:
    """Loops of a ground program or ground formula: every singleton of an
    occurring atom plus the strongly connected subsets of its components"""
    return ground_loops_of_graph(ground_dependency_graph(subject))


def ground_loops_of_graph(graph: nx.DiGraph) -> List[tuple]:
    loops = [(a,) for a in sorted(graph.nodes, key=atom_key)]
    for component in nx.strongly_connected_components(graph):
        members = sorted(component, key=atom_key)
        for k in range(2, len(members) + 1):
            for subset in itertools.combinations(members, k):
                if nx.is_strongly_connected(graph.subgraph(subset)):
                    loops.append(subset)
    return loops


def prop_loop_formula(subject: Subject, y: Iterable[Atom]) -> Formula:
    """Loop formula of a set of ground atoms for a ground program or formula"""
    y = sorted_atoms(y)
    if isinstance(subject, Formula):
        consequent = neg(nfes(subject, y, keep_negative=True))
    else:
        consequent = support_formula(subject, y)
    return simplify(Implies(conj(y), consequent))


def all_atom_sets(atoms: Sequence[Atom]):
    for k in range(1, len(atoms) + 1):
        yield from itertools.combinations(atoms, k)


def propositional_loop_battery(f: Formula, constants: Iterable[str] = ()) -> Formula:
    """Conjunction of the loop formulas of all loops of Ground(f)"""
    ground = ground_sentence(f, constants)
    return conj(prop_loop_formula(ground, y) for y in ground_loops(ground))
