"""
First-order dependency templates, loops, subsumption, complete sets of loops
and the external support formulas used to build first-order loop formulas:

    fes_nondisjunctive   support of Y in a nondisjunctive program
    fes_disjunctive      support of Y in a disjunctive program
    nfes                 "negation" of FES for an arbitrary formula
    efes                 support of Y in a program with explicit quantifiers
    flf                  the loop formula, dispatching on the subject
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import FolfError, KindError
from .formula import (
    And, Atom, Bottom, Const, Eq, Exists, Formula, Implies, Or,
    Quantifier, Signature, Substitution, Term, Var, apply_subst, conj, disj,
    free_vars, fresh_name, is_negative, neg, positive_occurrences, quantify,
    rectify, strictly_positive_predicates, subst_atom, term_key, term_vars,
    tuple_neq, universal_closure,
)
from .lp_parser import DISJUNCTIVE, EXTENDED, NONDISJUNCTIVE, Program, Rule, make_rule

logger = logging.getLogger(__name__)

COMPLETE = "complete"
BOUND_EXHAUSTED = "bound-exhausted"

# exhaustive canonical renaming is tried up to this many variables
_MAX_PERMUTED_VARS = 6

Subject = Union[Program, Formula]
LoopCandidate = Tuple[Atom, ...]


@dataclass(frozen=True)
class DependencyTemplate:
    """head depends on body; both share the variable scope of `source`"""
    head: Atom
    body: Atom
    source: int

    def render(self) -> str:
        return f"{self.head} <~ {self.body}"


@dataclass
class CompleteSetReport:
    loops: List[LoopCandidate]
    status: str
    bound: int
    certified: bool = False
    levels: Dict[int, int] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE


# ---------------------------------------------------------------- atom sets

def atom_key(a: Atom):
    return (a.pred, tuple(term_key(t) for t in a.args))


def sorted_atoms(atoms: Iterable[Atom]) -> LoopCandidate:
    return tuple(sorted(set(atoms), key=atom_key))


def loop_vars(atoms: Iterable[Atom]) -> List[str]:
    return term_vars(t for a in atoms for t in a.args)


def loop_text(atoms: Iterable[Atom]) -> str:
    return "{" + ", ".join(a.render() for a in sorted_atoms(atoms)) + "}"


def _loop_var_name(i: int) -> str:
    return "Z" if i == 0 else f"Z{i}"


def canonicalize(atoms: Iterable[Atom]) -> LoopCandidate:
    """Representative of the renaming class of a set of atoms: variables
    are renamed Z, Z1, ... so that the sorted atom tuple is least."""
    atoms = set(atoms)
    names = loop_vars(sorted_atoms(atoms))
    if len(names) > _MAX_PERMUTED_VARS:
        orders = [tuple(range(len(names)))]
    else:
        orders = itertools.permutations(range(len(names)))

    best = None
    for order in orders:
        index = dict(zip(names, order))
        key = tuple(sorted(
            (a.pred, tuple((1, index[t.name]) if isinstance(t, Var) else (0, t.name) for t in a.args))
            for a in atoms))
        if best is None or key < best:
            best = key
    if best is None:
        return ()
    rebuilt = [Atom(tuple(Var(_loop_var_name(v)) if kind == 1 else Const(v)
                          for kind, v in args), pred) for pred, args in best]
    return tuple(rebuilt)


def subsumes(y1: Iterable[Atom], y2: Iterable[Atom]) -> Optional[Substitution]:
    """A substitution theta on the variables of y1 with y1.theta == y2, or None"""
    first = sorted_atoms(y1)
    second = set(y2)
    targets = sorted_atoms(second)

    def extend(i: int, theta: Dict[str, Term], images: set) -> Optional[Dict[str, Term]]:
        if i == len(first):
            return dict(theta) if images == second else None
        a = first[i]
        for b in targets:
            found = _match(a, b, theta)
            if found is None:
                continue
            result = extend(i + 1, found, images | {b})
            if result is not None:
                return result
        return None

    if not first:
        return {} if not second else None
    return extend(0, {}, set())


def _match(pattern: Atom, target: Atom, theta: Optional[Dict[str, Term]] = None) -> Optional[Dict[str, Term]]:
    """One-way matching of pattern onto target extending theta"""
    if pattern.pred != target.pred or len(pattern.args) != len(target.args):
        return None
    theta = dict(theta or {})
    for s, t in zip(pattern.args, target.args):
        if isinstance(s, Var):
            bound = theta.setdefault(s.name, t)
            if bound != t:
                return None
        elif s != t:
            return None
    return theta


def equivalent(y1: Iterable[Atom], y2: Iterable[Atom]) -> bool:
    return subsumes(y1, y2) is not None and subsumes(y2, y1) is not None


# ---------------------------------------------------------------- dependencies

def _strict_implications(f: Formula) -> List[Implies]:
    found: List[Implies] = []

    def walk(g: Formula):
        if isinstance(g, Implies):
            found.append(g)
            walk(g.right)
        elif isinstance(g, (And, Or)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Quantifier):
            walk(g.body)

    walk(f)
    return found


def formula_depends_pairs(f: Formula) -> List[DependencyTemplate]:
    """Pairs (p(t), q(t')) with p(t) weakly depending on q(t') in an implication
    that has a strictly positive occurrence in f"""
    f = rectify(f)
    pairs: List[DependencyTemplate] = []
    for index, implication in enumerate(_strict_implications(f)):
        heads = [o.atom for o in positive_occurrences(implication.right) if o.strictly_positive]
        bodies = [o.atom for o in positive_occurrences(implication.left)
                  if o.positive and not o.in_negative]
        for h in heads:
            for b in bodies:
                template = DependencyTemplate(h, b, index)
                if template not in pairs:
                    pairs.append(template)
    return pairs


def depends_pairs(subject: Subject) -> List[DependencyTemplate]:
    if isinstance(subject, Formula):
        return formula_depends_pairs(subject)
    if subject.kind == EXTENDED:
        return formula_depends_pairs(subject.fol_representation())
    pairs: List[DependencyTemplate] = []
    for index, rule in enumerate(subject.rules):
        for h in rule.head_atoms:
            for b in rule.positive:
                if isinstance(b, Atom):
                    pairs.append(DependencyTemplate(h, b, index))
    return pairs


def _signature(subject: Subject) -> Signature:
    if isinstance(subject, Formula):
        return Signature.of(subject)
    return subject.signature


def predicate_graph(templates: Sequence[DependencyTemplate]) -> nx.DiGraph:
    graph = nx.DiGraph()
    for t in templates:
        graph.add_edge(t.head.pred, t.body.pred)
    return graph


def _recursive_templates(templates: Sequence[DependencyTemplate]) -> List[DependencyTemplate]:
    graph = predicate_graph(templates)
    component = {}
    for scc in nx.strongly_connected_components(graph):
        for pred in scc:
            component[pred] = frozenset(scc)
    return [t for t in templates
            if component[t.head.pred] == component[t.body.pred]
            and (t.head.pred == t.body.pred or len(component[t.head.pred]) > 1)]


def is_certified(subject: Subject) -> bool:
    """Recursive dependencies never introduce variables absent from the head.

    Along a cycle every atom then has the terms of its predecessor, so each
    loop is built from at most max-arity variables and the loops form a
    finite set up to renaming."""
    for t in _recursive_templates(depends_pairs(subject)):
        if not set(term_vars(t.body.args)) <= set(term_vars(t.head.args)):
            return False
    return True


# ---------------------------------------------------------------- loop enumeration

def _pool(signature: Signature, max_vars: int) -> List[Atom]:
    terms: List[Term] = [Const(c) for c in sorted(signature.constants)]
    terms += [Var(_loop_var_name(i)) for i in range(max_vars)]
    atoms = []
    for pred, arity in signature.predicates:
        for args in itertools.product(terms, repeat=arity):
            atoms.append(Atom(tuple(args), pred))
    return atoms


def dependency_graph(subject: Subject, max_vars: int) -> nx.DiGraph:
    """The first-order dependency graph restricted to atoms over the
    constants of the subject and max_vars variables"""
    templates = depends_pairs(subject)
    graph = nx.DiGraph()
    pool = _pool(_signature(subject), max_vars)
    graph.add_nodes_from(pool)
    for a in pool:
        for b in pool:
            for t in templates:
                theta = _match(t.head, a)
                if theta is not None and _match(t.body, b, theta) is not None:
                    graph.add_edge(a, b)
                    break
    return graph


def _loops_of_size(graph: nx.DiGraph, components: List[set], k: int, max_vars: int):
    for component in components:
        if len(component) < k:
            continue
        for subset in itertools.combinations(sorted(component, key=atom_key), k):
            if len(loop_vars(subset)) > max_vars:
                continue
            if k == 1 or nx.is_strongly_connected(graph.subgraph(subset)):
                yield subset


def enumerate_loops(subject: Subject, max_atoms: int, max_vars: int) -> List[LoopCandidate]:
    """Loops with at most max_atoms atoms and max_vars variables, one per
    renaming class, ordered by size and canonical form"""
    if isinstance(subject, Program) and not subject.is_normal_form():
        logger.warning("enumerating loops of a program that is not in normal form")
    graph = dependency_graph(subject, max_vars)
    components = [set(c) for c in nx.strongly_connected_components(graph)]
    found = {}
    for k in range(1, max_atoms + 1):
        for subset in _loops_of_size(graph, components, k, max_vars):
            canonical = canonicalize(subset)
            found.setdefault(canonical, canonical)
    return sorted(found, key=lambda y: (len(y), [atom_key(a) for a in y]))


def _keep_maximal(kept: List[LoopCandidate], candidate: LoopCandidate) -> bool:
    if any(subsumes(y, candidate) is not None for y in kept):
        return False
    kept[:] = [y for y in kept if subsumes(candidate, y) is None]
    kept.append(candidate)
    return True


def complete_set(subject: Subject, bound: int) -> CompleteSetReport:
    """Search for a finite complete set of loops.

    When the subject is certified the loops live in a finite graph over
    max-arity variables and are enumerated level by level up to the size of
    its largest strongly connected component; the set is then complete.
    Otherwise levels run up to `bound` with max_vars growing with the level
    and the report says bound-exhausted."""
    signature = _signature(subject)
    arity = max((a for _, a in signature.predicates), default=0)
    certified = is_certified(subject)
    kept: List[LoopCandidate] = []
    levels: Dict[int, int] = {}

    if certified:
        graph = dependency_graph(subject, arity)
        components = [set(c) for c in nx.strongly_connected_components(graph)]
        largest = max((len(c) for c in components), default=0)
        top = min(largest, bound)
        for k in range(1, top + 1):
            added = 0
            for subset in _loops_of_size(graph, components, k, arity):
                added += _keep_maximal(kept, canonicalize(subset))
            levels[k] = added
            logger.debug("loop level %d: %d new", k, added)
        status = COMPLETE if largest <= bound else BOUND_EXHAUSTED
    else:
        for k in range(1, bound + 1):
            max_vars = min(k * max(arity, 1), bound)
            graph = dependency_graph(subject, max_vars)
            components = [set(c) for c in nx.strongly_connected_components(graph)]
            added = 0
            for subset in _loops_of_size(graph, components, k, max_vars):
                added += _keep_maximal(kept, canonicalize(subset))
            levels[k] = added
            logger.debug("loop level %d: %d new", k, added)
        status = BOUND_EXHAUSTED

    if status == BOUND_EXHAUSTED:
        logger.warning("no finite complete set of loops certified within bound %d", bound)
    kept.sort(key=lambda y: (len(y), [atom_key(a) for a in y]))
    return CompleteSetReport(kept, status, bound, certified, levels)


# ---------------------------------------------------------------- external support

def rename_rule(rule: Rule, avoid: Iterable[str]) -> Rule:
    """Rename the variables of a rule so that none is in `avoid`"""
    avoid = set(avoid)
    names = rule.variables() | avoid
    theta: Dict[str, Term] = {}
    for name in sorted(free_vars(rule.implication()) & avoid):
        new = fresh_name(name, names)
        names.add(new)
        theta[name] = Var(new)
    guard = avoid | {t.name for t in theta.values()}

    def fix(item: Formula) -> Formula:
        return rectify(apply_subst(item, theta), guard)

    return make_rule([fix(h) for h in rule.head_items], [fix(b) for b in rule.body_items])


def _head_substitutions(rule: Rule, y: LoopCandidate) -> List[Dict[str, Term]]:
    """Substitutions mapping the variables of one head atom onto a member of Y;
    the other head variables are left in place"""
    found: List[Dict[str, Term]] = []
    for h in rule.head_atoms:
        for target in y:
            theta = _match(h, target)
            if theta is not None and theta not in found:
                found.append(theta)
    return found


def _within_loop(atoms: Iterable[Formula], y: LoopCandidate) -> List[Formula]:
    return [tuple_neq(a.args, t.args) for a in atoms if isinstance(a, Atom)
            for t in y if t.pred == a.pred]


def _program_support(program: Program, y: LoopCandidate, disjunctive: bool) -> Formula:
    y_vars = set(loop_vars(y))
    disjuncts: List[Formula] = []
    for rule in program.rules:
        r = rename_rule(rule, y_vars)
        for theta in _head_substitutions(r, y):
            heads = [subst_atom(a, theta) for a in r.head_atoms]
            positive = [apply_subst(b, theta) for b in r.positive]
            negative = [apply_subst(n, theta) for n in r.negative]
            parts = positive + negative + _within_loop(positive, y)
            if disjunctive:
                outside = [h for h in heads if h not in y]
                if outside:
                    parts.append(neg(disj(conj([h] + _within_loop([h], y)) for h in outside)))
            scope = set()
            for item in heads + positive + negative:
                scope |= free_vars(item)
            zs = sorted(scope - y_vars)
            disjunct = quantify(Exists, zs, conj(parts))
            if disjunct not in disjuncts:
                disjuncts.append(disjunct)
    return disj(disjuncts)


def fes_nondisjunctive(program: Program, y: Iterable[Atom]) -> Formula:
    if program.kind != NONDISJUNCTIVE:
        raise KindError(f"expected a nondisjunctive program, got a {program.kind} one")
    return _program_support(program, sorted_atoms(y), disjunctive=False)


def fes_disjunctive(program: Program, y: Iterable[Atom]) -> Formula:
    if program.kind == EXTENDED:
        raise KindError("expected a disjunctive program, got an extended one")
    return _program_support(program, sorted_atoms(y), disjunctive=True)


def nfes(f: Formula, y: Iterable[Atom], keep_negative: bool = False) -> Formula:
    """NFES_F(Y).  With keep_negative, negative subformulas are kept as they are,
    which yields an equivalent formula of linear size."""
    y = sorted_atoms(y)
    f = rectify(f, loop_vars(y))

    def walk(g: Formula) -> Formula:
        if keep_negative and not isinstance(g, Atom) and is_negative(g):
            return g
        if isinstance(g, Atom):
            return conj([g] + _within_loop([g], y))
        if isinstance(g, (Eq, Bottom)):
            return g
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return And(Implies(walk(g.left), walk(g.right)), g)
        if isinstance(g, Quantifier):
            return type(g)(g.var, walk(g.body))
        raise FolfError(f"NFES is defined for first-order formulas, got {g!r}")

    return walk(f)


def efes(program: Program, y: Iterable[Atom]) -> Formula:
    y = sorted_atoms(y)
    y_vars = set(loop_vars(y))
    y_preds = {a.pred for a in y}
    disjuncts: List[Formula] = []
    for rule in program.rules:
        r = rename_rule(rule, y_vars)
        if not strictly_positive_predicates(r.head) & y_preds:
            continue
        unsupported = neg(nfes(r.head, y, keep_negative=True))
        core = And(nfes(r.body, y, keep_negative=True), unsupported) if r.body_items else unsupported
        zs = sorted(free_vars(r.implication()) - y_vars)
        disjunct = quantify(Exists, zs, core)
        if disjunct not in disjuncts:
            disjuncts.append(disjunct)
    return disj(disjuncts)


def support_formula(program: Program, y: Iterable[Atom]) -> Formula:
    kind = program.kind
    if kind == NONDISJUNCTIVE:
        return fes_nondisjunctive(program, y)
    if kind == DISJUNCTIVE:
        return fes_disjunctive(program, y)
    return efes(program, y)


def flf(subject: Subject, y: Iterable[Atom], normalize: bool = True) -> Formula:
    """Universal closure of  /\\Y -> support  for a program, or of
    /\\Y -> -NFES_F(Y) for a formula"""
    y = sorted_atoms(y)
    if not y:
        raise FolfError("loop formulas are defined for nonempty sets of atoms")
    if isinstance(subject, Formula):
        consequent = neg(nfes(subject, y))
    else:
        program = subject
        if normalize and not program.is_normal_form():
            program = program.normal_form()
        consequent = support_formula(program, y)
    return universal_closure(Implies(conj(y), consequent))


def loop_formulas(subject: Subject, loops: Iterable[Iterable[Atom]], normalize: bool = True) -> List[Formula]:
    return [flf(subject, y, normalize) for y in loops]
