"""
Restricted variables, unsafe variables, the domain-closure formula U_F and
the reduction of SM[F] to a first-order sentence when either a finite
complete set of loops is found or the sentence is safe.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from .errors import GroundingError, NotReducibleError
from .formula import (
    TOP, And, Atom, Bottom, Const, Eq, Forall, Formula, Implies, Or, Quantifier,
    Signature, Var, conj, disj, predicates, quantify, rectify, term_vars,
    to_normal_form,
)
from .grounder import all_atom_sets, ground_atoms, ground_loops_of_graph
from .loops import (
    CompleteSetReport, LoopCandidate, complete_set, dependency_graph, flf,
    loop_text,
)
from .lp_parser import Program

logger = logging.getLogger(__name__)

Subject = Union[Program, Formula]

COMPLETE_SET_PATH = "complete-set"
SAFETY_PATH = "safety"

MAX_SUBSET_ATOMS = 10


def rv(f: Formula) -> FrozenSet[str]:
    """Restricted variables of a rectified formula"""
    if isinstance(f, Atom):
        return frozenset(term_vars(f.args))
    if isinstance(f, Eq):
        if isinstance(f.lhs, Var) and isinstance(f.rhs, Var):
            return frozenset()
        return frozenset(term_vars((f.lhs, f.rhs)))
    if isinstance(f, And):
        return rv(f.left) | rv(f.right)
    if isinstance(f, Or):
        return rv(f.left) & rv(f.right)
    if isinstance(f, Quantifier):
        return rv(f.body) - {f.var}
    return frozenset()


@dataclass
class SafetyReport:
    unsafe_variables: FrozenSet[str]
    # (antecedent, its restricted variables) for every implication visited
    annotations: List[Tuple[str, FrozenSet[str]]] = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not self.unsafe_variables

    def render(self) -> str:
        if self.safe:
            return "safe: no unsafe variables"
        return "unsafe variables: " + ", ".join(sorted(self.unsafe_variables))


def unsafe_vars(f: Formula) -> SafetyReport:
    """A variable is unsafe when it has an occurrence, equalities included,
    that is not inside any G -> H with the variable in RV(G).

    Variables quantified inside a negation -G are local to a classical test
    and never unsafe."""
    f = rectify(f)
    unsafe = set()
    annotations: List[Tuple[str, FrozenSet[str]]] = []

    def walk(g: Formula, protected: FrozenSet[str], negated: bool):
        if isinstance(g, Atom):
            unsafe.update(set(term_vars(g.args)) - protected)
        elif isinstance(g, Eq):
            unsafe.update(set(term_vars((g.lhs, g.rhs))) - protected)
        elif isinstance(g, (And, Or)):
            walk(g.left, protected, negated)
            walk(g.right, protected, negated)
        elif isinstance(g, Implies):
            restricted = rv(g.left)
            annotations.append((g.left.render(), restricted))
            inner = protected | restricted
            walk(g.left, inner, negated or isinstance(g.right, Bottom))
            walk(g.right, inner, negated)
        elif isinstance(g, Quantifier):
            walk(g.body, (protected | {g.var}) if negated else protected, negated)

    walk(f, frozenset(), False)
    return SafetyReport(frozenset(unsafe), annotations)


def _arg_vars(arity: int) -> List[Var]:
    if arity == 1:
        return [Var("X")]
    return [Var(f"X{i}") for i in range(1, arity + 1)]


def u_f(f: Formula, constants: Optional[Iterable[str]] = None, allow_empty: bool = False) -> Formula:
    """forall x (p(x) -> each x is one of the constants), for every predicate"""
    names = sorted(Signature.of(f).constants if constants is None else set(constants))
    preds = sorted(predicates(f).items())
    if not preds:
        return TOP
    if not names and not allow_empty:
        raise GroundingError("U_F needs at least one object constant")
    parts = []
    for pred, arity in preds:
        if arity == 0:
            continue
        xs = _arg_vars(arity)
        named = conj(disj(Eq(x, Const(c)) for c in names) for x in xs)
        parts.append(quantify(Forall, [x.name for x in xs], Implies(Atom(tuple(xs), pred), named)))
    return conj(parts)


@dataclass
class Reduction:
    formula: Formula
    path: str
    loops: List[LoopCandidate]
    loop_formulas: List[Formula]
    safety: SafetyReport
    complete: CompleteSetReport

    def render(self) -> str:
        lines = [f"% reduction via {self.path}, {len(self.loops)} loop formulas"]
        for y, lf in zip(self.loops, self.loop_formulas):
            lines.append(f"% loop {loop_text(y)}")
            lines.append(lf.render())
        return "\n".join(lines)


def _as_formula(subject: Subject) -> Formula:
    return subject.fol_representation() if isinstance(subject, Program) else subject


def _normal_form(subject: Subject) -> Subject:
    if isinstance(subject, Program):
        return subject.normal_form()
    return to_normal_form(rectify(subject))


def _ground_candidate_sets(subject: Subject, f: Formula) -> List[LoopCandidate]:
    atoms = ground_atoms(Signature.of(f), sorted(Signature.of(f).constants))
    if len(atoms) <= MAX_SUBSET_ATOMS:
        return [tuple(y) for y in all_atom_sets(atoms)]
    logger.warning("%d ground atoms; using ground loops instead of all subsets", len(atoms))
    return ground_loops_of_graph(dependency_graph(subject, 0))


def reduce_sm_to_fol(subject: Subject, bound: int = 4) -> Reduction:
    """A first-order sentence equivalent to SM[F], preferring a finite
    complete set of loops over the safety-based construction"""
    f = rectify(_as_formula(subject))
    normal = _normal_form(subject)
    report = complete_set(normal, bound)
    safety = unsafe_vars(f)
    if report.complete:
        lfs = [flf(normal, y) for y in report.loops]
        logger.info("reduced with a complete set of %d loops", len(report.loops))
        return Reduction(conj([f] + lfs), COMPLETE_SET_PATH, list(report.loops), lfs, safety, report)
    if safety.safe:
        loops = _ground_candidate_sets(subject, f)
        lfs = [flf(f, y) for y in loops]
        domain = u_f(f, allow_empty=True)
        logger.info("reduced a safe sentence with %d ground loop formulas", len(loops))
        return Reduction(conj([f, domain] + lfs), SAFETY_PATH, loops, lfs, safety, report)
    raise NotReducibleError(
        f"not reducible under implemented conditions: {safety.render()}; "
        f"complete set search {report.status} at bound {bound}",
        safety=safety, complete=report)
