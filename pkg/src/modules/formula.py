"""
Terms, atoms and first-order formulas over a function-free signature, with
closure, substitution, rectification, polarity and normal-form helpers.

All values are immutable.  Negation and truth are sugar: -F is stored as
F -> false and true as false -> false.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import SubstitutionCaptureError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]
Substitution = Dict[str, Term]


def term_key(term: Term) -> Tuple[int, str]:
    """Sort key placing constants before variables"""
    return (0, term.name) if isinstance(term, Const) else (1, term.name)


def _args_text(args: Sequence[Term]) -> str:
    return "(" + ",".join(str(a) for a in args) + ")" if args else ""


@dataclass(frozen=True)
class Formula:
    def __str__(self):
        return self.render()

    def render(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Bottom(Formula):
    def render(self) -> str:
        return "false"


@dataclass(frozen=True)
class AtomicFormula(Formula):
    """Common base of predicate atoms and predicate-variable atoms"""
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Atom(AtomicFormula):
    pred: str = ""

    def render(self) -> str:
        return self.pred + _args_text(self.args)


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term

    def render(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def render(self) -> str:
        return f"({self.left.render()} & {self.right.render()})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def render(self) -> str:
        return f"({self.left.render()} | {self.right.render()})"


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def render(self) -> str:
        if is_top(self):
            return "true"
        if isinstance(self.right, Bottom):
            if isinstance(self.left, Eq):
                return f"{self.left.lhs} != {self.left.rhs}"
            return "-" + self.left.render()
        return f"({self.left.render()} -> {self.right.render()})"


@dataclass(frozen=True)
class Quantifier(Formula):
    var: str
    body: Formula
    keyword = ""

    def render(self) -> str:
        names = [self.var]
        body = self.body
        while type(body) is type(self):
            names.append(body.var)
            body = body.body
        return f"{self.keyword} {' '.join(names)} ({body.render()})"


@dataclass(frozen=True)
class Forall(Quantifier):
    keyword = "forall"


@dataclass(frozen=True)
class Exists(Quantifier):
    keyword = "exists"


@dataclass(frozen=True)
class PredicateQuantifier(Formula):
    """Quantifier over predicate variables; `guard` names the tuple each
    bound variable is compared against (u <= guard), if any."""
    preds: Tuple["PredSymbol", ...]
    body: Formula
    guard: Optional[Tuple["PredSymbol", ...]] = None


@dataclass(frozen=True, order=True)
class PredSymbol:
    """A predicate constant or a predicate variable together with its arity"""
    name: str
    arity: int
    variable: bool = False

    def atom(self, args: Sequence[Term]) -> Formula:
        if self.variable:
            from .second_order import PredVarAtom
            return PredVarAtom(tuple(args), self.name)
        return Atom(tuple(args), self.name)


BOTTOM = Bottom()
TOP = Implies(BOTTOM, BOTTOM)


def atom(pred: str, *args: Term) -> Atom:
    return Atom(tuple(args), pred)


def is_top(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.left, Bottom) and isinstance(f.right, Bottom)


def neg(f: Formula) -> Formula:
    return Implies(f, BOTTOM)


def iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is true"""
    result = None
    for item in items:
        result = item if result is None else And(result, item)
    return TOP if result is None else result


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is false"""
    result = None
    for item in items:
        result = item if result is None else Or(result, item)
    return BOTTOM if result is None else result


def tuple_eq(ts: Sequence[Term], us: Sequence[Term]) -> Formula:
    return conj(Eq(t, u) for t, u in zip(ts, us))


def tuple_neq(ts: Sequence[Term], us: Sequence[Term]) -> Formula:
    return neg(tuple_eq(ts, us))


def quantify(kind, names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = kind(name, body)
    return body


def conjuncts(f: Formula) -> List[Formula]:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


# ---------------------------------------------------------------- variables

def term_vars(terms: Iterable[Term]) -> List[str]:
    seen: List[str] = []
    for t in terms:
        if isinstance(t, Var) and t.name not in seen:
            seen.append(t.name)
    return seen


def free_vars(f: Formula) -> Set[str]:
    if isinstance(f, AtomicFormula):
        return set(term_vars(f.args))
    if isinstance(f, Eq):
        return set(term_vars((f.lhs, f.rhs)))
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    if isinstance(f, PredicateQuantifier):
        return free_vars(f.body)
    return set()


def all_vars(f: Formula) -> Set[str]:
    """Every variable name occurring in f, bound or free"""
    if isinstance(f, AtomicFormula):
        return set(term_vars(f.args))
    if isinstance(f, Eq):
        return set(term_vars((f.lhs, f.rhs)))
    if isinstance(f, (And, Or, Implies)):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, Quantifier):
        return all_vars(f.body) | {f.var}
    if isinstance(f, PredicateQuantifier):
        return all_vars(f.body)
    return set()


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def fresh_name(base: str, taken: Set[str]) -> str:
    """First of stem1, stem2, ... not in `taken`"""
    stem = re.sub(r"\d+$", "", base) or "X"
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def universal_closure(f: Formula) -> Formula:
    return quantify(Forall, sorted(free_vars(f)), f)


# ---------------------------------------------------------------- signature

def predicates(f: Formula) -> Dict[str, int]:
    """Predicate constants of f with their arities"""
    found: Dict[str, int] = {}

    def walk(g: Formula):
        if isinstance(g, Atom):
            found.setdefault(g.pred, len(g.args))
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Quantifier, PredicateQuantifier)):
            walk(g.body)

    walk(f)
    return found


def constants(f: Formula) -> Set[str]:
    found: Set[str] = set()

    def walk(g: Formula):
        if isinstance(g, AtomicFormula):
            found.update(t.name for t in g.args if isinstance(t, Const))
        elif isinstance(g, Eq):
            found.update(t.name for t in (g.lhs, g.rhs) if isinstance(t, Const))
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Quantifier, PredicateQuantifier)):
            walk(g.body)

    walk(f)
    return found


def atoms_of(f: Formula) -> List[Atom]:
    """Predicate atom occurrences in left-to-right order"""
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, (And, Or, Implies)):
        return atoms_of(f.left) + atoms_of(f.right)
    if isinstance(f, (Quantifier, PredicateQuantifier)):
        return atoms_of(f.body)
    return []


@dataclass(frozen=True)
class Signature:
    constants: FrozenSet[str]
    predicates: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, f: Formula, extra_constants: Iterable[str] = ()) -> "Signature":
        return cls(frozenset(constants(f)) | frozenset(extra_constants),
                   tuple(sorted(predicates(f).items())))

    def arity(self, pred: str) -> int:
        return dict(self.predicates)[pred]

    def merge(self, other: "Signature") -> "Signature":
        preds = dict(self.predicates)
        preds.update(other.predicates)
        return Signature(self.constants | other.constants, tuple(sorted(preds.items())))


# ---------------------------------------------------------------- rectified form

def rectify(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Rename bound variables so that binders are pairwise distinct, no bound
    variable is also free, and no bound variable is in `avoid`."""
    taken = free_vars(f) | set(avoid)
    names = all_vars(f) | taken

    def rename_term(t: Term, env: Dict[str, str]) -> Term:
        if isinstance(t, Var) and t.name in env:
            return Var(env[t.name])
        return t

    def walk(g: Formula, env: Dict[str, str]) -> Formula:
        if isinstance(g, AtomicFormula):
            return replace(g, args=tuple(rename_term(t, env) for t in g.args))
        if isinstance(g, Eq):
            return Eq(rename_term(g.lhs, env), rename_term(g.rhs, env))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Quantifier):
            new = g.var
            if new in taken:
                new = fresh_name(g.var, names)
            taken.add(new)
            names.add(new)
            return type(g)(new, walk(g.body, {**env, g.var: new}))
        if isinstance(g, PredicateQuantifier):
            return replace(g, body=walk(g.body, env))
        return g

    return walk(f, {})


def is_rectified(f: Formula) -> bool:
    binders: List[str] = []

    def walk(g: Formula):
        if isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Quantifier):
            binders.append(g.var)
            walk(g.body)
        elif isinstance(g, PredicateQuantifier):
            walk(g.body)

    walk(f)
    return len(binders) == len(set(binders)) and not (set(binders) & free_vars(f))


# ---------------------------------------------------------------- substitution

def _subst_term(t: Term, theta: Substitution) -> Term:
    if isinstance(t, Var) and t.name in theta:
        return theta[t.name]
    return t


def apply_subst(f: Formula, theta: Substitution) -> Formula:
    """Simultaneous replacement of free variables; raises on capture"""
    if not theta:
        return f
    if isinstance(f, AtomicFormula):
        return replace(f, args=tuple(_subst_term(t, theta) for t in f.args))
    if isinstance(f, Eq):
        return Eq(_subst_term(f.lhs, theta), _subst_term(f.rhs, theta))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(apply_subst(f.left, theta), apply_subst(f.right, theta))
    if isinstance(f, Quantifier):
        inner = {k: t for k, t in theta.items() if k != f.var}
        live = free_vars(f.body)
        for key, t in inner.items():
            if key in live and t == Var(f.var):
                raise SubstitutionCaptureError(
                    f"substitution capture: {key} -> {t} under binder {f.var}")
        return type(f)(f.var, apply_subst(f.body, inner))
    if isinstance(f, PredicateQuantifier):
        return replace(f, body=apply_subst(f.body, theta))
    return f


def subst_atom(a: Atom, theta: Substitution) -> Atom:
    return Atom(tuple(_subst_term(t, theta) for t in a.args), a.pred)


# ---------------------------------------------------------------- polarity

def is_negative(f: Formula) -> bool:
    """True iff every predicate occurrence sits in the antecedent of an implication"""

    def walk(g: Formula, in_antecedent: bool) -> bool:
        if isinstance(g, AtomicFormula):
            return in_antecedent
        if isinstance(g, (And, Or)):
            return walk(g.left, in_antecedent) and walk(g.right, in_antecedent)
        if isinstance(g, Implies):
            return walk(g.left, True) and walk(g.right, in_antecedent)
        if isinstance(g, (Quantifier, PredicateQuantifier)):
            return walk(g.body, in_antecedent)
        return True

    return walk(f, False)


@dataclass(frozen=True)
class Occurrence:
    atom: Atom
    antecedents: int
    in_negative: bool

    @property
    def positive(self) -> bool:
        return self.antecedents % 2 == 0

    @property
    def strictly_positive(self) -> bool:
        return self.antecedents == 0


def positive_occurrences(f: Formula) -> List[Occurrence]:
    """Every non-equality atom occurrence of f with its polarity flags"""
    found: List[Occurrence] = []

    def walk(g: Formula, depth: int, in_negative: bool):
        in_negative = in_negative or is_negative(g)
        if isinstance(g, Atom):
            found.append(Occurrence(g, depth, in_negative))
        elif isinstance(g, (And, Or)):
            walk(g.left, depth, in_negative)
            walk(g.right, depth, in_negative)
        elif isinstance(g, Implies):
            walk(g.left, depth + 1, in_negative)
            walk(g.right, depth, in_negative)
        elif isinstance(g, Quantifier):
            walk(g.body, depth, in_negative)

    walk(f, 0, False)
    return found


def strictly_positive_predicates(f: Formula) -> Set[str]:
    return {o.atom.pred for o in positive_occurrences(f) if o.strictly_positive}


def negative_parts_inside(f: Formula) -> bool:
    """True iff every implication occurring in f lies inside a negative subformula"""
    if is_negative(f) and not isinstance(f, Atom):
        return True
    if isinstance(f, Implies):
        return False
    if isinstance(f, (And, Or)):
        return negative_parts_inside(f.left) and negative_parts_inside(f.right)
    if isinstance(f, Quantifier):
        return negative_parts_inside(f.body)
    return True


# ---------------------------------------------------------------- normal form

def to_normal_form(subject, taken: Iterable[str] = ()):
    """Move object constants out of strictly positive atoms.

    Programs delegate to their own `normal_form`; for a formula every strictly
    positive atom p(..c..) becomes forall V (V = c -> p(..V..)).
    """
    if hasattr(subject, "normal_form"):
        return subject.normal_form()
    names = all_vars(subject) | set(taken)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if not any(isinstance(t, Const) for t in g.args):
                return g
            args: List[Term] = []
            guards: List[Formula] = []
            fresh: List[str] = []
            for t in g.args:
                if isinstance(t, Const):
                    name = fresh_name("X", names)
                    names.add(name)
                    fresh.append(name)
                    args.append(Var(name))
                    guards.append(Eq(Var(name), t))
                else:
                    args.append(t)
            return quantify(Forall, fresh, Implies(conj(guards), Atom(tuple(args), g.pred)))
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return Implies(g.left, walk(g.right))
        if isinstance(g, Quantifier):
            return type(g)(g.var, walk(g.body))
        return g

    return walk(subject)


def in_normal_form(subject) -> bool:
    if hasattr(subject, "is_normal_form"):
        return subject.is_normal_form()
    return all(not any(isinstance(t, Const) for t in o.atom.args)
               for o in positive_occurrences(subject) if o.strictly_positive)


def to_text(f: Formula) -> str:
    return f.render()
