"""
Brute-force semantics over finite universes: classical and second-order
evaluation, stability checks, answer sets, loop-formula batteries and a
bounded check of entailment under the stable model semantics.
Every enumeration is bounded by OracleLimits.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import FolfError, InterpretationError, OracleLimitError
from .formula import (
    BOTTOM, And, Atom, Bottom, Const, Eq, Exists, Forall, Formula,
    Implies, Or, PredSymbol, PredicateQuantifier, Quantifier, Signature, Var,
    apply_subst, conj, disj, is_sentence,
)
from .grounder import (
    all_atom_sets, ground_atoms, ground_loops, ground_program, herbrand_universe,
    prop_loop_formula, simplify,
)
from .loops import canonicalize, enumerate_loops, flf, loop_vars
from .lp_parser import Program
from .second_order import PredVarAtom, pred_vars, predicate_list, star

logger = logging.getLogger(__name__)

Element = Union[int, str]
Tuple_ = Tuple[Element, ...]
Subject = Union[Program, Formula]

ALL_SETS = "all_sets"
SIZE_INDEXED = "size_indexed"
LOOPS = "loops"

BOUNDED_LABEL = "bounded check, not a proof"


@dataclass(frozen=True)
class OracleLimits:
    max_universe_size: int = 4
    max_ground_atoms: int = 16
    max_assignments: int = 200_000

    @classmethod
    def unlimited(cls) -> "OracleLimits":
        return cls(10 ** 6, 10 ** 6, 10 ** 12)

    def check_universe(self, size: int):
        if size > self.max_universe_size:
            raise OracleLimitError(f"universe of size {size} exceeds the cap {self.max_universe_size}")

    def check_atoms(self, count: int, what: str = "ground atoms"):
        if count > self.max_ground_atoms:
            raise OracleLimitError(f"{count} {what} exceed the cap {self.max_ground_atoms}")


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class Interpretation:
    universe: Tuple[Element, ...]
    const_map: Dict[str, Element] = field(default_factory=dict, hash=False)
    pred_ext: Dict[str, FrozenSet[Tuple_]] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.universe:
            raise InterpretationError("the universe of an interpretation is nonempty")
        elements = set(self.universe)
        for name, value in self.const_map.items():
            if value not in elements:
                raise InterpretationError(f"constant {name} mapped outside the universe")
        for pred, ext in self.pred_ext.items():
            if len({len(t) for t in ext}) > 1:
                raise InterpretationError(f"tuples of {pred} have different lengths")
            if any(e not in elements for t in ext for e in t):
                raise InterpretationError(f"extension of {pred} leaves the universe")

    @classmethod
    def herbrand(cls, atoms: Iterable[Atom], constants: Iterable[str]) -> "Interpretation":
        names = tuple(sorted(set(constants)))
        ext: Dict[str, set] = {}
        for a in atoms:
            ext.setdefault(a.pred, set()).add(tuple(t.name for t in a.args))
        return cls(names, {c: c for c in names}, {p: frozenset(v) for p, v in ext.items()})

    def ext(self, pred: str) -> FrozenSet[Tuple_]:
        return self.pred_ext.get(pred, frozenset())

    def with_ext(self, pred_ext: Dict[str, FrozenSet[Tuple_]]) -> "Interpretation":
        return replace(self, pred_ext=dict(pred_ext))

    def value(self, name: str) -> Element:
        try:
            return self.const_map[name]
        except KeyError:
            raise InterpretationError(f"unmapped object constant {name}") from None

    def true_atoms(self) -> List[str]:
        return sorted(f"{p}({','.join(str(e) for e in t)})" if t else p
                      for p, ext in self.pred_ext.items() for t in ext)

    def is_herbrand(self) -> bool:
        return all(k == v for k, v in self.const_map.items()) and set(self.universe) == set(self.const_map)

    def render(self) -> str:
        atoms = "{" + ", ".join(self.true_atoms()) + "}"
        if self.is_herbrand():
            return atoms
        universe = "{" + ",".join(str(e) for e in self.universe) + "}"
        consts = " ".join(f"{c}={v}" for c, v in sorted(self.const_map.items()))
        return f"|I|={universe} {consts} {atoms}".replace("  ", " ")

    def __str__(self):
        return self.render()


Assignment = Dict[str, FrozenSet[Tuple_]]


# ---------------------------------------------------------------- evaluation

def _term(t, interp: Interpretation, env: Dict[str, Element]) -> Element:
    if isinstance(t, Var):
        if t.name not in env:
            raise InterpretationError(f"unbound object variable {t.name}")
        return env[t.name]
    return interp.value(t.name)


def _extension(sym: PredSymbol, interp: Interpretation, assignment: Assignment) -> FrozenSet[Tuple_]:
    if sym.variable:
        return assignment.get(sym.name, frozenset())
    return interp.ext(sym.name)


def _subsets(pool: Sequence[Tuple_]) -> Iterator[FrozenSet[Tuple_]]:
    for k in range(len(pool) + 1):
        for chosen in itertools.combinations(pool, k):
            yield frozenset(chosen)


def _witnesses(q: PredicateQuantifier, interp: Interpretation, assignment: Assignment,
               limits: OracleLimits) -> Iterator[Assignment]:
    """Assignments to the bound predicate variables; a guard limits each one
    to subsets of its partner"""
    pools = []
    for i, u in enumerate(q.preds):
        if q.guard is not None:
            pools.append(sorted(_extension(q.guard[i], interp, assignment)))
        else:
            pools.append(list(itertools.product(interp.universe, repeat=u.arity)))
    limits.check_atoms(sum(len(p) for p in pools), "second-order witness tuples")
    for choice in itertools.product(*[list(_subsets(p)) for p in pools]):
        extended = dict(assignment)
        for u, ext in zip(q.preds, choice):
            extended[u.name] = ext
        yield extended


def evaluate(f: Subject, interp: Interpretation, assignment: Optional[Assignment] = None,
             env: Optional[Dict[str, Element]] = None, limits: OracleLimits = DEFAULT_LIMITS) -> bool:
    """Tarskian satisfaction, including quantifiers over predicate variables"""
    if isinstance(f, Program):
        f = f.fol_representation()
    assignment = assignment or {}

    def holds(g: Formula, env: Dict[str, Element]) -> bool:
        if isinstance(g, Bottom):
            return False
        if isinstance(g, Atom):
            return tuple(_term(t, interp, env) for t in g.args) in interp.ext(g.pred)
        if isinstance(g, PredVarAtom):
            return tuple(_term(t, interp, env) for t in g.args) in assignment.get(g.name, frozenset())
        if isinstance(g, Eq):
            return _term(g.lhs, interp, env) == _term(g.rhs, interp, env)
        if isinstance(g, And):
            return holds(g.left, env) and holds(g.right, env)
        if isinstance(g, Or):
            return holds(g.left, env) or holds(g.right, env)
        if isinstance(g, Implies):
            return not holds(g.left, env) or holds(g.right, env)
        if isinstance(g, Forall):
            return all(holds(g.body, {**env, g.var: e}) for e in interp.universe)
        if isinstance(g, Exists):
            return any(holds(g.body, {**env, g.var: e}) for e in interp.universe)
        if isinstance(g, PredicateQuantifier):
            universal = g.keyword == "forall"
            results = (evaluate(g.body, interp, a, env, limits)
                       for a in _witnesses(g, interp, assignment, limits))
            return all(results) if universal else any(results)
        raise FolfError(f"cannot evaluate {g!r}")

    return holds(f, dict(env or {}))


# ---------------------------------------------------------------- stability

def is_stable(f: Subject, interp: Interpretation, limits: OracleLimits = DEFAULT_LIMITS) -> bool:
    """I |= F and no u < p satisfies F*(u)"""
    if isinstance(f, Program):
        f = f.fol_representation()
    if not evaluate(f, interp, limits=limits):
        return False
    preds = predicate_list(f)
    if not preds:
        return True
    us = pred_vars(preds, "u")
    starred = star(f, us)
    pools = [sorted(interp.ext(p.name)) for p in preds]
    limits.check_atoms(sum(len(p) for p in pools), "true atoms")
    full = tuple(frozenset(p) for p in pools)
    for choice in itertools.product(*[list(_subsets(p)) for p in pools]):
        if choice == full:
            continue
        assignment = {u.name: ext for u, ext in zip(us, choice)}
        if evaluate(starred, interp, assignment, limits=limits):
            return False
    return True


def _herbrand_candidates(atoms: Sequence[Atom]) -> Iterator[Tuple[Atom, ...]]:
    for k in range(len(atoms) + 1):
        yield from itertools.combinations(atoms, k)


def answer_sets(subject: Subject, constants: Iterable[str] = (),
                limits: OracleLimits = DEFAULT_LIMITS) -> List[Interpretation]:
    """Herbrand interpretations satisfying SM[F]"""
    f = subject.fol_representation() if isinstance(subject, Program) else subject
    signature = Signature.of(f, constants)
    universe = herbrand_universe(signature)
    atoms = ground_atoms(signature, universe)
    limits.check_atoms(len(atoms))
    found = []
    for chosen in _herbrand_candidates(atoms):
        interp = Interpretation.herbrand(chosen, universe)
        if is_stable(f, interp, limits):
            found.append(interp)
    logger.debug("%d answer sets among %d candidates", len(found), 2 ** len(atoms))
    return sorted(found, key=lambda i: (len(i.true_atoms()), i.true_atoms()))


# ---------------------------------------------------------------- loop formula batteries

def _fresh_atoms(pred: str, arity: int, count: int, start: int) -> List[Atom]:
    atoms = []
    index = start
    for _ in range(count):
        args = []
        for _ in range(arity):
            args.append(Var("Z" if index == 0 else f"Z{index}"))
            index += 1
        atoms.append(Atom(tuple(args), pred))
    return atoms


def size_indexed_sets(f: Formula, size: int) -> List[Tuple[Atom, ...]]:
    """One set per nonempty set q of predicates, holding size^n atoms of
    each n-ary p in q, all with distinct variables"""
    preds = sorted(Signature.of(f).predicates)
    sets = []
    for k in range(1, len(preds) + 1):
        for chosen in itertools.combinations(preds, k):
            atoms: List[Atom] = []
            for pred, arity in chosen:
                atoms += _fresh_atoms(pred, arity, size ** arity if arity else 1, len(loop_vars(atoms)))
            sets.append(tuple(atoms))
    return sets


def _pool(signature: Signature, variables: int) -> List[Atom]:
    terms = [Const(c) for c in sorted(signature.constants)]
    terms += [Var("Z" if i == 0 else f"Z{i}") for i in range(variables)]
    return [Atom(tuple(args), pred) for pred, arity in signature.predicates
            for args in itertools.product(terms, repeat=arity)]


def bounded_atom_sets(f: Formula, variables: int, max_atoms: Optional[int] = None,
                      limits: OracleLimits = DEFAULT_LIMITS) -> List[Tuple[Atom, ...]]:
    """Nonempty sets of atoms over the constants of f and `variables`
    variables, one per renaming class"""
    pool = _pool(Signature.of(f), variables)
    limits.check_atoms(len(pool), "candidate atoms")
    top = len(pool) if max_atoms is None else min(max_atoms, len(pool))
    seen = {}
    for k in range(1, top + 1):
        for chosen in itertools.combinations(pool, k):
            canonical = canonicalize(chosen)
            seen.setdefault(canonical, canonical)
    return list(seen)


def _check_cost(y: Sequence[Atom], interp: Interpretation, limits: OracleLimits):
    if len(interp.universe) ** len(loop_vars(y)) > limits.max_assignments:
        raise OracleLimitError(f"loop formula over {len(loop_vars(y))} variables is too costly to evaluate")


def battery_sets(f: Formula, interp: Interpretation, mode: str,
                 limits: OracleLimits = DEFAULT_LIMITS) -> List[Tuple[Atom, ...]]:
    size = len(interp.universe)
    if mode == SIZE_INDEXED:
        return size_indexed_sets(f, size)
    if mode == ALL_SETS:
        return bounded_atom_sets(f, size, limits=limits)
    if mode == LOOPS:
        pool = _pool(Signature.of(f), size)
        return enumerate_loops(f, min(len(pool), limits.max_ground_atoms), size)
    raise FolfError(f"unknown battery mode {mode!r}")


def check_flf_battery(f: Subject, interp: Interpretation, mode: str = ALL_SETS,
                      limits: OracleLimits = DEFAULT_LIMITS) -> bool:
    """Does interp satisfy FLF_F(Y) for every Y of the battery?"""
    if isinstance(f, Program):
        f = f.fol_representation()
    for y in battery_sets(f, interp, mode, limits):
        _check_cost(y, interp, limits)
        if not evaluate(flf(f, y), interp, limits=limits):
            logger.debug("loop formula of %s fails", [a.render() for a in y])
            return False
    return True


# ---------------------------------------------------------------- answer set characterizations

CONDITIONS = ("a", "b", "c", "d", "e")


@dataclass
class Prop1Report:
    candidates: int = 0
    models: int = 0
    disagreements: List[Tuple[str, Dict[str, bool]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def prop1_harness(program: Program, constants: Iterable[str] = (), max_set_atoms: int = 3,
                  limits: OracleLimits = DEFAULT_LIMITS) -> Prop1Report:
    """Compare the five characterizations of answer sets on every Herbrand
    model of a nondisjunctive program in normal form.

    (b) uses every set of at most max_set_atoms atoms over |C| variables,
    (c) the first-order loops within the same bounds together with the
    ground loops of Ground(P), which are first-order loops as well."""
    if not program.is_normal_form():
        program = program.normal_form()
    f = program.fol_representation()
    signature = Signature.of(f, constants)
    universe = herbrand_universe(signature)
    atoms = ground_atoms(signature, universe)
    limits.check_atoms(len(atoms))

    ground = ground_program(program, universe)
    ground_loop_sets = ground_loops(ground)
    occurring = {a for y in ground_loop_sets for a in y}

    b_sets = bounded_atom_sets(f, len(universe), max_set_atoms, OracleLimits.unlimited())
    c_sets = enumerate_loops(program, max_set_atoms, len(universe))
    c_sets = list(dict.fromkeys(list(c_sets) + [canonicalize(y) for y in ground_loop_sets]))
    b_formulas = [flf(program, y) for y in b_sets]
    c_formulas = [flf(program, y) for y in c_sets]
    d_formulas = [prop_loop_formula(ground, y) for y in all_atom_sets(atoms)]
    e_formulas = [prop_loop_formula(ground, y) for y in ground_loop_sets]
    e_formulas += [Implies(a, BOTTOM) for a in atoms if a not in occurring]

    report = Prop1Report()
    for chosen in _herbrand_candidates(atoms):
        report.candidates += 1
        interp = Interpretation.herbrand(chosen, universe)
        if not evaluate(f, interp, limits=limits):
            continue
        report.models += 1
        verdicts = {
            "a": is_stable(f, interp, limits),
            "b": all(evaluate(g, interp, limits=limits) for g in b_formulas),
            "c": all(evaluate(g, interp, limits=limits) for g in c_formulas),
            "d": all(evaluate(g, interp, limits=limits) for g in d_formulas),
            "e": all(evaluate(g, interp, limits=limits) for g in e_formulas),
        }
        if len(set(verdicts.values())) > 1:
            report.disagreements.append((interp.render(), verdicts))
    return report


# ---------------------------------------------------------------- stable models by size

def _element_const(e: int) -> Const:
    return Const(f"_{e}")


def _ground_over(f: Formula, universe: Sequence[int], const_map: Dict[str, int]) -> Formula:
    theta_names = {c: _element_const(e) for c, e in const_map.items()}

    def rename(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Atom(tuple(theta_names.get(t.name, t) if isinstance(t, Const) else t for t in g.args), g.pred)
        if isinstance(g, Eq):
            lhs = theta_names.get(g.lhs.name, g.lhs) if isinstance(g.lhs, Const) else g.lhs
            rhs = theta_names.get(g.rhs.name, g.rhs) if isinstance(g.rhs, Const) else g.rhs
            return Eq(lhs, rhs)
        if isinstance(g, (And, Or, Implies)):
            return type(g)(rename(g.left), rename(g.right))
        if isinstance(g, Quantifier):
            instances = [rename(apply_subst(g.body, {g.var: _element_const(e)})) for e in universe]
            return conj(instances) if isinstance(g, Forall) else disj(instances)
        return g

    return simplify(rename(f))


def _possibly_true(g: Formula, atoms: set) -> bool:
    if isinstance(g, Atom):
        return g in atoms
    if isinstance(g, Bottom):
        return False
    if isinstance(g, And):
        return _possibly_true(g.left, atoms) and _possibly_true(g.right, atoms)
    if isinstance(g, Or):
        return _possibly_true(g.left, atoms) or _possibly_true(g.right, atoms)
    return True


def possible_atoms(g: Formula) -> List[Atom]:
    """Least set S closed under: a strictly positive atom whose enclosing
    antecedents are possibly true given S belongs to S.  Every stable model
    of the ground formula g is a subset of S."""
    found: set = set()

    def collect(h: Formula, into: set):
        if isinstance(h, Atom):
            into.add(h)
        elif isinstance(h, (And, Or)):
            collect(h.left, into)
            collect(h.right, into)
        elif isinstance(h, Implies):
            if _possibly_true(h.left, found):
                collect(h.right, into)

    while True:
        new: set = set()
        collect(g, new)
        if new <= found:
            return sorted(found, key=lambda a: (a.pred, [t.name for t in a.args]))
        found |= new


def _classical(g: Formula, model: set) -> bool:
    if isinstance(g, Atom):
        return g in model
    if isinstance(g, Bottom):
        return False
    if isinstance(g, And):
        return _classical(g.left, model) and _classical(g.right, model)
    if isinstance(g, Or):
        return _classical(g.left, model) or _classical(g.right, model)
    if isinstance(g, Implies):
        return not _classical(g.left, model) or _classical(g.right, model)
    raise FolfError(f"not a ground formula: {g!r}")


def _starred(g: Formula, model: set, smaller: set) -> bool:
    if isinstance(g, Atom):
        return g in smaller
    if isinstance(g, Bottom):
        return False
    if isinstance(g, And):
        return _starred(g.left, model, smaller) and _starred(g.right, model, smaller)
    if isinstance(g, Or):
        return _starred(g.left, model, smaller) or _starred(g.right, model, smaller)
    if isinstance(g, Implies):
        return ((not _starred(g.left, model, smaller) or _starred(g.right, model, smaller))
                and _classical(g, model))
    raise FolfError(f"not a ground formula: {g!r}")


def _ground_stable(g: Formula, model: Tuple[Atom, ...]) -> bool:
    chosen = set(model)
    if not _classical(g, chosen):
        return False
    for k in range(len(model)):
        for smaller in itertools.combinations(model, k):
            if _starred(g, chosen, set(smaller)):
                return False
    return True


def stable_models(f: Subject, size: int, constants: Iterable[str] = (),
                  limits: OracleLimits = DEFAULT_LIMITS) -> List[Interpretation]:
    """Every stable interpretation of F with universe {0..size-1}"""
    if isinstance(f, Program):
        f = f.fol_representation()
    if not is_sentence(f):
        raise FolfError("stable models are defined for sentences")
    limits.check_universe(size)
    signature = Signature.of(f, constants)
    names = sorted(signature.constants)
    universe = list(range(size))
    found = []
    for images in itertools.product(universe, repeat=len(names)):
        const_map = dict(zip(names, images))
        g = _ground_over(f, universe, const_map)
        if isinstance(g, Bottom):
            continue
        candidates = possible_atoms(g)
        limits.check_atoms(len(candidates), "possibly true atoms")
        for model in _herbrand_candidates(candidates):
            if not _ground_stable(g, model):
                continue
            ext: Dict[str, set] = {}
            for a in model:
                ext.setdefault(a.pred, set()).add(tuple(int(t.name[1:]) for t in a.args))
            found.append(Interpretation(tuple(universe), const_map,
                                        {p: frozenset(v) for p, v in ext.items()}))
    logger.debug("size %d: %d stable models", size, len(found))
    return found


@dataclass
class EntailmentReport:
    query: str
    verdicts: Dict[int, bool] = field(default_factory=dict)
    counter_model: Optional[Interpretation] = None
    label: str = BOUNDED_LABEL

    @property
    def entailed(self) -> bool:
        return all(self.verdicts.values())

    def render(self) -> str:
        sizes = ", ".join(f"{n}:{'yes' if v else 'no'}" for n, v in sorted(self.verdicts.items()))
        text = f"{self.query}: {'entailed' if self.entailed else 'not entailed'} [{sizes}] ({self.label})"
        if self.counter_model is not None:
            text += f"\n  counter-model: {self.counter_model.render()}"
        return text


def entails_sm(gamma: Subject, query: Formula, max_universe: int = 3,
               limits: OracleLimits = DEFAULT_LIMITS) -> EntailmentReport:
    """Does every stable model of gamma with at most max_universe elements
    satisfy the query?"""
    f = gamma.fol_representation() if isinstance(gamma, Program) else gamma
    extra = Signature.of(query).constants
    report = EntailmentReport(query.render())
    for size in range(1, max_universe + 1):
        verdict = True
        for model in stable_models(f, size, extra, limits):
            if not evaluate(query, model, limits=limits):
                verdict = False
                if report.counter_model is None:
                    report.counter_model = model
                break
        report.verdicts[size] = verdict
        logger.info("size %d: %s", size, "entailed" if verdict else "counter-model found")
    return report


def interpretations(signature: Signature, size: int,
                    limits: OracleLimits = DEFAULT_LIMITS) -> Iterator[Interpretation]:
    """Every interpretation of the signature over {0..size-1}"""
    limits.check_universe(size)
    universe = tuple(range(size))
    names = sorted(signature.constants)
    pools = [list(itertools.product(universe, repeat=arity)) for _, arity in signature.predicates]
    limits.check_atoms(sum(len(p) for p in pools))
    for images in itertools.product(universe, repeat=len(names)):
        const_map = dict(zip(names, images))
        for choice in itertools.product(*[list(_subsets(p)) for p in pools]):
            ext = {pred: chosen for (pred, _), chosen in zip(signature.predicates, choice)}
            yield Interpretation(universe, const_map, ext)
