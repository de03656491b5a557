"""
Second-order constructions around the stable model operator: F*(u), SM[F],
NES_F(u), Nonempty(u), E_F(v,u), SC_F(u), Loop_F(u) and the two loop-style
characterizations of SM[F].

Predicate variables are named by prefixing the partner predicate: p -> __u_p,
__v_p, __w_p.  Tuple comparisons u<=p, u=p and u<p are expanded on
construction into plain formulas.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence

from .errors import FolfError
from .formula import (
    BOTTOM, And, Atom, AtomicFormula, Bottom, Eq, Exists, Forall, Formula,
    Implies, Or, PredSymbol, PredicateQuantifier, Quantifier, Var, conj, disj,
    iff, is_sentence, neg, predicates, quantify, rectify,
)
from .loops import depends_pairs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredVarAtom(AtomicFormula):
    name: str = ""

    def render(self) -> str:
        args = "(" + ",".join(str(a) for a in self.args) + ")" if self.args else ""
        return self.name + args


@dataclass(frozen=True)
class SOForall(PredicateQuantifier):
    keyword = "forall"

    def render(self) -> str:
        return f"{self.keyword} {' '.join(p.name for p in self.preds)} ({self.body.render()})"


@dataclass(frozen=True)
class SOExists(PredicateQuantifier):
    keyword = "exists"

    def render(self) -> str:
        return f"{self.keyword} {' '.join(p.name for p in self.preds)} ({self.body.render()})"


SecondOrderFormula = Formula


def is_second_order(f: Formula) -> bool:
    if isinstance(f, (PredVarAtom, PredicateQuantifier)):
        return True
    if isinstance(f, (And, Or, Implies)):
        return is_second_order(f.left) or is_second_order(f.right)
    if isinstance(f, Quantifier):
        return is_second_order(f.body)
    return False


def predicate_list(f: Formula) -> List[PredSymbol]:
    """The predicate constants of f, sorted by name"""
    return [PredSymbol(name, arity) for name, arity in sorted(predicates(f).items())]


def pred_vars(preds: Sequence[PredSymbol], prefix: str = "u") -> List[PredSymbol]:
    return [PredSymbol(f"__{prefix}_{p.name}", p.arity, True) for p in preds]


def _arg_vars(arity: int) -> List[Var]:
    if arity == 1:
        return [Var("X")]
    return [Var(f"X{i}") for i in range(1, arity + 1)]


def _pointwise(us: Sequence[PredSymbol], ps: Sequence[PredSymbol], connective) -> Formula:
    parts = []
    for u, p in zip(us, ps):
        xs = _arg_vars(u.arity)
        parts.append(quantify(Forall, [x.name for x in xs], connective(u.atom(xs), p.atom(xs))))
    return conj(parts)


def pred_leq(us: Sequence[PredSymbol], ps: Sequence[PredSymbol]) -> Formula:
    """u <= p"""
    return _pointwise(us, ps, Implies)


def pred_eq(us: Sequence[PredSymbol], ps: Sequence[PredSymbol]) -> Formula:
    """u = p"""
    return _pointwise(us, ps, iff)


def pred_lt(us: Sequence[PredSymbol], ps: Sequence[PredSymbol]) -> Formula:
    """u < p; an empty tuple has no proper sub-tuple"""
    if not us:
        return BOTTOM
    return And(pred_leq(us, ps), neg(pred_eq(us, ps)))


def _partner_map(f: Formula, us: Sequence[PredSymbol]) -> Dict[str, PredSymbol]:
    preds = predicate_list(f)
    if len(preds) != len(us):
        raise FolfError("predicate variables do not pair with the predicates of the formula")
    for p, u in zip(preds, us):
        if p.arity != u.arity:
            raise FolfError(f"predicate variable {u.name} has arity {u.arity}, expected {p.arity}")
    return {p.name: u for p, u in zip(preds, us)}


def star(f: Formula, us: Sequence[PredSymbol]) -> Formula:
    """F*(u)"""
    mapping = _partner_map(f, us)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return mapping[g.pred].atom(g.args)
        if isinstance(g, (Eq, Bottom)):
            return g
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return And(Implies(walk(g.left), walk(g.right)), g)
        if isinstance(g, Quantifier):
            return type(g)(g.var, walk(g.body))
        raise FolfError(f"unexpected node in first-order formula: {g!r}")

    return walk(f)


def sm(f: Formula) -> Formula:
    """SM[F] = F & -exists u ((u < p) & F*(u))"""
    if not is_sentence(f):
        raise FolfError(f"SM is defined for sentences; free variables in {f}")
    ps = predicate_list(f)
    if not ps:
        return f
    us = pred_vars(ps, "u")
    inner = SOExists(tuple(us), And(pred_lt(us, ps), star(f, us)), tuple(ps))
    return And(f, neg(inner))


def nes(f: Formula, us: Sequence[PredSymbol]) -> Formula:
    """NES_F(u)"""
    mapping = _partner_map(f, us)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return And(g, neg(mapping[g.pred].atom(g.args)))
        if isinstance(g, (Eq, Bottom)):
            return g
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return And(Implies(walk(g.left), walk(g.right)), g)
        if isinstance(g, Quantifier):
            return type(g)(g.var, walk(g.body))
        raise FolfError(f"unexpected node in first-order formula: {g!r}")

    return walk(f)


def nonempty(us: Sequence[PredSymbol]) -> Formula:
    parts = []
    for u in us:
        xs = _arg_vars(u.arity)
        parts.append(quantify(Exists, [x.name for x in xs], u.atom(xs)))
    return disj(parts)


def edge_formula(subject, vs: Sequence[PredSymbol], us: Sequence[PredSymbol]) -> Formula:
    """E_F(v,u): some v-atom depends on a u-atom outside v"""
    f = subject if isinstance(subject, Formula) else subject.fol_representation()
    names = [p.name for p in predicate_list(f)]
    v_of = dict(zip(names, vs))
    u_of = dict(zip(names, us))
    parts = []
    for pair in depends_pairs(subject):
        head, body = pair.head, pair.body
        zs = []
        for t in head.args + body.args:
            if isinstance(t, Var) and t.name not in zs:
                zs.append(t.name)
        core = conj([v_of[head.pred].atom(head.args), u_of[body.pred].atom(body.args),
                     neg(v_of[body.pred].atom(body.args))])
        parts.append(quantify(Exists, zs, core))
    return disj(parts)


def sc(subject, us: Sequence[PredSymbol], inner: str = "v") -> Formula:
    """SC_F(u)"""
    f = subject if isinstance(subject, Formula) else subject.fol_representation()
    ps = predicate_list(f)
    vs = pred_vars(ps, inner)
    body = Implies(And(pred_lt(vs, us), nonempty(vs)), edge_formula(subject, vs, us))
    return And(nonempty(us), SOForall(tuple(vs), body, tuple(us)))


def loop_formula_2nd(subject, us: Sequence[PredSymbol]) -> Formula:
    """Loop_F(u) = SC_F(u) | (Nonempty(u) & forall v ((v <= u) & SC_F(v) -> E_F(v,u)))"""
    if not us:
        return BOTTOM
    f = subject if isinstance(subject, Formula) else subject.fol_representation()
    vs = pred_vars(predicate_list(f), "v")
    unbounded = And(nonempty(us), SOForall(
        tuple(vs),
        Implies(And(pred_leq(vs, us), sc(subject, vs, "w")), edge_formula(subject, vs, us)),
        tuple(us)))
    return Or(sc(subject, us), unbounded)


def prop2_form(f: Formula, variant: str) -> Formula:
    """F & forall u ((u <= p) & C(u) -> -NES_F(u)) with C = Nonempty (variant b)
    or C = Loop_F (variant c)"""
    if variant not in ("b", "c"):
        raise FolfError(f"unknown variant {variant!r}")
    f = rectify(f)
    ps = predicate_list(f)
    if not ps:
        return f
    us = pred_vars(ps, "u")
    condition = nonempty(us) if variant == "b" else loop_formula_2nd(f, us)
    body = Implies(And(pred_leq(us, ps), condition), neg(nes(f, us)))
    return And(f, SOForall(tuple(us), body, tuple(ps)))


def second_order_text(f: Formula) -> str:
    return f.render()
