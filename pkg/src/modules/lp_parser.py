"""
Textual input language: first-order formulas, nondisjunctive / disjunctive
programs and extended programs with explicit quantifiers, plus the
FOL-representation of a program.

Concrete syntax
    variables start with an uppercase letter, constants and predicates with a
    lowercase letter; rules end with '.', ':-' separates head and body, ';'
    separates head disjuncts, ',' body literals and 'not' marks negation as
    failure.  Formulas use & | -> <-> - forall exists = != true false.
    '%' starts a comment.  A line '#query.' ends the program; every following
    statement 'formula.' is a query.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import ArityError, FolfError, ParseError
from .formula import (
    BOTTOM, TOP, And, Atom, Bottom, Const, Eq, Exists, Forall, Formula, Implies,
    Or, Quantifier, Signature, Term, Var, all_vars, atoms_of, conj, disj,
    fresh_name, iff, is_negative, is_top, negative_parts_inside, neg,
    in_normal_form, quantify, universal_closure,
)

logger = logging.getLogger(__name__)

NONDISJUNCTIVE = "nondisjunctive"
DISJUNCTIVE = "disjunctive"
EXTENDED = "extended"
_KIND_ORDER = {NONDISJUNCTIVE: 0, DISJUNCTIVE: 1, EXTENDED: 2}

GRAMMAR = r"""
    program: rule*
    queries: (formula ".")*

    rule: head "."              -> fact
        | head ":-" body "."    -> rule
        | ":-" body "."         -> constraint

    head: unary (";" unary)*
    body: group (";" group)*
    group: literal ("," literal)*
    literal: "not" unary        -> naf
           | unary              -> pos

    ?formula: imp
    ?imp: disjunction
        | disjunction "->" imp            -> implies
        | disjunction "<->" disjunction   -> iff
    ?disjunction: conjunction
        | disjunction "|" conjunction     -> or_
    ?conjunction: unary
        | conjunction "&" unary           -> and_
    ?unary: "-" unary                     -> neg
        | "forall" VARIABLE+ qbody        -> forall_
        | "exists" VARIABLE+ qbody        -> exists_
        | atomic
        | term "=" term                   -> eq
        | term "!=" term                  -> neq
    ?qbody: "-" unary                     -> neg
        | "forall" VARIABLE+ qbody        -> forall_
        | "exists" VARIABLE+ qbody        -> exists_
        | atomic
    ?atomic: "(" formula ")"
        | "true"                          -> top
        | "false"                         -> bottom
        | NAME "(" term ("," term)* ")"   -> pred_atom
        | NAME                            -> prop_atom
    ?term: VARIABLE                       -> var
        | NAME                            -> const

    VARIABLE: /[A-Z][A-Za-z0-9_]*/
    NAME: /[a-z][A-Za-z0-9_]*/
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(GRAMMAR, start=["program", "queries", "formula"], parser="lalr")

_QUERY_DIRECTIVE = re.compile(r"^[ \t]*#query[ \t]*\.[ \t]*$", re.MULTILINE)


@dataclass(frozen=True)
class Rule:
    """H <- G with the kind-specific split of the body into B and N"""
    head_items: Tuple[Formula, ...]
    body_items: Tuple[Formula, ...]
    kind: str

    @property
    def head(self) -> Formula:
        return disj(self.head_items)

    @property
    def body(self) -> Formula:
        return conj(self.positive + self.negative) if self.kind != EXTENDED else conj(self.body_items)

    @property
    def head_atoms(self) -> Tuple[Atom, ...]:
        return tuple(h for h in self.head_items if isinstance(h, Atom))

    @property
    def positive(self) -> Tuple[Formula, ...]:
        """B: atoms and equalities of the body"""
        return tuple(b for b in self.body_items if isinstance(b, (Atom, Eq)))

    @property
    def negative(self) -> Tuple[Formula, ...]:
        """N: the negative formulas of the body"""
        return tuple(b for b in self.body_items if not isinstance(b, (Atom, Eq)))

    def implication(self) -> Formula:
        if not self.body_items:
            return self.head
        return Implies(self.body, self.head)

    def variables(self) -> set:
        return all_vars(self.implication())

    def render(self) -> str:
        head = "; ".join(h.render() for h in self.head_items)
        items = [_literal_text(b) for b in self.body_items]
        if not items:
            return f"{head}."
        if not self.head_items:
            return f":- {', '.join(items)}."
        return f"{head} :- {', '.join(items)}."

    def __str__(self):
        return self.render()


def _literal_text(item: Formula) -> str:
    if isinstance(item, Implies) and isinstance(item.right, Bottom) and not is_top(item):
        return "not " + item.left.render()
    return item.render()


def make_rule(head_items: Sequence[Formula], body_items: Sequence[Formula]) -> Rule:
    """Build a rule and infer the most restrictive kind that fits"""
    heads = tuple(h for h in head_items if not isinstance(h, Bottom))
    body = tuple(b for b in body_items if not is_top(b))
    body_ok = all(isinstance(b, (Atom, Eq)) or is_negative(b) for b in body)
    if body_ok and all(isinstance(h, Atom) for h in heads):
        kind = NONDISJUNCTIVE if len(heads) == 1 else DISJUNCTIVE
        return Rule(heads, body, kind)
    for part in heads + body:
        if not negative_parts_inside(part):
            raise ParseError(f"implication outside a negative formula in rule part {part}")
    return Rule(heads, body, EXTENDED)


@dataclass(frozen=True)
class Program:
    rules: Tuple[Rule, ...]
    queries: Tuple[Formula, ...] = field(default=())

    @property
    def kind(self) -> str:
        kinds = [r.kind for r in self.rules] or [NONDISJUNCTIVE]
        return max(kinds, key=_KIND_ORDER.__getitem__)

    @property
    def signature(self) -> Signature:
        return Signature.of(self.fol_representation())

    def fol_representation(self) -> Formula:
        return fol_representation(self)

    def is_normal_form(self) -> bool:
        for r in self.rules:
            if r.kind == EXTENDED:
                if not in_normal_form(r.head):
                    return False
            elif any(isinstance(t, Const) for a in r.head_atoms for t in a.args):
                return False
        return True

    def normal_form(self) -> "Program":
        return Program(tuple(_rule_normal_form(r) for r in self.rules), self.queries)

    def union(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.queries + other.queries)

    def render(self) -> str:
        lines = [r.render() for r in self.rules]
        if self.queries:
            lines.append("#query.")
            lines.extend(q.render() + "." for q in self.queries)
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def _lift_constants(h: Formula, names: set, guards: List[Formula]) -> Formula:
    """Replace constants in the strictly positive atoms of a head by fresh variables"""
    if isinstance(h, Atom):
        args: List[Term] = []
        for t in h.args:
            if isinstance(t, Const):
                name = fresh_name("X", names)
                names.add(name)
                guards.append(Eq(Var(name), t))
                args.append(Var(name))
            else:
                args.append(t)
        return Atom(tuple(args), h.pred)
    if isinstance(h, (And, Or)):
        return type(h)(_lift_constants(h.left, names, guards),
                       _lift_constants(h.right, names, guards))
    if isinstance(h, Quantifier):
        return type(h)(h.var, _lift_constants(h.body, names, guards))
    # negative parts keep their constants
    return h


def _rule_normal_form(r: Rule) -> Rule:
    names = set(r.variables())
    guards: List[Formula] = []
    heads = [_lift_constants(h, names, guards) for h in r.head_items]
    if not guards:
        return r
    return make_rule(heads, guards + list(r.body_items))


def fol_representation(program: Program) -> Formula:
    """Conjunction of the universal closures of the rules, in source order"""
    return conj(universal_closure(r.implication()) for r in program.rules)


@v_args(inline=True)
class _Builder(Transformer):
    def var(self, token):
        return Var(str(token))

    def const(self, token):
        return Const(str(token))

    def pred_atom(self, name, *args):
        return Atom(tuple(args), str(name))

    def prop_atom(self, name):
        return Atom((), str(name))

    def top(self):
        return TOP

    def bottom(self):
        return BOTTOM

    def eq(self, lhs, rhs):
        return Eq(lhs, rhs)

    def neq(self, lhs, rhs):
        return neg(Eq(lhs, rhs))

    def neg(self, f):
        return neg(f)

    def and_(self, f, g):
        return And(f, g)

    def or_(self, f, g):
        return Or(f, g)

    def implies(self, f, g):
        return Implies(f, g)

    def iff(self, f, g):
        return iff(f, g)

    def forall_(self, *items):
        *names, body = items
        return quantify(Forall, [str(n) for n in names], body)

    def exists_(self, *items):
        *names, body = items
        return quantify(Exists, [str(n) for n in names], body)

    def naf(self, f):
        return neg(f)

    def pos(self, f):
        return f

    def group(self, *literals):
        return list(literals)

    def body(self, *groups):
        if len(groups) == 1:
            return groups[0]
        return [disj(conj(g) for g in groups)]

    def head(self, *items):
        return list(items)

    def fact(self, head):
        return make_rule(head, [])

    def rule(self, head, body):
        return make_rule(head, body)

    def constraint(self, body):
        return make_rule([BOTTOM], body)

    def program(self, *rules):
        return list(rules)

    def queries(self, *formulas):
        return list(formulas)


def _parse(text: str, start: str, line_offset: int = 0):
    try:
        tree = _parser.parse(text, start=start)
        return _Builder().transform(tree)
    except UnexpectedInput as error:
        line = getattr(error, "line", 0) or 0
        column = getattr(error, "column", 0) or 0
        raise ParseError("syntax error", line + line_offset if line else 0, column) from error
    except VisitError as error:
        if isinstance(error.orig_exc, FolfError):
            raise error.orig_exc
        raise


def _check_arities(formulas: Iterable[Formula]):
    seen: Dict[str, int] = {}
    for f in formulas:
        for a in atoms_of(f):
            if a.pred.startswith("__"):
                raise ParseError(f"reserved predicate name {a.pred}")
            expected = seen.setdefault(a.pred, len(a.args))
            if expected != len(a.args):
                raise ArityError(f"predicate {a.pred} used with arity {len(a.args)} and {expected}")


def parse_formula(text: str) -> Formula:
    f = _parse(text, "formula")
    _check_arities([f])
    return f


def parse_program(text: str) -> Program:
    match = _QUERY_DIRECTIVE.search(text)
    rule_text, query_text = (text, "") if match is None else (text[:match.start()], text[match.end():])
    rules = tuple(_parse(rule_text, "program"))
    queries: Tuple[Formula, ...] = ()
    if query_text.strip():
        offset = text[:match.end()].count("\n")
        queries = tuple(_parse(query_text, "queries", offset))
    program = Program(rules, queries)
    _check_arities([r.implication() for r in rules] + list(queries))
    logger.debug("parsed %d rules (%s), %d queries", len(rules), program.kind, len(queries))
    return program


def load_program(path: str) -> Program:
    with open(path, encoding="utf-8") as handle:
        return parse_program(handle.read())
