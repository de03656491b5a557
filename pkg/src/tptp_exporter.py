"""
Writes first-order problems in TPTP FOF syntax for external theorem
provers, and maps TPTP formula text back to the input syntax.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from modules.errors import NotFirstOrderError
from modules.formula import (
    And, Atom, Bottom, Eq, Forall, Formula, Implies, Or,
    PredicateQuantifier, Quantifier, Var, conjuncts, free_vars, is_top,
)
from modules.second_order import is_second_order

logger = logging.getLogger(__name__)

_LOWER_WORD = re.compile(r"^[a-z][A-Za-z0-9_]*$")
_UPPER_WORD = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
# TPTP defined words and FOF keywords a symbol must not shadow
_RESERVED = {"fof", "cnf", "tff", "thf", "axiom", "conjecture", "include"}


@dataclass
class TptpProblem:
    axioms: List[Tuple[str, Formula]] = field(default_factory=list)
    conjecture: Optional[Formula] = None

    @classmethod
    def from_formulas(cls, formulas: Sequence[Formula], conjecture: Optional[Formula] = None) -> "TptpProblem":
        """Top-level conjunctions become separate axioms named ax1, ax2, ..."""
        axioms = []
        for f in formulas:
            for part in conjuncts(f):
                if is_top(part):
                    continue
                axioms.append((f"ax{len(axioms) + 1}", part))
        return cls(axioms, conjecture)


class SymbolTable:
    """Maps predicate and constant names to TPTP-legal lower words"""

    def __init__(self):
        self.forward: Dict[str, str] = {}
        self._used = set(_RESERVED)

    def name(self, symbol: str) -> str:
        if symbol in self.forward:
            return self.forward[symbol]
        base = symbol if _LOWER_WORD.match(symbol) else "c" + re.sub(r"[^A-Za-z0-9_]", "_", symbol).lower()
        candidate = base
        n = 1
        while candidate in self._used:
            candidate = f"{base}_{n}"
            n += 1
        self._used.add(candidate)
        self.forward[symbol] = candidate
        return candidate

    @property
    def renamed(self) -> Dict[str, str]:
        return {k: v for k, v in sorted(self.forward.items()) if k != v}


def _check_first_order(f: Formula, label: str):
    if isinstance(f, PredicateQuantifier) or is_second_order(f):
        raise NotFirstOrderError(f"{label}: not first-order reducible")
    if free_vars(f):
        raise NotFirstOrderError(f"{label}: open formula, free variables {', '.join(sorted(free_vars(f)))}")


def _term(t, symbols: SymbolTable) -> str:
    if isinstance(t, Var):
        if not _UPPER_WORD.match(t.name):
            raise NotFirstOrderError(f"variable {t.name} is not a TPTP variable name")
        return t.name
    return symbols.name(t.name)


def formula_to_tptp(f: Formula, symbols: SymbolTable) -> str:
    if isinstance(f, Bottom):
        return "$false"
    if is_top(f):
        return "$true"
    if isinstance(f, Atom):
        name = symbols.name(f.pred)
        if not f.args:
            return name
        return name + "(" + ",".join(_term(a, symbols) for a in f.args) + ")"
    if isinstance(f, Eq):
        return f"{_term(f.lhs, symbols)} = {_term(f.rhs, symbols)}"
    if isinstance(f, And):
        return f"({formula_to_tptp(f.left, symbols)} & {formula_to_tptp(f.right, symbols)})"
    if isinstance(f, Or):
        return f"({formula_to_tptp(f.left, symbols)} | {formula_to_tptp(f.right, symbols)})"
    if isinstance(f, Implies):
        if isinstance(f.right, Bottom):
            if isinstance(f.left, Eq):
                return f"{_term(f.left.lhs, symbols)} != {_term(f.left.rhs, symbols)}"
            if isinstance(f.left, Atom):
                return f"({formula_to_tptp(f.left, symbols)} => $false)"
            return f"~ ({formula_to_tptp(f.left, symbols)})"
        return f"({formula_to_tptp(f.left, symbols)} => {formula_to_tptp(f.right, symbols)})"
    if isinstance(f, Quantifier):
        names = [f.var]
        body = f.body
        while type(body) is type(f):
            names.append(body.var)
            body = body.body
        sign = "!" if isinstance(f, Forall) else "?"
        inner = formula_to_tptp(body, symbols)
        if not isinstance(body, (Atom, Quantifier)) and not inner.startswith("("):
            inner = f"({inner})"
        return f"{sign}[{','.join(names)}]: {inner}"
    raise NotFirstOrderError(f"unrecognized formula type {type(f).__name__}")


def export_tptp(problem: TptpProblem) -> str:
    symbols = SymbolTable()
    lines = []
    for name, f in problem.axioms:
        _check_first_order(f, name)
        lines.append(f"fof({name}, axiom, {formula_to_tptp(f, symbols)}).")
    if problem.conjecture is not None:
        _check_first_order(problem.conjecture, "goal")
        lines.append(f"fof(goal, conjecture, {formula_to_tptp(problem.conjecture, symbols)}).")
    header = [f"% {original} -> {mangled}" for original, mangled in symbols.renamed.items()]
    logger.debug("exported %d axioms, %d renamed symbols", len(problem.axioms), len(header))
    return "\n".join(header + lines) + "\n"


_QUANTIFIER = re.compile(r"([!?])\[([A-Z][A-Za-z0-9_,\s]*)\]\s*:\s*")
_FOF_LINE = re.compile(r"^fof\(\s*\w+\s*,\s*(\w+)\s*,\s*(.*)\)\.\s*$")
_SYMBOL_LINE = re.compile(r"^%\s*(\S+)\s*->\s*(\S+)\s*$")


def tptp_formula_to_text(text: str, symbols: Optional[Dict[str, str]] = None) -> str:
    """TPTP FOF formula text in the input syntax; `symbols` maps mangled
    names back to the originals"""
    def quantifier(m):
        keyword = "forall" if m.group(1) == "!" else "exists"
        names = [n.strip() for n in m.group(2).split(",")]
        return f"{keyword} {' '.join(names)} "

    out = _QUANTIFIER.sub(quantifier, text)
    out = out.replace("=>", "->").replace("$true", "true").replace("$false", "false")
    out = out.replace("~", "-")
    if symbols:
        out = re.sub(r"\b[a-z][A-Za-z0-9_]*\b", lambda m: symbols.get(m.group(0), m.group(0)), out)
    return out


def read_tptp(text: str) -> Tuple[List[str], Optional[str]]:
    """Axioms and conjecture of an exported file, in the input syntax"""
    back = {}
    axioms, goal = [], None
    for line in text.splitlines():
        m = _SYMBOL_LINE.match(line)
        if m:
            back[m.group(2)] = m.group(1)
            continue
        m = _FOF_LINE.match(line)
        if not m:
            continue
        body = tptp_formula_to_text(m.group(2), back)
        if m.group(1) == "conjecture":
            goal = body
        else:
            axioms.append(body)
    return axioms, goal
