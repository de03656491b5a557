"""
Orchestration behind the command line: parse -> normalize -> loops ->
reduce -> check / export / prove.  Every subcommand returns an exit status:

    0  success, or the query is entailed
    1  not entailed, or a counter-model was found
    2  not reducible under the implemented conditions
    3  usage or parse error
    4  prover timeout or prover unavailable
"""
from __future__ import annotations

import json
import logging
import os
from typing import Callable, Dict, List, Union

from termcolor import colored

from modules.errors import FolfError, NotReducibleError, ParseError, ProverError
from modules.formula import Formula, Signature, atoms_of, constants as formula_constants, universal_closure
from modules.grounder import ground_loops, ground_program, ground_sentence, prop_loop_formula
from modules.loops import complete_set, flf, loop_text, sorted_atoms
from modules.lp_parser import Program, load_program, parse_formula
from modules.oracle import (
    DEFAULT_LIMITS, Interpretation, OracleLimits, answer_sets, entails_sm,
    is_stable, stable_models,
)
from modules.safety import reduce_sm_to_fol, unsafe_vars
from prover_runner import ProverRunner
from tptp_exporter import TptpProblem, export_tptp

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_NOT_REDUCIBLE = 2
EXIT_USAGE = 3
EXIT_PROVER = 4

Subject = Union[Program, Formula]

sep_line = "-" * 60


def load_subject(path: str, as_formula: bool = False) -> Subject:
    """A program file, or with as_formula a file holding one sentence"""
    if not as_formula:
        return load_program(path)
    with open(path, encoding="utf-8") as handle:
        text = handle.read().strip()
    return parse_formula(text[:-1] if text.endswith(".") else text)


def as_formula(subject: Subject) -> Formula:
    return subject.fol_representation() if isinstance(subject, Program) else subject


def _limits(args) -> OracleLimits:
    return OracleLimits.unlimited() if getattr(args, "no_caps", False) else DEFAULT_LIMITS


def _loop_entry(y, f: Formula) -> dict:
    return {"atoms": [a.render() for a in sorted_atoms(y)], "formula_text": f.render()}


def _emit(args, payload: dict, lines: List[str], color: str = "green"):
    if args.json:
        print(json.dumps(payload, indent=2))
        return
    for line in lines:
        print(colored(line, color))


def _queries(args, subject: Subject) -> List[Formula]:
    if getattr(args, "query", None):
        return [universal_closure(parse_formula(q)) for q in args.query]
    if isinstance(subject, Program) and subject.queries:
        return [universal_closure(q) for q in subject.queries]
    raise FolfError("no query given: use --query or a '#query.' section")


def _constants(args) -> List[str]:
    raw = getattr(args, "constants", None) or ""
    return [c.strip() for c in raw.split(",") if c.strip()]


# ---------------------------------------------------------------- subcommands

def cmd_loops(args, subject: Subject) -> int:
    target = subject
    if args.mode == "normal":
        target = subject.normal_form() if isinstance(subject, Program) else subject
    report = complete_set(target, args.bound)
    loops = list(report.loops)
    formulas = [flf(target, y, normalize=args.mode == "normal") for y in loops]
    lines = [f"complete set search: {report.status} (bound {report.bound})"]
    for y, f in zip(loops, formulas):
        lines.append(f"loop {loop_text(y)}")
        lines.append(f"  {f.render()}")
    _emit(args, {
        "status": report.status,
        "certified": report.certified,
        "loops": [_loop_entry(y, f) for y, f in zip(loops, formulas)],
    }, lines, "green" if report.complete else "yellow")
    return EXIT_OK


def cmd_safety(args, subject: Subject) -> int:
    safety = unsafe_vars(as_formula(subject))
    target = subject.normal_form() if isinstance(subject, Program) else subject
    report = complete_set(target, args.bound)
    lines = [safety.render(), f"complete set search: {report.status} (bound {report.bound})"]
    lines.extend(f"  {loop_text(y)}" for y in report.loops)
    _emit(args, {
        "safe": safety.safe,
        "unsafe_variables": sorted(safety.unsafe_variables),
        "complete_set": report.status,
        "loops": [loop_text(y) for y in report.loops],
    }, lines, "green" if safety.safe or report.complete else "yellow")
    return EXIT_OK


def cmd_reduce(args, subject: Subject) -> int:
    reduction = reduce_sm_to_fol(subject, args.bound)
    _emit(args, {
        "path": reduction.path,
        "formula": reduction.formula.render(),
        "loops": [loop_text(y) for y in reduction.loops],
    }, [reduction.render(), sep_line, reduction.formula.render()])
    return EXIT_OK


def cmd_ground(args, subject: Subject) -> int:
    constants = _constants(args)
    if isinstance(subject, Program):
        ground = ground_program(subject, constants)
        text = ground.render()
    else:
        ground = ground_sentence(subject, constants)
        text = ground.render()
    loops = ground_loops(ground)
    formulas = [prop_loop_formula(ground, y) for y in loops]
    lines = [text] if args.dump_ground else []
    lines.extend(f"{loop_text(y)}: {f.render()}" for y, f in zip(loops, formulas))
    _emit(args, {
        "ground": text,
        "loops": [_loop_entry(y, f) for y, f in zip(loops, formulas)],
    }, lines)
    return EXIT_OK


def cmd_answersets(args, subject: Subject) -> int:
    found = answer_sets(subject, _constants(args), _limits(args))
    lines = [m.render() for m in found] or ["no answer sets"]
    _emit(args, {"answer_sets": [m.true_atoms() for m in found]}, lines,
          "green" if found else "yellow")
    return EXIT_OK


def _herbrand_interpretation(text: str, subject: Subject, constants: List[str]) -> Interpretation:
    atoms = []
    if text.strip():
        parsed = parse_formula(" & ".join(_split_atoms(text)))
        atoms = atoms_of(parsed)
        constants = list(constants) + sorted(formula_constants(parsed))
    names = sorted(set(Signature.of(as_formula(subject)).constants) | set(constants))
    return Interpretation.herbrand(atoms, names)


def _split_atoms(text: str) -> List[str]:
    """'p(a),q(b)' -> ['p(a)', 'q(b)'], splitting on top-level commas"""
    parts, depth, current = [], 0, ""
    for ch in text.strip().strip("{}"):
        if ch == "," and depth == 0:
            parts.append(current.strip())
            current = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        current += ch
    if current.strip():
        parts.append(current.strip())
    return parts


def cmd_check_stable(args, subject: Subject) -> int:
    limits = _limits(args)
    if args.enumerate is not None:
        found = stable_models(subject, args.enumerate, _constants(args), limits)
        lines = [m.render() for m in found] or [f"no stable models of size {args.enumerate}"]
        _emit(args, {"size": args.enumerate, "stable_models": [m.render() for m in found]}, lines)
        return EXIT_OK if found else EXIT_NEGATIVE
    interp = _herbrand_interpretation(args.herbrand or "", subject, _constants(args))
    stable = is_stable(as_formula(subject), interp, limits)
    _emit(args, {"interpretation": interp.render(), "stable": stable},
          [f"{interp.render()}: {'stable' if stable else 'not stable'}"],
          "green" if stable else "red")
    return EXIT_OK if stable else EXIT_NEGATIVE


def cmd_entail(args, subject: Subject) -> int:
    reports = [entails_sm(subject, q, args.max_universe, _limits(args)) for q in _queries(args, subject)]
    for r in reports:
        if not args.json:
            print(colored(r.render(), "green" if r.entailed else "red"))
    if args.json:
        print(json.dumps([{
            "query": r.query,
            "entailed": r.entailed,
            "verdicts": {str(k): v for k, v in r.verdicts.items()},
            "counter_model": r.counter_model.render() if r.counter_model else None,
            "label": r.label,
        } for r in reports], indent=2))
    return EXIT_OK if all(r.entailed for r in reports) else EXIT_NEGATIVE


def build_problem(args, subject: Subject) -> TptpProblem:
    reduction = reduce_sm_to_fol(subject, args.bound)
    queries = _queries(args, subject) if (getattr(args, "query", None) or
                                          (isinstance(subject, Program) and subject.queries)) else []
    conjecture = queries[0] if queries else None
    if len(queries) > 1:
        logger.warning("exporting the first of %d queries as the conjecture", len(queries))
    return TptpProblem.from_formulas([reduction.formula], conjecture)


def cmd_export_tptp(args, subject: Subject) -> int:
    text = export_tptp(build_problem(args, subject))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("wrote %s", args.output)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_prove(args, subject: Subject) -> int:
    template = args.prover or os.environ.get("FOLF_PROVER")
    if not template:
        raise ProverError("no prover configured: use --prover or set FOLF_PROVER")
    timeout = args.timeout if args.timeout is not None else float(os.environ.get("FOLF_TIMEOUT", 30))
    problem = build_problem(args, subject)
    if problem.conjecture is None:
        raise FolfError("prove needs a query")
    result = ProverRunner(template, timeout).run(export_tptp(problem))
    _emit(args, {"status": result.status, "exit_code": result.exit_code},
          [f"SZS status {result.status}"],
          {0: "green", 1: "red"}.get(result.exit_code, "yellow"))
    return result.exit_code


COMMANDS: Dict[str, Callable] = {
    "loops": cmd_loops,
    "safety": cmd_safety,
    "reduce": cmd_reduce,
    "ground": cmd_ground,
    "answersets": cmd_answersets,
    "check-stable": cmd_check_stable,
    "entail": cmd_entail,
    "export-tptp": cmd_export_tptp,
    "prove": cmd_prove,
}


def run_pipeline(args) -> int:
    """Run one subcommand on args.input and map failures to exit codes"""
    try:
        subject = load_subject(args.input, args.formula)
    except OSError as e:
        logging.error("cannot read %s: %s", args.input, e)
        return EXIT_USAGE
    except ParseError as e:
        logging.error("parse error: %s", e)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, subject)
    except NotReducibleError as e:
        logging.error("%s", e)
        _emit(args, {
            "reducible": False,
            "unsafe_variables": sorted(e.safety.unsafe_variables) if e.safety else [],
            "complete_set": e.complete.status if e.complete else None,
        }, [str(e)], "red")
        return EXIT_NOT_REDUCIBLE
    except ProverError as e:
        logging.error("prover: %s", e)
        return EXIT_PROVER
    except ParseError as e:
        logging.error("parse error: %s", e)
        return EXIT_USAGE
    except FolfError as e:
        logging.error("%s", e)
        return EXIT_USAGE
