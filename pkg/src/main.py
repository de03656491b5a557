"""
main.py

Entry point for folf, a toolkit for first-order stable models and loop
formulas.

This file provides the command-line surface that:
- Parses a program file (or, with --formula, a single sentence).
- Computes first-order loops, loop formulas and complete sets of loops.
- Classifies safety and reduces SM[F] to a first-order sentence when possible.
- Grounds, enumerates answer sets and checks stability with a bounded oracle.
- Exports reductions as TPTP FOF problems and optionally runs a prover on them.

Environment variables (read from the environment or a .env file):
- FOLF_PROVER: prover command template with a {file} placeholder
- FOLF_TIMEOUT: prover timeout in seconds (default 30)
- FOLF_MAX_UNIVERSE: largest universe size tried by `entail` (default 3)

See README.md for examples.
"""

import os
import sys
import logging
import argparse

from dotenv import load_dotenv

from pipeline import COMMANDS, run_pipeline


def setup_logging(verbose: bool = False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def check_env(command: str):
    if command == "prove" and not os.environ.get("FOLF_PROVER"):
        logging.warning(
            "FOLF_PROVER is not set. Pass --prover or add it to your environment or .env file."
        )


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        logging.warning("Ignoring non-integer %s=%s", name, os.environ.get(name))
        return default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="folf", description="First-order stable models and loop formulas")
    parser.add_argument("--verbose", action="store_true", help="Log debug output")
    parser.add_argument("--json", action="store_true", help="Print JSON instead of text")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="Program file (or sentence file with --formula)")
    common.add_argument("--formula", action="store_true", help="Input file holds one first-order sentence")
    common.add_argument("--bound", type=int, default=4, help="Loop search bound (atoms and variables)")
    common.add_argument("--no-caps", action="store_true", help="Lift the oracle size caps")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("loops", parents=[common], help="Loops, complete set and loop formulas")
    p.add_argument("--mode", choices=["normal", "as-written"], default="normal",
                   help="Normalize the program first (default) or use it as written")
    sub.add_parser("safety", parents=[common], help="Unsafe variables and complete set status")
    sub.add_parser("reduce", parents=[common], help="First-order sentence equivalent to SM[F]")

    p = sub.add_parser("ground", parents=[common], help="Ground loops and propositional loop formulas")
    p.add_argument("--constants", help="Extra object constants, comma separated")
    p.add_argument("--dump-ground", action="store_true", help="Print the ground program first")

    p = sub.add_parser("answersets", parents=[common], help="Herbrand stable models")
    p.add_argument("--constants", help="Extra object constants, comma separated")

    p = sub.add_parser("check-stable", parents=[common], help="Stability of an interpretation")
    p.add_argument("--herbrand", help="True atoms of a Herbrand interpretation, e.g. 'p(a),q(b)'")
    p.add_argument("--enumerate", type=int, metavar="SIZE", help="List every stable model of this size")
    p.add_argument("--constants", help="Extra object constants, comma separated")

    p = sub.add_parser("entail", parents=[common], help="Bounded check of SM entailment")
    p.add_argument("--query", action="append", help="Query sentence (repeatable)")
    p.add_argument("--max-universe", type=int, default=_env_int("FOLF_MAX_UNIVERSE", 3))

    p = sub.add_parser("export-tptp", parents=[common], help="Write the reduction as TPTP FOF")
    p.add_argument("--query", action="append", help="Conjecture sentence")
    p.add_argument("-o", "--output", help="Output file (default stdout)")

    p = sub.add_parser("prove", parents=[common], help="Export and run an external prover")
    p.add_argument("--query", action="append", help="Conjecture sentence")
    p.add_argument("--prover", help="Command template with {file}, default $FOLF_PROVER")
    p.add_argument("--timeout", type=float, help="Seconds, default $FOLF_TIMEOUT or 30")

    return parser


def main(argv=None):
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors exit 3
        return 0 if e.code == 0 else 3

    setup_logging(args.verbose)
    check_env(args.command)

    if args.command not in COMMANDS:
        logging.error("Unknown command %s", args.command)
        return 3
    return run_pipeline(args)


if __name__ == "__main__":
    raise SystemExit(main())
