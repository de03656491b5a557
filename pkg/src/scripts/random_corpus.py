"""
Random nondisjunctive programs for the answer set harness.

Each program draws at most two predicates, unary or binary, and uses at most
two object constants.

    python src/scripts/random_corpus.py --count 100 --seed 7 --out corpus/
"""
import os
import random
import argparse
from typing import Dict, List, Sequence, Tuple

PREDICATES = ("p", "q")
VARIABLES = ("X", "Y")
CONSTANTS = ("a", "b")


def random_signature(rng: random.Random) -> Dict[str, int]:
    names = PREDICATES[:rng.randint(1, len(PREDICATES))]
    return {name: rng.randint(1, 2) for name in names}


def _atom(rng: random.Random, signature: Dict[str, int], constants: Sequence[str]) -> str:
    pred = rng.choice(sorted(signature))
    terms = list(VARIABLES) + list(constants)
    return f"{pred}({','.join(rng.choice(terms) for _ in range(signature[pred]))})"


def random_rule(rng: random.Random, signature: Dict[str, int] = None, constants: Sequence[str] = ("a",),
                max_positive: int = 2, max_negative: int = 1) -> str:
    signature = signature or {"p": 1}
    head = _atom(rng, signature, constants)
    body = [_atom(rng, signature, constants) for _ in range(rng.randint(0, max_positive))]
    body += [f"not {_atom(rng, signature, constants)}" for _ in range(rng.randint(0, max_negative))]
    if not body:
        return f"{head}."
    return f"{head} :- {', '.join(body)}."


def random_program(rng: random.Random, rules: int = 3) -> str:
    signature = random_signature(rng)
    constants = CONSTANTS[:rng.randint(1, len(CONSTANTS))]
    lines = [random_rule(rng, signature, constants) for _ in range(rules)]
    return "\n".join(lines) + "\n"


def random_corpus(count: int, seed: int = 0, rules: int = 3) -> List[str]:
    rng = random.Random(seed)
    return [random_program(rng, rng.randint(1, rules)) for _ in range(count)]


# unary predicates and one proposition for the formula level checks
FORMULA_ATOMS = ("p", "q")
PROPOSITION = "r"
BOUND = ("X", "Y")


def _unary(rng: random.Random, terms: Sequence[str]) -> str:
    if rng.random() < 0.2:
        return PROPOSITION
    return f"{rng.choice(FORMULA_ATOMS)}({rng.choice(terms)})"


def random_formula(rng: random.Random, depth: int = 2, terms: Sequence[str] = ("X", "a")) -> str:
    if depth == 0:
        return _unary(rng, terms)
    pick = rng.randrange(7)
    if pick == 0:
        return _unary(rng, terms)
    if pick == 1:
        return f"-{random_formula(rng, depth - 1, terms)}"
    if pick in (2, 3, 4):
        op = ("&", "|", "->")[pick - 2]
        return f"({random_formula(rng, depth - 1, terms)} {op} {random_formula(rng, depth - 1, terms)})"
    var = rng.choice(BOUND)
    quantifier = "forall" if pick == 5 else "exists"
    return f"{quantifier} {var} ({random_formula(rng, depth - 1, list(terms) + [var])})"


def random_negative_formula(rng: random.Random, depth: int = 2, terms: Sequence[str] = ("X", "a")) -> str:
    """A formula whose predicate occurrences all sit in antecedents"""
    pick = rng.randrange(6) if depth else 0
    if pick == 0:
        return f"-{random_formula(rng, depth, terms)}"
    if pick == 1:
        return "false"
    if pick in (2, 3):
        op = "&" if pick == 2 else "|"
        return (f"({random_negative_formula(rng, depth - 1, terms)} {op} "
                f"{random_negative_formula(rng, depth - 1, terms)})")
    if pick == 4:
        return f"({random_formula(rng, depth - 1, terms)} -> {random_negative_formula(rng, depth - 1, terms)})"
    var = rng.choice(BOUND)
    quantifier = rng.choice(("forall", "exists"))
    return f"{quantifier} {var} ({random_negative_formula(rng, depth - 1, list(terms) + [var])})"


def random_extended_rule(rng: random.Random) -> str:
    terms = ("X", "a")
    heads = [
        lambda: _unary(rng, terms),
        lambda: f"exists Y {rng.choice(FORMULA_ATOMS)}(Y)",
        lambda: f"({_unary(rng, terms)} | {_unary(rng, terms)})",
        lambda: f"({_unary(rng, terms)} & exists Y {rng.choice(FORMULA_ATOMS)}(Y))",
        lambda: f"({_unary(rng, terms)} | -{_unary(rng, terms)})",
    ]
    bodies = [
        lambda: _unary(rng, terms),
        lambda: f"not {_unary(rng, terms)}",
        lambda: f"exists Y {rng.choice(FORMULA_ATOMS)}(Y)",
        lambda: f"not exists Y ({rng.choice(FORMULA_ATOMS)}(Y) & {_unary(rng, terms)})",
        lambda: f"({_unary(rng, terms)} | {_unary(rng, terms)})",
    ]
    head = rng.choice(heads)()
    body = [rng.choice(bodies)() for _ in range(rng.randint(0, 2))]
    if not body:
        return f"{head}."
    return f"{head} :- {', '.join(body)}."


def random_extended_program(rng: random.Random, rules: int = 3) -> str:
    lines = [random_extended_rule(rng) for _ in range(rng.randint(1, rules))]
    return "\n".join(lines) + "\n"


def random_loop_atoms(rng: random.Random, size: int = 2) -> List[str]:
    terms = ("Z", "Z1", "a")
    return [f"{rng.choice(FORMULA_ATOMS)}({rng.choice(terms)})" for _ in range(rng.randint(1, size))]


def random_instance(rng: random.Random, atoms: Sequence[str]) -> Tuple[Dict[str, str], List[str]]:
    """A random substitution on Z and Z1 and the image of the atoms under it"""
    theta = {var: rng.choice(("Z", "Z1", "a")) for var in ("Z", "Z1")}
    image = []
    for text in atoms:
        pred, arg = text[:-1].split("(")
        image.append(f"{pred}({theta.get(arg, arg)})")
    return theta, image


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Write random programs to a directory")
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rules", type=int, default=3)
    parser.add_argument("--out", default="corpus")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for i, text in enumerate(random_corpus(args.count, args.seed, args.rules)):
        path = os.path.join(args.out, f"random_{i:03d}.lp")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"✅ {path}")
