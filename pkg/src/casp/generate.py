"""Seeded random generators for programs and QBFs (test corpora, ``casp gen``)."""

from __future__ import annotations

import random

from .model import EXISTS, FORALL, CommunicatingProgram, Literal, ProgramClass, Qbf, Rule, SituatedLiteral

COMPONENT_NAMES = ("Q", "R", "S", "T", "U")
ATOM_NAMES = ("a", "b", "c", "d", "e", "f")


def random_program(
    rng: random.Random,
    *,
    max_components: int = 3,
    max_atoms: int = 4,
    max_rules: int = 8,
    max_body: int = 3,
    kind: ProgramClass | str = ProgramClass.NORMAL,
    negation: float = 0.2,
    naf: float = 0.35,
    components: int | None = None,
) -> CommunicatingProgram:
    """A random network whose rules never exceed ``kind``."""
    kind = ProgramClass(kind)
    k = components or rng.randint(1, max_components)
    names = list(COMPONENT_NAMES[:k])
    atoms = list(ATOM_NAMES[: rng.randint(1, max_atoms)])

    def lit(component: str) -> SituatedLiteral:
        return SituatedLiteral(component, Literal(rng.choice(atoms), rng.random() >= negation))

    rules = []
    for _ in range(rng.randint(0, max_rules)):
        owner = rng.choice(names)
        width = rng.randint(1, 2) if kind == ProgramClass.DISJUNCTIVE else 1
        head = {lit(owner) for _ in range(width)}
        pos, neg = set(), set()
        for _ in range(rng.randint(0, max_body)):
            target = owner if rng.random() < 0.5 else rng.choice(names)
            if kind != ProgramClass.SIMPLE and rng.random() < naf:
                neg.add(lit(target))
            else:
                pos.add(lit(target))
        rules.append(Rule(frozenset(head), frozenset(pos), frozenset(neg)))
    return CommunicatingProgram.from_rules(names, rules)


def random_qbf(
    rng: random.Random,
    *,
    max_vars: int = 5,
    max_blocks: int = 3,
    max_clauses: int = 4,
    max_width: int = 3,
    first: str | None = None,
) -> Qbf:
    n_blocks = rng.randint(1, max_blocks)
    n_vars = rng.randint(n_blocks, max(n_blocks, max_vars))
    names = [f"x{i}" for i in range(n_vars)]
    cuts = sorted(rng.sample(range(1, n_vars), n_blocks - 1)) if n_blocks > 1 else []
    edges = [0, *cuts, n_vars]
    start = first or rng.choice((EXISTS, FORALL))
    other = FORALL if start == EXISTS else EXISTS
    blocks = tuple(
        ((start, other)[k % 2], tuple(names[edges[k] : edges[k + 1]])) for k in range(n_blocks)
    )
    matrix = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(max_width, n_vars))
        chosen = rng.sample(names, width)
        matrix.append(frozenset(Literal(v, rng.random() < 0.5) for v in chosen))
    return Qbf(blocks, tuple(matrix))
