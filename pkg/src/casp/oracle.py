"""Brute-force baselines for checking the engine and the compilers.

Nothing here calls into :mod:`casp.engine` beyond the program dataclasses;
the reduct, fixpoint and minimality checks are written again, naively.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Sequence

from .engine import ClassicalProgram
from .model import EXISTS, Literal, Qbf


class OracleBoundExceeded(Exception):
    pass


DEFAULT_ATOM_BOUND = 16
DEFAULT_NAF_BOUND = 128
QBF_VARIABLE_BOUND = 20


def _consistent(lits: Iterable[Literal]) -> bool:
    s = set(lits)
    return all(Literal(l.atom, not l.positive) not in s for l in s)


def _reduct(p: ClassicalProgram, i: frozenset) -> list[tuple[frozenset, frozenset]]:
    return [(r.head, r.body_pos) for r in p.rules if not (r.body_neg & i)]


def _closure(rules: list[tuple[frozenset, frozenset]]) -> frozenset:
    """Naive iteration of the immediate consequence operator from the empty set."""
    current: set = set()
    while True:
        step = {next(iter(h)) for h, body in rules if body <= current}
        if step <= current:
            return frozenset(current)
        current |= step


def _satisfies(i: frozenset, rules: list[tuple[frozenset, frozenset]]) -> bool:
    return all(not (body <= i) or (head & i) for head, body in rules)


def _subsets(s: frozenset) -> Iterable[frozenset]:
    items = sorted(s)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def check_answer_set(p: ClassicalProgram, i: Iterable[Literal]) -> bool:
    """The textbook condition, with no shortcuts."""
    i = frozenset(i)
    if not _consistent(i):
        return False
    rules = _reduct(p, i)
    if all(len(h) == 1 for h, _ in rules):
        return _closure(rules) == i
    if not _satisfies(i, rules):
        return False
    return not any(sub < i and _satisfies(sub, rules) for sub in _subsets(i))


def _all_interpretations(atoms: Sequence[str]) -> Iterable[frozenset]:
    for signs in itertools.product((None, True, False), repeat=len(atoms)):
        yield frozenset(Literal(a, s) for a, s in zip(atoms, signs) if s is not None)


def _brute(p: ClassicalProgram, bound: int) -> set[frozenset]:
    atoms = sorted(p.atoms())
    if len(atoms) > bound:
        raise OracleBoundExceeded(f"{len(atoms)} atoms exceed the oracle bound of {bound}")
    return {i for i in _all_interpretations(atoms) if check_answer_set(p, i)}


def _search(p: ClassicalProgram, bound: int) -> set[frozenset]:
    """Branch on the literals under ``not``, pruning with lower/upper fixpoints.

    Any answer set ``I`` agreeing with a partial assignment lies between the
    closure of the rules whose naf part is assigned false and the closure of
    the rules not blocked by an assigned-true naf literal.
    """
    if any(len(r.head) != 1 for r in p.rules):
        raise ValueError("search mode handles normal programs only")
    naf = sorted({l for r in p.rules for l in r.body_neg})
    if len(naf) > bound:
        raise OracleBoundExceeded(f"{len(naf)} naf literals exceed the oracle bound of {bound}")
    rules = [(r.head, r.body_pos, r.body_neg) for r in p.rules]
    found: set[frozenset] = set()

    def bounds(true: frozenset, false: frozenset) -> tuple[frozenset, frozenset]:
        lower = _closure([(h, b) for h, b, n in rules if n <= false])
        upper = _closure([(h, b) for h, b, n in rules if not (n & true)])
        return lower, upper

    def go(true: frozenset, false: frozenset) -> None:
        while True:
            lower, upper = bounds(true, false)
            if not true <= upper or false & lower:
                return
            open_ = [l for l in naf if l not in true and l not in false]
            forced_true = {l for l in open_ if l in lower}
            forced_false = {l for l in open_ if l not in upper}
            if not forced_true and not forced_false:
                break
            true, false = true | forced_true, false | forced_false
        if not open_:
            candidate = _closure(_reduct(p, true))
            if candidate & frozenset(naf) == true and check_answer_set(p, candidate):
                found.add(candidate)
            return
        pick = open_[0]
        go(true | {pick}, false)
        go(true, false | {pick})

    go(frozenset(), frozenset())
    return found


def classical_answer_sets(
    p: ClassicalProgram, bound: int | None = None, method: str = "brute"
) -> set[frozenset[Literal]]:
    """All answer sets of a classical program.

    ``brute`` tries every consistent literal set over the program's atoms
    (``bound`` caps the atom count, default 16). ``search`` handles larger
    normal programs by branching on naf literals (``bound`` caps their
    number, default 128); every result still passes the textbook check.
    """
    if method == "brute":
        return _brute(p, DEFAULT_ATOM_BOUND if bound is None else bound)
    if method == "search":
        return _search(p, DEFAULT_NAF_BOUND if bound is None else bound)
    raise ValueError(f"unknown oracle method {method!r}")


def evaluate_prefix(
    blocks: Sequence[tuple[str, Sequence[str]]], matrix: Callable[[Mapping[str, bool]], bool]
) -> bool:
    """Evaluate a quantifier prefix over an arbitrary propositional matrix."""

    def go(k: int, env: dict[str, bool]) -> bool:
        if k == len(blocks):
            return matrix(env)
        quant, names = blocks[k]
        branches = (
            go(k + 1, {**env, **dict(zip(names, values))})
            for values in itertools.product((False, True), repeat=len(names))
        )
        return any(branches) if quant == EXISTS else all(branches)

    return go(0, {})


def dnf_value(matrix: Iterable[frozenset[Literal]], env: Mapping[str, bool]) -> bool:
    return any(all(env[l.atom] == l.positive for l in clause) for clause in matrix)


def qbf_eval(q: Qbf) -> bool:
    """Truth value of a prenex DNF QBF by exhaustive expansion."""
    n = sum(len(vs) for _, vs in q.blocks)
    if n > QBF_VARIABLE_BOUND:
        raise OracleBoundExceeded(f"{n} variables exceed the oracle bound of {QBF_VARIABLE_BOUND}")
    return evaluate_prefix(q.blocks, lambda env: dnf_value(q.matrix, env))
