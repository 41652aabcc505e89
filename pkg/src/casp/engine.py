"""Answer-set semantics for classical and communicating programs.

The classical layer (reduct, least fixpoint, minimal models) is what each
component reduces to once a guess has been fixed. The communicating layer adds
the situated reduct, the answer-set check, the least fixpoint of simple
networks and exhaustive enumeration.

Enumeration is guess-and-check. Three candidate spaces are available:

``decisive`` (default)
    Only the situated literals that can change some reduct are guessed: those
    under ``not`` and the non-local positive body literals. A component's reduct
    depends on nothing else, so each guess fixes every reduct; the candidate is
    then assembled from the reducts' fixpoints / minimal models, kept only if it
    reproduces the guess, and confirmed with :func:`is_answer_set`. Guesses
    are built one atom at a time; partial guesses whose lower/upper closure
    bounds already contradict them are cut off.
``head``
    Every consistent subset of the head-supported situated literals.
``naive``
    Every consistent subset of the literal base. Used to validate the pruning.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence

from .model import (
    CommunicatingProgram,
    ComponentProgram,
    Literal,
    ProgramClass,
    SituatedLiteral,
    herbrand_base,
    interpretation_key,
    is_consistent,
    literal_base,
    project,
)

DEFAULT_BOUND = 24
STRATEGIES = ("decisive", "head", "naive")


class InconsistentFixpoint(Exception):
    """The least fixpoint contains a complementary pair."""

    def __init__(self, fixpoint: Iterable) -> None:
        self.fixpoint = frozenset(fixpoint)
        clash = sorted(str(x) for x in self.fixpoint if -x in self.fixpoint)
        super().__init__("inconsistent fixpoint: " + ", ".join(clash))


class BoundExceeded(Exception):
    def __init__(self, size: int, bound: int, what: str = "guessed literals") -> None:
        self.size = size
        self.bound = bound
        super().__init__(f"{size} {what} exceed the enumeration bound of {bound}")


@dataclass(frozen=True)
class ClassicalRule:
    head: frozenset[Literal]
    body_pos: frozenset[Literal] = frozenset()
    body_neg: frozenset[Literal] = frozenset()

    def __post_init__(self) -> None:
        for name in ("head", "body_pos", "body_neg"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    def sort_key(self) -> tuple:
        return tuple(tuple(x.sort_key() for x in sorted(part)) for part in (self.head, self.body_pos, self.body_neg))

    def __str__(self) -> str:
        head = " ; ".join(str(h) for h in sorted(self.head))
        body = [str(b) for b in sorted(self.body_pos)] + ["not " + str(b) for b in sorted(self.body_neg)]
        return f"{head} :- {', '.join(body)}." if body else f"{head}."


@dataclass(frozen=True)
class ClassicalProgram:
    rules: tuple[ClassicalRule, ...] = ()
    kind: ProgramClass | None = field(default=None)

    def __post_init__(self) -> None:
        rules = tuple(sorted(set(self.rules), key=ClassicalRule.sort_key))
        object.__setattr__(self, "rules", rules)
        if self.kind is None:
            kind = ProgramClass.SIMPLE
            for r in rules:
                if len(r.head) != 1:
                    kind = ProgramClass.DISJUNCTIVE
                    break
                if r.body_neg:
                    kind = ProgramClass.NORMAL
            object.__setattr__(self, "kind", kind)

    def atoms(self) -> set[str]:
        return {x.atom for r in self.rules for part in (r.head, r.body_pos, r.body_neg) for x in part}

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def crule(head: Iterable[str] | str, pos: Iterable[str] = (), neg: Iterable[str] = ()) -> ClassicalRule:
    """Build a classical rule from literal strings like ``"-a"``."""
    if isinstance(head, str):
        head = [head]
    return ClassicalRule(
        frozenset(map(Literal.parse, head)),
        frozenset(map(Literal.parse, pos)),
        frozenset(map(Literal.parse, neg)),
    )


# --- classical layer -------------------------------------------------------


def classical_reduct(p: ClassicalProgram, i: Iterable[Literal]) -> ClassicalProgram:
    i = frozenset(i)
    kept = [ClassicalRule(r.head, r.body_pos) for r in p.rules if not (r.body_neg & i)]
    return ClassicalProgram(tuple(kept))


def least_fixpoint(rules: Iterable[tuple[Hashable, frozenset]]) -> set:
    """Least fixpoint of ``(head, body)`` pairs, by counter-based propagation.

    Consistency is not checked here.
    """
    watch: dict = defaultdict(list)
    missing: list[int] = []
    heads: list = []
    queue: list = []
    for idx, (head, body) in enumerate(rules):
        heads.append(head)
        missing.append(len(body))
        if not body:
            queue.append(head)
        for b in body:
            watch[b].append(idx)
    model: set = set()
    while queue:
        x = queue.pop()
        if x in model:
            continue
        model.add(x)
        for idx in watch.get(x, ()):
            missing[idx] -= 1
            if missing[idx] == 0:
                queue.append(heads[idx])
    return model


def _require_positive(p: ClassicalProgram) -> None:
    if any(r.body_neg for r in p.rules):
        raise ValueError("program contains negation-as-failure; take the reduct first")


def classical_fixpoint(p: ClassicalProgram) -> frozenset[Literal]:
    """Least fixpoint of T_P for a simple program."""
    _require_positive(p)
    if any(len(r.head) != 1 for r in p.rules):
        raise ValueError("fixpoint is only defined for simple programs")
    model = least_fixpoint((next(iter(r.head)), r.body_pos) for r in p.rules)
    if not is_consistent(model):
        raise InconsistentFixpoint(model)
    return frozenset(model)


def _branch_models(
    rules: Sequence[tuple[frozenset, frozenset]], allowed: frozenset | None = None
) -> Iterator[frozenset]:
    """Yield consistent models of a positive disjunctive rule set.

    Every minimal model (restricted to ``allowed`` when given) is among the
    yielded ones; the output may also contain non-minimal models.
    """

    def search(current: set) -> Iterator[frozenset]:
        while True:
            changed = False
            pending = None
            for head, body in rules:
                if body <= current and not (head & current):
                    options = [h for h in head if (allowed is None or h in allowed) and -h not in current]
                    if not options:
                        return
                    if len(options) == 1:
                        current.add(options[0])
                        changed = True
                    elif pending is None:
                        pending = options
            if not changed:
                break
        if pending is None:
            yield frozenset(current)
            return
        for h in sorted(pending):
            yield from search(current | {h})

    yield from search(set())


def _keep_minimal(models: Iterable[frozenset]) -> list[frozenset]:
    unique = sorted(set(models), key=len)
    out: list[frozenset] = []
    for m in unique:
        if not any(k < m for k in out):
            out.append(m)
    return out


def minimal_models(p: ClassicalProgram) -> list[frozenset[Literal]]:
    """All subset-minimal consistent models of a positive disjunctive program."""
    _require_positive(p)
    rules = [(r.head, r.body_pos) for r in p.rules]
    found = _keep_minimal(_branch_models(rules))
    return sorted(found, key=lambda m: (len(m), tuple(x.sort_key() for x in sorted(m))))


def is_model(p: ClassicalProgram, x: Iterable[Literal]) -> bool:
    x = frozenset(x)
    return all(not (r.body_pos <= x) or bool(r.head & x) for r in p.rules)


def is_minimal_model(p: ClassicalProgram, x: Iterable[Literal]) -> bool:
    _require_positive(p)
    x = frozenset(x)
    if not is_consistent(x) or not is_model(p, x):
        return False
    rules = [(r.head, r.body_pos) for r in p.rules]
    return all(m == x for m in _branch_models(rules, allowed=x))


def classical_answer_candidates(reduct: ClassicalProgram, strict: bool = False) -> list[frozenset[Literal]]:
    """The interpretations that are answer sets of a positive program."""
    if all(len(r.head) == 1 for r in reduct.rules):
        model = least_fixpoint((next(iter(r.head)), r.body_pos) for r in reduct.rules)
        return [frozenset(model)] if is_consistent(model) else []
    models = minimal_models(reduct)
    if strict and len(models) != 1:
        return []
    return models


# --- communicating layer ---------------------------------------------------


def communicating_reduct(q: ComponentProgram, i: Iterable[SituatedLiteral]) -> ClassicalProgram:
    """Reduct of component ``q`` with respect to the interpretation ``i``.

    Rules blocked by a ``not R:l`` with ``R:l`` in ``i`` or by a non-local
    ``R:l`` outside ``i`` are deleted; the surviving naf and non-local literals
    are dropped. What is left is a classical positive program.
    """
    i = i if isinstance(i, (set, frozenset)) else frozenset(i)
    out = []
    for r in q.rules:
        if any(b in i for b in r.body_neg):
            continue
        if any(b.component != q.name and b not in i for b in r.body_pos):
            continue
        out.append(
            ClassicalRule(
                frozenset(h.literal for h in r.head),
                frozenset(b.literal for b in r.body_pos if b.component == q.name),
            )
        )
    return ClassicalProgram(tuple(out))


def _within_base(p: CommunicatingProgram, i: frozenset[SituatedLiteral]) -> bool:
    names = set(p.names)
    atoms = p.atoms()
    return all(x.component in names and x.atom in atoms for x in i)


def is_answer_set(p: CommunicatingProgram, i: Iterable[SituatedLiteral], strict: bool = False) -> bool:
    """Check that every component's projection is an answer set of its reduct.

    For reducts with disjunctive heads the projection must be *a* minimal
    model; ``strict=True`` additionally demands it be the only one.
    """
    i = frozenset(i)
    if not is_consistent(i) or not _within_base(p, i):
        return False
    for comp in p.components:
        red = communicating_reduct(comp, i)
        proj = project(i, comp.name)
        if all(len(r.head) == 1 for r in red.rules):
            if frozenset(least_fixpoint((next(iter(r.head)), r.body_pos) for r in red.rules)) != proj:
                return False
        elif strict:
            if minimal_models(red) != [proj]:
                return False
        elif not is_minimal_model(red, proj):
            return False
    return True


def decisive_literals(p: CommunicatingProgram) -> frozenset[SituatedLiteral]:
    """Head-supported literals whose truth can change some component's reduct."""
    supported = p.head_literals()
    out = set()
    for comp in p.components:
        for r in comp.rules:
            out.update(b for b in r.body_neg if b in supported)
            out.update(b for b in r.body_pos if b.component != comp.name and b in supported)
    return frozenset(out)


def guess_literals(p: CommunicatingProgram, strategy: str = "decisive") -> list[SituatedLiteral]:
    if strategy == "decisive":
        lits = decisive_literals(p)
    elif strategy == "head":
        lits = p.head_literals()
    elif strategy == "naive":
        lits = literal_base(p)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return sorted(lits)


def _choice_groups(lits: Sequence[SituatedLiteral]) -> list[tuple]:
    """Per situated atom, the admissible choices: absent, or one present polarity."""
    by_atom: dict[tuple[str, str], list[SituatedLiteral]] = defaultdict(list)
    for x in lits:
        by_atom[(x.component, x.atom)].append(x)
    return [(None, *sorted(v)) for _, v in sorted(by_atom.items())]


def _consistent_subsets(groups: Sequence[tuple]) -> Iterator[frozenset]:
    for combo in itertools.product(*groups):
        yield frozenset(x for x in combo if x is not None)


class _DecisiveSearch:
    """Assemble candidates from per-component reduct models, one guess at a time."""

    def __init__(self, p: CommunicatingProgram, decisive: frozenset, strict: bool) -> None:
        self.p = p
        self.decisive = decisive
        self.strict = strict
        self.relevant: dict[str, frozenset] = {}
        for comp in p.components:
            body = {b for r in comp.rules for b in (*r.body_pos, *r.body_neg)}
            self.relevant[comp.name] = frozenset(body & decisive)
        self.cache: dict[tuple[str, frozenset], list[frozenset]] = {}
        self.supported = frozenset(p.head_literals())

    def component_models(self, comp: ComponentProgram, guess: frozenset) -> list[frozenset]:
        key = (comp.name, guess & self.relevant[comp.name])
        hit = self.cache.get(key)
        if hit is None:
            red = communicating_reduct(comp, guess)
            hit = [
                frozenset(SituatedLiteral(comp.name, l) for l in m)
                for m in classical_answer_candidates(red, self.strict)
            ]
            self.cache[key] = hit
        return hit

    def bounds(self, true: frozenset, false: frozenset) -> tuple[set, set]:
        """Literal sets every answer set agreeing with the partial guess lies between.

        The lower set closes the single-head rules whose naf literals are all
        ruled out; the upper set closes every rule not blocked by a guessed
        literal, taking non-local body literals for granted unless ruled out.
        """
        lower_rules, upper_rules = [], []
        for comp in self.p.components:
            for r in comp.rules:
                # naf literals no rule can derive are false in every answer set
                if len(r.head) == 1 and (r.body_neg & self.supported) <= false:
                    lower_rules.append((next(iter(r.head)), r.body_pos - true))
                if r.body_neg & true or r.body_pos & false:
                    continue
                local = frozenset(b for b in r.body_pos if b.component == comp.name)
                upper_rules.extend((h, local) for h in r.head)
        return least_fixpoint(lower_rules), least_fixpoint(upper_rules)

    def guesses(self, groups: Sequence[tuple]) -> Iterator[frozenset]:
        """Complete guesses over ``groups`` that survive bound propagation."""

        def go(choice: dict[int, SituatedLiteral | None]) -> Iterator[frozenset]:
            while True:
                true = frozenset(x for x in choice.values() if x is not None)
                false = frozenset(
                    x for k, x0 in choice.items() for x in groups[k] if x is not None and x != x0
                )
                lower, upper = self.bounds(true, false)
                if not true <= upper or false & lower or not is_consistent(lower):
                    return
                forced = {}
                for k, group in enumerate(groups):
                    if k in choice:
                        continue
                    options = [x for x in group if x is not None]
                    must = [x for x in options if x in lower]
                    if must:
                        forced[k] = must[0]
                    elif not any(x in upper for x in options):
                        forced[k] = None
                if not forced:
                    break
                choice = {**choice, **forced}
            if len(choice) == len(groups):
                yield true
                return
            k = next(k for k in range(len(groups)) if k not in choice)
            for x in groups[k]:
                yield from go({**choice, k: x})

        fixed = {k: g[0] for k, g in enumerate(groups) if len(g) == 1}
        yield from go(fixed)

    def candidates(self, guess: frozenset) -> Iterator[frozenset]:
        per_component = [self.component_models(c, guess) for c in self.p.components]
        for parts in itertools.product(*per_component):
            cand = frozenset().union(*parts)
            if cand & self.decisive == guess:
                yield cand


def _enumerate_chunk(
    p: CommunicatingProgram, strategy: str, strict: bool, groups: list[tuple]
) -> list[frozenset]:
    found = []
    if strategy == "decisive":
        search = _DecisiveSearch(p, frozenset(guess_literals(p, "decisive")), strict)
        for guess in search.guesses(groups):
            for cand in search.candidates(guess):
                if is_answer_set(p, cand, strict):
                    found.append(cand)
    else:
        for cand in _consistent_subsets(groups):
            if is_answer_set(p, cand, strict):
                found.append(cand)
    return found


def _split(groups: list[tuple], jobs: int) -> list[list[tuple]]:
    """Fix choices of leading groups so that there are at least ``jobs`` chunks."""
    chunks = [groups]
    depth = 0
    while len(chunks) < jobs and depth < len(groups):
        chunks = [c[:depth] + [(x,)] + c[depth + 1 :] for c in chunks for x in c[depth]]
        depth += 1
    return chunks


def enumerate_answer_sets(
    p: CommunicatingProgram,
    *,
    bound: int = DEFAULT_BOUND,
    strategy: str = "decisive",
    strict: bool = False,
    jobs: int = 1,
) -> list[frozenset[SituatedLiteral]]:
    """All answer sets of ``p`` in canonical order.

    ``bound`` caps the number of guessed situated literals, which is what the
    running time is exponential in.
    """
    lits = guess_literals(p, strategy)
    if len(lits) > bound:
        raise BoundExceeded(len(lits), bound)
    groups = _choice_groups(lits)
    if jobs > 1 and groups:
        chunks = _split(groups, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_enumerate_chunk, *zip(*[(p, strategy, strict, c) for c in chunks]))
            found = [m for part in parts for m in part]
    else:
        found = _enumerate_chunk(p, strategy, strict, groups)
    return sorted(set(found), key=interpretation_key)


def tp_operator(p: CommunicatingProgram, i: Iterable[SituatedLiteral]) -> frozenset[SituatedLiteral]:
    """One application of the immediate consequence operator of a simple network."""
    i = frozenset(i)
    derived = {next(iter(r.head)) for r in p.rules() if len(r.head) == 1 and not r.body_neg and r.body_pos <= i}
    return i | derived


def _require_simple(p: CommunicatingProgram) -> None:
    if any(r.rule_class != ProgramClass.SIMPLE for r in p.rules()):
        raise ValueError("the least fixpoint is only defined for communicating simple programs")


def communicating_fixpoint(p: CommunicatingProgram) -> frozenset[SituatedLiteral]:
    """The globally minimal answer set of a simple network, in polynomial time."""
    _require_simple(p)
    model = least_fixpoint((next(iter(r.head)), r.body_pos) for r in p.rules())
    if not is_consistent(model):
        raise InconsistentFixpoint(model)
    return frozenset(model)


QUERY_MODES = ("exists", "brave", "cautious")


def decide(pool: Sequence[frozenset], mode: str, literal: SituatedLiteral | None = None) -> bool:
    """Evaluate a reasoning task over an already computed pool of answer sets."""
    if mode == "exists":
        return bool(pool)
    if literal is None:
        raise ValueError(f"{mode} reasoning needs a situated literal")
    if mode == "brave":
        return any(literal in m for m in pool)
    if mode == "cautious":
        return all(literal in m for m in pool)
    raise ValueError(f"unknown query mode {mode!r}")


def query(
    p: CommunicatingProgram, mode: str, literal: SituatedLiteral | None = None, **kwargs
) -> bool:
    """Answer-set existence, brave or cautious reasoning.

    Cautious reasoning over zero answer sets is vacuously true.
    """
    if mode not in QUERY_MODES:
        raise ValueError(f"unknown query mode {mode!r}")
    return decide(enumerate_answer_sets(p, **kwargs), mode, literal)


__all__ = [
    "BoundExceeded",
    "ClassicalProgram",
    "ClassicalRule",
    "DEFAULT_BOUND",
    "InconsistentFixpoint",
    "classical_fixpoint",
    "classical_reduct",
    "communicating_fixpoint",
    "communicating_reduct",
    "crule",
    "decide",
    "decisive_literals",
    "enumerate_answer_sets",
    "herbrand_base",
    "is_answer_set",
    "is_minimal_model",
    "minimal_models",
    "query",
    "tp_operator",
]
