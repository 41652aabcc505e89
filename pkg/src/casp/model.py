"""Domain types for communicating programs.

Everything here is immutable. Rules and components canonicalize themselves on
construction (duplicates dropped, rules sorted), so two programs that differ
only in rule order compare equal.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Iterator

IDENT_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
NAME_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
RESERVED_PREFIX = "__"


def is_reserved(name: str) -> bool:
    return name.startswith(RESERVED_PREFIX)


def valid_atom(name: str, allow_reserved: bool = True) -> bool:
    if is_reserved(name):
        return allow_reserved and re.fullmatch(r"__[A-Za-z0-9_]+", name) is not None
    return IDENT_RE.match(name) is not None


def valid_component_name(name: str, allow_reserved: bool = True) -> bool:
    if is_reserved(name):
        return allow_reserved and re.fullmatch(r"__[A-Za-z0-9_]+", name) is not None
    return NAME_RE.match(name) is not None


@total_ordering
@dataclass(frozen=True)
class Literal:
    """An atom or its classical negation."""

    atom: str
    positive: bool = True

    def __neg__(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else "-" + self.atom

    def sort_key(self) -> tuple:
        return (self.atom, not self.positive)

    def __lt__(self, other: Literal) -> bool:
        return self.sort_key() < other.sort_key()

    @classmethod
    def parse(cls, text: str) -> Literal:
        if text.startswith("-"):
            return cls(text[1:], False)
        return cls(text)


@total_ordering
@dataclass(frozen=True)
class SituatedLiteral:
    """A literal asked of a particular component, written ``Q:l``."""

    component: str
    literal: Literal

    @property
    def atom(self) -> str:
        return self.literal.atom

    @property
    def positive(self) -> bool:
        return self.literal.positive

    def __neg__(self) -> SituatedLiteral:
        return SituatedLiteral(self.component, -self.literal)

    def is_local(self, component: str) -> bool:
        return self.component == component

    def __str__(self) -> str:
        return f"{self.component}:{self.literal}"

    def sort_key(self) -> tuple:
        return (self.component, self.literal.sort_key())

    def __lt__(self, other: SituatedLiteral) -> bool:
        return self.sort_key() < other.sort_key()

    @classmethod
    def parse(cls, text: str) -> SituatedLiteral:
        component, _, lit = text.partition(":")
        if not lit:
            raise ValueError(f"not a situated literal: {text!r}")
        return cls(component, Literal.parse(lit))


def sl(text: str) -> SituatedLiteral:
    """Shorthand constructor: ``sl("Q:-a")``."""
    return SituatedLiteral.parse(text)


@dataclass(frozen=True)
class ExtendedSituatedLiteral:
    inner: SituatedLiteral
    naf: bool = False

    def __str__(self) -> str:
        return ("not " if self.naf else "") + str(self.inner)


class ProgramClass(str, enum.Enum):
    SIMPLE = "simple"
    NORMAL = "normal"
    DISJUNCTIVE = "disjunctive"

    @property
    def rank(self) -> int:
        return ("simple", "normal", "disjunctive").index(self.value)

    def __le__(self, other: ProgramClass) -> bool:  # type: ignore[override]
        return self.rank <= other.rank

    def __lt__(self, other: ProgramClass) -> bool:  # type: ignore[override]
        return self.rank < other.rank

    def __ge__(self, other: ProgramClass) -> bool:  # type: ignore[override]
        return self.rank >= other.rank

    def __gt__(self, other: ProgramClass) -> bool:  # type: ignore[override]
        return self.rank > other.rank


def _sorted_key(lits: Iterable) -> tuple:
    return tuple(x.sort_key() for x in sorted(lits))


@dataclass(frozen=True)
class Rule:
    """``head :- body_pos, not body_neg`` over situated literals."""

    head: frozenset[SituatedLiteral]
    body_pos: frozenset[SituatedLiteral] = frozenset()
    body_neg: frozenset[SituatedLiteral] = frozenset()

    def __post_init__(self) -> None:
        for name in ("head", "body_pos", "body_neg"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    @property
    def component(self) -> str | None:
        names = {h.component for h in self.head}
        return names.pop() if len(names) == 1 else None

    @property
    def rule_class(self) -> ProgramClass:
        if len(self.head) != 1:
            return ProgramClass.DISJUNCTIVE
        return ProgramClass.NORMAL if self.body_neg else ProgramClass.SIMPLE

    def literals(self) -> Iterator[SituatedLiteral]:
        yield from self.head
        yield from self.body_pos
        yield from self.body_neg

    def sort_key(self) -> tuple:
        return (_sorted_key(self.head), _sorted_key(self.body_pos), _sorted_key(self.body_neg))

    def __str__(self) -> str:
        head = " ; ".join(str(h) for h in sorted(self.head))
        body = [str(b) for b in sorted(self.body_pos)]
        body += ["not " + str(b) for b in sorted(self.body_neg)]
        return f"{head} :- {', '.join(body)}." if body else f"{head}."


@dataclass(frozen=True)
class Constraint:
    """A rule with an empty head; only exists until desugared."""

    component: str
    body_pos: frozenset[SituatedLiteral] = frozenset()
    body_neg: frozenset[SituatedLiteral] = frozenset()


def canonical_rules(rules: Iterable[Rule]) -> tuple[Rule, ...]:
    return tuple(sorted(set(rules), key=Rule.sort_key))


@dataclass(frozen=True)
class ComponentProgram:
    name: str
    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", canonical_rules(self.rules))

    def local_atoms(self) -> set[str]:
        """Atoms of the Q-local situated literals occurring in Q."""
        return {x.atom for r in self.rules for x in r.literals() if x.component == self.name}


def infer_class(rules: Iterable[Rule]) -> ProgramClass:
    result = ProgramClass.SIMPLE
    for r in rules:
        if result < r.rule_class:
            result = r.rule_class
    return result


@dataclass(frozen=True)
class CommunicatingProgram:
    """An ordered collection of component programs.

    ``kind`` defaults to the weakest class consistent with the rules.
    """

    components: tuple[ComponentProgram, ...] = ()
    kind: ProgramClass | None = field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if self.kind is None:
            object.__setattr__(self, "kind", infer_class(self.rules()))
        elif not isinstance(self.kind, ProgramClass):
            object.__setattr__(self, "kind", ProgramClass(self.kind))

    @classmethod
    def from_rules(
        cls, names: Iterable[str], rules: Iterable[Rule], kind: ProgramClass | None = None
    ) -> CommunicatingProgram:
        """Group ``rules`` by head component; ``names`` fixes the component order."""
        names = list(dict.fromkeys(names))
        grouped: dict[str, list[Rule]] = {n: [] for n in names}
        for r in rules:
            c = r.component
            if c is None:
                raise ValueError(f"rule head is not local to one component: {r}")
            grouped.setdefault(c, []).append(r)
        return cls(tuple(ComponentProgram(n, tuple(rs)) for n, rs in grouped.items()), kind)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)

    def component(self, name: str) -> ComponentProgram:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(c.name == name for c in self.components)

    def rules(self) -> Iterator[Rule]:
        for c in self.components:
            yield from c.rules

    def atoms(self) -> set[str]:
        return {x.atom for r in self.rules() for x in r.literals()}

    def head_literals(self) -> set[SituatedLiteral]:
        return {h for r in self.rules() for h in r.head}

    def __str__(self) -> str:
        from .parser import render_program

        return render_program(self)


Interpretation = frozenset  # frozenset[SituatedLiteral]


def is_consistent(literals: Iterable[SituatedLiteral] | Iterable[Literal]) -> bool:
    seen = set(literals)
    return not any(-x in seen for x in seen)


def project(i: Iterable[SituatedLiteral], q: str) -> frozenset[Literal]:
    """Literals that ``i`` situates in component ``q``."""
    return frozenset(x.literal for x in i if x.component == q)


def herbrand_base(p: CommunicatingProgram) -> frozenset[SituatedLiteral]:
    """Every component paired with every atom occurring anywhere in ``p`` (positive only)."""
    atoms = p.atoms()
    return frozenset(SituatedLiteral(q, Literal(a)) for q in p.names for a in atoms)


def literal_base(p: CommunicatingProgram) -> frozenset[SituatedLiteral]:
    hb = herbrand_base(p)
    return hb | frozenset(-x for x in hb)


def format_interpretation(i: Iterable[SituatedLiteral]) -> str:
    return "{" + ", ".join(str(x) for x in sorted(i)) + "}"


def interpretation_key(i: Iterable[SituatedLiteral]) -> tuple:
    items = sorted(i)
    return (len(items), tuple(x.sort_key() for x in items))


@dataclass(frozen=True)
class Violation:
    component: str | None
    rule_index: int | None
    reason: str

    def __str__(self) -> str:
        where = self.component or "<program>"
        if self.rule_index is not None:
            where += f"[{self.rule_index}]"
        return f"{where}: {self.reason}"


def validate(p: CommunicatingProgram) -> list[Violation]:
    """Structural problems in ``p``; empty when every invariant holds."""
    out: list[Violation] = []
    names = p.names
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        out.append(Violation(None, None, f"duplicate component names: {', '.join(dupes)}"))
    for n in names:
        if not valid_component_name(n):
            out.append(Violation(n, None, f"invalid component name {n!r}"))
    for comp in p.components:
        for idx, r in enumerate(comp.rules):
            if not r.head:
                out.append(Violation(comp.name, idx, "empty head (constraints must be desugared)"))
            heads = {h.component for h in r.head}
            if len(heads) > 1:
                out.append(
                    Violation(comp.name, idx, f"locality: head mixes components {sorted(heads)}")
                )
            elif heads and heads != {comp.name}:
                out.append(
                    Violation(comp.name, idx, f"locality: head belongs to {heads.pop()}, not {comp.name}")
                )
            if not r.rule_class <= p.kind:
                out.append(
                    Violation(comp.name, idx, f"class: {r.rule_class.value} rule in a {p.kind.value} program")
                )
            for x in r.literals():
                if x.component not in p:
                    out.append(Violation(comp.name, idx, f"reference to undeclared component {x.component}"))
                if not valid_atom(x.atom):
                    out.append(Violation(comp.name, idx, f"invalid atom {x.atom!r}"))
    return out


EXISTS = "exists"
FORALL = "forall"


@dataclass(frozen=True)
class Qbf:
    """A prenex QBF with a DNF matrix.

    ``blocks`` alternate quantifiers; ``matrix`` is a disjunction of
    conjunctive clauses, each a set of propositional literals.
    """

    blocks: tuple[tuple[str, tuple[str, ...]], ...]
    matrix: tuple[frozenset[Literal], ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, vs in self.blocks for v in vs)

    @property
    def first_quantifier(self) -> str:
        return self.blocks[0][0]

    def problems(self) -> list[str]:
        out = []
        if not self.blocks:
            out.append("no quantifier blocks")
        seen: set[str] = set()
        for idx, (quant, names) in enumerate(self.blocks):
            if quant not in (EXISTS, FORALL):
                out.append(f"unknown quantifier {quant!r}")
            if not names:
                out.append(f"block {idx + 1} is empty")
            if idx and quant == self.blocks[idx - 1][0]:
                out.append(f"block {idx + 1} does not alternate")
            for v in names:
                if v in seen:
                    out.append(f"variable {v} is bound twice")
                seen.add(v)
        if not self.matrix:
            out.append("empty matrix")
        for clause in self.matrix:
            if not clause:
                out.append("empty clause")
            for lit in clause:
                if lit.atom not in seen:
                    out.append(f"variable {lit.atom} is unbound")
        return out

    def __str__(self) -> str:
        prefix = " ".join(f"{q} {' '.join(vs)}" for q, vs in self.blocks)
        clauses = " | ".join("(" + " & ".join(str(l) for l in sorted(c)) + ")" for c in self.matrix)
        return f"{prefix} : {clauses}"
