"""Program compilers.

* :func:`simulate_naf` rewrites a communicating normal program into a
  communicating simple one, replacing each ``not Q:b`` by a fresh literal that
  a mirror component ``__n_Q`` and the rewritten ``__p_Q`` agree on. Totality marker
  rules are added to every ``N`` so that the answer sets corresponding to the
  source can be recognised syntactically.
* :func:`to_normal` flattens a communicating normal program into one classical
  normal program by guessing every situated atom.
* :func:`compile_qbf` builds the network whose focused answer sets decide a
  prenex DNF QBF.

Generated names live in the reserved ``__`` namespace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .engine import ClassicalProgram, ClassicalRule, communicating_reduct, least_fixpoint
from .model import (
    EXISTS,
    CommunicatingProgram,
    ComponentProgram,
    Constraint,
    Literal,
    ProgramClass,
    Qbf,
    Rule,
    SituatedLiteral,
    project,
)

FAIL_ATOM = "__fail"
TOTAL_ATOM = "total"


def desugar_constraints(items: Iterable[Rule | Constraint]) -> list[Rule]:
    """Replace each ``:- body`` in Q by ``__fail :- not __fail, body`` in Q."""
    out: list[Rule] = []
    for item in items:
        if isinstance(item, Constraint):
            fail = SituatedLiteral(item.component, Literal(FAIL_ATOM))
            out.append(Rule(frozenset({fail}), item.body_pos, item.body_neg | {fail}))
        else:
            out.append(item)
    return out


# --- negation-as-failure simulation ----------------------------------------


def positive_name(q: str) -> str:
    return f"__p_{q}"


def mirror_name(q: str) -> str:
    return f"__n_{q}"


def fresh_atom(lit: Literal) -> str:
    """The atom of the fresh literal standing in for ``lit``."""
    return f"__f_{lit.atom}" if lit.positive else f"__nf_{lit.atom}"


def cover_atom(lit: Literal) -> str:
    return "__d" + fresh_atom(lit)[1:]


@dataclass(frozen=True)
class FreshLiteralMap:
    """Bookkeeping that ties a simulation to its source program."""

    source: CommunicatingProgram
    positive: dict[str, str]  # Q -> __p_Q
    mirror: dict[str, str]  # Q -> __n_Q
    naf_literals: frozenset[SituatedLiteral]  # literals occurring under `not` in the source
    plus_rules: dict[str, tuple[Rule, ...]] = field(default_factory=dict)  # __p_Q -> rewritten source rules
    totality: bool = True

    def fresh(self, x: SituatedLiteral) -> Literal:
        """The positive fresh literal for source literal ``x`` (its negation is the classical ``-fresh``)."""
        return Literal(fresh_atom(x.literal))

    def fresh_in(self, x: SituatedLiteral, world: str, positive: bool = True) -> SituatedLiteral:
        lit = self.fresh(x)
        return SituatedLiteral(world, lit if positive else -lit)

    def total_markers(self) -> list[SituatedLiteral]:
        if not self.totality:
            return []
        return [SituatedLiteral(self.mirror[q], Literal(TOTAL_ATOM)) for q in self.source.names]

    def fresh_by_component(self, q: str) -> list[SituatedLiteral]:
        return sorted(x for x in self.naf_literals if x.component == q)


def simulate_naf(
    p: CommunicatingProgram, totality: bool = True
) -> tuple[CommunicatingProgram, FreshLiteralMap, list[SituatedLiteral]]:
    """Simulate a communicating normal program by a communicating simple one.

    Returns the simulation, the name map, and the totality markers (one
    ``N:total`` per source component; empty when ``totality=False``).
    """
    if p.kind == ProgramClass.DISJUNCTIVE or any(len(r.head) != 1 for r in p.rules()):
        raise ValueError("negation-as-failure simulation needs a normal program")
    positive = {q: positive_name(q) for q in p.names}
    mirror = {q: mirror_name(q) for q in p.names}
    naf = frozenset(b for r in p.rules() for b in r.body_neg)
    fmap = FreshLiteralMap(p, positive, mirror, naf, {}, totality)

    def lift(x: SituatedLiteral) -> SituatedLiteral:
        return SituatedLiteral(positive[x.component], x.literal)

    rules: list[Rule] = []
    for comp in p.components:
        qp, n = positive[comp.name], mirror[comp.name]
        plus = []
        for r in comp.rules:
            body = {lift(b) for b in r.body_pos}
            body |= {fmap.fresh_in(b, mirror[b.component], positive=False) for b in r.body_neg}
            plus.append(Rule(frozenset(lift(h) for h in r.head), frozenset(body)))
        fmap.plus_rules[qp] = tuple(plus)
        rules += plus
        for b in fmap.fresh_by_component(comp.name):
            neg_q = fmap.fresh_in(b, qp, positive=False)
            neg_n = fmap.fresh_in(b, n, positive=False)
            rules.append(Rule(frozenset({neg_q}), frozenset({neg_n})))
            rules.append(Rule(frozenset({neg_n}), frozenset({neg_q})))
            rules.append(Rule(frozenset({fmap.fresh_in(b, n)}), frozenset({lift(b)})))
        if totality:
            covers = []
            for b in fmap.fresh_by_component(comp.name):
                cover = SituatedLiteral(n, Literal(cover_atom(b.literal)))
                covers.append(cover)
                rules.append(Rule(frozenset({cover}), frozenset({fmap.fresh_in(b, n)})))
                rules.append(Rule(frozenset({cover}), frozenset({fmap.fresh_in(b, n, positive=False)})))
            rules.append(Rule(frozenset({SituatedLiteral(n, Literal(TOTAL_ATOM))}), frozenset(covers)))
    order = [positive[q] for q in p.names] + [mirror[q] for q in p.names]
    sim = CommunicatingProgram.from_rules(order, rules, ProgramClass.SIMPLE)
    return sim, fmap, fmap.total_markers()


def lift_answer_set(m: Iterable[SituatedLiteral], fmap: FreshLiteralMap) -> frozenset[SituatedLiteral]:
    """Map a source answer set to the corresponding simulation answer set."""
    m = frozenset(m)
    out = {SituatedLiteral(fmap.positive[x.component], x.literal) for x in m}
    for b in fmap.naf_literals:
        n = fmap.mirror[b.component]
        if b in m:
            out.add(fmap.fresh_in(b, n))
        else:
            out.add(fmap.fresh_in(b, fmap.positive[b.component], positive=False))
            out.add(fmap.fresh_in(b, n, positive=False))
        if fmap.totality:
            out.add(SituatedLiteral(n, Literal(cover_atom(b.literal))))
    out.update(fmap.total_markers())
    return frozenset(out)


class TotalityError(ValueError):
    """A simulated answer set leaves some fresh literal undecided."""

    def __init__(self, undecided: list[SituatedLiteral]) -> None:
        self.undecided = undecided
        names = ", ".join(str(x) for x in undecided)
        super().__init__(f"mirror projections are not total; undecided fresh literals: {names}")


def undecided_fresh(m: Iterable[SituatedLiteral], fmap: FreshLiteralMap) -> list[SituatedLiteral]:
    m = frozenset(m)
    out = []
    for b in sorted(fmap.naf_literals):
        pos = fmap.fresh_in(b, fmap.mirror[b.component])
        if pos not in m and -pos not in m:
            out.append(pos)
    return out


def project_back(
    m: Iterable[SituatedLiteral], fmap: FreshLiteralMap, source: CommunicatingProgram | None = None
) -> frozenset[SituatedLiteral]:
    """Recover the source answer set from a total simulation answer set.

    Membership comes from the least fixpoint of each rewritten component's
    reduct, not from reading ``__p_Q`` off ``m`` directly.
    """
    m = frozenset(m)
    source = source or fmap.source
    missing = undecided_fresh(m, fmap)
    if missing:
        raise TotalityError(missing)
    if fmap.totality:
        absent = [t for t in fmap.total_markers() if t not in m]
        if absent:
            raise TotalityError(absent)
    out = set()
    for q in source.names:
        qp = fmap.positive[q]
        red = communicating_reduct(ComponentProgram(qp, fmap.plus_rules[qp]), m)
        fix = least_fixpoint((next(iter(r.head)), r.body_pos) for r in red.rules)
        out.update(SituatedLiteral(q, l) for l in fix)
    return frozenset(out)


# --- flattening to one normal program --------------------------------------


def _tag(x: SituatedLiteral) -> str:
    return f"{len(x.component)}{x.component}_{x.atom}"


def situated_atom(x: SituatedLiteral) -> Literal:
    """The classical literal standing for situated literal ``x``."""
    return Literal("__" + _tag(x), x.positive)


def guess_atom(x: SituatedLiteral) -> Literal:
    return Literal(("__g" if x.positive else "__gn") + _tag(x))


def not_guess_atom(x: SituatedLiteral) -> Literal:
    return Literal(("__ng" if x.positive else "__ngn") + _tag(x))


def guessed_literals(p: CommunicatingProgram) -> list[SituatedLiteral]:
    """Herbrand base entries, plus negative literals that are asked of other components."""
    from .model import herbrand_base

    extra = {
        b
        for c in p.components
        for r in c.rules
        for b in r.body_pos
        if b.component != c.name and not b.positive
    }
    return sorted(herbrand_base(p) | extra)


def to_normal(p: CommunicatingProgram) -> ClassicalProgram:
    """Flatten a communicating normal program into a single classical normal program."""
    if any(len(r.head) != 1 for r in p.rules()):
        raise ValueError("flattening needs a normal program")
    fail = Literal(FAIL_ATOM)
    rules: list[ClassicalRule] = []
    for x in guessed_literals(p):
        g, ng, s = guess_atom(x), not_guess_atom(x), situated_atom(x)
        rules.append(ClassicalRule(frozenset({g}), frozenset(), frozenset({ng})))
        rules.append(ClassicalRule(frozenset({ng}), frozenset(), frozenset({g})))
        rules.append(ClassicalRule(frozenset({fail}), frozenset({g}), frozenset({fail, s})))
        rules.append(ClassicalRule(frozenset({fail}), frozenset({ng, s}), frozenset({fail})))
    for comp in p.components:
        for r in comp.rules:
            pos = set()
            for b in r.body_pos:
                pos.add(situated_atom(b) if b.component == comp.name else guess_atom(b))
            neg = {situated_atom(b) for b in r.body_neg}
            head = frozenset(situated_atom(h) for h in r.head)
            rules.append(ClassicalRule(head, frozenset(pos), frozenset(neg)))
    return ClassicalProgram(tuple(rules), ProgramClass.NORMAL if rules else ProgramClass.SIMPLE)


def decode_normal(m: Iterable[Literal], p: CommunicatingProgram) -> frozenset[SituatedLiteral]:
    """Read the situated literals of ``p`` off an answer set of ``to_normal(p)``."""
    m = frozenset(m)
    out = set()
    for x in guessed_literals(p):
        for y in (x, -x):
            if situated_atom(y) in m:
                out.add(y)
    return frozenset(out)


def flatten_single(p: CommunicatingProgram) -> ClassicalProgram:
    """A one-component network read as the classical program it trivially is."""
    if len(p.components) != 1:
        raise ValueError("expected exactly one component")
    comp = p.components[0]
    rules = []
    for r in comp.rules:
        if any(x.component != comp.name for x in r.literals()):
            raise ValueError(f"rule mentions another component: {r}")
        rules.append(
            ClassicalRule(
                frozenset(h.literal for h in r.head),
                frozenset(b.literal for b in r.body_pos),
                frozenset(b.literal for b in r.body_neg),
            )
        )
    return ClassicalProgram(tuple(rules))


# --- QBF compilation --------------------------------------------------------

SAT = "sat"


@dataclass(frozen=True)
class CompiledQbf:
    program: CommunicatingProgram
    focus: tuple[str, ...]
    mode: str  # "brave" when the prefix starts with exists, else "cautious"
    literal: SituatedLiteral


def compile_qbf(q: Qbf) -> CompiledQbf:
    """Build the network ``Q0..Q(n-1)`` whose focused answer sets decide ``q``.

    ``Q0`` guesses a total assignment and derives ``sat`` or ``-sat``. Each
    ``Qj`` copies the assignment of the first ``n-j`` blocks together with one
    polarity of ``sat``, so that focusing on ``Qj`` minimises away either the
    satisfying or the falsifying completions of block ``n-j+1``.
    """
    problems = q.problems()
    if problems:
        raise ValueError("; ".join(problems))
    if SAT in q.variables:
        raise ValueError(f"variable name {SAT!r} is reserved by the compilation")
    n = len(q.blocks)
    q0 = "Q0"

    def at(comp: str, lit: Literal) -> SituatedLiteral:
        return SituatedLiteral(comp, lit)

    sat = Literal(SAT)
    rules: list[Rule] = []
    for v in q.variables:
        x = Literal(v)
        rules.append(Rule(frozenset({at(q0, x)}), frozenset(), frozenset({at(q0, -x)})))
        rules.append(Rule(frozenset({at(q0, -x)}), frozenset(), frozenset({at(q0, x)})))
    for clause in q.matrix:
        rules.append(Rule(frozenset({at(q0, sat)}), frozenset(at(q0, l) for l in clause)))
    rules.append(Rule(frozenset({at(q0, -sat)}), frozenset(), frozenset({at(q0, sat)})))

    exists_first = q.first_quantifier == EXISTS
    names = [q0]
    for j in range(1, n):
        qj = f"Q{j}"
        names.append(qj)
        for _, block in q.blocks[: n - j]:
            for v in block:
                for x in (Literal(v), -Literal(v)):
                    rules.append(Rule(frozenset({at(qj, x)}), frozenset({at(q0, x)})))
        keep_sat = (n - j) % 2 == 1
        if not exists_first:
            keep_sat = not keep_sat
        s = sat if keep_sat else -sat
        rules.append(Rule(frozenset({at(qj, s)}), frozenset({at(q0, s)})))
    program = CommunicatingProgram.from_rules(names, rules)
    return CompiledQbf(
        program,
        tuple(names[1:]),
        "brave" if exists_first else "cautious",
        at(q0, sat),
    )
