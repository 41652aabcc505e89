import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casp.engine import (
    BoundExceeded,
    ClassicalProgram,
    InconsistentFixpoint,
    classical_fixpoint,
    classical_reduct,
    communicating_fixpoint,
    communicating_reduct,
    crule,
    enumerate_answer_sets,
    guess_literals,
    is_answer_set,
    is_minimal_model,
    minimal_models,
    query,
    tp_operator,
)
from casp.fixtures import program as fixture
from casp.model import Literal, ProgramClass, literal_base, sl
from casp.oracle import classical_answer_sets
from casp.parser import parse_program
from casp.transforms import flatten_single

from tests.helpers import S, program_from, programs, sets, seeds


def L(*texts):
    return frozenset(Literal.parse(t) for t in texts)


# --- classical layer -----------------------------------------------------------


def test_classical_reduct_drops_blocked_rules_and_naf():
    p = ClassicalProgram((crule("a", neg=["b"]), crule("b", neg=["a"]), crule("c", ["a"])))
    red = classical_reduct(p, L("a"))
    assert set(red.rules) == {crule("a"), crule("c", ["a"])}
    assert red.kind == ProgramClass.SIMPLE


def test_classical_fixpoint():
    p = ClassicalProgram((crule("a"), crule("b", ["a"]), crule("c", ["d"])))
    assert classical_fixpoint(p) == L("a", "b")


def test_classical_fixpoint_inconsistent():
    with pytest.raises(InconsistentFixpoint):
        classical_fixpoint(ClassicalProgram((crule("a"), crule("-a", ["a"]))))


def test_classical_fixpoint_needs_positive_program():
    with pytest.raises(ValueError):
        classical_fixpoint(ClassicalProgram((crule("a", neg=["b"]),)))


def test_minimal_models_disjunctive():
    # {a ; b.  a :- b.}: {b} violates the second rule, so only {a} is minimal.
    p = ClassicalProgram((crule(["a", "b"]), crule("a", ["b"])))
    assert minimal_models(p) == [L("a")]
    assert classical_answer_sets(p) == {L("a")}
    assert is_minimal_model(p, L("a"))
    assert not is_minimal_model(p, L("a", "b"))


def test_minimal_models_choice():
    p = ClassicalProgram((crule(["a", "b"]), crule("c", ["a"]), crule("c", ["b"])))
    assert set(minimal_models(p)) == {L("a", "c"), L("b", "c")}


# --- communicating reduct --------------------------------------------------------


def test_communicating_reduct_two_components():
    p = fixture("example1")
    red = communicating_reduct(p.component("R"), S("Q:b", "R:b"))
    # R:a :- Q:a is deleted (Q:a absent); R:b :- not Q:c keeps its head only.
    assert set(red.rules) == {crule("b")}
    red = communicating_reduct(p.component("Q"), S("Q:a", "Q:b", "R:a", "R:b"))
    assert set(red.rules) == {crule("a"), crule("b"), crule("c", ["c"])}


@settings(max_examples=200, deadline=None)
@given(programs(ProgramClass.NORMAL), seeds)
def test_reduct_structure(p, seed):
    rng = random.Random(seed)
    base = sorted(literal_base(p))
    i = frozenset(x for x in base if rng.random() < 0.4)
    for comp in p.components:
        red = communicating_reduct(comp, i)
        assert red.kind == ProgramClass.SIMPLE
        assert all(not r.body_neg for r in red.rules)
        expected = set()
        for r in comp.rules:
            if r.body_neg & i:
                continue
            if any(b.component != comp.name and b not in i for b in r.body_pos):
                continue
            expected.add(
                crule([str(h.literal) for h in r.head], [str(b.literal) for b in r.body_pos if b.component == comp.name])
            )
        assert set(red.rules) == expected
        assert len(red.rules) <= len(comp.rules)


# --- answer sets of the shipped examples ------------------------------------------


def test_two_component_answer_sets():
    got = enumerate_answer_sets(fixture("example1"))
    assert set(got) == sets(["Q:b", "R:b"], ["Q:a", "Q:b", "R:a", "R:b"])


def test_simple_program_fixpoint_and_answer_sets():
    p = fixture("simple")
    fix = communicating_fixpoint(p)
    assert fix == S("Q:b")
    got = enumerate_answer_sets(p)
    assert set(got) == sets(["Q:b"], ["Q:a", "Q:b", "R:a"])
    assert all(fix <= m for m in got)


def test_mutual_naf_answer_sets():
    assert set(enumerate_answer_sets(fixture("ex4"))) == sets(["Q1:a"], ["Q2:b"])


def test_self_negation_has_none():
    assert enumerate_answer_sets(fixture("ex5")) == []


def test_printer_answer_sets():
    got = set(enumerate_answer_sets(fixture("printer")))
    assert got == sets(
        ["P:stylish", "P:silent", "B:expensive"],
        ["P:stylish", "P:loud", "E:undesired", "M:undesired"],
        ["P:dull", "P:loud", "E:undesired", "M:undesired"],
        ["P:dull", "P:silent", "E:undesired"],
    )


def test_empty_program_has_the_empty_answer_set():
    assert enumerate_answer_sets(fixture("empty")) == [frozenset()]


def test_is_answer_set_rejects():
    p = fixture("example1")
    assert is_answer_set(p, S("Q:b", "R:b"))
    assert not is_answer_set(p, S("Q:b"))
    assert not is_answer_set(p, S("Q:a", "Q:b", "R:b"))
    assert not is_answer_set(p, S("Q:b", "R:b", "T:a"))
    assert not is_answer_set(p, S("Q:b", "Q:-b", "R:b"))


def test_classical_negation_inconsistency_kills_candidate():
    p = parse_program("program Q { a. -a :- R:b. } program R { b. }")
    assert enumerate_answer_sets(p) == []


def test_disjunctive_strict_reading():
    p = parse_program("program Q { a ; b. }")
    assert set(enumerate_answer_sets(p)) == sets(["Q:a"], ["Q:b"])
    assert enumerate_answer_sets(p, strict=True) == []


def test_disjunctive_communication():
    p = parse_program("program Q { a ; b. } program R { c :- Q:a. d :- not Q:a. }")
    assert set(enumerate_answer_sets(p)) == sets(["Q:a", "R:c"], ["Q:b", "R:d"])


def test_bound():
    p = fixture("printer")
    with pytest.raises(BoundExceeded) as info:
        enumerate_answer_sets(p, bound=2)
    assert info.value.bound == 2 and info.value.size > 2


def test_unknown_strategy():
    with pytest.raises(ValueError):
        guess_literals(fixture("ex4"), "clever")


@pytest.mark.parametrize("name", ["example1", "ex4", "printer", "ex7"])
def test_strategies_agree_on_fixtures(name):
    p = fixture(name)
    want = enumerate_answer_sets(p)
    assert enumerate_answer_sets(p, strategy="head", bound=64) == want
    if len(guess_literals(p, "naive")) <= 16:
        assert enumerate_answer_sets(p, strategy="naive", bound=64) == want


def test_parallel_matches_serial():
    p = fixture("printer")
    assert enumerate_answer_sets(p, jobs=3) == enumerate_answer_sets(p)


def test_queries():
    p = fixture("example1")
    assert query(p, "exists")
    assert query(p, "brave", sl("R:a"))
    assert not query(p, "cautious", sl("R:a"))
    assert query(p, "cautious", sl("Q:b"))
    none = fixture("ex5")
    assert not query(none, "exists")
    assert not query(none, "brave", sl("R:a"))
    assert query(none, "cautious", sl("R:a"))
    with pytest.raises(ValueError):
        query(p, "sometimes", sl("Q:b"))
    with pytest.raises(ValueError):
        query(p, "brave")


# --- properties ----------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(programs(ProgramClass.SIMPLE), seeds)
def test_tp_monotone(p, seed):
    rng = random.Random(seed)
    base = sorted(literal_base(p))
    j = frozenset(x for x in base if rng.random() < 0.5)
    i = frozenset(x for x in j if rng.random() < 0.5)
    assert tp_operator(p, i) <= tp_operator(p, j)


@settings(max_examples=150, deadline=None)
@given(programs(ProgramClass.SIMPLE))
def test_fixpoint_is_least_answer_set(p):
    try:
        fix = communicating_fixpoint(p)
    except InconsistentFixpoint:
        return
    assert is_answer_set(p, fix)
    assert all(fix <= m for m in enumerate_answer_sets(p, bound=64))


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(list(ProgramClass)), seeds)
def test_strategies_agree(kind, seed):
    p = program_from(seed, kind, max_components=2, max_atoms=3, max_rules=5)
    want = enumerate_answer_sets(p, bound=64)
    assert enumerate_answer_sets(p, strategy="head", bound=64) == want
    assert enumerate_answer_sets(p, strategy="naive", bound=64) == want


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(list(ProgramClass)), seeds)
def test_single_component_matches_oracle(kind, seed):
    p = program_from(seed, kind, components=1)
    want = {frozenset(x.literal for x in m) for m in enumerate_answer_sets(p, bound=64)}
    assert want == classical_answer_sets(flatten_single(p))


@settings(max_examples=150, deadline=None)
@given(programs(ProgramClass.DISJUNCTIVE))
def test_every_result_is_an_answer_set(p):
    for m in enumerate_answer_sets(p, bound=64):
        assert is_answer_set(p, m)
