"""Shared builders for the test modules."""

import random

from hypothesis import strategies as st

from casp.generate import random_program, random_qbf
from casp.model import ProgramClass, sl


def S(*texts):
    """Interpretation from ``"Q:a"`` strings."""
    return frozenset(sl(t) for t in texts)


def sets(*groups):
    return {S(*g) for g in groups}


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def program_from(seed, kind=ProgramClass.NORMAL, **kw):
    return random_program(random.Random(seed), kind=kind, **kw)


def programs(kind=ProgramClass.NORMAL, **kw):
    return seeds.map(lambda s: program_from(s, kind, **kw))


def qbfs(**kw):
    return seeds.map(lambda s: random_qbf(random.Random(s), **kw))
