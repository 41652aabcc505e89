"""Communicating answer set programs: solving, focusing and compiling."""

from .engine import (
    BoundExceeded,
    ClassicalProgram,
    ClassicalRule,
    InconsistentFixpoint,
    classical_fixpoint,
    classical_reduct,
    communicating_fixpoint,
    communicating_reduct,
    enumerate_answer_sets,
    is_answer_set,
    minimal_models,
    query,
)
from .focus import focused_answer_sets, focused_fixpoint_simple, focused_query
from .model import (
    CommunicatingProgram,
    ComponentProgram,
    Literal,
    ProgramClass,
    Qbf,
    Rule,
    SituatedLiteral,
    herbrand_base,
    project,
    sl,
    validate,
)
from .parser import ParseError, parse_program, parse_qbf, render_program
from .transforms import compile_qbf, lift_answer_set, project_back, simulate_naf, to_normal

__version__ = "0.1.0"
