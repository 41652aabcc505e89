"""Command-line interface: ``casp solve | transform | qbf | validate | gen``.

Every command builds one output document (a plain dict) and prints it either
as canonical JSON or as text. Both encodings carry the same payload. Timing is
only included with ``--timing`` so that repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from .engine import DEFAULT_BOUND, STRATEGIES, BoundExceeded, decide, enumerate_answer_sets
from .focus import UnknownComponent, check_focus, focus_pool
from .generate import random_program, random_qbf
from .model import (
    CommunicatingProgram,
    ComponentProgram,
    ProgramClass,
    Rule,
    SituatedLiteral,
    herbrand_base,
    valid_atom,
    valid_component_name,
    validate,
)
from .oracle import OracleBoundExceeded, qbf_eval
from .parser import ParseError, parse_program, parse_qbf, render_program
from .transforms import compile_qbf, guessed_literals, simulate_naf, situated_atom, to_normal

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_BOUND = 3
EXIT_DISAGREE = 4

FLAT_COMPONENT = "Flat"


class InputError(Exception):
    """Bad input: reported on stderr, exit code 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def load_program(path: str, allow_reserved: bool = False) -> CommunicatingProgram:
    try:
        p = parse_program(_read(path), allow_reserved=allow_reserved)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from exc
    problems = validate(p)
    if problems:
        raise InputError("\n".join(f"{path}: {v}" for v in problems))
    return p


def summary(p: CommunicatingProgram) -> dict:
    return {
        "components": list(p.names),
        "class": p.kind.value,
        "herbrand_base_size": len(herbrand_base(p)),
    }


def encode_set(i) -> list[str]:
    return [str(x) for x in sorted(i)]


# --- rendering ---------------------------------------------------------------


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _yesno(v: bool) -> str:
    return "true" if v else "false"


def to_text(doc: dict) -> str:
    lines = [f"command: {doc['command']}", f"input: {doc['input']}"]
    prog = doc.get("program")
    if prog:
        lines.append(f"components: {' '.join(prog['components'])}")
        lines.append(f"class: {prog['class']}")
        lines.append(f"herbrand base: {prog['herbrand_base_size']}")
    if doc.get("formula"):
        lines.append(f"formula: {doc['formula']}")
    for key in sorted(doc["config"]):
        value = doc["config"][key]
        if isinstance(value, list):
            value = ",".join(value) if value else "-"
        elif isinstance(value, bool):
            value = _yesno(value)
        elif value is None:
            value = "-"
        lines.append(f"config {key}: {value}")
    result = doc["result"]
    if "answer_sets" in result:
        sets = result["answer_sets"]
        for k, m in enumerate(sets, 1):
            lines.append(f"answer {k}: {{{', '.join(m)}}}")
        lines.append(f"answer sets: {len(sets)}")
    for key in ("asp", "oracle", "agree", "verdict"):
        if key in result:
            lines.append(f"{key}: {_yesno(result[key])}")
    if "timing" in doc:
        lines.append(f"seconds: {doc['timing']['seconds']:.6f}")
    return "\n".join(lines) + "\n"


def emit(doc: dict, fmt: str) -> None:
    sys.stdout.write(to_json(doc) if fmt == "json" else to_text(doc))


def _warn_bound(bound: int) -> None:
    if bound > DEFAULT_BOUND:
        print(
            f"warning: bound {bound} exceeds the default {DEFAULT_BOUND}; "
            "enumeration time grows exponentially with it",
            file=sys.stderr,
        )


# --- commands ----------------------------------------------------------------


def _parse_focus(text: str | None) -> list[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",")]


def _parse_literal(text: str) -> SituatedLiteral:
    try:
        x = SituatedLiteral.parse(text.strip())
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not valid_component_name(x.component) or not valid_atom(x.atom):
        raise InputError(f"not a situated literal: {text!r}")
    return x


def cmd_solve(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    p = load_program(args.file, allow_reserved=args.allow_reserved)
    focus = _parse_focus(args.focus)
    try:
        check_focus(p, focus)
    except UnknownComponent as exc:
        raise InputError(exc.args[0]) from exc
    mode, literal = "enumerate", None
    if args.exists:
        mode = "exists"
    elif args.brave:
        mode, literal = "brave", _parse_literal(args.brave)
    elif args.cautious:
        mode, literal = "cautious", _parse_literal(args.cautious)
    if literal is not None and literal.component not in p:
        raise InputError(f"query names unknown component {literal.component!r}")
    _warn_bound(args.bound)
    pool = enumerate_answer_sets(
        p, bound=args.bound, strategy=args.strategy, strict=args.strict, jobs=args.jobs
    )
    selected = focus_pool(pool, focus)
    result: dict = {"answer_sets": [encode_set(m) for m in selected]}
    code = EXIT_OK
    if mode != "enumerate":
        verdict = decide(selected, mode, literal)
        result["verdict"] = verdict
        code = EXIT_OK if verdict else EXIT_FALSE
    doc = {
        "command": "solve",
        "input": Path(args.file).name,
        "program": summary(p),
        "config": {
            "bound": args.bound,
            "focus": focus,
            "literal": str(literal) if literal else None,
            "mode": mode,
            "strategy": args.strategy,
            "strict": args.strict,
        },
        "result": result,
    }
    if args.timing:
        doc["timing"] = {"seconds": time.perf_counter() - start}
    emit(doc, args.format)
    return code


def _naf_header(source: str, p: CommunicatingProgram, totality: bool) -> list[str]:
    lines = [f"naf-sim of {source} ({p.kind.value} -> simple)"]
    for q in p.names:
        lines.append(f"{q} becomes __p_{q} with mirror __n_{q}")
    lines.append("__f_a / -__f_a stand for a / not a; -__nf_a for not -a")
    if totality:
        lines.append("answer sets of the source carry __n_Q:total for every component Q")
    return lines


def _normal_header(source: str, p: CommunicatingProgram) -> list[str]:
    lines = [f"to-normal of {source} ({p.kind.value} -> normal, one component)"]
    for x in guessed_literals(p):
        lines.append(f"{situated_atom(x)} stands for {x}")
    return lines


def flat_program(p: CommunicatingProgram) -> CommunicatingProgram:
    """Wrap ``to_normal(p)`` as a one-component network for printing."""
    flat = to_normal(p)
    rules = []
    for r in flat.rules:
        rules.append(
            Rule(
                frozenset(SituatedLiteral(FLAT_COMPONENT, h) for h in r.head),
                frozenset(SituatedLiteral(FLAT_COMPONENT, b) for b in r.body_pos),
                frozenset(SituatedLiteral(FLAT_COMPONENT, b) for b in r.body_neg),
            )
        )
    return CommunicatingProgram((ComponentProgram(FLAT_COMPONENT, tuple(rules)),))


def cmd_transform(args: argparse.Namespace) -> int:
    p = load_program(args.file, allow_reserved=args.allow_reserved)
    source = Path(args.file).name
    if p.kind == ProgramClass.DISJUNCTIVE:
        raise InputError(f"{args.kind} needs a normal (or simple) program; {source} is disjunctive")
    if args.kind == "naf-sim":
        sim, _, _ = simulate_naf(p, totality=not args.no_totality)
        text = render_program(sim, _naf_header(source, p, not args.no_totality))
    else:
        text = render_program(flat_program(p), _normal_header(source, p))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_qbf(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    text = args.formula if args.formula is not None else _read(args.file)
    try:
        q = parse_qbf(text)
    except ParseError as exc:
        raise InputError(f"{args.file or '<formula>'}:{exc}") from exc
    result: dict = {}
    if args.via in ("asp", "both"):
        try:
            compiled = compile_qbf(q)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _warn_bound(args.bound)
        pool = enumerate_answer_sets(compiled.program, bound=args.bound, jobs=args.jobs)
        result["asp"] = decide(focus_pool(pool, compiled.focus), compiled.mode, compiled.literal)
    if args.via in ("oracle", "both"):
        result["oracle"] = qbf_eval(q)
    if args.via == "both":
        result["agree"] = result["asp"] == result["oracle"]
    verdict = result["asp"] if "asp" in result else result["oracle"]
    result["verdict"] = verdict
    doc = {
        "command": "qbf",
        "input": Path(args.file).name if args.file else "<formula>",
        "formula": str(q),
        "config": {"bound": args.bound, "via": args.via},
        "result": result,
    }
    if args.timing:
        doc["timing"] = {"seconds": time.perf_counter() - start}
    emit(doc, args.format)
    if args.via == "both" and not result["agree"]:
        print("error: compiled and oracle verdicts disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_validate(args: argparse.Namespace) -> int:
    p = load_program(args.file, allow_reserved=args.allow_reserved)
    doc = {
        "command": "validate",
        "input": Path(args.file).name,
        "program": summary(p),
        "config": {},
        "result": {"verdict": True},
    }
    emit(doc, args.format)
    return EXIT_OK


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("CASP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"CASP_SEED must be an integer, got {env!r}") from exc


def cmd_gen(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    rng = random.Random(seed)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        if args.what == "programs":
            p = random_program(rng, kind=args.kind)
            text = render_program(p, [f"generated with seed {seed}, instance {k}"])
            (out / f"prog_{k:04d}.casp").write_text(text, encoding="utf-8")
        else:
            q = random_qbf(rng)
            (out / f"qbf_{k:04d}.qbf").write_text(f"% seed {seed}, instance {k}\n{q}\n", encoding="utf-8")
    print(f"wrote {args.count} {args.what} to {out} (seed {seed})")
    return EXIT_OK


# --- argument parsing --------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casp", description="Communicating answer set programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, solving: bool = False) -> None:
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if solving:
            sp.add_argument("--bound", type=_positive, default=DEFAULT_BOUND,
                            help=f"maximum number of guessed literals (default {DEFAULT_BOUND})")
            sp.add_argument("--jobs", type=_positive, default=1, help="worker processes (default 1)")
            sp.add_argument("--timing", action="store_true", help="include wall-clock time in the output")

    sp = sub.add_parser("solve", help="enumerate (focused) answer sets or answer a query")
    sp.add_argument("file")
    sp.add_argument("--focus", help="comma-separated component names, e.g. B,M,E")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exists", action="store_true", help="is there an answer set?")
    mode.add_argument("--brave", metavar="Q:l", help="does some answer set contain Q:l?")
    mode.add_argument("--cautious", metavar="Q:l", help="does every answer set contain Q:l?")
    sp.add_argument("--strategy", choices=STRATEGIES, default="decisive")
    sp.add_argument("--strict", action="store_true",
                    help="disjunctive components must have a unique minimal model")
    sp.add_argument("--allow-reserved", action="store_true", help="accept '__' names (generated programs)")
    common(sp, solving=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("transform", help="print a compiled program")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("naf-sim", "to-normal"), required=True)
    sp.add_argument("--out", help="write here instead of stdout")
    sp.add_argument("--no-totality", action="store_true", help="naf-sim: omit the totality marker rules")
    sp.add_argument("--allow-reserved", action="store_true")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("qbf", help="decide a prenex DNF QBF")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?")
    src.add_argument("--formula", help="formula text instead of a file")
    sp.add_argument("--via", choices=("asp", "oracle", "both"), default="both")
    common(sp, solving=True)
    sp.set_defaults(func=cmd_qbf)

    sp = sub.add_parser("validate", help="parse and check a program")
    sp.add_argument("file")
    sp.add_argument("--allow-reserved", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen", help="write a random corpus (seed from --seed or CASP_SEED)")
    sp.add_argument("outdir")
    sp.add_argument("--what", choices=("programs", "qbf"), default="programs")
    sp.add_argument("--count", type=_positive, default=10)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--kind", choices=[c.value for c in ProgramClass], default="normal")
    sp.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BoundExceeded as exc:
        print(f"error: {exc} (raise it with --bound)", file=sys.stderr)
        return EXIT_BOUND
    except OracleBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
