"""Text formats for communicating programs (``.casp``) and DNF QBFs (``.qbf``).

Program syntax::

    % comment
    program Q {
      a :- R:a.          % unqualified literals are local to Q
      b ; -c :- not R:b. % ';' is disjunction, '-' classical negation
      :- a, b.           % constraint, desugared on load
    }

Component names start with an uppercase letter, atoms with a lowercase one.
Names starting with ``__`` are reserved for generated atoms and components and
are rejected unless ``allow_reserved=True``. ``Q:-a`` (no whitespace) is the
situated literal ``-a`` of Q; write rule necks with a space or a lowercase head.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    EXISTS,
    FORALL,
    CommunicatingProgram,
    ComponentProgram,
    Constraint,
    Literal,
    Qbf,
    Rule,
    SituatedLiteral,
    infer_class,
    is_reserved,
)

__all__ = ["ParseError", "Qbf", "SourceSpan", "parse_program", "parse_qbf", "render_program"]


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan) -> None:
        self.message = message
        self.span = span
        super().__init__(f"{span}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "neck", "eof" or the punctuation itself
    text: str
    span: SourceSpan
    offset: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>%[^\n]*)|(?P<neck>:-)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[:;,.{}()&|\-])"
)
_WORDCHAR = re.compile(r"[A-Za-z0-9_]")


def _tokenize(text: str) -> list[Token]:
    text = text.replace("\r\n", "\n")
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(line, col, 1))
        kind = m.lastgroup
        value = m.group()
        span = SourceSpan(line, col, len(value))
        if kind == "neck":
            prev = tokens[-1] if tokens else None
            glued_left = prev is not None and prev.kind == "word" and prev.offset + len(prev.text) == pos
            glued_right = pos + 2 < len(text) and _WORDCHAR.match(text[pos + 2]) is not None
            if glued_left and glued_right and (prev.text[0].isupper() or is_reserved(prev.text)):
                tokens.append(Token(":", ":", SourceSpan(line, col, 1), pos))
                tokens.append(Token("-", "-", SourceSpan(line, col + 1, 1), pos + 1))
            else:
                tokens.append(Token("neck", value, span, pos))
        elif kind == "word":
            tokens.append(Token("word", value, span, pos))
        elif kind == "punct":
            tokens.append(Token(value, value, span, pos))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, col, 0), pos))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek
        return t.kind == kind and (text is None or t.text == text)

    def take(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        t = self.peek
        if not self.at(kind, text):
            expected = what or repr(text or kind)
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {expected}, found {found}", t.span)
        self.i += 1
        return t


KEYWORDS = {"program", "not"}


class _ProgramParser:
    def __init__(self, text: str, allow_reserved: bool) -> None:
        self.cur = _Cursor(_tokenize(text))
        self.allow_reserved = allow_reserved
        # (literal, span) pairs to resolve component references after parsing
        self.references: list[tuple[SituatedLiteral, SourceSpan]] = []

    def check_name(self, tok: Token, kind: str) -> str:
        name = tok.text
        if is_reserved(name):
            if not self.allow_reserved:
                raise ParseError(f"names starting with '__' are reserved: {name}", tok.span)
            return name
        if name in KEYWORDS:
            raise ParseError(f"keyword {name!r} cannot be used as {kind}", tok.span)
        if kind == "component name" and not name[0].isupper():
            raise ParseError(f"component names start with an uppercase letter: {name}", tok.span)
        if kind == "atom" and not name[0].islower():
            raise ParseError(f"atoms start with a lowercase letter: {name}", tok.span)
        return name

    def parse(self) -> CommunicatingProgram:
        cur = self.cur
        components: list[ComponentProgram] = []
        seen: dict[str, SourceSpan] = {}
        if cur.at("eof"):
            raise ParseError("expected at least one 'program' block", cur.peek.span)
        while not cur.at("eof"):
            cur.take("word", "program", what="'program'")
            name_tok = cur.take("word", what="component name")
            name = self.check_name(name_tok, "component name")
            if name in seen:
                raise ParseError(f"duplicate component {name} (first declared at {seen[name]})", name_tok.span)
            seen[name] = name_tok.span
            cur.take("{")
            statements: list[Rule | Constraint] = []
            while not cur.at("}"):
                if cur.at("eof"):
                    raise ParseError(f"unterminated program block {name}", cur.peek.span)
                statements.append(self.statement(name))
            cur.take("}")
            from .transforms import desugar_constraints

            components.append(ComponentProgram(name, tuple(desugar_constraints(statements))))
        for lit, span in self.references:
            if lit.component not in seen:
                raise ParseError(f"reference to undeclared component {lit.component}", span)
        rules = [r for c in components for r in c.rules]
        return CommunicatingProgram(tuple(components), infer_class(rules))

    def statement(self, component: str) -> Rule | Constraint:
        cur = self.cur
        if cur.at("neck"):
            cur.take("neck")
            pos, neg = self.body(component)
            cur.take(".")
            return Constraint(component, frozenset(pos), frozenset(neg))
        heads = [self.slit(component, head=True)]
        while cur.at(";"):
            cur.take(";")
            heads.append(self.slit(component, head=True))
        pos: list[SituatedLiteral] = []
        neg: list[SituatedLiteral] = []
        if cur.at("neck"):
            cur.take("neck")
            pos, neg = self.body(component)
        cur.take(".", what="'.' or ':-'")
        return Rule(frozenset(heads), frozenset(pos), frozenset(neg))

    def body(self, component: str) -> tuple[list[SituatedLiteral], list[SituatedLiteral]]:
        pos: list[SituatedLiteral] = []
        neg: list[SituatedLiteral] = []
        while True:
            if self.cur.at("word", "not"):
                self.cur.take("word")
                neg.append(self.slit(component))
            else:
                pos.append(self.slit(component))
            if not self.cur.at(","):
                return pos, neg
            self.cur.take(",")

    def slit(self, component: str, head: bool = False) -> SituatedLiteral:
        cur = self.cur
        start = cur.peek.span
        start_offset = cur.peek.offset
        owner = component
        if cur.at("word") and cur.tokens[cur.i + 1].kind == ":":
            tok = cur.take("word")
            owner = self.check_name(tok, "component name")
            cur.take(":")
        positive = True
        if cur.at("-"):
            cur.take("-")
            positive = False
        atom_tok = cur.take("word", what="atom")
        atom = self.check_name(atom_tok, "atom")
        span = SourceSpan(start.line, start.column, atom_tok.offset + len(atom_tok.text) - start_offset)
        lit = SituatedLiteral(owner, Literal(atom, positive))
        if head and owner != component:
            raise ParseError(f"rule head {lit} is not local to component {component}", start)
        self.references.append((lit, span))
        return lit


def parse_program(text: str, allow_reserved: bool = False) -> CommunicatingProgram:
    """Parse ``.casp`` text; raises :class:`ParseError` with a source span."""
    return _ProgramParser(text, allow_reserved).parse()


def _render_literal(x: SituatedLiteral, component: str) -> str:
    return str(x.literal) if x.component == component else str(x)


def render_program(p: CommunicatingProgram, header: list[str] | None = None) -> str:
    """Canonical text for ``p``; parses back to an equal program."""
    lines = [f"% {h}" if h else "%" for h in header or ()]
    for comp in p.components:
        lines.append(f"program {comp.name} {{")
        for r in comp.rules:
            head = " ; ".join(_render_literal(h, comp.name) for h in sorted(r.head))
            body = [_render_literal(b, comp.name) for b in sorted(r.body_pos)]
            body += ["not " + _render_literal(b, comp.name) for b in sorted(r.body_neg)]
            lines.append(f"  {head} :- {', '.join(body)}." if body else f"  {head}.")
        lines.append("}")
    return "\n".join(lines) + "\n"


# --- QBF ---------------------------------------------------------------------

QBF_KEYWORDS = {EXISTS, FORALL}


def parse_qbf(text: str) -> Qbf:
    """Parse ``exists x forall y : (x & -y) | (y)``."""
    cur = _Cursor(_tokenize(text))
    blocks: list[tuple[str, tuple[str, ...]]] = []
    bound: dict[str, SourceSpan] = {}
    while cur.at("word") and cur.peek.text in QBF_KEYWORDS:
        qtok = cur.take("word")
        if blocks and blocks[-1][0] == qtok.text:
            raise ParseError(f"quantifiers must alternate ({qtok.text} follows {qtok.text})", qtok.span)
        names: list[str] = []
        while cur.at("word") and cur.peek.text not in QBF_KEYWORDS:
            vtok = cur.take("word")
            _check_var(vtok)
            if vtok.text in bound:
                raise ParseError(f"variable {vtok.text} is bound twice", vtok.span)
            bound[vtok.text] = vtok.span
            names.append(vtok.text)
        if not names:
            raise ParseError(f"empty {qtok.text} block", qtok.span)
        blocks.append((qtok.text, tuple(names)))
    if not blocks:
        raise ParseError("expected 'exists' or 'forall'", cur.peek.span)
    cur.take(":", what="':' after the quantifier prefix")
    clauses: list[frozenset[Literal]] = []
    while True:
        open_tok = cur.take("(")
        if cur.at(")"):
            raise ParseError("empty clause", open_tok.span)
        lits = [_qbf_literal(cur, bound)]
        while cur.at("&"):
            cur.take("&")
            lits.append(_qbf_literal(cur, bound))
        cur.take(")", what="'&' or ')'")
        clauses.append(frozenset(lits))
        if not cur.at("|"):
            break
        cur.take("|")
    cur.take("eof", what="'|' or end of input")
    return Qbf(tuple(blocks), tuple(clauses))


def _check_var(tok: Token) -> None:
    if not tok.text[0].islower() or is_reserved(tok.text):
        raise ParseError(f"variables start with a lowercase letter: {tok.text}", tok.span)


def _qbf_literal(cur: _Cursor, bound: dict[str, SourceSpan]) -> Literal:
    positive = True
    if cur.at("-"):
        cur.take("-")
        positive = False
    tok = cur.take("word", what="variable")
    _check_var(tok)
    if tok.text not in bound:
        raise ParseError(f"variable {tok.text} is not bound by any quantifier", tok.span)
    return Literal(tok.text, positive)
