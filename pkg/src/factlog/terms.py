"""Reader/writer for the Prolog-style term syntax used by the text formats.

Knowledge files (valence patterns, frames, knowledge bases, programs) are
plain text, one statement per line, `%` comments.  A statement is a term
followed by `.` (or `?` for queries).  Terms are:

  - atoms:      lowercase identifiers (``buy``, ``bedroom``)
  - strings:    double-quoted (``"Commerce_buy"``)
  - variables:  capitalized identifiers (``Who``, ``T2``)
  - numbers:    integers (``3``) and ranges (``1..5``)
  - compounds:  ``functor(arg, ...)``
  - lists:      ``[a, b, c]``

The writer quotes atoms that are not safe bare atoms, so write/read is a
fixpoint on everything this package emits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RuleSyntaxError

_BARE_ATOM = re.compile(r"^[a-z][A-Za-z0-9_]*$")
_VARIABLE = re.compile(r"^[A-Z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Atom:
    """A bare lowercase constant."""

    name: str

    def __repr__(self):
        return f"Atom({self.name})"


@dataclass(frozen=True)
class Str:
    """A double-quoted string constant."""

    value: str

    def __repr__(self):
        return f"Str({self.value!r})"


@dataclass(frozen=True)
class Var:
    """A capitalized logic variable."""

    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True)
class Num:
    value: int

    def __repr__(self):
        return f"Num({self.value})"


@dataclass(frozen=True)
class Range:
    lo: int
    hi: int

    def __repr__(self):
        return f"Range({self.lo}..{self.hi})"


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __repr__(self):
        return f"{self.functor}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class List_:
    items: tuple

    def __repr__(self):
        return f"List{list(self.items)!r}"


Term = object  # union of the dataclasses above


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        return RuleSyntaxError(f"{msg} at column {self.pos + 1}: {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        self.skip_ws()
        if not self.text.startswith(expected, self.pos):
            raise self.error(f"expected {expected!r}")
        self.pos += len(expected)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def read_string(self) -> str:
        self.take('"')
        out = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "\\" and self.pos < len(self.text):
                out.append(self.text[self.pos])
                self.pos += 1
            elif ch == '"':
                return "".join(out)
            else:
                out.append(ch)
        raise self.error("unterminated string")

    def read_name(self) -> str:
        self.skip_ws()
        m = re.match(r"[A-Za-z_$][A-Za-z0-9_]*", self.text[self.pos:])
        if not m:
            raise self.error("expected a name")
        self.pos += m.end()
        return m.group(0)

    def read_int(self) -> int:
        self.skip_ws()
        m = re.match(r"-?\d+", self.text[self.pos:])
        if not m:
            raise self.error("expected an integer")
        self.pos += m.end()
        return int(m.group(0))


def _parse_term(lx: _Lexer):
    ch = lx.peek()
    if ch == '"':
        return Str(lx.read_string())
    if ch == "[":
        lx.take("[")
        items = []
        if lx.peek() != "]":
            items.append(_parse_term(lx))
            while lx.peek() == ",":
                lx.take(",")
                items.append(_parse_term(lx))
        lx.take("]")
        return List_(tuple(items))
    if ch.isdigit() or ch == "-":
        n = lx.read_int()
        lx.skip_ws()
        if lx.text.startswith("..", lx.pos):
            lx.pos += 2
            return Range(n, lx.read_int())
        return Num(n)
    name = lx.read_name()
    if lx.peek() == "(":
        lx.take("(")
        args = []
        if lx.peek() != ")":
            args.append(_parse_term(lx))
            while lx.peek() == ",":
                lx.take(",")
                args.append(_parse_term(lx))
        lx.take(")")
        return Compound(name, tuple(args))
    if _VARIABLE.match(name):
        return Var(name)
    return Atom(name)


def parse_term(text: str):
    """Parse a single term from *text*; trailing `.`/`?` allowed."""
    lx = _Lexer(text)
    term = _parse_term(lx)
    if not lx.at_end():
        nxt = lx.peek()
        if nxt in {".", "?"}:
            lx.take(nxt)
        if not lx.at_end():
            raise lx.error("trailing input after term")
    return term


def parse_terms(text: str, lexer_out: _Lexer | None = None):
    """Parse a comma-separated sequence of terms (no trailing punctuation)."""
    lx = _Lexer(text)
    terms = [_parse_term(lx)]
    while lx.peek() == ",":
        lx.take(",")
        terms.append(_parse_term(lx))
    if not lx.at_end():
        raise lx.error("trailing input after terms")
    return terms


def iter_statements(text: str):
    """Yield (line_number, statement_text) pairs, skipping comments/blanks."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        yield i, line


def format_term(term) -> str:
    if isinstance(term, Atom):
        if _BARE_ATOM.match(term.name):
            return term.name
        return format_term(Str(term.name))
    if isinstance(term, Str):
        escaped = term.value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Num):
        return str(term.value)
    if isinstance(term, Range):
        return f"{term.lo}..{term.hi}"
    if isinstance(term, Compound):
        return f"{term.functor}({','.join(format_term(a) for a in term.args)})"
    if isinstance(term, List_):
        return f"[{','.join(format_term(a) for a in term.items)}]"
    raise TypeError(f"cannot format {term!r}")


def expect_compound(term, functor: str, arity: int | None = None) -> Compound:
    if not isinstance(term, Compound) or term.functor != functor:
        raise RuleSyntaxError(f"expected {functor}(...), got {format_term(term)}")
    if arity is not None and len(term.args) != arity:
        raise RuleSyntaxError(
            f"expected {functor}/{arity}, got {functor}/{len(term.args)}"
        )
    return term


def text_of(term) -> str:
    """The textual payload of an atom or string term."""
    if isinstance(term, Atom):
        return term.name
    if isinstance(term, Str):
        return term.value
    if isinstance(term, Var):
        return term.name
    raise RuleSyntaxError(f"expected an atom or string, got {format_term(term)}")
