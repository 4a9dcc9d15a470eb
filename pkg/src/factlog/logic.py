"""Logical values, atoms, rules, and the knowledge-base text format.

Knowledge units are written one statement per line, `%` comments::

    ulr("Frame",[role("Role","Filler","sense"),...]).      % fact
    ulr(...) v ulr(...).                                   % disjunctive fact
    head v head :- body, not body, X != Y.                 % rule
    initiates(ulr(...),ulr(...)) :- guards.                % fluent axiom
    happensAt(ulr(...),1).  timestamp(1..3).               % narrative
    ulr("Frame",[role("Role",Who)])?                       % query

Fillers are constants (bare lowercase atoms or quoted strings) or
capitalized variables.  Role descriptors may carry a third sense field;
both the 2- and 3-field shapes parse back.  Structured terms appear only
standalone or under the five temporal predicates.  ``serialize_ulr`` and
``parse_program`` are mutual fixpoints on everything this package emits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import terms
from .errors import RuleSyntaxError

TEMPORAL_PREDICATES = {"happensAt", "holdsAt", "initiates", "terminates",
                       "stoppedIn"}
NEGATION_SUFFIX = "_not"

_BARE = re.compile(r"^[a-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Const:
    text: str

    def render(self) -> str:
        if _BARE.match(self.text):
            return self.text
        escaped = self.text.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'

    def __repr__(self):
        return f"Const({self.text})"


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not re.match(r"^[A-Z][A-Za-z0-9_]*$", self.name):
            raise RuleSyntaxError(f"bad variable name {self.name!r}")

    def render(self) -> str:
        return self.name

    def __repr__(self):
        return f"Variable({self.name})"


@dataclass(frozen=True)
class RoleBinding:
    role: str
    filler: object  # Const | Variable
    sense: str | None = None

    def render(self) -> str:
        parts = [f'"{self.role}"', self.filler.render()]
        if self.sense is not None:
            parts.append(Const(self.sense).render())
        return f"role({','.join(parts)})"


@dataclass(frozen=True)
class ULRTerm:
    frame: str
    bindings: tuple[RoleBinding, ...]

    def __post_init__(self):
        if not self.frame:
            raise RuleSyntaxError("frame name must be nonempty")
        roles = [b.role for b in self.bindings]
        if len(set(roles)) != len(roles):
            raise RuleSyntaxError(f"duplicate roles in {self.frame}: {roles}")

    def render(self) -> str:
        inner = ",".join(b.render() for b in self.bindings)
        return f'ulr("{self.frame}",[{inner}])'

    def variables(self) -> set[str]:
        return {
            b.filler.name for b in self.bindings if isinstance(b.filler, Variable)
        }

    def role_map(self) -> dict[str, object]:
        return {b.role: b.filler for b in self.bindings}

    def negated(self) -> "ULRTerm":
        if self.frame.endswith(NEGATION_SUFFIX):
            raise RuleSyntaxError(f"{self.frame} is already negated")
        return ULRTerm(self.frame + NEGATION_SUFFIX, self.bindings)


@dataclass(frozen=True)
class Atom:
    """A predicate over constants, variables, numbers, and structured terms."""

    predicate: str
    args: tuple

    def __post_init__(self):
        if self.predicate not in TEMPORAL_PREDICATES and self.predicate != "ulr":
            for a in self.args:
                if isinstance(a, ULRTerm):
                    raise RuleSyntaxError(
                        "structured terms may appear only standalone or under "
                        f"temporal predicates, not {self.predicate}"
                    )

    def render(self) -> str:
        if self.predicate == "ulr":
            return self.args[0].render()
        return f"{self.predicate}({','.join(_render_arg(a) for a in self.args)})"

    def variables(self) -> set[str]:
        out = set()
        for a in self.args:
            if isinstance(a, Variable):
                out.add(a.name)
            elif isinstance(a, ULRTerm):
                out |= a.variables()
        return out


def fact_atom(term: ULRTerm) -> Atom:
    return Atom("ulr", (term,))


def _render_arg(a) -> str:
    if isinstance(a, (Const, Variable, ULRTerm)):
        return a.render()
    if isinstance(a, int):
        return str(a)
    raise RuleSyntaxError(f"cannot render argument {a!r}")


@dataclass(frozen=True)
class Literal:
    atom: Atom
    naf: bool = False  # negation as failure ("not provable")

    def render(self) -> str:
        return ("not " if self.naf else "") + self.atom.render()


@dataclass(frozen=True)
class Comparison:
    op: str  # "<" | "!="
    left: object
    right: object

    def __post_init__(self):
        if self.op not in {"<", "!="}:
            raise RuleSyntaxError(f"unsupported comparison {self.op!r}")

    def render(self) -> str:
        return f"{_render_arg(self.left)} {self.op} {_render_arg(self.right)}"


@dataclass(frozen=True)
class Rule:
    heads: tuple[Atom, ...]
    body: tuple = ()  # Literal | Comparison

    def __post_init__(self):
        if not self.heads:
            raise RuleSyntaxError("a rule needs at least one head atom")
        for item in self.body:
            if isinstance(item, Literal) and item.naf and not item.atom:
                raise RuleSyntaxError("bad naf literal")

    def render(self) -> str:
        head = " v ".join(h.render() for h in self.heads)
        if not self.body:
            return head
        body = ", ".join(item.render() for item in self.body)
        return f"{head} :- {body}"

    def is_fact(self) -> bool:
        return not self.body and len(self.heads) == 1


FACT = "fact"
DISJUNCTIVE_FACT = "disjunctive-fact"
RULE = "rule"
FLUENT_AXIOM = "fluent-axiom"
QUERY = "query"


@dataclass(frozen=True)
class KnowledgeUnit:
    kind: str
    atoms: tuple[Atom, ...] = ()  # fact disjuncts, or the query atom
    rule: Rule | None = None

    def __post_init__(self):
        if self.kind == DISJUNCTIVE_FACT and len(self.atoms) < 2:
            raise RuleSyntaxError("a disjunctive fact needs at least 2 disjuncts")
        if self.kind in {RULE, FLUENT_AXIOM} and self.rule is None:
            raise RuleSyntaxError(f"{self.kind} unit needs a rule payload")


def serialize_ulr(unit: KnowledgeUnit) -> str:
    if unit.kind == FACT:
        return unit.atoms[0].render() + "."
    if unit.kind == DISJUNCTIVE_FACT:
        return " v ".join(a.render() for a in unit.atoms) + "."
    if unit.kind in {RULE, FLUENT_AXIOM}:
        return unit.rule.render() + "."
    if unit.kind == QUERY:
        return unit.atoms[0].render() + "?"
    raise RuleSyntaxError(f"unknown unit kind {unit.kind!r}")


def serialize_kb(units) -> str:
    return "\n".join(serialize_ulr(u) for u in units) + "\n"


# -- parsing ---------------------------------------------------------------


def _term_to_value(term):
    if isinstance(term, terms.Str):
        return Const(term.value)
    if isinstance(term, terms.Atom):
        return Const(term.name)
    if isinstance(term, terms.Var):
        return Variable(term.name)
    if isinstance(term, terms.Num):
        return term.value
    if isinstance(term, terms.Compound) and term.functor == "ulr":
        return _term_to_ulr(term)
    raise RuleSyntaxError(f"unexpected value {terms.format_term(term)}")


def _term_to_ulr(term) -> ULRTerm:
    term = terms.expect_compound(term, "ulr", 2)
    frame = terms.text_of(term.args[0])
    if not isinstance(term.args[1], terms.List_):
        raise RuleSyntaxError("second ulr argument must be a role list")
    bindings = []
    for r in term.args[1].items:
        r = terms.expect_compound(r, "role")
        if len(r.args) not in {2, 3}:
            raise RuleSyntaxError("role descriptors have 2 or 3 fields")
        role = terms.text_of(r.args[0])
        filler = _term_to_value(r.args[1])
        sense = terms.text_of(r.args[2]) if len(r.args) == 3 else None
        bindings.append(RoleBinding(role, filler, sense))
    return ULRTerm(frame, tuple(bindings))


def _term_to_atom(term) -> Atom:
    if isinstance(term, terms.Compound) and term.functor == "ulr":
        return fact_atom(_term_to_ulr(term))
    if isinstance(term, terms.Compound):
        args = []
        for a in term.args:
            if isinstance(a, terms.Compound) and a.functor == "ulr":
                args.append(_term_to_ulr(a))
            elif isinstance(a, terms.Range):
                args.append(a)  # handled by the statement layer
            else:
                args.append(_term_to_value(a))
        return Atom(term.functor, tuple(args))
    if isinstance(term, terms.Atom):
        return Atom(term.name, ())
    raise RuleSyntaxError(f"expected an atom, got {terms.format_term(term)}")


def _split_top(text: str, separator: str) -> list[str]:
    """Split on a separator at paren/bracket/quote depth zero."""
    parts = []
    depth = 0
    in_str = False
    i = 0
    last = 0
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and text.startswith(separator, i):
            # word separators need boundaries; symbols do not
            if separator.strip() and separator[0].isalpha():
                before = text[i - 1] if i else " "
                after_i = i + len(separator)
                after = text[after_i] if after_i < len(text) else " "
                if not (before.isspace() and after.isspace()):
                    i += 1
                    continue
            parts.append(text[last:i])
            i += len(separator)
            last = i
            continue
        i += 1
    parts.append(text[last:])
    return parts


def _parse_body_item(text: str):
    text = text.strip()
    if text.startswith("not "):
        return Literal(_term_to_atom(terms.parse_term(text[4:])), naf=True)
    for op in ("!=", "<"):
        pieces = _split_top(text, op)
        if len(pieces) == 2:
            left = _term_to_value(terms.parse_term(pieces[0].strip()))
            right = _term_to_value(terms.parse_term(pieces[1].strip()))
            return Comparison(op, left, right)
    return Literal(_term_to_atom(terms.parse_term(text)))


def parse_statement(stmt: str) -> list[KnowledgeUnit]:
    """One KB/program line into knowledge units (ranges may expand to many)."""
    stmt = stmt.strip()
    is_query = stmt.endswith("?")
    body_text = None
    head_text = stmt.rstrip(".?").strip()
    if ":-" in stmt:
        head_text, _, body_text = head_text.partition(":-")
    disjunct_texts = [t.strip() for t in _split_top(head_text, " v ")]
    head_atoms = tuple(_term_to_atom(terms.parse_term(t)) for t in disjunct_texts)

    if body_text is not None:
        body = tuple(
            _parse_body_item(piece) for piece in _split_top(body_text, ",")
        )
        rule = Rule(heads=head_atoms, body=body)
        kind = (
            FLUENT_AXIOM
            if rule.heads[0].predicate in {"initiates", "terminates"}
            else RULE
        )
        return [KnowledgeUnit(kind=kind, rule=rule)]
    if is_query:
        if len(head_atoms) != 1:
            raise RuleSyntaxError("a query is a single atom")
        return [KnowledgeUnit(kind=QUERY, atoms=head_atoms)]
    if len(head_atoms) > 1:
        return [KnowledgeUnit(kind=DISJUNCTIVE_FACT, atoms=head_atoms)]
    atom = head_atoms[0]
    # expand range facts like timestamp(1..3)
    if len(atom.args) == 1 and isinstance(atom.args[0], terms.Range):
        rng = atom.args[0]
        return [
            KnowledgeUnit(kind=FACT, atoms=(Atom(atom.predicate, (i,)),))
            for i in range(rng.lo, rng.hi + 1)
        ]
    return [KnowledgeUnit(kind=FACT, atoms=(atom,))]


def _split_statements(line: str) -> list[str]:
    """Several dot-terminated statements may share a line."""
    out = []
    depth = 0
    in_str = False
    last = 0
    i = 0
    while i < len(line):
        ch = line[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in ".?" and depth == 0:
            nxt = line[i + 1] if i + 1 < len(line) else " "
            if ch == "?" or not nxt.isdigit():  # 1..3 is not a terminator
                out.append(line[last:i + 1].strip())
                last = i + 1
        i += 1
    tail = line[last:].strip()
    if tail:
        out.append(tail)
    return [s for s in out if s]


def parse_program(text: str) -> list[KnowledgeUnit]:
    units = []
    for line_no, line in terms.iter_statements(text):
        for stmt in _split_statements(line):
            try:
                units.extend(parse_statement(stmt))
            except RuleSyntaxError as exc:
                raise RuleSyntaxError(f"line {line_no}: {exc}") from None
    return units
