"""Rule assembly, fluent axioms, inertia axioms, and narratives.

Rules arrive as premise/conclusion term lists (already converted from
clause text).  Assembly enforces the safety discipline:

  - a conclusion variable must occur in at least one premise; a typed
    variable occurring only under negation-as-failure gets a domain
    guard atom appended (its type predicate), since nothing else grounds
    it;
  - negation-as-failure is body-only;
  - fluent initiation effects may not introduce variables absent from
    the trigger; terminations may, guarded by their type, and a
    termination whose effect reuses a trigger variable's type under a
    different name gets an inequality guard (moving to place1 terminates
    being located at any *other* place2).

Explicitly typed variables are written ``$name`` in clause text; the
variable is the capitalized name and its domain predicate is the name
with any trailing digits stripped (``$place2`` -> variable ``Place2``
of type ``place``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RuleSyntaxError, SafetyError
from .logic import (
    FACT,
    DISJUNCTIVE_FACT,
    FLUENT_AXIOM,
    RULE,
    Atom,
    Comparison,
    KnowledgeUnit,
    Literal,
    Rule,
    ULRTerm,
    Variable,
    fact_atom,
)

_TYPED_VAR = re.compile(r"^\$([a-z][a-z0-9_]*)$")


def typed_variable(surface: str) -> tuple[Variable, str]:
    """``$place2`` -> (Variable Place2, domain predicate ``place``)."""
    m = _TYPED_VAR.match(surface)
    if not m:
        raise RuleSyntaxError(f"not an explicitly typed variable: {surface!r}")
    name = m.group(1)
    var = Variable(name[0].upper() + name[1:])
    domain = name.rstrip("0123456789").rstrip("_") or name
    return var, domain


class VariableTypes:
    """Variable name -> domain predicate, rejecting cross-type collisions."""

    def __init__(self):
        self.types: dict[str, str] = {}

    def register(self, var: Variable, domain: str) -> None:
        existing = self.types.get(var.name)
        if existing is not None and existing != domain:
            raise RuleSyntaxError(
                f"variable {var.name} used with types {existing!r} and {domain!r}"
            )
        self.types[var.name] = domain

    def register_surface(self, surface: str) -> Variable:
        var, domain = typed_variable(surface)
        self.register(var, domain)
        return var

    def get(self, name: str) -> str | None:
        return self.types.get(name)


def _guard(name: str, types: VariableTypes) -> Literal:
    domain = types.get(name)
    if domain is None:
        raise SafetyError(
            f"variable {name} is not bound by a positive premise and has no "
            "declared type"
        )
    return Literal(Atom(domain, (Variable(name),)))


def build_rule(
    premises: list[tuple[ULRTerm, bool]],
    conclusions: list[ULRTerm],
    types: VariableTypes,
) -> Rule:
    """Assemble a disjunctive rule from premise and conclusion terms.

    *premises* pairs each term with its negation-as-failure flag.
    """
    if not conclusions:
        raise RuleSyntaxError("a rule needs at least one conclusion")
    if not premises:
        raise RuleSyntaxError("a rule needs at least one premise")
    heads = tuple(fact_atom(t) for t in conclusions)
    body: list = [Literal(fact_atom(t), naf=naf) for t, naf in premises]

    positive_vars: set[str] = set()
    naf_vars: set[str] = set()
    for term, naf in premises:
        (naf_vars if naf else positive_vars).update(term.variables())
    head_vars = set().union(*(t.variables() for t in conclusions))

    orphans = head_vars - positive_vars - naf_vars
    if orphans:
        name = sorted(orphans)[0]
        raise SafetyError(
            f"conclusion variable {name} does not appear in any premise"
        )
    for name in sorted((naf_vars | head_vars) - positive_vars):
        body.append(_guard(name, types))
    rule = Rule(heads=heads, body=tuple(body))
    validate_safety(rule)
    return rule


INITIATION = "initiation"
TERMINATION = "termination"


@dataclass(frozen=True)
class FluentStatement:
    kind: str  # INITIATION | TERMINATION
    trigger: ULRTerm
    effect: ULRTerm
    types: VariableTypes

    def __post_init__(self):
        if self.kind not in {INITIATION, TERMINATION}:
            raise RuleSyntaxError(f"bad fluent statement kind {self.kind!r}")


def build_fluent_axiom(s: FluentStatement) -> Rule:
    """Translate a fluent initiation/termination statement into a rule."""
    trigger_vars = s.trigger.variables()
    effect_vars = s.effect.variables()
    if s.kind == INITIATION and not effect_vars <= trigger_vars:
        fresh = sorted(effect_vars - trigger_vars)[0]
        raise SafetyError(
            f"initiated fluent introduces unbound variable {fresh}"
        )
    predicate = "initiates" if s.kind == INITIATION else "terminates"
    head = Atom(predicate, (s.trigger, s.effect))
    ordered = sorted(trigger_vars) + sorted(effect_vars - trigger_vars)
    body: list = [_guard(name, s.types) for name in ordered]
    if s.kind == TERMINATION:
        for ev in sorted(effect_vars - trigger_vars):
            for tv in sorted(trigger_vars):
                if s.types.get(ev) == s.types.get(tv):
                    body.append(Comparison("!=", Variable(tv), Variable(ev)))
    rule = Rule(heads=(head,), body=tuple(body))
    validate_safety(rule)
    return rule


def validate_safety(rule: Rule) -> None:
    """Every head variable must occur in a positive body literal."""
    positive = set()
    for item in rule.body:
        if isinstance(item, Literal) and not item.naf:
            positive |= item.atom.variables()
    for head in rule.heads:
        loose = head.variables() - positive
        if loose:
            raise SafetyError(
                f"head variable {sorted(loose)[0]} is not bound by a positive "
                "body literal"
            )


def sec_axioms() -> list[Rule]:
    """The two inertia rules of the simplified event calculus.

    A fluent holds at a timestamp if initiated by an earlier action and
    not stopped in between; stopping is witnessed by a terminating action
    strictly inside the interval.
    """
    A, F = Variable("A"), Variable("F")
    T, T1, T2 = Variable("T"), Variable("T1"), Variable("T2")
    holds = Rule(
        heads=(Atom("holdsAt", (F, T2)),),
        body=(
            Literal(Atom("happensAt", (A, T1))),
            Literal(Atom("initiates", (A, F))),
            Literal(Atom("timestamp", (T2,))),
            Comparison("<", T1, T2),
            Literal(Atom("stoppedIn", (T1, F, T2)), naf=True),
        ),
    )
    stopped = Rule(
        heads=(Atom("stoppedIn", (T1, F, T2)),),
        body=(
            Literal(Atom("happensAt", (A, T))),
            Literal(Atom("terminates", (A, F))),
            Literal(Atom("timestamp", (T1,))),
            Comparison("<", T1, T),
            Literal(Atom("timestamp", (T2,))),
            Comparison("<", T, T2),
        ),
    )
    return [holds, stopped]


@dataclass(frozen=True)
class TemporalNarrative:
    """Ordered narrative events with assigned timestamps.

    Each event is (connective, terms, timestamp): one sentence may
    contribute several terms (conjunction shares the timestamp) or a
    disjunctive group.  The horizon is one past the last event, which is
    where queries are evaluated.
    """

    events: tuple[tuple[str, tuple[ULRTerm, ...], int], ...]
    horizon: int

    def units(self) -> list[KnowledgeUnit]:
        out = []
        for connective, terms_, ts in self.events:
            atoms = tuple(Atom("happensAt", (t, ts)) for t in terms_)
            if connective == "or" and len(atoms) > 1:
                out.append(KnowledgeUnit(kind=DISJUNCTIVE_FACT, atoms=atoms))
            else:
                out.extend(KnowledgeUnit(kind=FACT, atoms=(a,)) for a in atoms)
        for ts in range(1, self.horizon + 1):
            out.append(
                KnowledgeUnit(kind=FACT, atoms=(Atom("timestamp", (ts,)),))
            )
        return out


def assign_timestamps(sentence_events) -> TemporalNarrative:
    """Give the i-th narrative sentence timestamp i; horizon is N+1.

    *sentence_events* is a sequence of (connective, terms) pairs in
    discourse order; terms from one sentence share its timestamp.
    """
    events = []
    for i, (connective, terms_) in enumerate(sentence_events, start=1):
        if not terms_:
            raise RuleSyntaxError(f"narrative sentence {i} produced no events")
        events.append((connective, tuple(terms_), i))
    horizon = len(events) + 1
    return TemporalNarrative(events=tuple(events), horizon=horizon)


def wrap_time_rule(rule: Rule, horizon_var: str = "T") -> Rule:
    """Lift a plain rule to fluents: every term holds at one shared time."""
    T = Variable(horizon_var)

    def wrap_atom(atom: Atom) -> Atom:
        if atom.predicate == "ulr":
            return Atom("holdsAt", (atom.args[0], T))
        return atom

    heads = tuple(wrap_atom(h) for h in rule.heads)
    body = []
    wrapped_any = False
    for item in rule.body:
        if isinstance(item, Literal):
            new_atom = wrap_atom(item.atom)
            wrapped_any = wrapped_any or new_atom is not item.atom
            body.append(Literal(new_atom, item.naf))
        else:
            body.append(item)
    if not any(
        isinstance(i, Literal) and not i.naf and i.atom.predicate == "holdsAt"
        for i in body
    ):
        body.append(Literal(Atom("timestamp", (T,))))
    return Rule(heads=heads, body=tuple(body))
