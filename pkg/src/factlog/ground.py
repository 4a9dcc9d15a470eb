"""Grounding: variable-free instantiation of a program.

Variables are bound by joining the positive body literals of each rule
against the set of possibly-derivable atoms (facts, disjunct choices, and
heads of already-produced instances), iterated to a fixpoint.  Comparison
guards are evaluated during grounding and removed from the instances.  A
variable not bound by any positive literal is a safety error; exceeding
the configured instance cap is a capacity error.

Structured-term patterns unify role-by-role with exact role sets; the
looser subsumption matching is a query-time feature only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError, SafetyError
from .logic import (
    DISJUNCTIVE_FACT,
    FACT,
    Atom,
    Comparison,
    KnowledgeUnit,
    Literal,
    Rule,
    RoleBinding,
    ULRTerm,
    Variable,
)

DEFAULT_INSTANCE_CAP = 10**6


def substitute(value, binding: dict):
    if isinstance(value, Variable):
        return binding.get(value.name, value)
    if isinstance(value, ULRTerm):
        return ULRTerm(
            value.frame,
            tuple(
                RoleBinding(b.role, substitute(b.filler, binding), b.sense)
                for b in value.bindings
            ),
        )
    return value


def substitute_atom(atom: Atom, binding: dict) -> Atom:
    return Atom(atom.predicate, tuple(substitute(a, binding) for a in atom.args))


def is_ground(value) -> bool:
    if isinstance(value, Variable):
        return False
    if isinstance(value, ULRTerm):
        return all(is_ground(b.filler) for b in value.bindings)
    if isinstance(value, Atom):
        return all(is_ground(a) for a in value.args)
    return True


def unify(pattern, ground, binding: dict) -> dict | None:
    """Extend *binding* so *pattern* equals the ground value, or None."""
    if isinstance(pattern, Variable):
        bound = binding.get(pattern.name)
        if bound is None:
            out = dict(binding)
            out[pattern.name] = ground
            return out
        return binding if bound == ground else None
    if isinstance(pattern, ULRTerm):
        if not isinstance(ground, ULRTerm) or pattern.frame != ground.frame:
            return None
        pmap, gmap = pattern.role_map(), ground.role_map()
        if set(pmap) != set(gmap):
            return None
        for role in pmap:
            binding = unify(pmap[role], gmap[role], binding)
            if binding is None:
                return None
        return binding
    return binding if pattern == ground else None


def unify_atom(pattern: Atom, ground: Atom, binding: dict) -> dict | None:
    if pattern.predicate != ground.predicate or len(pattern.args) != len(
        ground.args
    ):
        return None
    for p, g in zip(pattern.args, ground.args):
        binding = unify(p, g, binding)
        if binding is None:
            return None
    return binding


def _strip_sense(value):
    """Senses are annotation, not identity: drop them before reasoning."""
    if isinstance(value, ULRTerm):
        return ULRTerm(
            value.frame,
            tuple(
                RoleBinding(b.role, _strip_sense(b.filler), None)
                for b in value.bindings
            ),
        )
    return value


def _strip_atom(atom: Atom) -> Atom:
    return Atom(atom.predicate, tuple(_strip_sense(a) for a in atom.args))


def evaluate_comparison(cmp: Comparison, binding: dict) -> bool:
    left = substitute(cmp.left, binding)
    right = substitute(cmp.right, binding)
    if not is_ground(left) or not is_ground(right):
        raise SafetyError(
            f"comparison {cmp.render()} not fully bound during grounding"
        )
    if cmp.op == "!=":
        return left != right
    if isinstance(left, int) and isinstance(right, int):
        return left < right
    raise SafetyError(f"order comparison over non-timestamps: {cmp.render()}")


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple[Rule, ...]  # all ground; facts have empty bodies
    atoms: frozenset  # the relevant ground-atom universe

    def disjunctive_rules(self) -> list[Rule]:
        return [r for r in self.rules if len(r.heads) > 1]


def _rule_of(unit: KnowledgeUnit) -> Rule:
    if unit.kind in {FACT, DISJUNCTIVE_FACT}:
        return Rule(heads=tuple(_strip_atom(a) for a in unit.atoms))
    rule = unit.rule
    return Rule(
        heads=tuple(_strip_atom(h) for h in rule.heads),
        body=tuple(
            Literal(_strip_atom(i.atom), i.naf) if isinstance(i, Literal) else i
            for i in rule.body
        ),
    )


def _instantiate(rule: Rule, possible: set, cap: int) -> list[Rule]:
    """All ground instances of one rule against the possible-atom set."""
    positives = [i for i in rule.body if isinstance(i, Literal) and not i.naf]
    comparisons = [i for i in rule.body if isinstance(i, Comparison)]
    nafs = [i for i in rule.body if isinstance(i, Literal) and i.naf]

    bindings = [dict()]
    for lit in positives:
        next_bindings = []
        for binding in bindings:
            pattern = substitute_atom(lit.atom, binding)
            if is_ground(pattern):
                if pattern in possible:
                    next_bindings.append(binding)
                continue
            for candidate in possible:
                unified = unify_atom(pattern, candidate, binding)
                if unified is not None:
                    next_bindings.append(unified)
        bindings = next_bindings
        if len(bindings) > cap:
            raise CapacityError(f"grounding exceeded {cap} instances")

    instances = []
    for binding in bindings:
        if not all(evaluate_comparison(c, binding) for c in comparisons):
            continue
        heads = tuple(substitute_atom(h, binding) for h in rule.heads)
        body = [
            Literal(substitute_atom(lit.atom, binding), naf=False)
            for lit in positives
        ]
        for lit in nafs:
            ground_naf = substitute_atom(lit.atom, binding)
            if not is_ground(ground_naf):
                raise SafetyError(
                    f"negated literal {lit.render()} not fully bound; add a "
                    "domain guard"
                )
            body.append(Literal(ground_naf, naf=True))
        for h in heads:
            if not is_ground(h):
                raise SafetyError(
                    f"head {h.render()} not fully bound; add a domain guard"
                )
        instances.append(Rule(heads=heads, body=tuple(body)))
    return instances


def ground(units, cap: int = DEFAULT_INSTANCE_CAP) -> GroundProgram:
    """Ground every rule unit against the monotone closure of the facts."""
    rules = [_rule_of(u) for u in units]
    possible: set = set()
    for r in rules:
        if not r.body:
            possible.update(r.heads)

    produced: dict[Rule, None] = {}  # insertion-ordered set
    for r in rules:
        if not r.body:
            produced.setdefault(r)

    changed = True
    while changed:
        changed = False
        for r in rules:
            if not r.body:
                continue
            for inst in _instantiate(r, possible, cap):
                if inst not in produced:
                    produced.setdefault(inst)
                    changed = True
                for h in inst.heads:
                    if h not in possible:
                        possible.add(h)
                        changed = True
            if len(produced) > cap:
                raise CapacityError(f"grounding exceeded {cap} instances")

    return GroundProgram(rules=tuple(produced), atoms=frozenset(possible))
