"""Grounding against a naive nested-loop oracle."""

import itertools

import pytest

from factlog.errors import SafetyError
from factlog.ground import (
    ground,
    is_ground,
    substitute_atom,
    unify_atom,
)
from factlog.logic import (
    Atom,
    Comparison,
    Const,
    KnowledgeUnit,
    Literal,
    RoleBinding,
    Rule,
    ULRTerm,
    Variable,
    parse_program,
)
from factlog.rules import sec_axioms


def program(text):
    return parse_program(text)


EC_PROGRAM = """
happensAt(ulr("Travel",[role("Person","Mary"),role("Place",bedroom)]),1).
happensAt(ulr("North_of",[role("Entity1",bedroom),role("Entity2",garden)]),2).
person("Mary"). place(bedroom). entity(bedroom). entity(garden).
timestamp(1..3).
initiates(ulr("Travel",[role("Person",Person),role("Place",Place)]),ulr("Located",[role("Entity",Person),role("Place",Place)])) :- person(Person), place(Place).
initiates(ulr("North_of",[role("Entity1",E1),role("Entity2",E2)]),ulr("North_of",[role("Entity1",E1),role("Entity2",E2)])) :- entity(E1), entity(E2).
initiates(ulr("North_of",[role("Entity1",E1),role("Entity2",E2)]),ulr("South_of",[role("Entity1",E2),role("Entity2",E1)])) :- entity(E1), entity(E2).
terminates(ulr("Travel",[role("Person",Person),role("Place",Place)]),ulr("Located",[role("Entity",Person),role("Place",Place2)])) :- person(Person), place(Place), place(Place2), Place != Place2.
"""


def _oracle_ground(units):
    """Naive nested-loop grounder: repeatedly try every rule against every
    tuple of known atoms, no indexing, no unification shortcuts."""
    facts = set()
    rules = []
    for u in units:
        if u.kind in {"fact", "disjunctive-fact"}:
            facts.update(u.atoms)
        else:
            rules.append(u.rule)
    instances = {Rule(heads=(a,)) for a in facts}
    known = set(facts)
    changed = True
    while changed:
        changed = False
        for rule in rules:
            positives = [i for i in rule.body
                         if isinstance(i, Literal) and not i.naf]
            comparisons = [i for i in rule.body if isinstance(i, Comparison)]
            nafs = [i for i in rule.body if isinstance(i, Literal) and i.naf]
            for combo in itertools.product(sorted(known, key=repr),
                                           repeat=len(positives)):
                binding: dict = {}
                ok = True
                for lit, atom in zip(positives, combo):
                    binding = unify_atom(lit.atom, atom, binding)
                    if binding is None:
                        ok = False
                        break
                if not ok:
                    continue
                from factlog.ground import evaluate_comparison

                if not all(evaluate_comparison(c, binding) for c in comparisons):
                    continue
                heads = tuple(substitute_atom(h, binding) for h in rule.heads)
                if not all(is_ground(h) for h in heads):
                    continue
                body = [Literal(substitute_atom(l.atom, binding), False)
                        for l in positives]
                body += [Literal(substitute_atom(l.atom, binding), True)
                         for l in nafs]
                inst = Rule(heads=heads, body=tuple(body))
                if inst not in instances:
                    instances.add(inst)
                    changed = True
                for h in heads:
                    if h not in known:
                        known.add(h)
                        changed = True
    return instances


def test_sec_grounding_matches_nested_loop_oracle():
    units = program(EC_PROGRAM)
    units += [KnowledgeUnit(kind="rule", rule=r) for r in sec_axioms()]
    got = ground(units)
    want = _oracle_ground(units)
    assert set(got.rules) == want


def test_rule_over_empty_domain_has_no_instances():
    units = program(
        "p(X) :- q(X).\n"
    )
    got = ground(units)
    assert [r for r in got.rules if r.body] == []


def test_contradictory_guard_yields_no_instances():
    units = program("q(a).\np(X) :- q(X), X != X.\n")
    got = ground(units)
    assert all(r.heads[0].predicate != "p" for r in got.rules)


def test_unguarded_head_variable_raises():
    units = program("p(X) :- q(a).\nq(a).\n")
    with pytest.raises(SafetyError):
        ground(units)


def test_unguarded_naf_variable_raises():
    units = program("p(a) :- q(a), not r(X).\nq(a).\n")
    with pytest.raises(SafetyError):
        ground(units)


def test_grounding_monotone_in_domain():
    base = "q(a).\np(X) :- q(X).\n"
    bigger = base + "q(b).\n"
    small = ground(program(base))
    large = ground(program(bigger))
    assert set(small.rules) <= set(large.rules)


def test_capacity_cap():
    from factlog.errors import CapacityError

    units = program(
        "q(a). q(b). q(c).\n"
        "p(X,Y,Z) :- q(X), q(Y), q(Z).\n"
    )
    with pytest.raises(CapacityError):
        ground(units, cap=5)


def test_unify_role_sets_must_match_exactly():
    t_small = ULRTerm("F", (RoleBinding("R", Variable("X")),))
    t_big = ULRTerm(
        "F", (RoleBinding("R", Const("a")), RoleBinding("S", Const("b")))
    )
    assert unify_atom(
        Atom("ulr", (t_small,)), Atom("ulr", (t_big,)), {}
    ) is None
