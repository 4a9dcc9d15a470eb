"""Rule assembly, fluent axioms, the inertia axioms, and narratives."""

import pytest

from factlog.errors import RuleSyntaxError, SafetyError
from factlog.logic import (
    Comparison,
    Const,
    Literal,
    RoleBinding,
    ULRTerm,
    Variable,
    serialize_ulr,
)
from factlog.rules import (
    INITIATION,
    TERMINATION,
    FluentStatement,
    VariableTypes,
    assign_timestamps,
    build_fluent_axiom,
    build_rule,
    sec_axioms,
    typed_variable,
    validate_safety,
    wrap_time_rule,
)


def term(frame, **roles):
    bindings = []
    for role, value in sorted(roles.items()):
        filler = Variable(value[1:]) if value.startswith("^") else Const(value)
        bindings.append(RoleBinding(role, filler))
    return ULRTerm(frame, tuple(bindings))


def types_of(**mapping):
    types = VariableTypes()
    for name, domain in mapping.items():
        types.register(Variable(name), domain)
    return types


def test_typed_variable_shapes():
    var, domain = typed_variable("$doctor")
    assert var == Variable("Doctor") and domain == "doctor"
    var, domain = typed_variable("$place2")
    assert var == Variable("Place2") and domain == "place"
    var, domain = typed_variable("$imaging_study")
    assert var == Variable("Imaging_study") and domain == "imaging_study"


def test_type_collision_rejected():
    types = VariableTypes()
    types.register(Variable("Doctor"), "doctor")
    with pytest.raises(RuleSyntaxError):
        types.register(Variable("Doctor"), "person")


def test_disjunctive_two_head_rule():
    premises = [
        (term("People_by_age", Person="^Patient", Type="child"), False),
        (term("Medical_issues", Doctor="^Doctor", Patient="^Patient",
              Ailment="fever", Cause="unexplained"), False),
    ]
    conclusions = [
        term("Assessing", Doctor="^Doctor", Patient="^Patient", Item="toxicity"),
        term("Assessing", Doctor="^Doctor", Patient="^Patient",
             Item="dehydration"),
    ]
    rule = build_rule(premises, conclusions,
                      types_of(Doctor="doctor", Patient="patient"))
    assert len(rule.heads) == 2
    # both premise terms present, no redundant guards (vars bound positively)
    assert len(rule.body) == 2
    assert all(not item.naf for item in rule.body)


def test_naf_premise_gets_domain_guards():
    premises = [
        (term("Cure_not", Doctor="^Doctor", Patient="^Patient",
              Therapy="^Therapy"), True)
    ]
    conclusions = [
        term("Undergoing", Doctor="^Doctor", Patient="^Patient",
             Therapy="^Therapy")
    ]
    rule = build_rule(
        premises,
        conclusions,
        types_of(Doctor="doctor", Patient="patient", Therapy="therapy"),
    )
    naf = [i for i in rule.body if isinstance(i, Literal) and i.naf]
    guards = [i for i in rule.body if isinstance(i, Literal) and not i.naf]
    assert len(naf) == 1
    assert sorted(g.atom.predicate for g in guards) == [
        "doctor", "patient", "therapy",
    ]
    validate_safety(rule)


def test_head_variable_missing_from_premises_is_unsafe():
    premises = [(term("Visit", Person="Mary"), False)]
    conclusions = [term("Seeing", Doctor="^Doctor", Patient="Mary")]
    with pytest.raises(SafetyError):
        build_rule(premises, conclusions, types_of(Doctor="doctor"))


def test_untyped_naf_variable_is_unsafe():
    premises = [(term("Cure_not", Doctor="^Doctor"), True)]
    conclusions = [term("Undergoing", Doctor="^Doctor")]
    with pytest.raises(SafetyError):
        build_rule(premises, conclusions, VariableTypes())


# -- fluent axioms -------------------------------------------------------------


def test_initiation_axiom_with_guards():
    statement = FluentStatement(
        kind=INITIATION,
        trigger=term("Travel", Person="^Person", Place="^Place"),
        effect=term("Located", Entity="^Person", Location="^Place"),
        types=types_of(Person="person", Place="place"),
    )
    rule = build_fluent_axiom(statement)
    assert rule.heads[0].predicate == "initiates"
    rendered = rule.render()
    assert "person(Person)" in rendered and "place(Place)" in rendered


def test_termination_gets_inequality_guard():
    statement = FluentStatement(
        kind=TERMINATION,
        trigger=term("Travel", Person="^Person", Place="^Place"),
        effect=term("Located", Entity="^Person", Location="^Place2"),
        types=types_of(Person="person", Place="place", Place2="place"),
    )
    rule = build_fluent_axiom(statement)
    comparisons = [i for i in rule.body if isinstance(i, Comparison)]
    assert len(comparisons) == 1
    assert comparisons[0].render() == "Place != Place2"


def test_initiation_with_fresh_effect_variable_is_unsafe():
    statement = FluentStatement(
        kind=INITIATION,
        trigger=term("Travel", Person="^Person"),
        effect=term("Riding", Person="^Person", Vehicle="^Vehicle"),
        types=types_of(Person="person", Vehicle="vehicle"),
    )
    with pytest.raises(SafetyError):
        build_fluent_axiom(statement)


# -- inertia axioms --------------------------------------------------------------


def test_sec_axioms_shapes():
    axioms = sec_axioms()
    assert len(axioms) == 2
    holds, stopped = axioms
    assert holds.render() == (
        "holdsAt(F,T2) :- happensAt(A,T1), initiates(A,F), timestamp(T2), "
        "T1 < T2, not stoppedIn(T1,F,T2)"
    )
    assert stopped.render() == (
        "stoppedIn(T1,F,T2) :- happensAt(A,T), terminates(A,F), "
        "timestamp(T1), T1 < T, timestamp(T2), T < T2"
    )


def test_sec_axioms_closed_vocabulary():
    predicates = set()
    for rule in sec_axioms():
        predicates.add(rule.heads[0].predicate)
        for item in rule.body:
            if isinstance(item, Literal):
                predicates.add(item.atom.predicate)
    assert predicates == {
        "holdsAt", "stoppedIn", "happensAt", "initiates", "terminates",
        "timestamp",
    }


# -- narratives ---------------------------------------------------------------------


def test_two_sentence_narrative():
    e1 = term("Travel", Person="Mary", Place="bedroom")
    e2 = term("North_of", Entity1="bedroom", Entity2="garden")
    narrative = assign_timestamps([("and", [e1]), ("and", [e2])])
    assert narrative.horizon == 3
    rendered = [serialize_ulr(u) for u in narrative.units()]
    assert 'happensAt(ulr("Travel",[role("Person","Mary"),role("Place",bedroom)]),1).' in rendered
    assert 'happensAt(ulr("North_of",[role("Entity1",bedroom),role("Entity2",garden)]),2).' in rendered
    assert "timestamp(1)." in rendered and "timestamp(3)." in rendered


def test_single_event_horizon():
    narrative = assign_timestamps([("and", [term("F", R="x")])])
    assert narrative.horizon == 2


def test_five_sentence_story_counts():
    events = [("and", [term("F", R=f"x{i}")]) for i in range(5)]
    narrative = assign_timestamps(events)
    stamps = [ts for _c, _t, ts in narrative.events]
    assert stamps == [1, 2, 3, 4, 5]
    assert narrative.horizon == 6


def test_disjunctive_event_shares_timestamp():
    narrative = assign_timestamps(
        [("or", [term("F", R="a"), term("F", R="b")])]
    )
    units = narrative.units()
    disjunctive = [u for u in units if u.kind == "disjunctive-fact"]
    assert len(disjunctive) == 1
    assert all(a.args[-1] == 1 for a in disjunctive[0].atoms)


def test_wrap_time_rule_shares_one_timestamp():
    premises = [
        (term("Holding", Holder="^Person", Object="^Object"), False),
        (term("Located", Entity="^Person", Place="^Place"), False),
    ]
    conclusions = [term("Located", Entity="^Object", Place="^Place")]
    rule = build_rule(
        premises, conclusions,
        types_of(Person="person", Object="object", Place="place"),
    )
    wrapped = wrap_time_rule(rule)
    rendered = wrapped.render()
    assert rendered.count(",T)") == 3  # every fluent shares the same T
    assert rendered.startswith("holdsAt(")
