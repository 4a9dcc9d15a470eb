"""Logical-form data model and the knowledge-base text format."""

import pytest

from factlog.errors import RuleSyntaxError
from factlog.logic import (
    DISJUNCTIVE_FACT,
    FACT,
    FLUENT_AXIOM,
    QUERY,
    RULE,
    Atom,
    Const,
    KnowledgeUnit,
    RoleBinding,
    Rule,
    ULRTerm,
    Variable,
    fact_atom,
    parse_program,
    parse_statement,
    serialize_kb,
    serialize_ulr,
)


def buy_term():
    return ULRTerm(
        "Commerce_buy",
        (
            RoleBinding("Buyer", Const("Mary"), "bn:00046516n"),
            RoleBinding("Goods", Const("car"), "bn:00007309n"),
            RoleBinding("Recipient", Const("John"), "bn:00046516n"),
        ),
    )


def test_three_role_listing_with_senses():
    unit = KnowledgeUnit(kind=FACT, atoms=(fact_atom(buy_term()),))
    assert serialize_ulr(unit) == (
        'ulr("Commerce_buy",[role("Buyer","Mary","bn:00046516n"),'
        'role("Goods",car,"bn:00007309n"),'
        'role("Recipient","John","bn:00046516n")]).'
    )


def test_disjunctive_fact_joined_by_v():
    t1 = ULRTerm("Cure", (RoleBinding("Method", Const("parenteral")),))
    t2 = ULRTerm("Cure", (RoleBinding("Method", Const("oral")),))
    unit = KnowledgeUnit(
        kind=DISJUNCTIVE_FACT, atoms=(fact_atom(t1), fact_atom(t2))
    )
    text = serialize_ulr(unit)
    assert " v " in text and text.endswith(".")


def test_disjunctive_fact_needs_two_disjuncts():
    with pytest.raises(RuleSyntaxError):
        KnowledgeUnit(kind=DISJUNCTIVE_FACT, atoms=(fact_atom(buy_term()),))


def test_query_ends_with_question_mark():
    q = ULRTerm(
        "Undergoing",
        (RoleBinding("Patient", Variable("Who")),
         RoleBinding("Therapy", Variable("Therapy"))),
    )
    unit = KnowledgeUnit(kind=QUERY, atoms=(fact_atom(q),))
    assert serialize_ulr(unit) == (
        'ulr("Undergoing",[role("Patient",Who),role("Therapy",Therapy)])?'
    )


def test_negation_suffix_only_on_frames():
    term = ULRTerm("Medical_issue", (RoleBinding("Ailment", Const("UTI")),))
    negated = term.negated()
    assert negated.frame == "Medical_issue_not"
    with pytest.raises(RuleSyntaxError):
        negated.negated()


def test_duplicate_roles_rejected():
    with pytest.raises(RuleSyntaxError):
        ULRTerm(
            "X",
            (RoleBinding("R", Const("a")), RoleBinding("R", Const("b"))),
        )


def test_structured_terms_only_under_temporal_predicates():
    with pytest.raises(RuleSyntaxError):
        Atom("doctor", (buy_term(),))
    Atom("happensAt", (buy_term(), 1))  # fine


def test_parse_statement_round_trip_fact():
    text = serialize_ulr(KnowledgeUnit(kind=FACT, atoms=(fact_atom(buy_term()),)))
    units = parse_statement(text)
    assert len(units) == 1
    assert serialize_ulr(units[0]) == text


def test_parse_two_field_roles():
    units = parse_statement('ulr("F",[role("R","Mary"),role("S",car)]).')
    term = units[0].atoms[0].args[0]
    assert term.bindings[0].sense is None
    assert term.bindings[1].filler == Const("car")


def test_timestamp_range_expansion():
    units = parse_statement("timestamp(1..3).")
    assert [u.atoms[0] for u in units] == [
        Atom("timestamp", (1,)),
        Atom("timestamp", (2,)),
        Atom("timestamp", (3,)),
    ]


def test_parse_rule_with_naf_and_guards():
    text = (
        'ulr("Undergoing",[role("Patient",Patient)]) :- '
        'not ulr("Cure_not",[role("Patient",Patient)]), patient(Patient).'
    )
    unit = parse_statement(text)[0]
    assert unit.kind == RULE
    assert unit.rule.body[0].naf
    assert not unit.rule.body[1].naf
    assert serialize_ulr(unit) == text


def test_parse_fluent_axiom_kind():
    text = (
        'initiates(ulr("Travel",[role("Person",Person)]),'
        'ulr("Located",[role("Entity",Person)])) :- person(Person).'
    )
    unit = parse_statement(text)[0]
    assert unit.kind == FLUENT_AXIOM


def test_parse_comparisons():
    text = "stoppedIn(T1,F,T2) :- timestamp(T1), T1 < T, F != G."
    unit = parse_statement(text)[0]
    ops = [c.op for c in unit.rule.body if hasattr(c, "op")]
    assert ops == ["<", "!="]


def test_kb_round_trip_is_fixpoint():
    kb = "\n".join(
        [
            'ulr("Commerce_buy",[role("Buyer","Mary","bn:00046516n"),'
            'role("Goods",car,"bn:00007309n")]).',
            'ulr("Cure",[role("Method",parenteral)]) v '
            'ulr("Cure",[role("Method",oral)]).',
            "person(bedroom).",
            'happensAt(ulr("Travel",[role("Person","Mary")]),1).',
            "timestamp(1).",
            'holdsAt(ulr("Located",[role("Entity","Mary")]),3)?',
        ]
    )
    units = parse_program(kb)
    emitted = serialize_kb(units).strip()
    assert emitted == kb
    assert serialize_kb(parse_program(emitted)).strip() == emitted


def test_naf_never_in_heads():
    with pytest.raises(RuleSyntaxError):
        parse_statement('not ulr("X",[]) :- ulr("Y",[]).')
