"""Per-property checks of the factual-sentence validator."""

from factlog.validation import (
    check_aux_verb,
    check_bare_verb,
    check_coordination,
    check_main_clause,
    check_nonverb_aux,
    check_projectivity,
    validate,
    ALL_CHECKS,
)
from domain_commerce import PARSES, PROTESTS_BAD
from parsebuild import sent

RICH = sent(30, "Mary is rich", """
Mary PROPN NNP 3 nsubj
is|be AUX VBZ 3 cop
rich ADJ JJ 0 root
""")

HAS_BEEN_RICH = sent(31, "Mary has been rich", """
Mary PROPN NNP 4 nsubj
has|have AUX VBZ 4 aux
been|be AUX VBN 4 cop
rich ADJ JJ 0 root
""")

HAS_BEEN_BOUGHT = sent(32, "A car has been bought by Mary", """
A DET DT 2 det
car NOUN NN 5 nsubj:pass
has|have AUX VBZ 5 aux
been|be AUX VBN 5 aux:pass
bought|buy VERB VBN 0 root
by ADP IN 7 case
Mary PROPN NNP 5 obl
""")

NON_PROJECTIVE = sent(33, "A picture appeared of Winston", """
A DET DT 2 det
picture NOUN NN 3 nsubj
appeared|appear VERB VBD 0 root
of ADP IN 5 case
Winston PROPN NNP 2 nmod
""")


def ids(violations):
    return sorted(v.property_id for v in violations)


# -- property 1 -------------------------------------------------------------


def test_p1_verb_with_subject_passes():
    assert check_main_clause(PARSES["Mary buys a car"]) == []


def test_p1_copular_adjective_passes():
    assert check_main_clause(RICH) == []


def test_p1_verb_without_subject_fails():
    p = sent(34, "buys a car", """
buys|buy VERB VBZ 0 root
a DET DT 3 det
car NOUN NN 1 obj
""")
    assert ids(check_main_clause(p)) == [1]


def test_p1_adverb_root_fails():
    p = sent(35, "Here is a car", """
Here|here ADV RB 0 root
is|be AUX VBZ 1 cop
a DET DT 4 det
car NOUN NN 1 nsubj
""")
    assert ids(check_main_clause(p)) == [1]


# -- property 2 -------------------------------------------------------------


def test_p2_and_coordination_passes():
    assert check_coordination(PARSES["Mary bought a car and a watch"]) == []


def test_p2_or_coordination_passes():
    assert check_coordination(PARSES["Mary bought a car or a watch"]) == []


def test_p2_but_fails():
    p = sent(36, "a car but a watch", """
a DET DT 2 det
car NOUN NN 0 root
but CC CC 5 cc
a DET DT 5 det
watch NOUN NN 2 conj
""")
    assert ids(check_coordination(p)) == [2]


def test_p2_missing_connective_fails():
    p = sent(37, "a car , a watch", """
a DET DT 2 det
car NOUN NN 0 root
, PUNCT , 5 punct
a DET DT 5 det
watch NOUN NN 2 conj
""")
    assert ids(check_coordination(p)) == [2]


# -- property 3 -------------------------------------------------------------


def test_p3_passive_aux_chain_passes():
    assert check_aux_verb(HAS_BEEN_BOUGHT) == []


def test_p3_modal_with_base_form_passes():
    p = sent(38, "Mary will buy a car", """
Mary PROPN NNP 3 nsubj
will AUX MD 3 aux
buy VERB VB 0 root
a DET DT 5 det
car NOUN NN 3 obj
""")
    assert check_aux_verb(p) == []


def test_p3_modal_with_finite_verb_fails():
    p = sent(39, "Mary will buys", """
Mary PROPN NNP 3 nsubj
will AUX MD 3 aux
buys|buy VERB VBZ 0 root
""")
    assert ids(check_aux_verb(p)) == [3]


def test_p3_be_aux_with_past_participle_fails():
    p = sent(40, "Mary is bought", """
Mary PROPN NNP 3 nsubj
is|be AUX VBZ 3 aux
bought|buy VERB VBN 0 root
""")
    assert ids(check_aux_verb(p)) == [3]


# -- property 4 -------------------------------------------------------------


def test_p4_participle_in_adnominal_clause_passes():
    assert check_bare_verb(PARSES["Mary bought a car made in USA"]) == []


def test_p4_infinitive_adnominal_passes():
    p = sent(41, "a car to buy", """
a DET DT 2 det
car NOUN NN 0 root
to PART TO 4 mark
buy VERB VB 2 acl
""")
    assert check_bare_verb(p) == []


def test_p4_finite_root_without_subject_fails():
    p = sent(42, "buys a car", """
buys|buy VERB VBZ 0 root
a DET DT 3 det
car NOUN NN 1 obj
""")
    assert ids(check_bare_verb(p)) == [4]


def test_p4_dangling_participle_fails():
    p = sent(43, "Mary bought a car made", """
Mary PROPN NNP 2 nsubj
bought|buy VERB VBD 0 root
a DET DT 4 det
car NOUN NN 2 obj
made|make VERB VBN 4 amod
""")
    assert ids(check_bare_verb(p)) == [4]


# -- property 5 -------------------------------------------------------------


def test_p5_copular_chain_passes():
    assert check_nonverb_aux(HAS_BEEN_RICH) == []


def test_p5_plain_nominal_sentence_passes():
    assert check_nonverb_aux(PARSES["Mary buys a car"]) == []


def test_p5_adverb_with_copula_fails():
    p = sent(44, "Mary is here", """
Mary PROPN NNP 3 nsubj
is|be AUX VBZ 3 cop
here|here ADV RB 0 root
""")
    assert ids(check_nonverb_aux(p)) == [5]


def test_p5_copular_head_without_subject_fails():
    p = sent(45, "is rich", """
is|be AUX VBZ 2 cop
rich ADJ JJ 0 root
""")
    assert ids(check_nonverb_aux(p)) == [5]


def test_p5_aux_without_copula_fails():
    p = sent(46, "Mary has rich", """
Mary PROPN NNP 3 nsubj
has|have AUX VBZ 3 aux
rich ADJ JJ 0 root
""")
    assert ids(check_nonverb_aux(p)) == [5]


# -- property 6 -------------------------------------------------------------


def test_p6_nested_spans_pass():
    assert check_projectivity(PARSES["Mary buys a car"]) == []


def test_p6_single_token_passes():
    p = sent(47, "Run", "Run|run VERB VB 0 root")
    assert check_projectivity(p) == []


def test_p6_crossing_edges_fail():
    assert ids(check_projectivity(NON_PROJECTIVE)) == [6]


# -- combined verdict ---------------------------------------------------------


def test_validate_accepts_mary():
    verdict = validate(PARSES["Mary buys a car"])
    assert verdict.accepted and verdict.violations == ()


def test_validate_rejects_mistagged_protest_sentence():
    verdict = validate(PROTESTS_BAD)
    assert not verdict.accepted
    assert 1 in {v.property_id for v in verdict.violations}


def test_validate_rejects_non_projective_fixture():
    verdict = validate(NON_PROJECTIVE)
    assert not verdict.accepted
    assert {v.property_id for v in verdict.violations} == {6}


def test_validate_agrees_with_individual_checks():
    for p in [
        PARSES["Mary buys a car"],
        RICH,
        HAS_BEEN_RICH,
        HAS_BEEN_BOUGHT,
        NON_PROJECTIVE,
        PROTESTS_BAD,
    ]:
        combined = validate(p)
        individual = [v for check in ALL_CHECKS for v in check(p)]
        assert list(combined.violations) == individual
        assert combined.accepted == (not individual)


def test_validate_is_deterministic():
    p = PROTESTS_BAD
    assert validate(p) == validate(p)


def test_violation_rendering():
    verdict = validate(NON_PROJECTIVE)
    line = verdict.violations[0].render(33)
    assert line.startswith("P6:") and "@ sent 33" in line
