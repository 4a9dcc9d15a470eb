import pytest

from factlog.errors import LookupError_, StructuralError
from factlog.graph import ParseAlternatives
from parsebuild import sent

MARY = """
Mary PROPN NNP 2 nsubj
buys|buy VERB VBZ 0 root
a DET DT 4 det
car NOUN NN 2 obj
"""


def test_tree_structure():
    p = sent(1, None, MARY)
    assert p.root.lemma == "buy"
    assert [t.lemma for t in p.tokens] == ["mary", "buy", "a", "car"]


def test_descendants_from_root_covers_all():
    p = sent(1, None, MARY)
    assert p.descendants(2) == {1, 2, 3, 4}


def test_descendants_leaf_is_singleton():
    p = sent(1, None, MARY)
    assert p.descendants(1) == {1}


def test_descendants_of_object_includes_determiner():
    p = sent(1, None, MARY)
    assert p.descendants(4) == {3, 4}


def test_sibling_descendants_disjoint_and_partition():
    p = sent(1, None, MARY)
    children = p.primary_children(2)
    sets = [p.descendants(c.token_id) for c in children]
    assert not set.intersection(*sets) if len(sets) > 1 else True
    union = set().union(*sets) | {2}
    assert union == {t.token_id for t in p.tokens}


def test_descendants_unknown_token():
    p = sent(1, None, MARY)
    with pytest.raises(LookupError_):
        p.descendants(9)


def test_cycle_rejected():
    with pytest.raises(StructuralError):
        sent(1, None, """
a DET DT 2 det
b NOUN NN 3 obj
c NOUN NN 2 nmod
""")


def test_two_roots_rejected():
    with pytest.raises(StructuralError):
        sent(1, None, """
a VERB VB 0 root
b VERB VB 0 root
""")


def test_overlay_edges_do_not_touch_primary():
    p = sent(1, None, MARY)
    p2 = p.add_edge(4, 1, "nsubj").drop_edge(2, 1, "nsubj")
    assert p.edges() != p2.edges()
    assert p2.token(1).head == 2  # primary untouched
    labels = {(e.head, e.dep, e.label) for e in p2.edges()}
    assert (4, 1, "nsubj") in labels and (2, 1, "nsubj") not in labels


def test_mirror_consistency():
    p = sent(1, None, MARY)
    for t in p.tokens:
        for view in p.dep_edges(t.token_id):
            if view.direction == "in":
                partner = p.dep_edges(view.neighbor)
                assert any(
                    v.direction == "out"
                    and v.neighbor == t.token_id
                    and v.relation == view.relation
                    for v in partner
                )


def test_alternatives_confidence_monotonic():
    a = sent(1, "x", MARY, parse_id=1, confidence=0.9)
    b = sent(1, "x", MARY, parse_id=2, confidence=0.95)
    with pytest.raises(StructuralError):
        ParseAlternatives(sentence_id=1, text="x", parses=(a, b))
