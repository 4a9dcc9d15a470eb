"""Sense-graph path scoring against an exhaustive enumeration oracle."""

import math
import random
from pathlib import Path

import pytest

from factlog.errors import LookupError_, RuleSyntaxError, UnknownWordError
from factlog.lexgraph import (
    LexicalGraph,
    check_sense_id,
    score_role_lexical,
    score_synset_path,
)

FIXTURE = Path(__file__).parent / "fixtures" / "commerce" / "graph.lex"


def two_node_fixture(penalty=0.0):
    g = LexicalGraph()
    g.penalties["rel"] = penalty
    g.add_node("bn:00000001n", ["alpha"])
    g.add_node("bn:00000002n", ["beta"])
    for i in range(3, 6):
        g.add_node(f"bn:0000000{i}n", [f"pad{i}"])
        g.add_edge("bn:00000001n", f"bn:0000000{i}n", "rel", 0.5)
    g.add_edge("bn:00000001n", "bn:00000002n", "rel", 3.0)
    return g


def test_sense_id_shape():
    check_sense_id("bn:00036538n")
    for bad in ["bn:0003653n", "bn:000365381", "wn:00036538n", "bn:00036538"]:
        with pytest.raises(RuleSyntaxError):
            check_sense_id(bad)


def test_zero_length_path_scores_zero():
    g = two_node_fixture()
    assert score_synset_path(g, "bn:00000001n", "bn:00000001n") == 0.0


def test_single_edge_uses_source_degree():
    g = two_node_fixture()
    # degree(s1) = 4, weight 3, no penalty
    assert score_synset_path(g, "bn:00000001n", "bn:00000002n") == pytest.approx(6.0)


def test_penalty_divides_by_base():
    g = two_node_fixture(penalty=1.0)
    assert score_synset_path(g, "bn:00000001n", "bn:00000002n") == pytest.approx(1.2)


def test_unknown_node_raises():
    g = two_node_fixture()
    with pytest.raises(LookupError_):
        score_synset_path(g, "bn:00000001n", "bn:99999999n")


def test_no_path_scores_zero():
    g = two_node_fixture()
    g.add_node("bn:00000009n", ["lonely"])
    assert score_synset_path(g, "bn:00000001n", "bn:00000009n") == 0.0


def _oracle(g, s1, s2, cap):
    """Exhaustive simple-path enumeration: all paths up to the cap, then
    the best score among the hop-shortest ones."""
    paths = []

    def walk(path):
        cur = path[-1]
        if cur == s2 and len(path) > 1:
            paths.append(list(path))
            return
        if len(path) - 1 >= cap:
            return
        for nbr in g.adjacency[cur]:
            if nbr not in path:
                walk(path + [nbr])

    walk([s1])
    if s1 == s2 or not paths:
        return 0.0
    shortest = min(len(p) for p in paths)
    best = 0.0
    for p in paths:
        if len(p) != shortest:
            continue
        total = 0.0
        pen = 0.0
        for k in range(len(p) - 1):
            etype, w = g.adjacency[p[k]][p[k + 1]]
            total += math.sqrt(len(g.adjacency[p[k]])) * w
            pen += g.penalty(etype)
        best = max(best, total / (5.0 ** pen))
    return best


def test_matches_oracle_on_random_small_graphs():
    rng = random.Random(20240)
    for trial in range(200):
        n = rng.randint(2, 8)
        g = LexicalGraph()
        g.penalties = {"a": 0.0, "b": 1.0, "c": 2.0}
        names = [f"bn:0000010{i}n" for i in range(n)]
        for name in names:
            g.add_node(name, [name])
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    g.add_edge(
                        names[i],
                        names[j],
                        rng.choice("abc"),
                        round(rng.uniform(0.1, 5.0), 3),
                    )
        s1, s2 = rng.choice(names), rng.choice(names)
        cap = rng.choice([2, 3, 4])
        got = score_synset_path(g, s1, s2, cap)
        want = _oracle(g, s1, s2, cap)
        assert got == pytest.approx(want), f"trial {trial}: {s1}->{s2} cap {cap}"


# -- role scoring on the engineered commerce graph ------------------------------


@pytest.fixture(scope="module")
def commerce_graph():
    return LexicalGraph.load(FIXTURE.read_text())


ROLE_SENSES = {
    "Buyer": ("bn:90000001n",),
    "Goods": ("bn:90000002n",),
    "Recipient": ("bn:90000003n",),
    "Money": ("bn:90000004n",),
    "Seller": ("bn:90000005n",),
}


def test_worked_role_scores(commerce_graph):
    score, sense = score_role_lexical(commerce_graph, "Buyer", "customer",
                                      ROLE_SENSES)
    assert score == pytest.approx(8.10, abs=0.01)
    score, sense = score_role_lexical(commerce_graph, "Goods", "watch",
                                      ROLE_SENSES)
    assert score == pytest.approx(3.64, abs=0.01)
    score, sense = score_role_lexical(commerce_graph, "Recipient", "friend",
                                      ROLE_SENSES)
    assert score == pytest.approx(6.24, abs=0.01)
    assert sense == "bn:00036538n"


def test_unknown_filler(commerce_graph):
    with pytest.raises(UnknownWordError):
        score_role_lexical(commerce_graph, "Buyer", "zeppelin", ROLE_SENSES)


def test_filler_sense_equal_to_role_sense_scores_zero():
    g = LexicalGraph()
    g.add_node("bn:00000010n", ["thing"])
    score, sense = score_role_lexical(
        g, "Thing", "thing", {"Thing": ("bn:00000010n",)}
    )
    assert score == 0.0 and sense == "bn:00000010n"
