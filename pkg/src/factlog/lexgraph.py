"""Sense graph and path-based role/filler scoring.

The graph holds word senses (nodes with lemma coverage and a gloss),
weighted typed edges, and a per-edge-type penalty table.  The score of a
sense pair is computed over a shortest path (by hop count) between them:
the sum over path steps of ``sqrt(degree(node)) * weight(edge)``, damped
by ``5 ** (sum of edge penalties)``.  Having no path within the depth cap
scores 0.  A role/filler pair scores as the maximum over all (role sense,
filler sense) combinations, walking the path from either end; the winning
filler sense is reported for sense annotation.

Newer releases of the public lexical resources dropped edge weights, so
weights and penalties ship as data in the graph file.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field

from .errors import ConlluError, LookupError_, RuleSyntaxError, UnknownWordError

PENALTY_BASE = 5
DEFAULT_DEPTH_CAP = 4

_SENSE_RE = re.compile(r"^bn:\d{8}[a-z]$")
_NODE_RE = re.compile(
    r'^node\s+(?P<id>\S+)\s+lemma=(?P<lemmas>\S+)\s+gloss="(?P<gloss>[^"]*)"$'
)
_EDGE_RE = re.compile(
    r"^edge\s+(?P<a>\S+)\s+(?P<b>\S+)\s+(?P<type>\S+)\s+(?P<w>[0-9.eE+-]+)$"
)


def check_sense_id(sense: str) -> str:
    if not _SENSE_RE.match(sense):
        raise RuleSyntaxError(f"bad sense id {sense!r}, expected bn:<8 digits><pos>")
    return sense


@dataclass
class LexicalGraph:
    glosses: dict = field(default_factory=dict)  # sense -> gloss
    lemma_index: dict = field(default_factory=dict)  # lemma -> [sense]
    adjacency: dict = field(default_factory=dict)  # sense -> {sense: (type, w)}
    penalties: dict = field(default_factory=dict)  # edge type -> penalty

    def add_node(self, sense: str, lemmas, gloss: str = "") -> None:
        check_sense_id(sense)
        self.glosses[sense] = gloss
        self.adjacency.setdefault(sense, {})
        for lemma in lemmas:
            self.lemma_index.setdefault(lemma, [])
            if sense not in self.lemma_index[lemma]:
                self.lemma_index[lemma].append(sense)

    def add_edge(self, a: str, b: str, edge_type: str, weight: float) -> None:
        if a not in self.adjacency or b not in self.adjacency:
            raise LookupError_(f"edge endpoints {a}/{b} must be declared nodes")
        if weight <= 0:
            raise RuleSyntaxError(f"edge weight must be positive, got {weight}")
        self.adjacency[a][b] = (edge_type, weight)
        self.adjacency[b][a] = (edge_type, weight)

    def degree(self, sense: str) -> int:
        return len(self.adjacency[sense])

    def penalty(self, edge_type: str) -> float:
        return self.penalties.get(edge_type, 0.0)

    def senses_of(self, lemma: str) -> list[str]:
        senses = self.lemma_index.get(lemma)
        if not senses:
            raise UnknownWordError(f"no senses for {lemma!r} in the lexical graph")
        return list(senses)

    def scaled(self, factor: float) -> "LexicalGraph":
        """Copy with every edge weight multiplied by *factor*."""
        g = LexicalGraph(
            glosses=dict(self.glosses),
            lemma_index={k: list(v) for k, v in self.lemma_index.items()},
            penalties=dict(self.penalties),
        )
        g.adjacency = {
            a: {b: (t, w * factor) for b, (t, w) in nbrs.items()}
            for a, nbrs in self.adjacency.items()
        }
        return g

    @classmethod
    def load(cls, text: str) -> "LexicalGraph":
        g = cls()
        pending_edges = []
        for i, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if line.startswith("penalties:"):
                for item in line[len("penalties:"):].split():
                    etype, _, p = item.partition("=")
                    if not p:
                        raise ConlluError(f"bad penalty entry {item!r}", i)
                    g.penalties[etype] = float(p)
                continue
            m = _NODE_RE.match(line)
            if m:
                g.add_node(
                    m.group("id"), m.group("lemmas").split(","), m.group("gloss")
                )
                continue
            m = _EDGE_RE.match(line)
            if m:
                pending_edges.append(
                    (i, m.group("a"), m.group("b"), m.group("type"),
                     float(m.group("w")))
                )
                continue
            raise ConlluError(f"unrecognized lexical-graph line {line!r}", i)
        for i, a, b, etype, w in pending_edges:
            try:
                g.add_edge(a, b, etype, w)
            except (LookupError_, RuleSyntaxError) as exc:
                raise ConlluError(str(exc), i) from None
        return g


def _shortest_distance(g: LexicalGraph, start: str, cap: int) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if dist[cur] >= cap:
            continue
        for nbr in g.adjacency[cur]:
            if nbr not in dist:
                dist[nbr] = dist[cur] + 1
                queue.append(nbr)
    return dist


def _path_score(g: LexicalGraph, path: list[str]) -> float:
    total = 0.0
    penalty = 0.0
    for k in range(len(path) - 1):
        edge_type, weight = g.adjacency[path[k]][path[k + 1]]
        total += math.sqrt(g.degree(path[k])) * weight
        penalty += g.penalty(edge_type)
    return total / (PENALTY_BASE ** penalty)


def score_synset_path(
    g: LexicalGraph, s1: str, s2: str, depth_cap: int = DEFAULT_DEPTH_CAP
) -> float:
    """Score of walking from sense *s1* to sense *s2*.

    A shortest path by hop count is used; among equally short paths the
    best-scoring one counts.  The zero-length path (s1 == s2) and the
    no-path case both score 0.
    """
    for s in (s1, s2):
        if s not in g.adjacency:
            raise LookupError_(f"unknown sense {s!r}")
    if s1 == s2:
        return 0.0
    back = _shortest_distance(g, s2, depth_cap)
    if s1 not in back:
        return 0.0
    target = back[s1]

    best = 0.0
    stack = [[s1]]
    while stack:
        path = stack.pop()
        used = len(path) - 1
        if path[-1] == s2:
            best = max(best, _path_score(g, path))
            continue
        for nbr in g.adjacency[path[-1]]:
            # only steps that stay on some shortest path
            if back.get(nbr, depth_cap + 1) == target - used - 1:
                stack.append(path + [nbr])
    return best


def score_role_lexical(
    g: LexicalGraph,
    role: str,
    filler: str,
    role_senses: dict,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> tuple[float, str]:
    """Best score over all (role sense, filler sense) pairs, either direction.

    Returns the score and the winning filler sense (for annotation).
    *role_senses* maps role names to their curated sense lists.
    """
    senses_r = role_senses.get(role) or ()
    if not senses_r:
        raise UnknownWordError(f"role {role!r} has no curated senses")
    senses_f = g.senses_of(filler)
    best = (-1.0, "")
    for sf in senses_f:
        for sr in senses_r:
            fwd = score_synset_path(g, sr, sf, depth_cap)
            rev = score_synset_path(g, sf, sr, depth_cap)
            score = max(fwd, rev)
            if score > best[0]:
                best = (score, sf)
    return best
