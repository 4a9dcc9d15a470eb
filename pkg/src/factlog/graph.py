"""Dependency-parse data model.

A :class:`ParseGraph` is one ranked parse of one sentence: tokens with
lemmas, POS tags, tag confidences, and a primary head/relation tree.  The
normalization passes never rewrite the primary tree destructively; they
record relabelings on it and layer *overlay* edges (added/dropped) on top,
so a graph can expose both the original tree (validation, projectivity,
serialization) and the semantically corrected edge set (role extraction).

All types are immutable after construction; transforms return new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import LookupError_, StructuralError

ROOT = 0  # pseudo-head of the root token

ACCEPTED = "accepted"
REJECTED = "rejected"
PENDING = "pending"


@dataclass(frozen=True)
class TokenIndex:
    """Position of a token inside a ranked parse of a sentence."""

    sentence_id: int
    token_id: int
    parse_id: int = 1

    def __post_init__(self):
        if self.sentence_id < 1 or self.token_id < 0 or self.parse_id < 1:
            raise StructuralError(f"bad token index {self!r}")


@dataclass(frozen=True)
class DepEdge:
    """One directed, typed edge seen from a particular token."""

    relation: str
    neighbor: int  # token id of the other endpoint
    direction: str  # "out" | "in"

    OUT = "out"
    IN = "in"


@dataclass(frozen=True)
class TokenNode:
    """One token with its annotations and primary tree attachment."""

    token_id: int
    surface: str
    lemma: str
    upos: str
    xpos: str
    head: int  # primary head token id, ROOT for the root token
    deprel: str  # primary incoming relation, "root" for the root token
    upos_confidence: float = 1.0
    xpos_confidence: float = 1.0
    upos_alts: tuple[tuple[str, float], ...] = ()
    xpos_alts: tuple[tuple[str, float], ...] = ()
    ner: str = "o"
    validation: str = PENDING

    def __post_init__(self):
        for alts in (self.upos_alts, self.xpos_alts):
            confs = [c for _, c in alts]
            if any(c2 > c1 + 1e-12 for c1, c2 in zip(confs, confs[1:])):
                raise StructuralError(
                    f"alternates of token {self.token_id} not sorted by confidence"
                )


@dataclass(frozen=True)
class CoordGroup:
    """One coordination: its head element and all members, with connective."""

    head: int  # the member carrying the group's external attachment
    members: tuple[int, ...]  # includes head, in surface order
    connective: str  # "and" | "or"


@dataclass(frozen=True)
class Edge:
    head: int
    dep: int
    label: str


@dataclass(frozen=True)
class ParseGraph:
    sentence_id: int
    parse_id: int
    tokens: tuple[TokenNode, ...]
    parse_confidence: float = 1.0
    text: str = ""
    # normalization overlay
    extra_edges: tuple[Edge, ...] = ()
    dropped_edges: frozenset = frozenset()  # of Edge
    inert: frozenset = frozenset()  # token ids excluded from role filling
    groups: tuple[CoordGroup, ...] = ()
    provenance: tuple[str, ...] = ()
    incomplete: bool = False  # subjectless passive after normalization

    def __post_init__(self):
        ids = [t.token_id for t in self.tokens]
        if ids != list(range(1, len(ids) + 1)) and sorted(set(ids)) != ids:
            raise StructuralError("token ids must be unique and ascending")
        by_id = {t.token_id: t for t in self.tokens}
        roots = [t for t in self.tokens if t.head == ROOT]
        if len(roots) != 1:
            raise StructuralError(
                f"sentence {self.sentence_id}: expected exactly one root token, "
                f"found {len(roots)}"
            )
        for t in self.tokens:
            if t.head != ROOT and t.head not in by_id:
                raise StructuralError(
                    f"token {t.token_id} has missing head {t.head}"
                )
        # the head relation must be acyclic (a tree rooted at the root token)
        for t in self.tokens:
            seen = set()
            cur = t.token_id
            while cur != ROOT:
                if cur in seen:
                    raise StructuralError(
                        f"cyclic heads involving token {t.token_id}"
                    )
                seen.add(cur)
                cur = by_id[cur].head

    # -- lookups ---------------------------------------------------------

    def token(self, token_id: int) -> TokenNode:
        for t in self.tokens:
            if t.token_id == token_id:
                return t
        raise LookupError_(f"no token {token_id} in sentence {self.sentence_id}")

    @property
    def root(self) -> TokenNode:
        return next(t for t in self.tokens if t.head == ROOT)

    def index(self, token_id: int) -> TokenIndex:
        return TokenIndex(self.sentence_id, token_id, self.parse_id)

    # -- primary tree ----------------------------------------------------

    def primary_edges(self):
        """(head, dep, label) triples of the primary tree, root edge excluded."""
        return [
            Edge(t.head, t.token_id, t.deprel) for t in self.tokens if t.head != ROOT
        ]

    def primary_children(self, token_id: int):
        return [t for t in self.tokens if t.head == token_id]

    def descendants(self, token_id: int) -> set[int]:
        """Reflexive-transitive closure of head -> dependent from *token_id*."""
        self.token(token_id)
        out = {token_id}
        frontier = [token_id]
        while frontier:
            nxt = []
            for t in self.tokens:
                if t.head in frontier and t.token_id not in out:
                    out.add(t.token_id)
                    nxt.append(t.token_id)
            frontier = nxt
        return out

    # -- effective edges (primary plus overlay) ---------------------------

    def edges(self) -> list[Edge]:
        eff = [e for e in self.primary_edges() if e not in self.dropped_edges]
        eff.extend(e for e in self.extra_edges if e not in self.dropped_edges)
        return eff

    def out_edges(self, token_id: int) -> list[Edge]:
        return [e for e in self.edges() if e.head == token_id]

    def in_edges(self, token_id: int) -> list[Edge]:
        return [e for e in self.edges() if e.dep == token_id]

    def children(self, token_id: int, *labels: str) -> list[TokenNode]:
        out = [
            self.token(e.dep)
            for e in self.out_edges(token_id)
            if not labels or e.label in labels
        ]
        return sorted(out, key=lambda t: t.token_id)

    def dep_edges(self, token_id: int) -> list[DepEdge]:
        """All effective edges at a token, as directed views (out first)."""
        views = [
            DepEdge(e.label, e.dep, DepEdge.OUT) for e in self.out_edges(token_id)
        ]
        views.extend(
            DepEdge(e.label, e.head, DepEdge.IN) for e in self.in_edges(token_id)
        )
        return views

    # -- copy-on-write helpers --------------------------------------------

    def with_tokens(self, tokens) -> "ParseGraph":
        return replace(self, tokens=tuple(tokens))

    def replace_token(self, token: TokenNode) -> "ParseGraph":
        return self.with_tokens(
            token if t.token_id == token.token_id else t for t in self.tokens
        )

    def retag(self, token_id: int, upos=None, xpos=None, head=None, deprel=None):
        t = self.token(token_id)
        t = replace(
            t,
            upos=upos if upos is not None else t.upos,
            xpos=xpos if xpos is not None else t.xpos,
            head=head if head is not None else t.head,
            deprel=deprel if deprel is not None else t.deprel,
        )
        return self.replace_token(t)

    def add_edge(self, head: int, dep: int, label: str) -> "ParseGraph":
        e = Edge(head, dep, label)
        if e in self.edges():
            return self
        return replace(self, extra_edges=self.extra_edges + (e,))

    def drop_edge(self, head: int, dep: int, label: str) -> "ParseGraph":
        return replace(
            self, dropped_edges=self.dropped_edges | {Edge(head, dep, label)}
        )

    def mark_inert(self, *token_ids: int) -> "ParseGraph":
        return replace(self, inert=self.inert | set(token_ids))

    def add_group(self, group: CoordGroup) -> "ParseGraph":
        return replace(self, groups=self.groups + (group,))

    def note(self, step: str) -> "ParseGraph":
        return replace(self, provenance=self.provenance + (step,))

    def with_validation(self, status: str) -> "ParseGraph":
        return self.with_tokens(replace(t, validation=status) for t in self.tokens)

    def with_parse_id(self, parse_id: int) -> "ParseGraph":
        return replace(self, parse_id=parse_id)


@dataclass(frozen=True)
class ParseAlternatives:
    """All ranked parses of one sentence, most confident first."""

    sentence_id: int
    text: str
    parses: tuple[ParseGraph, ...]

    def __post_init__(self):
        if not self.parses:
            raise StructuralError(f"sentence {self.sentence_id} has no parses")
        confs = [p.parse_confidence for p in self.parses]
        if any(c2 > c1 + 1e-9 for c1, c2 in zip(confs, confs[1:])):
            raise StructuralError(
                f"sentence {self.sentence_id}: parse confidence must be "
                "non-increasing with rank"
            )

    @property
    def best(self) -> ParseGraph:
        return self.parses[0]
