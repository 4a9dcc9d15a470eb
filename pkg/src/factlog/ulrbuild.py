"""From disambiguated candidate parses to knowledge units.

Coordinations multiply a sentence into coordination-free variants (one
choice per coordination); and-variants become separate facts while
or-variants join into one disjunctive fact.  Adnominal clauses conjoin
additional facts.  Explicit negation flips the frame name to its
``_not`` form.  Emitted fact sets are canonically sorted so paraphrases
serialize byte-identically.

Coreference resolution rewrites pronouns in raw text before parsing,
using a provider that maps (sentence, word) positions to antecedent
entities mentioned earlier in the discourse.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import replace
from typing import Protocol

from .errors import MixedCoordinationError, RuleSyntaxError, StructuralError
from .graph import ROOT, Edge, ParseGraph, TokenNode
from .logic import (
    DISJUNCTIVE_FACT,
    FACT,
    Atom,
    Const,
    KnowledgeUnit,
    RoleBinding,
    ULRTerm,
    Variable,
    fact_atom,
)
from .lvp import CandidateParse
from .rules import VariableTypes

NEGATION_LEMMAS = {"not", "no"}
WH_LEMMAS = {"who", "what", "where", "when", "which", "how"}


# -- coordination expansion -------------------------------------------------


def expand_coordination(p: ParseGraph) -> tuple[str, list[ParseGraph]]:
    """All coordination-free variants of a normalized parse.

    Returns the sentence connective and one parse per coordinated choice
    (the cartesian product over coordination groups).  Mixing ``and``
    with ``or`` anywhere in one sentence is rejected: such sentences are
    ambiguous and banned from the factual fragment.
    """
    groups = p.groups
    if not groups:
        return "and", [p]
    connectives = {g.connective for g in groups}
    if "mixed" in connectives or len(connectives) > 1:
        raise MixedCoordinationError(
            "coordinations must be homogeneously 'and' or 'or' within a "
            "sentence; mixed connectives are ambiguous"
        )
    connective = connectives.pop()
    members = {m for g in groups for m in g.members}
    variants = []
    for pick, choice in enumerate(
        itertools.product(*(g.members for g in groups)), start=1
    ):
        subst = {}
        dropped = set()
        for g, chosen in zip(groups, choice):
            for m in g.members:
                if m != chosen:
                    subst[m] = chosen
                    dropped.add(m)
        variants.append(_variant(p, subst, dropped, members, pick))
    return connective, variants


def _variant(p: ParseGraph, subst, dropped, members, parse_id: int) -> ParseGraph:
    """One coordination-free tree for a choice of conjuncts.

    Edges between kept tokens survive; an edge whose dependent is a
    dropped conjunct is redirected to the chosen one (the normalization
    copies make the mirror image exist already); an edge headed by a
    dropped conjunct survives only when it targets another group's
    member (argument continuity across groups), since everything else is
    phrase-internal material that dies with its head.
    """
    root_id = p.root.token_id
    edges = {Edge(ROOT, subst.get(root_id, root_id), "root")}
    for e in p.edges():
        if e.label in {"cc", "conj", "root"}:
            continue
        h_dropped = e.head in dropped
        d_dropped = e.dep in dropped
        if h_dropped and d_dropped:
            continue
        if h_dropped:
            if e.dep in members:
                edges.add(Edge(subst[e.head], e.dep, e.label))
            continue
        if d_dropped:
            edges.add(Edge(e.head, subst[e.dep], e.label))
            continue
        edges.add(e)
    # a token may keep several incoming edges (a clause pivot carries its
    # main-clause attachment plus the overlay edge into the adnominal
    # clause); the one continuing the original tree stays primary, the
    # rest become overlay extras of the variant
    incoming: dict[int, list[Edge]] = {}
    for e in sorted(edges, key=lambda e: (e.dep, e.head, e.label)):
        incoming.setdefault(e.dep, []).append(e)

    def primary_of(t) -> Edge:
        candidates = incoming[t.token_id]
        original = Edge(subst.get(t.head, t.head), t.token_id, t.deprel)
        for e in candidates:
            if e == original:
                return e
        return candidates[0]

    roots = {e.dep for es in incoming.values() for e in es if e.head == ROOT}
    if len(roots) != 1:
        raise StructuralError(
            f"coordination expansion produced {len(roots)} roots"
        )
    reachable = set(roots)
    frontier = list(roots)
    while frontier:
        nxt = []
        for es in incoming.values():
            for e in es:
                if e.head in reachable and e.dep not in reachable:
                    reachable.add(e.dep)
                    nxt.append(e.dep)
        frontier = nxt
    tokens = []
    extra = []
    for t in p.tokens:
        if t.token_id in dropped or t.token_id not in reachable:
            continue
        main = primary_of(t)
        tokens.append(replace(t, head=main.head, deprel=main.label))
        extra.extend(e for e in incoming[t.token_id] if e != main)
    return ParseGraph(
        sentence_id=p.sentence_id,
        parse_id=parse_id,
        tokens=tuple(tokens),
        parse_confidence=p.parse_confidence,
        text=p.text,
        extra_edges=tuple(extra),
        inert=frozenset(i for i in p.inert if i in reachable),
        provenance=p.provenance + ("coordination-choice",),
        incomplete=p.incomplete,
    )


# -- negation ---------------------------------------------------------------


def clause_negation(p: ParseGraph, lu_token: int) -> bool:
    """Explicit negation: the clause predicate has a not/no modifier."""
    markers = [
        c
        for c in p.children(lu_token, "advmod", "det")
        if c.lemma in NEGATION_LEMMAS
    ]
    if len(markers) > 1:
        raise RuleSyntaxError(
            "double negation is not supported; please rephrase"
        )
    return bool(markers)


# -- candidate -> term ------------------------------------------------------


def filler_value(p: ParseGraph, token_id: int, types: VariableTypes | None):
    """Constant or variable for a filler token.

    ``$name`` tokens are explicitly typed variables (registered with
    their domain), interrogative lemmas become untyped variables, proper
    nouns keep their surface text, everything else contributes its lemma.
    """
    t = p.token(token_id)
    if t.surface.startswith("$"):
        if types is None:
            raise RuleSyntaxError(
                f"variable {t.surface} is only allowed in rules, fluent "
                "statements, and queries"
            )
        return types.register_surface(t.surface.lower())
    if t.lemma in WH_LEMMAS:
        if types is None:
            raise RuleSyntaxError(
                f"interrogative {t.lemma!r} is only allowed in queries"
            )
        return Variable(t.lemma.capitalize())
    if t.upos == "PROPN":
        return Const(t.surface)
    return Const(t.lemma)


def candidate_to_term(
    p: ParseGraph,
    candidate: CandidateParse,
    types: VariableTypes | None = None,
) -> ULRTerm:
    """Build the logical term of one disambiguated candidate parse."""
    senses = dict(candidate.senses)
    bindings = []
    for role, tok_id, _lemma in candidate.bindings:
        value = filler_value(p, tok_id, types)
        sense = senses.get(role) if isinstance(value, Const) else None
        bindings.append(RoleBinding(role, value, sense))
    term = ULRTerm(candidate.frame, tuple(bindings))
    if clause_negation(p, candidate.lu_token):
        term = term.negated()
    return term


# -- fact assembly ----------------------------------------------------------


def build_fact_ulrs(variant_terms: list[list[ULRTerm]], connective: str):
    """Knowledge units for one sentence's coordination variants.

    *variant_terms* holds, per coordination-free variant, the clause
    terms in clause order (main clause first, adnominal clauses after).
    And-variants flatten into one fact per distinct term.  Or-variants
    form a single disjunctive fact and must be single-clause: disjoining
    conjunctions has no agreed reading, so it is rejected.
    """
    if connective == "and":
        seen = []
        for terms_ in variant_terms:
            for t in terms_:
                if t not in seen:
                    seen.append(t)
        units = [KnowledgeUnit(kind=FACT, atoms=(fact_atom(t),)) for t in seen]
        return sorted(units, key=lambda u: u.atoms[0].render())
    if connective == "or":
        disjuncts = []
        for terms_ in variant_terms:
            if len(terms_) != 1:
                raise MixedCoordinationError(
                    "an or-coordination cannot combine with adnominal "
                    "clauses in one sentence; please rephrase"
                )
            if terms_[0] not in disjuncts:
                disjuncts.append(terms_[0])
        if len(disjuncts) == 1:
            return [KnowledgeUnit(kind=FACT, atoms=(fact_atom(disjuncts[0]),))]
        atoms = tuple(
            fact_atom(t)
            for t in sorted(disjuncts, key=lambda t: t.render())
        )
        return [KnowledgeUnit(kind=DISJUNCTIVE_FACT, atoms=atoms)]
    raise RuleSyntaxError(f"unknown connective {connective!r}")


def emit_domain_facts(units, registry) -> tuple[list[KnowledgeUnit], list[str]]:
    """Unary typing atoms for every constant filler of the fact units.

    Roles without a registered domain predicate are skipped with a
    warning.  Timestamp domains are narrative bookkeeping and emitted
    elsewhere.
    """
    seen = set()
    out = []
    warnings = []
    for unit in units:
        if unit.kind not in {FACT, DISJUNCTIVE_FACT}:
            continue
        for atom in unit.atoms:
            for term in _ulr_terms_of(atom):
                frame = term.frame
                base = frame[:-4] if frame.endswith("_not") else frame
                for b in term.bindings:
                    if not isinstance(b.filler, Const):
                        continue
                    domain = registry.domain_of(base, b.role)
                    if domain is None:
                        key = (base, b.role)
                        if key not in seen:
                            seen.add(key)
                            warnings.append(
                                f"role {b.role!r} of frame {base!r} has no "
                                "domain predicate; no typing atom emitted"
                            )
                        continue
                    atom_out = Atom(domain, (b.filler,))
                    if atom_out not in seen:
                        seen.add(atom_out)
                        out.append(KnowledgeUnit(kind=FACT, atoms=(atom_out,)))
    out.sort(key=lambda u: u.atoms[0].render())
    return out, warnings


def _ulr_terms_of(atom: Atom):
    for a in atom.args:
        if isinstance(a, ULRTerm):
            yield a


# -- coreference ------------------------------------------------------------


class CoreferenceProvider(Protocol):
    def resolve(self, sentences: list[str]) -> dict[tuple[int, int], str]:
        """Map (sentence index, word index) to replacement entity text."""
        ...


class NullCoreferenceProvider:
    def resolve(self, sentences):
        return {}


class FixtureCoreferenceProvider:
    """Substitution maps keyed by the full discourse text."""

    def __init__(self, table: dict[tuple[str, ...], dict]):
        self.table = table

    def resolve(self, sentences):
        return self.table.get(tuple(sentences), {})


PRONOUNS = {
    "he", "she", "it", "they", "him", "her", "them",
    "his", "hers", "its", "their", "theirs",
}

_WORD = re.compile(r"[A-Za-z$][A-Za-z0-9_$'-]*")


def resolve_coreference(sentences, provider) -> tuple[list[str], list[str]]:
    """Replace pronouns with their antecedents before parsing.

    Returns the rewritten sentences and warnings for unresolved pronouns
    or substitutions that do not reference an earlier mention.
    """
    substitutions = provider.resolve(list(sentences))
    warnings = []
    out = []
    mentioned: set[str] = set()
    for s_idx, sentence in enumerate(sentences):
        words = list(_WORD.finditer(sentence))
        pieces = []
        last = 0
        for w_idx, m in enumerate(words):
            pieces.append(sentence[last:m.start()])
            word = m.group(0)
            replacement = substitutions.get((s_idx, w_idx))
            if replacement is not None:
                known = all(
                    part.lower() in mentioned
                    for part in replacement.split()
                    if part.lower() not in {"and", "or", "the", "a", "an"}
                )
                if not known:
                    warnings.append(
                        f"substitution {replacement!r} does not reference an "
                        "earlier mention; keeping it anyway"
                    )
                pieces.append(replacement)
            else:
                if word.lower() in PRONOUNS:
                    warnings.append(
                        f"unresolved pronoun {word!r} in sentence {s_idx + 1}"
                    )
                pieces.append(word)
            last = m.end()
        pieces.append(sentence[last:])
        rewritten = "".join(pieces)
        out.append(rewritten)
        for m in _WORD.finditer(rewritten):
            word = m.group(0).lower()
            mentioned.add(word)
            if "'" in word:
                mentioned.add(word.split("'", 1)[0])  # possessive stem
    return out, warnings
