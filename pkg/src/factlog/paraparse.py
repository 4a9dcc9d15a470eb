"""Parse normalization removing syntax-induced semantic mismatches.

Synonymous sentences must map to identical logical forms, but dependency
parsers produce different structures for active vs. passive voice, for
permuted coordinations, and for adnominal clauses.  The passes here
rewrite an accepted parse so that role extraction sees a uniform shape:

  - adnominal clauses get their real subject/object edges, introductory
    words (``that``, ``who``, ...) step aside for the modified nominal;
  - coordinations are symmetrized so every conjunct carries the head
    element's attachments, with the connective recorded per group;
  - passive clauses are rewritten to active shape, one variant per
    by-phrase since each could be the underlying subject;
  - particle verbs and multiword flat names are merged into single
    fillers.

Rewrites are layered over the primary tree (see :mod:`factlog.graph`), so
validation and serialization still see the parser's structure.  All
passes are idempotent and pure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import CapacityError, StructuralError
from .graph import ROOT, CoordGroup, Edge, ParseGraph
from .validation import validate

MAX_VARIANTS = 64

RELCL_INTRO_ARG = {"that", "who", "which"}
RELCL_INTRO_MARK = {"where", "when", "why", "which"}


@dataclass(frozen=True)
class NormalizedParses:
    """All normalized variants of one accepted parse."""

    variants: tuple[ParseGraph, ...]
    provenance: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.variants:
            raise ValueError("at least one variant required")


def _relabel(p: ParseGraph, edge: Edge, new_label: str) -> ParseGraph:
    """Change an effective edge's label, preserving tree shape if primary."""
    dep = p.token(edge.dep)
    if dep.head == edge.head and dep.deprel == edge.label:
        return p.retag(edge.dep, deprel=new_label)
    return p.drop_edge(edge.head, edge.dep, edge.label).add_edge(
        edge.head, edge.dep, new_label
    )


def _mergeable(p: ParseGraph, e: Edge) -> bool:
    if e.label in {"compound:prt", "flat"}:
        return True
    if e.label == "compound":
        # common-noun compounds only: "urine specimen" merges, a name in
        # apposition to a common noun ("patient Mary") does not
        head, dep = p.token(e.head), p.token(e.dep)
        return head.upos == "NOUN" and dep.upos == "NOUN"
    return False


def merge_multiword(p: ParseGraph) -> ParseGraph:
    """Fold multiword fillers into their head token.

    Particle verbs (``give`` + ``up`` -> ``give_up``), flat name chains,
    and common-noun compounds (``urine specimen`` -> ``urine_specimen``)
    merge into one lemma in surface order; the absorbed dependents turn
    inert.  Explicit negation markers also turn inert here so they never
    surface as role fillers (the negation itself is read off later).
    """
    for t in p.tokens:
        if t.lemma in {"not", "no"} and t.deprel in {"advmod", "det"}:
            p = p.mark_inert(t.token_id)
    changed = True
    while changed:
        changed = False
        for t in p.tokens:
            parts = [
                e for e in p.out_edges(t.token_id)
                if e.dep not in p.inert and _mergeable(p, e)
            ]
            if not parts:
                continue
            pieces = sorted(
                [(t.token_id, t.lemma)]
                + [(e.dep, p.token(e.dep).lemma) for e in parts]
            )
            merged = replace(t, lemma="_".join(lemma for _, lemma in pieces))
            p = p.replace_token(merged).mark_inert(*(e.dep for e in parts))
            for e in parts:
                p = p.drop_edge(e.head, e.dep, e.label)
            changed = True
            break
    return p


def normalize_adnominal(p: ParseGraph) -> ParseGraph:
    """Expose the role the modified nominal plays inside its adnominal clause."""
    for v1 in p.tokens:
        if v1.deprel == "acl" and v1.head != ROOT:
            has_subj = any(
                e.label in {"nsubj", "nsubj:pass"} for e in p.out_edges(v1.token_id)
            )
            if has_subj:
                continue
            if v1.xpos in {"VBG", "VB"}:
                p = p.add_edge(v1.token_id, v1.head, "nsubj")
            elif v1.xpos == "VBN":
                p = p.add_edge(v1.token_id, v1.head, "nsubj:pass")
        elif v1.deprel == "acl:relcl" and v1.head != ROOT:
            arg_edges = [
                e
                for e in p.out_edges(v1.token_id)
                if e.label in {"nsubj", "nsubj:pass", "obj"}
                and p.token(e.dep).lemma in RELCL_INTRO_ARG
            ]
            if arg_edges:
                e = arg_edges[0]
                p = (
                    p.drop_edge(e.head, e.dep, e.label)
                    .add_edge(v1.token_id, v1.head, e.label)
                    .mark_inert(e.dep)
                )
                continue
            mark_edges = [
                e
                for e in p.out_edges(v1.token_id)
                if e.label == "mark" and p.token(e.dep).lemma in RELCL_INTRO_MARK
            ]
            if mark_edges:
                e = mark_edges[0]
                p = (
                    p.drop_edge(e.head, e.dep, e.label)
                    .add_edge(v1.token_id, v1.head, "obl")
                    .mark_inert(e.dep)
                )
    return p


def _connective_of(p: ParseGraph, members) -> str:
    lemmas = set()
    for m in members:
        for cc in p.children(m, "cc"):
            lemmas.add(cc.lemma)
    if not lemmas:
        return "and"  # bare comma list; validation flags missing connectives
    if len(lemmas) > 1:
        return "mixed"
    return lemmas.pop()


def normalize_coordination(p: ParseGraph) -> ParseGraph:
    """Give every conjunct the head element's attachments.

    Each non-head conjunct receives a copy of the head's incoming edge in
    place of its ``conj`` edge, plus copies of the head's outgoing edges
    for labels the conjunct does not already carry itself (so a conjunct
    with its own object keeps it).  Connective words turn inert and every
    coordination is recorded as a group for later expansion.
    """
    heads = sorted(
        {
            e.head
            for e in p.edges()
            if e.label == "conj" and not _in_groups(p, e.head)
        }
    )
    for head_id in heads:
        root_tok = p.token(head_id)
        members = [head_id] + sorted(
            e.dep for e in p.out_edges(head_id) if e.label == "conj"
        )
        connective = _connective_of(p, members)
        own_out = [
            e
            for e in p.out_edges(head_id)
            if e.label not in {"conj", "cc", "punct"}
        ]
        for m in members[1:]:
            p = p.drop_edge(head_id, m, "conj")
            if root_tok.head == ROOT:
                p = p.add_edge(ROOT, m, "root")
            else:
                p = p.add_edge(root_tok.head, m, root_tok.deprel)
            member_labels = {e.label for e in p.out_edges(m)}
            for e in own_out:
                if e.label not in member_labels and e.dep != m:
                    p = p.add_edge(m, e.dep, e.label)
        for m in members:
            for cc in p.children(m, "cc"):
                p = p.mark_inert(cc.token_id)
        p = p.add_group(
            CoordGroup(head=head_id, members=tuple(members), connective=connective)
        )
    return p


def _in_groups(p: ParseGraph, head_id: int) -> bool:
    return any(g.head == head_id for g in p.groups)


def _passive_predicates(p: ParseGraph) -> list[int]:
    return sorted(
        {e.head for e in p.edges() if e.label == "nsubj:pass"}
    )


def _by_phrases(p: ParseGraph, verb_id: int) -> list[Edge]:
    out = []
    for e in p.out_edges(verb_id):
        if e.label != "obl":
            continue
        if any(c.lemma == "by" for c in p.children(e.dep, "case")):
            out.append(e)
    return sorted(out, key=lambda e: e.dep)


def normalize_passive(p: ParseGraph) -> list[ParseGraph]:
    """Rewrite passive clauses to active shape, one variant per by-phrase.

    The passive subject is demoted to ``obl:by`` (it is the underlying
    object) and each by-phrase in turn is promoted to subject.  A passive
    clause with no by-phrase yields a single, subjectless variant flagged
    incomplete.  Auxiliary passive markers and promoted case words turn
    inert.  Active parses pass through unchanged.
    """
    verbs = _passive_predicates(p)
    if not verbs:
        return [p]
    variants = [p]
    for verb_id in verbs:
        next_variants = []
        for g in variants:
            subj_edges = [
                e for e in g.out_edges(verb_id) if e.label == "nsubj:pass"
            ]
            if not subj_edges:
                next_variants.append(g)
                continue
            base = g
            for e in subj_edges:
                base = _relabel(base, e, "obl:by")
            for aux in base.children(verb_id, "aux:pass"):
                base = base.mark_inert(aux.token_id)
            by = _by_phrases(base, verb_id)
            if not by:
                next_variants.append(replace(base, incomplete=True))
                continue
            for chosen in by:
                variant = _relabel(base, chosen, "nsubj")
                for case in variant.children(chosen.dep, "case"):
                    if case.lemma == "by":
                        variant = variant.mark_inert(case.token_id)
                next_variants.append(variant)
        if len(next_variants) > MAX_VARIANTS:
            raise CapacityError(
                f"passive normalization exceeded {MAX_VARIANTS} variants"
            )
        variants = next_variants
    return variants


def paraparse(p: ParseGraph) -> NormalizedParses:
    """Full normalization: merges, adnominal, coordination, then passive.

    Clause subjects must exist before voice rewriting, hence the fixed
    order.  Every variant is re-validated on its primary tree; variants
    flagged incomplete (subjectless passives) are kept but exempt from
    the validation gate.
    """
    steps: list[str] = []
    g = merge_multiword(p)
    if g is not p:
        steps.append("merge-multiword")
    g2 = normalize_adnominal(g)
    if g2 is not g:
        steps.append("adnominal")
    g3 = normalize_coordination(g2)
    if g3 is not g2:
        steps.append("coordination")
    variants = normalize_passive(g3)
    passive_ran = len(variants) > 1 or variants[0] is not g3
    out = []
    provenance = []
    for i, v in enumerate(variants, start=1):
        trail = tuple(steps + (["passive"] if passive_ran else []))
        v = v.with_parse_id(i)
        for step in trail:
            v = v.note(step)
        if not v.incomplete:
            verdict = validate(v)
            if not verdict.accepted:
                raise StructuralError(
                    "normalized variant failed re-validation: "
                    + "; ".join(x.message for x in verdict.violations)
                )
        out.append(v)
        provenance.append(trail)
    return NormalizedParses(variants=tuple(out), provenance=tuple(provenance))
