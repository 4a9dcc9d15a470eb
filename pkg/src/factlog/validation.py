"""Structural checks deciding whether a parse can carry factual content.

Six independent properties are checked on the primary tree of a parse:

  1. the main clause has a verb with a subject, or a nominal/adjective
     root with subject and copula;
  2. every coordination closes with an and/or connective;
  3. auxiliary chains on verbs agree with the verb form;
  4. bare verbs occur only in licensed positions;
  5. auxiliary chains on non-verbs go through a copula on a nominal with
     a subject;
  6. the parse is projective.

Each check is pure and reports violations without mutating the parse; the
combined verdict is the concatenation of all six.  Checks enforce only
structure: a copula tagged VERB instead of AUX is tolerated here because
tag repair is a separate concern.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import ACCEPTED, REJECTED, ParseGraph, TokenNode

NOMINAL_UPOS = {"NOUN", "PRON", "PROPN", "ADJ"}
MODAL_LEMMAS = {"can", "do", "may", "must", "ought", "should", "will"}
CONNECTIVES = {"and", "or"}


@dataclass(frozen=True)
class Violation:
    property_id: int
    token: int | None
    message: str

    def __post_init__(self):
        if not 1 <= self.property_id <= 6:
            raise ValueError(f"property id {self.property_id} out of range")

    def render(self, sentence_id: int) -> str:
        where = f" token {self.token}" if self.token is not None else ""
        return f"P{self.property_id}: {self.message} @ sent {sentence_id}{where}"


@dataclass(frozen=True)
class Verdict:
    status: str  # ACCEPTED | REJECTED
    violations: tuple[Violation, ...]

    def __post_init__(self):
        if (self.status == ACCEPTED) != (not self.violations):
            raise ValueError("status must be accepted exactly when no violations")

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED


def _primary_deps(p: ParseGraph, head: TokenNode, *labels: str) -> list[TokenNode]:
    return [t for t in p.primary_children(head.token_id) if t.deprel in labels]


def _subjects(p: ParseGraph, head: TokenNode) -> list[TokenNode]:
    # the passive subject subtype counts as a subject: passive sentences are
    # factual and get normalized downstream, not rejected here
    return _primary_deps(p, head, "nsubj", "nsubj:pass")


def check_main_clause(p: ParseGraph) -> list[Violation]:
    root = p.root
    subjects = _subjects(p, root)
    if root.upos == "VERB":
        if subjects:
            return []
        return [Violation(1, root.token_id, "main verb has no subject")]
    if root.upos in NOMINAL_UPOS:
        if subjects and _primary_deps(p, root, "cop"):
            return []
        missing = "subject" if not subjects else "copula"
        return [Violation(1, root.token_id, f"nominal main clause has no {missing}")]
    return [
        Violation(
            1,
            root.token_id,
            f"root is {root.upos}, not a verb or a nominal with copula",
        )
    ]


def check_coordination(p: ParseGraph) -> list[Violation]:
    out = []
    heads = {t.head for t in p.tokens if t.deprel == "conj"}
    for head_id in sorted(heads):
        conjuncts = [t for t in p.tokens if t.deprel == "conj" and t.head == head_id]
        last = max(conjuncts, key=lambda t: t.token_id)
        ccs = _primary_deps(p, last, "cc")
        if not ccs:
            out.append(
                Violation(2, last.token_id, "last coordination element has no connective")
            )
        elif ccs[-1].lemma not in CONNECTIVES:
            out.append(
                Violation(
                    2,
                    last.token_id,
                    f"connective {ccs[-1].lemma!r} is not 'and' or 'or'",
                )
            )
    return out


def _closest_aux(p: ParseGraph, token: TokenNode, labels) -> TokenNode | None:
    auxes = _primary_deps(p, token, *labels)
    if not auxes:
        return None
    return min(auxes, key=lambda a: abs(a.token_id - token.token_id))


def check_aux_verb(p: ParseGraph) -> list[Violation]:
    out = []
    for v in p.tokens:
        if v.upos != "VERB":
            continue
        nearest = _closest_aux(p, v, ("aux", "aux:pass"))
        if nearest is None:
            continue
        ok = (
            (nearest.deprel == "aux" and nearest.lemma == "be" and v.xpos == "VBG")
            or (nearest.deprel == "aux" and nearest.lemma == "have" and v.xpos == "VBN")
            or (
                nearest.deprel == "aux"
                and nearest.lemma in MODAL_LEMMAS
                and v.xpos == "VB"
            )
            or (
                nearest.deprel == "aux:pass"
                and nearest.lemma in {"be", "get"}
                and v.xpos == "VBN"
            )
        )
        if not ok:
            out.append(
                Violation(
                    3,
                    v.token_id,
                    f"auxiliary {nearest.lemma!r} ({nearest.deprel}) does not "
                    f"license verb form {v.xpos}",
                )
            )
    return out


def check_bare_verb(p: ParseGraph) -> list[Violation]:
    out = []
    for v in p.tokens:
        if v.upos != "VERB":
            continue
        if _primary_deps(p, v, "aux", "aux:pass"):
            continue
        if v.xpos in {"VBG", "VBN"}:
            if v.deprel in {"conj", "acl"}:
                continue
            out.append(
                Violation(
                    4, v.token_id, f"participle {v.xpos} outside coordination or "
                    "adnominal clause"
                )
            )
        elif v.xpos in {"VBP", "VBZ", "VBD"}:
            if v.deprel == "conj":
                continue
            if v.deprel in {"root", "acl", "acl:relcl"} and _subjects(p, v):
                continue
            out.append(
                Violation(4, v.token_id, f"finite verb {v.xpos} lacks a licensed "
                          "position or subject")
            )
        elif v.xpos == "VB":
            if v.deprel == "conj":
                continue
            marks = _primary_deps(p, v, "mark")
            if v.deprel == "acl" and any(m.lemma == "to" for m in marks):
                continue
            out.append(
                Violation(4, v.token_id, "base-form verb outside coordination or "
                          "to-infinitive adnominal clause")
            )
    return out


def check_nonverb_aux(p: ParseGraph) -> list[Violation]:
    out = []
    for w in p.tokens:
        if w.upos in {"VERB", "AUX"}:
            continue
        nearest = _closest_aux(p, w, ("aux", "aux:pass", "cop"))
        if nearest is None:
            continue
        if w.upos not in NOMINAL_UPOS:
            out.append(
                Violation(5, w.token_id, f"{w.upos} token carries an auxiliary chain")
            )
            continue
        if nearest.deprel != "cop":
            out.append(
                Violation(
                    5,
                    w.token_id,
                    f"nearest auxiliary {nearest.lemma!r} is {nearest.deprel}, "
                    "not a copula",
                )
            )
            continue
        if not _subjects(p, w):
            out.append(Violation(5, w.token_id, "copular head has no subject"))
    return out


def check_projectivity(p: ParseGraph) -> list[Violation]:
    out = []
    existing = {t.token_id for t in p.tokens}
    for edge in p.primary_edges():
        lo, hi = sorted((edge.head, edge.dep))
        span = p.descendants(edge.head)
        for between in range(lo + 1, hi):
            if between not in existing:
                continue  # position dropped by coordination expansion
            if between not in span:
                out.append(
                    Violation(
                        6,
                        edge.dep,
                        f"edge {edge.head}->{edge.dep} ({edge.label}) crosses "
                        f"token {between}",
                    )
                )
                break
    return out


ALL_CHECKS = (
    check_main_clause,
    check_coordination,
    check_aux_verb,
    check_bare_verb,
    check_nonverb_aux,
    check_projectivity,
)


def validate(p: ParseGraph) -> Verdict:
    """Run all six checks; accepted iff every check is clean."""
    violations: list[Violation] = []
    for check in ALL_CHECKS:
        violations.extend(check(p))
    status = ACCEPTED if not violations else REJECTED
    return Verdict(status=status, violations=tuple(violations))
