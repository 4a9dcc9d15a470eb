"""Logical valence patterns: learning, triggering, and application.

A valence pattern records how to walk from a lexical-unit token to each
role filler of a frame.  Patterns are learned from annotated training
sentences and applied to normalized parses to produce candidate frame
parses, which the disambiguation stage then ranks.

Path selectors operate on the normalized (effective) edge set:

    ==========  =================================================
    subject     nsubj dependent
    object      obj dependent, or the demoted passive subject
                (obl:by, which is the underlying object)
    iobject     iobj dependent
    pp[w]       obl/nmod dependent with a case child whose lemma is w
    mod         amod/advmod dependent
    poss        nmod:poss dependent
    cop         copula edge (a linking verb can anchor a frame whose
                class filler is the predicate nominal: be as the LU,
                ``verb->^cop`` landing on the nominal)
    dep         terminal no-op
    ==========  =================================================

A ``^`` prefix walks the edge upward (dependent to head), which covers
nominal lexical units (``noun->^object->subject``).  Unknown edge labels
fail loudly at training time so annotation gaps are visible.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace

from . import terms
from .errors import AnnotationError, RuleSyntaxError, UnrecognizedSentenceError
from .graph import ParseGraph

REQUIRED = "required"
OPTIONAL = "optnl"

_LU_KINDS = {"VERB": "verb", "AUX": "verb", "NOUN": "noun", "PROPN": "noun",
             "ADJ": "adj"}
TRIGGER_UPOS = {"VERB", "AUX", "NOUN", "PROPN", "ADJ"}


@dataclass(frozen=True)
class PathSelector:
    kind: str  # subject | object | iobject | pp | mod | poss | dep
    prep: str = ""  # for pp[w]
    up: bool = False

    def render(self) -> str:
        body = f"pp[{self.prep}]" if self.kind == "pp" else self.kind
        return f"^{body}" if self.up else body

    @classmethod
    def parse(cls, text: str) -> "PathSelector":
        up = text.startswith("^")
        body = text[1:] if up else text
        m = re.fullmatch(r"pp\[([^\]]*)\]", body)
        if m:
            return cls("pp", m.group(1), up)
        if body not in {"subject", "object", "iobject", "mod", "poss",
                        "cop", "dep"}:
            raise RuleSyntaxError(f"unknown path selector {text!r}")
        return cls(body, "", up)


@dataclass(frozen=True)
class RolePattern:
    selectors: tuple[PathSelector, ...]
    lu_kind: str = "verb"

    def __post_init__(self):
        if not self.selectors:
            raise AnnotationError("empty role pattern")
        terminals = [s for s in self.selectors if s.kind == "dep"]
        if len(terminals) > 1 or (terminals and self.selectors[-1].kind != "dep"):
            raise AnnotationError("'dep' may only terminate a pattern")

    def render(self) -> str:
        return "->".join([self.lu_kind] + [s.render() for s in self.selectors])

    @classmethod
    def parse(cls, text: str) -> "RolePattern":
        parts = text.split("->")
        if len(parts) < 2:
            raise RuleSyntaxError(f"bad pattern {text!r}")
        lu_kind = parts[0]
        if lu_kind not in {"verb", "noun", "adj"}:
            raise RuleSyntaxError(f"bad lexical-unit kind in pattern {text!r}")
        return cls(tuple(PathSelector.parse(p) for p in parts[1:]), lu_kind)


@dataclass(frozen=True)
class LVP:
    lu_lemma: str
    frame: str
    patterns: tuple[tuple[str, RolePattern, str], ...]  # (role, pattern, flag)
    synonyms: tuple[str, ...] = ()
    lu_kind: str = "verb"

    def lemmas(self) -> tuple[str, ...]:
        return (self.lu_lemma,) + self.synonyms

    def key(self):
        return (
            self.lu_lemma,
            self.frame,
            frozenset((r, p.render(), f) for r, p, f in self.patterns),
        )


@dataclass(frozen=True)
class TrainingAnnotation:
    text: str
    frame: str
    lu_position: int
    lu_synonyms: tuple[str, ...]
    role_specs: tuple[tuple[str, int, str], ...]  # (role, token id, flag)


@dataclass(frozen=True)
class CandidateParse:
    frame: str
    bindings: tuple[tuple[str, int, str], ...]  # (role, filler token id, lemma)
    source_parse_id: int
    clause_head: int
    lu_token: int
    score: float | None = None
    senses: tuple[tuple[str, str], ...] = ()  # (role, sense or def:...)

    def binding_map(self) -> dict[str, str]:
        return {role: lemma for role, _, lemma in self.bindings}


# -- path extraction (training) ------------------------------------------


def _edge_selector(p: ParseGraph, head: int, dep: int, label: str):
    if label == "nsubj":
        return PathSelector("subject")
    if label in {"obj", "obl:by"}:
        return PathSelector("object")
    if label == "iobj":
        return PathSelector("iobject")
    if label in {"amod", "advmod"}:
        return PathSelector("mod")
    if label == "nmod:poss":
        return PathSelector("poss")
    if label == "cop":
        return PathSelector("cop")
    if label in {"obl", "nmod"}:
        cases = [c.lemma for c in p.children(dep, "case")]
        if cases:
            return PathSelector("pp", cases[0])
    return None


def extract_path(p: ParseGraph, frm: int, to: int) -> RolePattern:
    """Render the shortest effective path from the LU to a filler token.

    Edges may be walked in either direction; an edge without a selector
    rendering raises :class:`AnnotationError` naming the label, so the
    knowledge engineer sees exactly which construction is uncovered.
    """
    if frm == to:
        raise AnnotationError("a lexical unit cannot fill its own role")
    p.token(frm)
    p.token(to)
    # BFS over effective edges, walkable both ways
    prev: dict[int, tuple[int, int, int, str, bool]] = {}
    seen = {frm}
    queue = deque([frm])
    while queue:
        cur = queue.popleft()
        if cur == to:
            break
        steps = []
        for e in sorted(p.out_edges(cur), key=lambda e: (e.dep, e.label)):
            steps.append((e.dep, e.head, e.dep, e.label, False))
        for e in sorted(p.in_edges(cur), key=lambda e: (e.head, e.label)):
            steps.append((e.head, e.head, e.dep, e.label, True))
        for nxt, head, dep, label, up in steps:
            if nxt not in seen:
                seen.add(nxt)
                prev[nxt] = (cur, head, dep, label, up)
                queue.append(nxt)
    if to not in seen:
        raise AnnotationError(f"no path from token {frm} to token {to}")
    # reconstruct
    hops = []
    cur = to
    while cur != frm:
        came, head, dep, label, up = prev[cur]
        hops.append((head, dep, label, up))
        cur = came
    hops.reverse()
    selectors = []
    for head, dep, label, up in hops:
        sel = _edge_selector(p, head, dep, label)
        if sel is None:
            raise AnnotationError(
                f"edge label {label!r} has no path-selector rendering"
            )
        selectors.append(replace(sel, up=up))
    if selectors[-1].kind == "pp":
        selectors.append(PathSelector("dep"))
    lu_kind = _LU_KINDS.get(p.token(frm).upos, "verb")
    return RolePattern(tuple(selectors), lu_kind)


def learn_lvp(a: TrainingAnnotation, p: ParseGraph, registry=None) -> LVP:
    """Build a valence pattern from one annotated, normalized parse."""
    lu = p.token(a.lu_position)
    if registry is not None:
        frame = registry.get(a.frame)
        for role, _, _ in a.role_specs:
            if role not in frame.roles:
                raise AnnotationError(
                    f"role {role!r} does not belong to frame {a.frame!r}"
                )
    patterns = []
    for role, tok_id, flag in a.role_specs:
        if flag not in {REQUIRED, OPTIONAL}:
            raise AnnotationError(f"bad flag {flag!r} for role {role!r}")
        patterns.append((role, extract_path(p, a.lu_position, tok_id), flag))
    return LVP(
        lu_lemma=lu.lemma,
        frame=a.frame,
        patterns=tuple(patterns),
        synonyms=tuple(a.lu_synonyms),
        lu_kind=_LU_KINDS.get(lu.upos, "verb"),
    )


# -- application (deployment) ---------------------------------------------


def _walk_selector(p: ParseGraph, at: int, sel: PathSelector) -> int | None:
    if sel.kind == "dep":
        return at
    if sel.up:
        candidates = []
        for e in p.in_edges(at):
            if e.head not in p.inert and _matches(p, e.head, e.dep, e.label, sel):
                candidates.append(e.head)
        return min(candidates) if candidates else None
    candidates = []
    for e in p.out_edges(at):
        if e.dep in p.inert:
            continue
        if _matches(p, e.head, e.dep, e.label, sel):
            candidates.append((0 if e.label == "obj" else 1, e.dep))
    if not candidates:
        return None
    return min(candidates)[1]


def _matches(p: ParseGraph, head: int, dep: int, label: str, sel: PathSelector):
    if sel.kind == "subject":
        return label == "nsubj"
    if sel.kind == "object":
        return label in {"obj", "obl:by"}
    if sel.kind == "iobject":
        return label == "iobj"
    if sel.kind == "mod":
        return label in {"amod", "advmod"}
    if sel.kind == "poss":
        return label == "nmod:poss"
    if sel.kind == "cop":
        return label == "cop"
    if sel.kind == "pp":
        if label not in {"obl", "nmod"}:
            return False
        return any(c.lemma == sel.prep for c in p.children(dep, "case"))
    return False


def walk_pattern(p: ParseGraph, lu: int, pattern: RolePattern) -> int | None:
    """Follow a role pattern from the LU; the landing token, or None."""
    at = lu
    for sel in pattern.selectors:
        nxt = _walk_selector(p, at, sel)
        if nxt is None:
            return None
        at = nxt
    if at == lu:
        return None
    return at


def apply_lvp(lvp: LVP, p: ParseGraph, lu_token: int | None = None):
    """Bind the pattern's roles starting at an LU occurrence.

    Returns a :class:`CandidateParse`, or None when a required role does
    not bind.  Without an explicit anchor the first matching occurrence
    is used.
    """
    if lu_token is None:
        occurrences = [
            t.token_id
            for t in p.tokens
            if t.lemma in lvp.lemmas() and t.token_id not in p.inert
        ]
        if not occurrences:
            return None
        lu_token = occurrences[0]
    bindings = []
    for role, pattern, flag in lvp.patterns:
        landed = walk_pattern(p, lu_token, pattern)
        if landed is None:
            if flag == REQUIRED:
                return None
            continue
        bindings.append((role, landed, p.token(landed).lemma))
    return CandidateParse(
        frame=lvp.frame,
        bindings=tuple(bindings),
        source_parse_id=p.parse_id,
        clause_head=_clause_head_of(p, lu_token),
        lu_token=lu_token,
    )


def trigger_lvps(p: ParseGraph, store) -> list[LVP]:
    """All patterns whose LU lemma or synonym occurs in the parse."""
    lemmas = {
        t.lemma
        for t in p.tokens
        if t.upos in TRIGGER_UPOS and t.token_id not in p.inert
    }
    return [lvp for lvp in store.lvps() if lemmas & set(lvp.lemmas())]


def clause_heads(p: ParseGraph) -> list[int]:
    """Root plus every adnominal clause head, in surface order."""
    heads = [t.token_id for t in p.tokens if t.deprel in {"acl", "acl:relcl"}]
    return sorted([p.root.token_id] + heads)


def _clause_head_of(p: ParseGraph, token_id: int) -> int:
    heads = set(clause_heads(p))
    cur = token_id
    while True:
        if cur in heads:
            return cur
        t = p.token(cur)
        if t.head == 0:
            return t.token_id
        cur = t.head


def frame_parse(p: ParseGraph, store, registry=None) -> list[CandidateParse]:
    """Candidate frame parses of every clause of a normalized parse.

    The main clause and each adnominal clause are parsed independently;
    identical binding sets are deduplicated.  A clause for which no
    pattern produces a candidate fails the whole sentence, since partial
    conversions would silently drop content.
    """
    triggered = trigger_lvps(p, store)
    out: list[CandidateParse] = []
    seen = set()
    for head in clause_heads(p):
        clause_found = False
        for lvp in triggered:
            for t in p.tokens:
                if t.token_id in p.inert or t.lemma not in lvp.lemmas():
                    continue
                if _clause_head_of(p, t.token_id) != head:
                    continue
                cand = apply_lvp(lvp, p, t.token_id)
                if cand is None:
                    continue
                key = (cand.frame, cand.bindings, head)
                if key not in seen:
                    seen.add(key)
                    out.append(cand)
                clause_found = True
        if not clause_found:
            lemma = p.token(head).lemma
            raise UnrecognizedSentenceError(
                f"no valence pattern recognized the clause at {lemma!r}; "
                "the sentence cannot be converted"
            )
    return out


# -- store ----------------------------------------------------------------


class LvpStore:
    """Read-mostly collection of learned patterns plus training fillers."""

    def __init__(self):
        self._lvps: dict = {}
        self._synonyms: dict[str, set[str]] = {}
        self.role_fillers: dict[str, list[str]] = {}

    def lvps(self) -> list[LVP]:
        out = []
        for lvp in self._lvps.values():
            syns = tuple(sorted(self._synonyms.get(lvp.lu_lemma, ())))
            out.append(replace(lvp, synonyms=syns))
        return out

    def add(self, lvp: LVP) -> bool:
        """Merge one pattern; returns False when it was already present."""
        for syn in lvp.synonyms:
            self._synonyms.setdefault(lvp.lu_lemma, set()).add(syn)
        key = lvp.key()
        if key in self._lvps:
            return False
        self._lvps[key] = replace(lvp, synonyms=())
        return True

    def add_role_filler(self, role: str, lemma: str) -> None:
        fillers = self.role_fillers.setdefault(role, [])
        if lemma not in fillers:
            fillers.append(lemma)

    def learn(self, annotation: TrainingAnnotation, parse: ParseGraph,
              registry=None) -> LVP:
        lvp = learn_lvp(annotation, parse, registry)
        self.add(lvp)
        for role, tok_id, _ in annotation.role_specs:
            self.add_role_filler(role, parse.token(tok_id).lemma)
        return lvp

    # file format: lvp/3 records in the listing shape, plus
    # lvp_synonym/2 and role_filler/2 side records

    def dump(self) -> str:
        lines = []
        for lvp in sorted(self._lvps.values(), key=lambda l: (l.lu_lemma, l.frame)):
            pats = ",".join(
                f'pattern("{role}","{pattern.render()}",{flag})'
                for role, pattern, flag in lvp.patterns
            )
            lines.append(f'lvp({lvp.lu_lemma},"{lvp.frame}",[{pats}]).')
        for lu, syns in sorted(self._synonyms.items()):
            for syn in sorted(syns):
                lines.append(f"lvp_synonym({lu},{syn}).")
        for role, fillers in sorted(self.role_fillers.items()):
            for f in fillers:
                lines.append(f'role_filler("{role}",{f}).')
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "LvpStore":
        store = cls()
        for line_no, stmt in terms.iter_statements(text):
            term = terms.parse_term(stmt)
            if not isinstance(term, terms.Compound):
                raise RuleSyntaxError(f"line {line_no}: unexpected {stmt!r}")
            if term.functor == "lvp":
                lu = terms.text_of(term.args[0])
                frame = terms.text_of(term.args[1])
                patterns = []
                for pt in term.args[2].items:
                    pt = terms.expect_compound(pt, "pattern", 3)
                    role = terms.text_of(pt.args[0])
                    pattern = RolePattern.parse(terms.text_of(pt.args[1]))
                    flag = terms.text_of(pt.args[2])
                    patterns.append((role, pattern, flag))
                lu_kind = patterns[0][1].lu_kind if patterns else "verb"
                store.add(
                    LVP(lu_lemma=lu, frame=frame, patterns=tuple(patterns),
                        lu_kind=lu_kind)
                )
            elif term.functor == "lvp_synonym":
                lu, syn = (terms.text_of(a) for a in term.args)
                store._synonyms.setdefault(lu, set()).add(syn)
            elif term.functor == "role_filler":
                role, filler = (terms.text_of(a) for a in term.args)
                store.add_role_filler(role, filler)
            else:
                raise RuleSyntaxError(
                    f"line {line_no}: unknown record {term.functor!r}"
                )
        return store


_TRAIN_RE = re.compile(
    r'train\(\s*"(?P<text>(?:[^"\\]|\\.)*)"\s*,\s*"(?P<frame>[^"]+)"\s*,\s*'
    r'"LU"\s*=\s*(?P<lu>\d+)\s*,\s*\[(?P<syns>[^\]]*)\]\s*,\s*'
    r"\[(?P<roles>.*)\]\s*\)\s*\.?\s*$"
)
_ROLE_SPEC_RE = re.compile(
    r'"(?P<role>[^"]+)"\s*=\s*(?P<pos>\d+)\s*\+\s*(?P<flag>required|optnl)'
)


def parse_training_line(line: str) -> TrainingAnnotation:
    """Parse one train/5 record in the annotation file shape."""
    m = _TRAIN_RE.match(line.strip())
    if not m:
        raise RuleSyntaxError(f"malformed training record: {line!r}")
    syns = tuple(
        s.strip().strip('"') for s in m.group("syns").split(",") if s.strip()
    )
    specs = tuple(
        (r.group("role"), int(r.group("pos")), r.group("flag"))
        for r in _ROLE_SPEC_RE.finditer(m.group("roles"))
    )
    if not specs:
        raise RuleSyntaxError(f"training record has no role specs: {line!r}")
    return TrainingAnnotation(
        text=m.group("text").replace('\\"', '"'),
        frame=m.group("frame"),
        lu_position=int(m.group("lu")),
        lu_synonyms=syns,
        role_specs=specs,
    )


def parse_training_file(text: str) -> list[TrainingAnnotation]:
    out = []
    for _line_no, stmt in terms.iter_statements(text):
        out.append(parse_training_line(stmt))
    return out
