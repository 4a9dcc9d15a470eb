"""End-to-end authoring sessions: text in, knowledge units and answers out.

A session owns the loaded resources (frames, valence patterns, scorer,
parser provider) plus the knowledge base it accumulates.  Input lines are
classified as directives, queries, rules, fluent statements, or facts; in
a temporal session facts become narrative events with consecutive
timestamps and queries are evaluated at the horizon (one past the last
event) under the inertia axioms.

Fixture mode supplies pre-parsed sentences through a
:class:`~factlog.correction.FixtureParserProvider`; a live parser daemon
can be plugged in through the same contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .correction import FixtureParserProvider, StdioParserProvider, reparse_loop
from .errors import (
    ConfigError,
    FactlogError,
    ProviderError,
    RuleSyntaxError,
)
from .frames import FrameRegistry
from .graph import ParseGraph
from .lexgraph import LexicalGraph
from .logic import (
    FACT,
    DISJUNCTIVE_FACT,
    FLUENT_AXIOM,
    QUERY,
    RULE,
    Atom,
    KnowledgeUnit,
    ULRTerm,
    fact_atom,
    parse_program,
    serialize_kb,
    serialize_ulr,
)
from .lvp import LvpStore, frame_parse, parse_training_file
from .paraparse import paraparse
from .providers import (
    FixtureDefinitionProvider,
    FixtureRelationProvider,
    FixtureSentenceProvider,
)
from .rules import (
    INITIATION,
    TERMINATION,
    FluentStatement,
    VariableTypes,
    assign_timestamps,
    build_fluent_axiom,
    build_rule,
    sec_axioms,
    wrap_time_rule,
)
from .scoring import (
    LexicalScorer,
    RelationEmbeddingScorer,
    RoleLexicon,
    SentenceEmbeddingScorer,
    disambiguate,
)
from .solve import BRAVE, CAUTIOUS, answer_sets, query as run_query
from .ulrbuild import (
    build_fact_ulrs,
    candidate_to_term,
    emit_domain_facts,
    expand_coordination,
    resolve_coreference,
)
from . import ground as grounding


@dataclass
class Resources:
    """Loaded knowledge-engineer inputs shared by sessions."""

    registry: FrameRegistry = field(default_factory=FrameRegistry)
    store: LvpStore = field(default_factory=LvpStore)
    scorer: object | None = None  # None: only unambiguous parses allowed
    parser: object | None = None
    coref: object | None = None
    # curated interrogative templates: (compiled regex, canonical form);
    # wh-questions outside the factual fragment are rewritten before parsing
    query_rewrites: list = field(default_factory=list)


def build_scorer(
    name: str,
    registry: FrameRegistry,
    store: LvpStore,
    graph: LexicalGraph | None = None,
    rel_provider=None,
    snt_provider=None,
    def_provider=None,
    depth_cap: int = 4,
):
    lexicon = RoleLexicon.from_sources(registry, store)
    if name == "lexical":
        if graph is None:
            raise ConfigError("the lexical scorer needs a sense graph")
        return LexicalScorer(graph, lexicon, depth_cap)
    if name == "rbd":
        if rel_provider is None:
            raise ConfigError("the rbd scorer needs relation embeddings")
        return RelationEmbeddingScorer(lexicon, rel_provider, def_provider)
    if name == "sbd":
        if def_provider is None or snt_provider is None:
            raise ConfigError(
                "the sbd scorer needs definitions and sentence embeddings"
            )
        return SentenceEmbeddingScorer(lexicon, def_provider, snt_provider)
    if name == "none":
        return None
    raise ConfigError(f"unknown scorer {name!r}")


def load_resources(
    frames_path=None,
    lvp_path=None,
    training_path=None,
    parses_path=None,
    graph_path=None,
    embeddings_path=None,
    definitions_path=None,
    scorer: str = "none",
    parser_spec: str | None = None,
) -> Resources:
    """Assemble resources from files; see the CLI for the flag surface."""
    registry = FrameRegistry()
    if frames_path:
        registry = FrameRegistry.load(Path(frames_path).read_text("utf-8"))
    store = LvpStore()
    if lvp_path and Path(lvp_path).exists():
        store = LvpStore.load(Path(lvp_path).read_text("utf-8"))
    parser = None
    if parser_spec:
        if parser_spec.startswith("exec:"):
            parser = StdioParserProvider(parser_spec[5:].split())
        elif Path(parser_spec).is_dir():
            parser = FixtureParserProvider.from_dir(parser_spec)
        else:
            raise ConfigError(
                f"parser spec {parser_spec!r} is neither exec:<cmd> nor a "
                "fixture directory"
            )
    if training_path and parses_path:
        if parser is None:
            raise ConfigError("training requires pre-parsed sentences")
        annotations = parse_training_file(Path(training_path).read_text("utf-8"))
        for ann in annotations:
            parse = accept_parse(ann.text, parser)
            store.learn(ann, paraparse(parse).variants[0], registry)
    graph = None
    if graph_path:
        graph = LexicalGraph.load(Path(graph_path).read_text("utf-8"))
    rel_provider = snt_provider = None
    if embeddings_path:
        text = Path(embeddings_path).read_text("utf-8")
        rel_provider = FixtureRelationProvider.from_text(text)
        snt_provider = FixtureSentenceProvider.from_text(text)
    def_provider = None
    if definitions_path:
        def_provider = FixtureDefinitionProvider.from_text(
            Path(definitions_path).read_text("utf-8")
        )
    scorer_obj = build_scorer(
        scorer, registry, store, graph, rel_provider, snt_provider, def_provider
    )
    return Resources(
        registry=registry, store=store, scorer=scorer_obj, parser=parser
    )


def accept_parse(text: str, parser, k: int = 5) -> ParseGraph:
    """Parse, validate, and possibly correct one sentence."""
    if parser is None:
        raise ConfigError("no parser provider configured")
    alts = parser.parse(text, None, k)
    return reparse_loop(text, alts.best, parser, k)


@dataclass
class ClauseGroups:
    """Converted clause terms of one sentence.

    ``variants`` holds, per coordination-free reading, the clause terms
    in clause order; ``connective`` says how the readings combine.
    """

    connective: str
    variants: list[list[ULRTerm]]


@dataclass
class SubmitResult:
    kind: str
    message: str
    units: list[str] = field(default_factory=list)
    answers: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class Session:
    def __init__(
        self,
        resources: Resources,
        mode: str = BRAVE,
        temporal: bool = False,
    ):
        self.resources = resources
        self.mode = mode
        self.temporal = temporal
        self.kb_units: list[KnowledgeUnit] = []
        self.narrative: list[tuple[str, tuple[ULRTerm, ...]]] = []
        self._models = None

    # -- classification ----------------------------------------------------

    @staticmethod
    def classify(line: str) -> str:
        stripped = line.strip()
        if stripped.startswith(":"):
            return "directive"
        if stripped.endswith("?"):
            return QUERY
        lowered = stripped.lower()
        if lowered.startswith("if ") and " then " in lowered.replace(",", " "):
            return RULE
        if " initiates " in f" {lowered} " or " terminates " in f" {lowered} ":
            return FLUENT_AXIOM
        return FACT

    # -- clause conversion ---------------------------------------------------

    def _convert_sentence(
        self, text: str, types: VariableTypes | None
    ) -> ClauseGroups:
        parse = accept_parse(text, self.resources.parser)
        normalized = paraparse(parse)
        connective = None
        variants: list[list[ULRTerm]] = []
        for nv in normalized.variants:
            conn, coord_variants = expand_coordination(nv)
            if connective is None or connective == "and":
                connective = conn if conn == "or" or connective is None else connective
            elif conn != connective:
                raise RuleSyntaxError("inconsistent connectives across variants")
            for cv in coord_variants:
                terms = self._clause_terms(cv, text, types)
                if terms not in variants:
                    variants.append(terms)
        return ClauseGroups(connective=connective or "and", variants=variants)

    def _clause_terms(self, parse, sentence, types) -> list[ULRTerm]:
        candidates = frame_parse(parse, self.resources.store,
                                 self.resources.registry)
        by_clause: dict[int, list] = {}
        for c in candidates:
            by_clause.setdefault(c.clause_head, []).append(c)
        root_id = parse.root.token_id
        order = sorted(by_clause, key=lambda h: (h != root_id, h))
        terms = []
        for head in order:
            group = by_clause[head]
            if self.resources.scorer is not None:
                best, _senses = disambiguate(group, self.resources.scorer,
                                             sentence)
            elif len(group) == 1:
                best = group[0]
            else:
                frames_ = sorted({c.frame for c in group})
                raise ConfigError(
                    f"clause is ambiguous between {frames_} and no scorer is "
                    "configured"
                )
            terms.append(candidate_to_term(parse, best, types))
        return terms

    # -- facts ---------------------------------------------------------------

    def author_fact(self, text: str) -> SubmitResult:
        text = text.strip().rstrip(".!").strip()
        groups = self._convert_sentence(text, types=None)
        if self.temporal:
            if groups.connective == "or":
                for v in groups.variants:
                    if len(v) != 1:
                        raise RuleSyntaxError(
                            "a disjunctive event cannot carry extra clauses"
                        )
                terms = tuple(v[0] for v in groups.variants)
            else:
                seen: list[ULRTerm] = []
                for v in groups.variants:
                    for t in v:
                        if t not in seen:
                            seen.append(t)
                terms = tuple(seen)
            self.narrative.append((groups.connective, terms))
            self._models = None
            shown = [
                serialize_ulr(u)
                for u in assign_timestamps(self.narrative).units()[-len(terms):]
            ]
            return SubmitResult(FACT, f"event recorded at t={len(self.narrative)}",
                                units=shown)
        units = build_fact_ulrs(groups.variants, groups.connective)
        return self._append_units(FACT, units)

    def _append_units(self, kind: str, units) -> SubmitResult:
        rendered = []
        for u in units:
            # soundness gate: whatever enters the KB must round-trip
            text = serialize_ulr(u)
            parse_program(text)
            self.kb_units.append(u)
            rendered.append(text)
        self._models = None
        return SubmitResult(kind, f"{len(units)} unit(s) added", units=rendered)

    # -- rules ----------------------------------------------------------------

    def _segment(self, text: str, side: str) -> list[tuple[str, bool, str]]:
        """Split a premise/conclusion section into clause segments.

        Returns (connective marker, naf flag, clause text) triples.  A
        comma is a separator only when the remainder parses as a known
        clause, so in-clause comma lists survive.
        """
        parts = [p.strip() for p in text.split(",")]
        segments: list[tuple[str, bool, str]] = []
        i = 0
        while i < len(parts):
            marker = "and" if side == "premise" else "or"
            j = len(parts)
            found = None
            while j > i:
                candidate = ", ".join(parts[i:j])
                for lead in ("and ", "or ", ""):
                    if candidate.lower().startswith(lead):
                        body = candidate[len(lead):].strip()
                        naf = False
                        if body.lower().startswith("not provable "):
                            naf = True
                            body = body[len("not provable "):]
                        if self._parseable(body):
                            found = (lead.strip() or marker, naf, body)
                            break
                if found:
                    break
                j -= 1
            if not found:
                raise RuleSyntaxError(
                    f"cannot segment {side} text at: {', '.join(parts[i:])!r}"
                )
            segments.append(found)
            i = j
        return segments

    def _parseable(self, clause: str) -> bool:
        try:
            self.resources.parser.parse(clause)
            return True
        except ProviderError:
            return False

    def author_rule(self, text: str) -> SubmitResult:
        stripped = text.strip().rstrip(".")
        if stripped.lower().startswith("if "):
            stripped = stripped[3:]
        lowered = stripped.lower()
        marker = ", then " if ", then " in lowered else " then "
        at = lowered.find(marker)
        if at < 0:
            raise RuleSyntaxError("a rule is written 'If ..., then ...'")
        premise_text = stripped[:at].strip()
        conclusion_text = stripped[at + len(marker):].strip()

        types = VariableTypes()
        premise_alternatives: list[list[list[tuple[ULRTerm, bool]]]] = []
        for _marker, naf, clause in self._segment(premise_text, "premise"):
            groups = self._convert_sentence(clause, types)
            if naf and (groups.connective == "or" and len(groups.variants) > 1):
                raise RuleSyntaxError(
                    "'not provable' cannot scope over a disjunction"
                )
            if groups.connective == "or" and len(groups.variants) > 1:
                alts = [[(t, naf) for t in v] for v in groups.variants]
            else:
                merged: list[tuple[ULRTerm, bool]] = []
                for v in groups.variants:
                    for t in v:
                        if (t, naf) not in merged:
                            merged.append((t, naf))
                alts = [merged]
            premise_alternatives.append(alts)

        conclusion_segments = self._segment(conclusion_text, "conclusion")
        markers = {m for m, _naf, _c in conclusion_segments[1:]}
        if any(naf for _m, naf, _c in conclusion_segments):
            raise RuleSyntaxError("'not provable' is prohibited in conclusions")
        head_groups: list[list[ULRTerm]] = []  # one rule per group
        if len(conclusion_segments) == 1 or markers == {"and"}:
            for _m, _naf, clause in conclusion_segments:
                head_groups.extend(
                    self._conclusion_groups(self._convert_sentence(clause, types))
                )
        elif markers == {"or"}:
            variants: list[list[ULRTerm]] = []
            for _m, _naf, clause in conclusion_segments:
                groups = self._convert_sentence(clause, types)
                for v in groups.variants:
                    if v not in variants:
                        variants.append(v)
            head_groups.extend(
                self._conclusion_groups(ClauseGroups("or", variants))
            )
        else:
            raise RuleSyntaxError("conclusions mix 'and' and 'or' separators")

        units = []
        import itertools as _it

        if not head_groups:
            raise RuleSyntaxError("the rule has no conclusions")
        for premise_choice in _it.product(*premise_alternatives):
            premises: list[tuple[ULRTerm, bool]] = []
            for chunk in premise_choice:
                for pair in chunk:
                    if pair not in premises:
                        premises.append(pair)
            for heads in head_groups:
                rule = build_rule(premises, list(heads), types)
                if self.temporal:
                    rule = wrap_time_rule(rule)
                units.append(KnowledgeUnit(kind=RULE, rule=rule))
        return self._append_units(RULE, units)

    @staticmethod
    def _conclusion_groups(groups: ClauseGroups) -> list[list[ULRTerm]]:
        """Head groups (one rule per group) for a single conclusion clause.

        An and-coordination concludes every variant's terms, one rule
        each.  An or-coordination concludes a disjunction; terms shared
        by all readings factor out into their own rules (concluding
        "analyzes a specimen obtained by SPA or catheterization" states
        the analysis outright and disjoins only the obtainment), and each
        reading may then contribute at most one varying term.
        """
        if groups.connective == "or" and len(groups.variants) > 1:
            common = [
                t for t in groups.variants[0]
                if all(t in v for v in groups.variants)
            ]
            out: list[list[ULRTerm]] = [[t] for t in common]
            varying: list[ULRTerm] = []
            for v in groups.variants:
                rest = [t for t in v if t not in common]
                if len(rest) != 1:
                    raise RuleSyntaxError(
                        "a disjunction of conjunctions in a conclusion has "
                        "no agreed reading; please rephrase"
                    )
                if rest[0] not in varying:
                    varying.append(rest[0])
            out.append(varying)
            return out
        out = []
        for v in groups.variants:
            for t in v:
                if [t] not in out:
                    out.append([t])
        return out

    # -- fluent statements ------------------------------------------------------

    def author_fluent(self, text: str) -> SubmitResult:
        stripped = text.strip().rstrip(".")
        lowered = f" {stripped.lower()} "
        if " initiates " in lowered:
            kind, splitter = INITIATION, " initiates "
        elif " terminates " in lowered:
            kind, splitter = TERMINATION, " terminates "
        else:
            raise RuleSyntaxError(
                "a fluent statement contains 'initiates' or 'terminates'"
            )
        at = lowered.index(splitter) - 1
        trigger_text = stripped[:at].strip()
        effect_text = stripped[at + len(splitter) - 1:].strip()
        types = VariableTypes()
        trigger = self._single_term(trigger_text, types, "trigger")
        effect = self._single_term(effect_text, types, "effect")
        statement = FluentStatement(kind=kind, trigger=trigger, effect=effect,
                                    types=types)
        rule = build_fluent_axiom(statement)
        return self._append_units(FLUENT_AXIOM,
                                  [KnowledgeUnit(kind=FLUENT_AXIOM, rule=rule)])

    def _single_term(self, clause: str, types, what: str) -> ULRTerm:
        groups = self._convert_sentence(clause, types)
        if len(groups.variants) != 1 or len(groups.variants[0]) != 1:
            raise RuleSyntaxError(
                f"the {what} of a fluent statement must be a single clause "
                "without conjunction or disjunction"
            )
        return groups.variants[0][0]

    # -- program assembly and queries -------------------------------------------

    def _narrative_units(self) -> tuple[list[KnowledgeUnit], int]:
        temporal_kb = [
            u
            for u in self.kb_units
            if u.kind in {FACT, DISJUNCTIVE_FACT}
            and any(a.predicate == "happensAt" for a in u.atoms)
        ]
        max_loaded = 0
        for u in temporal_kb:
            for a in u.atoms:
                if a.predicate == "happensAt" and isinstance(a.args[-1], int):
                    max_loaded = max(max_loaded, a.args[-1])
        if not self.narrative and not temporal_kb and not self.temporal:
            return [], 0
        offset_events = []
        for i, (conn, terms) in enumerate(self.narrative):
            offset_events.append((conn, terms))
        narrative = assign_timestamps(offset_events) if offset_events else None
        units: list[KnowledgeUnit] = []
        horizon = max_loaded + 1 if max_loaded else 1
        if narrative:
            units.extend(
                u for u in narrative.units()
                if not (u.atoms and u.atoms[0].predicate == "timestamp")
            )
            horizon = max(horizon, narrative.horizon)
        for ts in range(1, horizon + 1):
            units.append(KnowledgeUnit(kind=FACT,
                                       atoms=(Atom("timestamp", (ts,)),)))
        return units, horizon

    def program_units(self) -> list[KnowledgeUnit]:
        units = [u for u in self.kb_units
                 if not (u.atoms and u.atoms
                         and u.atoms[0].predicate == "timestamp")]
        narrative_units, _ = self._narrative_units()
        units.extend(narrative_units)
        if self._needs_sec(units):
            units.extend(
                KnowledgeUnit(kind=RULE, rule=r) for r in sec_axioms()
            )
        domain_units, _warnings = emit_domain_facts(units,
                                                    self.resources.registry)
        units.extend(domain_units)
        # deduplicate by rendering, preserving order
        seen = set()
        out = []
        for u in units:
            key = serialize_ulr(u)
            if key not in seen:
                seen.add(key)
                out.append(u)
        return out

    @staticmethod
    def _needs_sec(units) -> bool:
        for u in units:
            atoms = list(u.atoms)
            if u.rule is not None:
                atoms.extend(u.rule.heads)
            for a in atoms:
                if a.predicate in {"happensAt", "initiates", "terminates"}:
                    return True
        return False

    def models(self):
        if self._models is None:
            program = grounding.ground(self.program_units())
            self._models = answer_sets(program)
        return self._models

    def horizon(self) -> int:
        _, horizon = self._narrative_units()
        return max(horizon, 1)

    def ask(self, text: str) -> SubmitResult:
        stripped = text.strip().rstrip("?").strip()
        for pattern, template in self.resources.query_rewrites:
            m = pattern.fullmatch(stripped)
            if m:
                stripped = m.expand(template)
                break
        types = VariableTypes()
        term = self._single_term(stripped, types, "query")
        atom = fact_atom(term)
        if self.temporal or self._needs_sec(self.kb_units) or self.narrative:
            atom = Atom("holdsAt", (term, self.horizon()))
        bindings = run_query(self.models(), atom, self.mode)
        answers = [
            {name: _render_value(v) for name, v in b.items()} for b in bindings
        ]
        return SubmitResult(
            QUERY,
            f"{len(answers)} answer(s) in {self.mode} mode",
            answers=answers,
        )

    # -- directives and the REPL loop ------------------------------------------

    def submit(self, line: str) -> SubmitResult:
        kind = self.classify(line)
        if kind == "directive":
            return self._directive(line.strip())
        if kind == QUERY:
            return self.ask(line)
        if kind == RULE:
            return self.author_rule(line)
        if kind == FLUENT_AXIOM:
            return self.author_fluent(line)
        return self.author_fact(line)

    def _directive(self, line: str) -> SubmitResult:
        parts = line.split(None, 1)
        name = parts[0]
        arg = parts[1].strip() if len(parts) > 1 else ""
        if name == ":mode":
            if arg not in {BRAVE, CAUTIOUS}:
                raise ConfigError(f"mode must be {BRAVE} or {CAUTIOUS}")
            self.mode = arg
            return SubmitResult("directive", f"query mode set to {arg}")
        if name == ":temporal":
            if arg not in {"on", "off"}:
                raise ConfigError(":temporal takes on|off")
            self.temporal = arg == "on"
            return SubmitResult("directive", f"temporal mode {arg}")
        if name == ":save":
            Path(arg).write_text(self.kb_text(), "utf-8")
            return SubmitResult("directive", f"knowledge base saved to {arg}")
        if name == ":load":
            self.load_kb(Path(arg).read_text("utf-8"))
            return SubmitResult("directive", f"knowledge base loaded from {arg}")
        if name == ":kb":
            return SubmitResult("directive", "knowledge base",
                                units=self.kb_text().splitlines())
        raise ConfigError(f"unknown directive {name!r}")

    def kb_text(self) -> str:
        units = list(self.kb_units)
        narrative_units, _ = self._narrative_units()
        units.extend(narrative_units)
        if not units:
            return ""
        return serialize_kb(units)

    def load_kb(self, text: str) -> None:
        for unit in parse_program(text):
            if unit.kind == QUERY:
                raise RuleSyntaxError("a knowledge base file cannot hold queries")
            self.kb_units.append(unit)
        self._models = None


def _render_value(v) -> str:
    if isinstance(v, int):
        return str(v)
    if hasattr(v, "render"):
        rendered = v.render()
        return rendered.strip('"')
    return str(v)


def author_discourse(session: Session, sentences, coref=None):
    """Feed a multi-sentence discourse, resolving pronouns first."""
    provider = coref or session.resources.coref
    warnings: list[str] = []
    if provider is not None:
        sentences, warnings = resolve_coreference(sentences, provider)
    results = []
    for sentence in sentences:
        results.append(session.submit(sentence))
    if warnings and results:
        results[-1].warnings.extend(warnings)
    return results
