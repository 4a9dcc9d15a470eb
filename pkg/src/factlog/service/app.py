"""HTTP facade over the authoring pipeline.

The service wraps one set of loaded resources (frames, valence patterns,
scorer, parser provider) configured at startup.  Stateless endpoints
cover the batch operations; named sessions carry an interactive
knowledge base for REPL-style clients.
"""

from __future__ import annotations

import io
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException

from ..conllu import ingest_conllu, serialize_graph
from ..correction import FixtureParserProvider
from ..errors import FactlogError, NonFactualError
from ..frames import FrameRegistry
from ..logic import QUERY, parse_program, serialize_kb, serialize_ulr
from ..lvp import LvpStore, parse_training_file
from ..paraparse import paraparse
from ..pipeline import Resources, Session, accept_parse, load_resources
from ..solve import BRAVE, CAUTIOUS, query as run_query
from ..validation import validate
from ..wordfacts import emit_word_facts
from .schemas import (
    HealthResponse,
    KbResponse,
    LearnRequest,
    LearnResponse,
    NormalizeRequest,
    NormalizeResponse,
    ParseRequest,
    ParseResponse,
    QueryAnswer,
    ReasonRequest,
    ReasonResponse,
    SentenceVerdict,
    SessionInput,
    SessionReply,
    SessionRequest,
    SessionResponse,
    ValidateRequest,
    ValidateResponse,
    ViolationModel,
    WordFactsRequest,
    WordFactsResponse,
)


@dataclass
class ServiceConfig:
    """File-path configuration mirrored by CLI flags and env vars."""

    frames: str | None = None
    lvp: str | None = None
    training: str | None = None
    parser: str | None = None
    graph: str | None = None
    embeddings: str | None = None
    definitions: str | None = None
    scorer: str = "none"
    mode: str = BRAVE
    temporal: bool = False


def _http_error(exc: FactlogError) -> HTTPException:
    status = 400
    if isinstance(exc, NonFactualError):
        status = 422
    return HTTPException(status_code=status, detail=str(exc))


def create_app(config: ServiceConfig | None = None,
               resources: Resources | None = None) -> FastAPI:
    config = config or ServiceConfig()
    if resources is None:
        resources = load_resources(
            frames_path=config.frames,
            lvp_path=config.lvp,
            training_path=config.training,
            parses_path=config.parser,
            graph_path=config.graph,
            embeddings_path=config.embeddings,
            definitions_path=config.definitions,
            scorer=config.scorer,
            parser_spec=config.parser,
        )
    app = FastAPI(title="factlog", version="0.1.0")
    app.state.resources = resources
    app.state.config = config
    app.state.sessions: dict[str, Session] = {}

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse()

    @app.post("/validate", response_model=ValidateResponse)
    def validate_endpoint(request: ValidateRequest):
        try:
            corpus = ingest_conllu(io.StringIO(request.conllu))
        except FactlogError as exc:
            raise _http_error(exc)
        sentences = []
        all_ok = True
        for alts in corpus:
            verdict = validate(alts.best)
            all_ok = all_ok and verdict.accepted
            sentences.append(
                SentenceVerdict(
                    sentence_id=alts.sentence_id,
                    status=verdict.status,
                    violations=[
                        ViolationModel(
                            property_id=v.property_id,
                            token=v.token,
                            message=v.message,
                            rendered=v.render(alts.sentence_id),
                        )
                        for v in verdict.violations
                    ],
                )
            )
        return ValidateResponse(sentences=sentences, accepted=all_ok)

    @app.post("/wordfacts", response_model=WordFactsResponse)
    def wordfacts_endpoint(request: WordFactsRequest):
        try:
            corpus = ingest_conllu(io.StringIO(request.conllu))
            records = []
            for alts in corpus:
                graph = alts.best
                verdict = validate(graph)
                records.append(emit_word_facts(graph.with_validation(verdict.status)))
        except FactlogError as exc:
            raise _http_error(exc)
        return WordFactsResponse(records="".join(records))

    @app.post("/normalize", response_model=NormalizeResponse)
    def normalize_endpoint(request: NormalizeRequest):
        try:
            corpus = ingest_conllu(io.StringIO(request.conllu))
            blocks = []
            for alts in corpus:
                normalized = paraparse(alts.best)
                for variant in normalized.variants:
                    blocks.append(serialize_graph(variant, alts.text))
        except FactlogError as exc:
            raise _http_error(exc)
        return NormalizeResponse(conllu="\n".join(blocks))

    @app.post("/learn", response_model=LearnResponse)
    def learn_endpoint(request: LearnRequest):
        try:
            registry = (
                FrameRegistry.load(request.frames) if request.frames else None
            )
            provider = FixtureParserProvider(ingest_conllu(request.conllu))
            store = LvpStore()
            annotations = parse_training_file(request.training)
            for ann in annotations:
                parse = accept_parse(ann.text, provider)
                normalized = paraparse(parse)
                store.learn(ann, normalized.variants[0], registry)
        except FactlogError as exc:
            raise _http_error(exc)
        return LearnResponse(lvp=store.dump(), learned=len(annotations))

    @app.post("/parse", response_model=ParseResponse)
    def parse_endpoint(request: ParseRequest):
        res = app.state.resources
        if request.conllu:
            parser = FixtureParserProvider(ingest_conllu(request.conllu))
            res = Resources(
                registry=res.registry,
                store=res.store,
                scorer=res.scorer,
                parser=parser,
                coref=res.coref,
            )
        session = Session(res, mode=config.mode)
        diagnostics: list[str] = []
        try:
            for sentence in request.sentences:
                result = session.author_fact(sentence)
                diagnostics.extend(result.warnings)
        except NonFactualError as exc:
            detail = str(exc)
            if exc.verdict is not None:
                detail += " | " + "; ".join(
                    v.message for v in exc.verdict.violations
                )
            raise HTTPException(status_code=422, detail=detail)
        except FactlogError as exc:
            raise _http_error(exc)
        return ParseResponse(ulr=serialize_kb(session.program_units()),
                             diagnostics=diagnostics)

    @app.post("/reason", response_model=ReasonResponse)
    def reason_endpoint(request: ReasonRequest):
        if request.mode not in {BRAVE, CAUTIOUS}:
            raise HTTPException(400, f"unknown mode {request.mode!r}")
        try:
            session = Session(app.state.resources, mode=request.mode)
            session.load_kb(request.kb)
            models = session.models()
            answers = []
            for unit in parse_program(request.queries):
                if unit.kind != QUERY:
                    raise HTTPException(400, "query files hold queries only")
                bindings = run_query(models, unit.atoms[0], request.mode)
                answers.append(
                    QueryAnswer(
                        query=serialize_ulr(unit),
                        bindings=[
                            {k: _render(v) for k, v in b.items()}
                            for b in bindings
                        ],
                    )
                )
        except FactlogError as exc:
            raise _http_error(exc)
        return ReasonResponse(answers=answers, models=len(models))

    @app.post("/sessions", response_model=SessionResponse)
    def open_session(request: SessionRequest):
        if request.mode not in {BRAVE, CAUTIOUS}:
            raise HTTPException(400, f"unknown mode {request.mode!r}")
        session_id = uuid.uuid4().hex[:12]
        app.state.sessions[session_id] = Session(
            app.state.resources,
            mode=request.mode,
            temporal=request.temporal or config.temporal,
        )
        return SessionResponse(session_id=session_id)

    def _session(session_id: str) -> Session:
        session = app.state.sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"no session {session_id!r}")
        return session

    @app.post("/sessions/{session_id}/input", response_model=SessionReply)
    def session_input(session_id: str, request: SessionInput):
        session = _session(session_id)
        try:
            result = session.submit(request.line)
        except NonFactualError as exc:
            detail = "; ".join(
                v.message for v in (exc.verdict.violations if exc.verdict else ())
            )
            return SessionReply(
                kind="rejected",
                message="the sentence is not factual; please rephrase",
                warnings=[detail] if detail else [],
                error=str(exc),
            )
        except FactlogError as exc:
            return SessionReply(kind="error", message=str(exc), error=str(exc))
        return SessionReply(
            kind=result.kind,
            message=result.message,
            units=result.units,
            answers=[{k: str(v) for k, v in a.items()} for a in result.answers],
            warnings=result.warnings,
        )

    @app.get("/sessions/{session_id}/kb", response_model=KbResponse)
    def session_kb(session_id: str):
        return KbResponse(kb=_session(session_id).kb_text())

    @app.delete("/sessions/{session_id}", response_model=HealthResponse)
    def close_session(session_id: str):
        app.state.sessions.pop(session_id, None)
        return HealthResponse()

    return app


def _render(v) -> str:
    if isinstance(v, int):
        return str(v)
    if hasattr(v, "render"):
        return v.render().strip('"')
    return str(v)
