"""Request/response models of the authoring service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class ViolationModel(BaseModel):
    property_id: int
    token: int | None
    message: str
    rendered: str


class SentenceVerdict(BaseModel):
    sentence_id: int
    status: str
    violations: list[ViolationModel] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    conllu: str


class ValidateResponse(BaseModel):
    sentences: list[SentenceVerdict]
    accepted: bool


class WordFactsRequest(BaseModel):
    conllu: str


class WordFactsResponse(BaseModel):
    records: str


class NormalizeRequest(BaseModel):
    conllu: str


class NormalizeResponse(BaseModel):
    conllu: str


class LearnRequest(BaseModel):
    training: str
    conllu: str
    frames: str | None = None


class LearnResponse(BaseModel):
    lvp: str
    learned: int


class ParseRequest(BaseModel):
    sentences: list[str]
    conllu: str | None = None  # fixture parses when no live parser is wired


class ParseResponse(BaseModel):
    ulr: str
    diagnostics: list[str] = Field(default_factory=list)


class ReasonRequest(BaseModel):
    kb: str
    queries: str
    mode: str = "brave"


class QueryAnswer(BaseModel):
    query: str
    bindings: list[dict[str, str]]


class ReasonResponse(BaseModel):
    answers: list[QueryAnswer]
    models: int


class SessionRequest(BaseModel):
    temporal: bool = False
    mode: str = "brave"


class SessionResponse(BaseModel):
    session_id: str


class SessionInput(BaseModel):
    line: str


class SessionReply(BaseModel):
    kind: str
    message: str
    units: list[str] = Field(default_factory=list)
    answers: list[dict[str, str]] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    error: str | None = None


class KbResponse(BaseModel):
    kb: str
