"""Candidate-parse ranking: per-role scores aggregated by geometric mean.

Three interchangeable role scorers:

  - ``lexical``: shortest-path scoring over the sense graph; also yields
    the best filler sense per role.
  - ``rbd`` (relation-embedding disambiguation): cosine similarity of the
    (role, filler) relation embedding against the embeddings of the
    role's curated training fillers; word senses are then fetched as
    textual definitions for the winning parse only.
  - ``sbd`` (sentence-embedding disambiguation): an in-context definition
    is generated for every filler first, then compared against the
    role's curated definition sentences.

A candidate parse scores as the m-th root of the product of its m role
scores, so the winner is invariant under role permutation and under
uniform scaling of the underlying scores.  Scorers memoize per
(role, filler) so a provider is consulted exactly once per distinct pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, UnknownWordError
from .lexgraph import DEFAULT_DEPTH_CAP, LexicalGraph, score_role_lexical
from .lvp import CandidateParse, LvpStore

ZERO_SCORE_EPSILON = 1e-6


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ConfigError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ConfigError("cosine similarity of a zero vector is undefined")
    return float(np.dot(a, b) / (na * nb))


@dataclass
class RoleLexicon:
    """Per-role inputs of the scorers: senses, training fillers, definitions."""

    senses: dict = field(default_factory=dict)
    fillers: dict = field(default_factory=dict)
    definitions: dict = field(default_factory=dict)

    @classmethod
    def from_sources(cls, registry=None, store: LvpStore | None = None):
        lex = cls()
        if registry is not None:
            lex.senses = dict(registry.role_senses)
            lex.definitions = dict(registry.role_definitions)
        if store is not None:
            lex.fillers = {r: list(fs) for r, fs in store.role_fillers.items()}
        return lex


@dataclass(frozen=True)
class RoleScore:
    value: float | None  # None: the scorer cannot judge this binding
    sense: str | None = None  # sense id, or "def:<text>", or None


class LexicalScorer:
    name = "lexical"

    def __init__(self, graph: LexicalGraph, lexicon: RoleLexicon,
                 depth_cap: int = DEFAULT_DEPTH_CAP):
        self.graph = graph
        self.lexicon = lexicon
        self.depth_cap = depth_cap
        self._cache: dict = {}

    def score_role(self, role: str, filler: str, sentence: str = "") -> RoleScore:
        key = (role, filler)
        if key not in self._cache:
            try:
                value, sense = score_role_lexical(
                    self.graph, role, filler, self.lexicon.senses,
                    self.depth_cap,
                )
                self._cache[key] = RoleScore(value, sense)
            except UnknownWordError:
                # the lexicon cannot judge an uncovered role or filler;
                # the binding is neutral for ranking (a *known* pair with
                # no connecting path still scores 0 -> epsilon)
                self._cache[key] = RoleScore(None, None)
        return self._cache[key]

    def finalize(self, best: CandidateParse, sentence: str) -> CandidateParse:
        return best


def score_role_relbert(role, filler, lexicon: RoleLexicon, provider) -> float:
    """Best similarity of (role, filler) against the role's training fillers."""
    training = lexicon.fillers.get(role) or []
    if not training:
        raise ConfigError(f"role {role!r} has no training role-fillers")
    target = provider.embed(role, filler)
    return max(
        cosine_similarity(target, provider.embed(role, ideal)) for ideal in training
    )


class RelationEmbeddingScorer:
    name = "rbd"

    def __init__(self, lexicon: RoleLexicon, rel_provider, def_provider=None):
        self.lexicon = lexicon
        self.rel_provider = rel_provider
        self.def_provider = def_provider
        self._emb_cache: dict = {}
        self._cache: dict = {}

    def _embed(self, role: str, word: str):
        key = (role, word)
        if key not in self._emb_cache:
            self._emb_cache[key] = self.rel_provider.embed(role, word)
        return self._emb_cache[key]

    def score_role(self, role: str, filler: str, sentence: str = "") -> RoleScore:
        key = (role, filler)
        if key not in self._cache:
            training = self.lexicon.fillers.get(role) or []
            if not training:
                raise ConfigError(f"role {role!r} has no training role-fillers")
            target = self._embed(role, filler)
            value = max(
                cosine_similarity(target, self._embed(role, ideal))
                for ideal in training
            )
            self._cache[key] = RoleScore(value, None)
        return self._cache[key]

    def finalize(self, best: CandidateParse, sentence: str) -> CandidateParse:
        """Word senses are resolved only for the likeliest parse: each of
        its fillers gets an in-context definition."""
        if self.def_provider is None:
            return best
        senses = tuple(
            (role, "def:" + self.def_provider.define(sentence, lemma))
            for role, _tok, lemma in best.bindings
        )
        return replace(best, senses=senses)


def score_role_sbert(role, filler, sentence, lexicon: RoleLexicon,
                     def_provider, emb_provider) -> tuple[float, str]:
    """Similarity of the filler's generated definition to the role's
    curated definition sentences; returns the definition as the sense."""
    defs = lexicon.definitions.get(role) or ()
    if not defs:
        raise ConfigError(f"role {role!r} has no definition sentences")
    generated = def_provider.define(sentence, filler)
    target = emb_provider.embed_text(generated)
    value = max(
        cosine_similarity(emb_provider.embed_text(d), target) for d in defs
    )
    return value, generated


class SentenceEmbeddingScorer:
    name = "sbd"

    def __init__(self, lexicon: RoleLexicon, def_provider, snt_provider):
        self.lexicon = lexicon
        self.def_provider = def_provider
        self.snt_provider = snt_provider
        self._def_cache: dict = {}
        self._emb_cache: dict = {}
        self._cache: dict = {}

    def _define(self, sentence: str, word: str) -> str:
        key = (sentence, word)
        if key not in self._def_cache:
            self._def_cache[key] = self.def_provider.define(sentence, word)
        return self._def_cache[key]

    def _embed(self, text: str):
        if text not in self._emb_cache:
            self._emb_cache[text] = self.snt_provider.embed_text(text)
        return self._emb_cache[text]

    def score_role(self, role: str, filler: str, sentence: str = "") -> RoleScore:
        key = (role, filler, sentence)
        if key not in self._cache:
            defs = self.lexicon.definitions.get(role) or ()
            if not defs:
                raise ConfigError(f"role {role!r} has no definition sentences")
            generated = self._define(sentence, filler)
            target = self._embed(generated)
            value = max(
                cosine_similarity(self._embed(d), target) for d in defs
            )
            self._cache[key] = RoleScore(value, "def:" + generated)
        return self._cache[key]

    def finalize(self, best: CandidateParse, sentence: str) -> CandidateParse:
        return best


def geometric_mean(scores) -> float:
    scores = list(scores)
    if not scores:
        raise ConfigError("geometric mean of zero role scores is undefined")
    adjusted = [max(s, ZERO_SCORE_EPSILON) for s in scores]
    product = 1.0
    for s in adjusted:
        product *= s
    return product ** (1.0 / len(adjusted))


_WH_LEMMAS = {"who", "what", "where", "when", "which", "how"}


def _scorable(lemma: str) -> bool:
    """Variables (explicitly typed or interrogative) carry no lexical
    content to score; they are neutral for ranking."""
    return not lemma.startswith("$") and lemma not in _WH_LEMMAS


def score_parse(candidate: CandidateParse, scorer, sentence: str = "") -> float:
    """Geometric mean of the candidate's role scores.

    A zero role score (a known pair with no path) is lifted to a small
    epsilon so it degrades the parse instead of annihilating it; variable
    fillers and bindings the scorer cannot judge are excluded.  A
    candidate with nothing scorable is neutral (1.0).
    """
    scores = [
        scorer.score_role(role, lemma, sentence).value
        for role, _tok, lemma in candidate.bindings
        if _scorable(lemma)
    ]
    scores = [s for s in scores if s is not None]
    if not scores:
        return 1.0
    return geometric_mean(scores)


def disambiguate(
    candidates, scorer, sentence: str = ""
) -> tuple[CandidateParse, tuple[tuple[str, str], ...]]:
    """Pick the likeliest candidate parse and its per-filler senses.

    Ties break toward the candidate binding more roles (the fuller
    extraction), then the lower source parse id, then the
    lexicographically smaller frame name.  The returned candidate carries
    its score and, depending on the scorer, a sense or definition per
    role.
    """
    candidates = list(candidates)
    if not candidates:
        raise ConfigError("no candidate parses to disambiguate")
    ranked = []
    for c in candidates:
        ranked.append((score_parse(c, scorer, sentence), c))
    best_score = max(s for s, _ in ranked)
    contenders = [
        c for s, c in ranked if s >= best_score - abs(best_score) * 1e-9
    ]
    best = min(
        contenders,
        key=lambda c: (-len(c.bindings), c.source_parse_id, c.frame),
    )
    senses = tuple(
        (role, sense)
        for role, _tok, lemma in best.bindings
        for sense in [scorer.score_role(role, lemma, sentence).sense]
        if sense is not None
    )
    best = replace(best, score=best_score, senses=senses or best.senses)
    best = scorer.finalize(best, sentence)
    return best, best.senses
