"""Embedding and definition providers with file-backed fixture versions.

Three provider contracts feed the embedding-based scorers:

  - relation embeddings: (role, word) -> vector
  - sentence embeddings: text -> vector
  - in-context definitions: (sentence, word) -> one-line definition

Fixture providers are keyed lookup tables loaded from files, making runs
bit-exact and offline.  Live network providers can be dropped in behind
the same contracts; the definition request they send is the shipped
prompt template with ``{SENTENCE}``/``{WORD}`` substituted verbatim.

Embedding file: one ``<key> <float> ...`` per line, keys either
``rel:<role>|<word>`` or ``snt:<text hash>``.  Definition file: tab-separated
``<sentence hash> <word> <definition>`` lines.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from .errors import ConfigError, ConlluError, ProviderError


def text_hash(text: str) -> str:
    """Stable 16-hex-digit key for a sentence or definition text."""
    return hashlib.sha256(text.strip().encode("utf-8")).hexdigest()[:16]


class RelationEmbeddingProvider(Protocol):
    def embed(self, role: str, word: str) -> np.ndarray: ...


class SentenceEmbeddingProvider(Protocol):
    def embed_text(self, text: str) -> np.ndarray: ...


class DefinitionProvider(Protocol):
    def define(self, sentence: str, word: str) -> str: ...


def load_embeddings(text: str) -> dict[str, np.ndarray]:
    """One file may serve several providers; dimensions must agree per
    key namespace (``rel:`` vs ``snt:``), not across them."""
    table: dict[str, np.ndarray] = {}
    dims: dict[str, int] = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        key, *floats = line.split()
        if not floats:
            raise ConlluError(f"embedding line has no values: {line!r}", i)
        vec = np.array([float(x) for x in floats], dtype=float)
        if not np.all(np.isfinite(vec)):
            raise ConlluError(f"non-finite embedding for {key!r}", i)
        namespace = key.split(":", 1)[0]
        if namespace not in dims:
            dims[namespace] = vec.shape[0]
        elif vec.shape[0] != dims[namespace]:
            raise ConlluError(
                f"embedding for {key!r} has dimension {vec.shape[0]}, "
                f"expected {dims[namespace]}", i,
            )
        table[key] = vec
    return table


def load_definitions(text: str) -> dict[tuple[str, str], str]:
    table = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("%"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ConlluError(
                "definition line must be <hash>\\t<word>\\t<definition>", i
            )
        table[(parts[0], parts[1])] = parts[2]
    return table


class FixtureRelationProvider:
    """File-backed relation embeddings; counts facade calls for auditing."""

    def __init__(self, table: dict[str, np.ndarray]):
        self.table = table
        self.calls = 0

    @classmethod
    def from_text(cls, text: str) -> "FixtureRelationProvider":
        return cls(load_embeddings(text))

    def embed(self, role: str, word: str) -> np.ndarray:
        self.calls += 1
        key = f"rel:{role}|{word}"
        if key not in self.table:
            raise ProviderError(f"no relation embedding for {key!r}")
        return self.table[key]


class FixtureSentenceProvider:
    def __init__(self, table: dict[str, np.ndarray]):
        self.table = table
        self.calls = 0

    @classmethod
    def from_text(cls, text: str) -> "FixtureSentenceProvider":
        return cls(load_embeddings(text))

    def embed_text(self, text: str) -> np.ndarray:
        self.calls += 1
        key = f"snt:{text_hash(text)}"
        if key not in self.table:
            raise ProviderError(f"no sentence embedding for {text!r} ({key})")
        return self.table[key]


class FixtureDefinitionProvider:
    def __init__(self, table: dict[tuple[str, str], str]):
        self.table = table
        self.calls = 0

    @classmethod
    def from_text(cls, text: str) -> "FixtureDefinitionProvider":
        return cls(load_definitions(text))

    def define(self, sentence: str, word: str) -> str:
        self.calls += 1
        key = (text_hash(sentence), word)
        if key not in self.table:
            raise ProviderError(
                f"no fixture definition for {word!r} in {sentence!r}"
            )
        definition = self.table[key].strip()
        if not definition:
            raise ProviderError(f"provider returned an empty definition for {key}")
        return definition


def render_definition_prompt(template: str, sentence: str, word: str) -> str:
    """Instantiate the definition-generation prompt template verbatim."""
    if "{SENTENCE}" not in template or "{WORD}" not in template:
        raise ConfigError("prompt template lacks {SENTENCE}/{WORD} placeholders")
    return template.replace("{SENTENCE}", sentence).replace("{WORD}", word)


class PromptDefinitionProvider:
    """Definition provider calling an arbitrary text-completion function.

    ``complete`` receives the fully rendered prompt and returns the raw
    completion; a live HTTP client can be plugged in here without
    touching the scorers.
    """

    def __init__(self, template: str, complete):
        self.template = template
        self.complete = complete
        self.calls = 0

    def define(self, sentence: str, word: str) -> str:
        self.calls += 1
        prompt = render_definition_prompt(self.template, sentence, word)
        try:
            definition = self.complete(prompt)
        except Exception as exc:  # transport failure of the callable
            raise ProviderError(f"definition provider failed: {exc}") from exc
        definition = (definition or "").strip().splitlines()
        if not definition or not definition[0].strip():
            raise ProviderError("definition provider returned an empty definition")
        return definition[0].strip()
