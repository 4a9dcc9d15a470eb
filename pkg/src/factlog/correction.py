"""Tag-error detection/correction and the ranked re-parse loop.

Taggers of the upstream parser occasionally assign a wrong POS tag with
low confidence, which then derails the dependency parse.  When a parse
fails factual validation, a fixed branch table re-tags suspicious tokens
(confidence below a threshold, second-best tag of a known confusion
pair), and the parser is asked to re-parse under those tag constraints.
The ranked re-parses are scanned for the first one that validates; if
none does, the sentence is reported as non-factual so the caller can ask
the user to rephrase.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Protocol

from .conllu import ingest_conllu
from .errors import NonFactualError, ProviderError
from .graph import ACCEPTED, ParseAlternatives, ParseGraph
from .validation import Verdict, validate

CONFIDENCE_THRESHOLD = 0.9

# (current tag, second-best tag) -> xpos candidates, per branch
_UPOS_BRANCHES = {
    ("NOUN", "VERB"): ("VERB", ("VBP", "VBZ", "VBD")),
    ("VERB", "AUX"): ("AUX", ("VBP", "VBZ", "VBD")),
    ("PRON", "DET"): ("DET", ("WDT", "PDT", "DT")),
    ("SCONJ", "ADV"): ("ADV", ("WRB", "IN")),
}
_XPOS_BRANCHES = {
    ("VBD", "VBN"): "VBN",
    ("VBN", "VBD"): "VBD",
    ("VBP", "VB"): "VB",
}


@dataclass(frozen=True)
class TagCorrection:
    token: int
    old_upos: str
    new_upos: str
    old_xpos: str
    new_xpos: str
    reason: str

    def __post_init__(self):
        if self.old_upos == self.new_upos and self.old_xpos == self.new_xpos:
            raise ValueError("a correction must change at least one tag")


class ParserProvider(Protocol):
    """Produces ranked parses, honoring exact tag constraints."""

    def parse(
        self,
        text: str,
        tag_constraints: dict[int, tuple[str, str]] | None = None,
        k: int = 5,
    ) -> ParseAlternatives: ...


def _pick_xpos(token, allowed) -> tuple[str, bool]:
    """Best-confidence member of *allowed* among the token's alternates.

    Falls back to the first member when the alternates do not cover the
    set, flagging the choice as low-confidence.
    """
    ranked = [tag for tag, _ in token.xpos_alts if tag in allowed]
    if token.xpos in allowed:
        # the current tag competes with the alternates at its own confidence
        pool = sorted(
            [(token.xpos, token.xpos_confidence)]
            + [(t, c) for t, c in token.xpos_alts if t in allowed],
            key=lambda tc: -tc[1],
        )
        return pool[0][0], True
    if ranked:
        return ranked[0], True
    return allowed[0], False


def correct_tags(
    p: ParseGraph, threshold: float = CONFIDENCE_THRESHOLD
) -> list[TagCorrection]:
    """Apply the correction branch table to every token of *p*.

    At most one correction per token; tokens with confident tags or
    outside the known confusion pairs are left alone.
    """
    corrections = []
    for t in p.tokens:
        second_upos = t.upos_alts[0][0] if t.upos_alts else None
        second_xpos = t.xpos_alts[0][0] if t.xpos_alts else None
        if t.upos_confidence < threshold:
            branch = _UPOS_BRANCHES.get((t.upos, second_upos))
            if branch is None:
                continue
            new_upos, xpos_set = branch
            new_xpos, confident = _pick_xpos(t, xpos_set)
            reason = f"upos {t.upos}->{new_upos}"
            if not confident:
                reason += " (xpos fallback)"
            corrections.append(
                TagCorrection(t.token_id, t.upos, new_upos, t.xpos, new_xpos, reason)
            )
        elif t.xpos_confidence < threshold:
            new_xpos = _XPOS_BRANCHES.get((t.xpos, second_xpos))
            if new_xpos is None:
                continue
            corrections.append(
                TagCorrection(
                    t.token_id, t.upos, t.upos, t.xpos, new_xpos,
                    f"xpos {t.xpos}->{new_xpos}",
                )
            )
    return corrections


def apply_corrections(p: ParseGraph, corrections) -> ParseGraph:
    """Retag *p* in place of the parser echo; corrected tags become certain."""
    for c in corrections:
        t = p.token(c.token)
        p = p.replace_token(
            replace(
                t,
                upos=c.new_upos,
                xpos=c.new_xpos,
                upos_confidence=1.0,
                xpos_confidence=1.0,
                upos_alts=(),
                xpos_alts=(),
            )
        )
    return p


def _check_echo(alts: ParseAlternatives, constraints) -> None:
    for graph in alts.parses:
        for tid, (upos, xpos) in constraints.items():
            t = graph.token(tid)
            if t.upos != upos or t.xpos != xpos:
                raise ProviderError(
                    f"provider did not honor tag constraint {tid}={upos}/{xpos} "
                    f"(got {t.upos}/{t.xpos})"
                )


def reparse_loop(
    text: str,
    p0: ParseGraph,
    provider: ParserProvider | None,
    k: int = 5,
    threshold: float = CONFIDENCE_THRESHOLD,
) -> ParseGraph:
    """Return the first factual parse of *text*, re-parsing if needed.

    Raises :class:`NonFactualError` carrying the best verdict seen when no
    parse validates; the provider is only consulted when corrections fire.
    """
    verdict = validate(p0)
    if verdict.accepted:
        return p0.with_validation(ACCEPTED)
    corrections = correct_tags(p0, threshold)
    best: Verdict = verdict
    if corrections and provider is not None:
        constraints = {c.token: (c.new_upos, c.new_xpos) for c in corrections}
        alts = provider.parse(text, constraints, k)
        _check_echo(alts, constraints)
        for graph in alts.parses:
            v = validate(graph)
            if v.accepted:
                return graph.with_validation(ACCEPTED)
            if len(v.violations) < len(best.violations):
                best = v
    raise NonFactualError(
        f"no factual parse found for {text!r}; please rephrase", verdict=best
    )


class FixtureParserProvider:
    """Parser provider backed by pre-parsed CoNLL-U material.

    Looks sentences up by their raw text.  A corrected re-parse is served
    by whichever stored alternative set matches the requested tag
    constraints, which lets one fixture file carry both the original and
    the re-parsed versions of a sentence under distinct sent_ids.
    """

    def __init__(self, corpus=()):
        self._by_text: dict[str, list[ParseAlternatives]] = {}
        for alts in corpus:
            self.add(alts)

    @classmethod
    def from_dir(cls, path) -> "FixtureParserProvider":
        provider = cls()
        for file in sorted(Path(path).glob("*.conllu")):
            for alts in ingest_conllu(file.read_text(encoding="utf-8")):
                provider.add(alts)
        return provider

    def add(self, alts: ParseAlternatives) -> None:
        self._by_text.setdefault(alts.text, []).append(alts)

    def _satisfies(self, alts: ParseAlternatives, constraints) -> bool:
        for graph in alts.parses:
            for tid, (upos, xpos) in constraints.items():
                try:
                    t = graph.token(tid)
                except Exception:
                    return False
                if t.upos != upos or t.xpos != xpos:
                    return False
        return True

    def parse(self, text, tag_constraints=None, k=5) -> ParseAlternatives:
        entries = self._by_text.get(text.strip())
        if not entries:
            raise ProviderError(f"no fixture parse for {text!r}")
        if tag_constraints:
            for alts in entries:
                if self._satisfies(alts, tag_constraints):
                    return alts
            raise ProviderError(
                f"no fixture parse for {text!r} matching tag constraints"
            )
        return entries[0]


class StdioParserProvider:
    """Client of the line-oriented parser protocol over a child process.

    Request framing: one line of sentence text, zero or more
    ``TAGS <tok_id>=<UPOS>/<XPOS>`` lines, and a terminating ``K <k>``
    line.  The response is a k-best CoNLL-U stream closed by ``EOR``;
    errors arrive as a single ``ERR <message>`` line.
    """

    def __init__(self, command: list[str]):
        self.command = command
        self._proc: subprocess.Popen | None = None

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    bufsize=1,
                )
            except OSError as exc:
                raise ProviderError(f"cannot start parser {self.command}: {exc}")
        return self._proc

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=10)
        self._proc = None

    def parse(self, text, tag_constraints=None, k=5) -> ParseAlternatives:
        if "\n" in text.strip():
            raise ProviderError("one sentence per request")
        proc = self._ensure()
        try:
            proc.stdin.write(text.strip() + "\n")
            for tid, (upos, xpos) in sorted((tag_constraints or {}).items()):
                proc.stdin.write(f"TAGS {tid}={upos}/{xpos}\n")
            proc.stdin.write(f"K {k}\n")
            proc.stdin.flush()
            lines = []
            while True:
                line = proc.stdout.readline()
                if not line:
                    raise ProviderError("parser closed the stream mid-response")
                if line.startswith("ERR "):
                    raise ProviderError(line[4:].strip())
                if line.strip() == "EOR":
                    break
                lines.append(line)
        except BrokenPipeError as exc:
            raise ProviderError(f"parser transport failed: {exc}")
        corpus = ingest_conllu("".join(lines))
        if len(corpus) != 1:
            raise ProviderError(f"expected one sentence, got {len(corpus)}")
        return corpus[0]
