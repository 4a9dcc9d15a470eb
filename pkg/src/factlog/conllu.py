"""Reader and writer for the k-best CoNLL-U profile.

Standard 10-column CoNLL-U, with per-sentence comments

    # sent_id = <n>
    # text = <raw sentence>
    # parse_rank = <k>
    # parse_confidence = <x>

and a MISC column carrying tagger confidences and ranked alternates:

    UposConf=<x>|XposConf=<x>|UposAlt=<TAG>:<x>[,<TAG>:<x>...]|XposAlt=...|Ner=<tag>

Several blocks sharing one ``sent_id`` with distinct ``parse_rank`` values
form the ranked alternatives of a single sentence.  Confidence annotations
are optional; absent ones default to 1.0 with no alternates, which
disables downstream tag correction.  Multiword token ranges (``1-2``) and
empty nodes (``1.1``) are rejected: the factual fragment has no use for
them and silently skipping them would shift role indices.
"""

from __future__ import annotations

import io

from .errors import ConlluError
from .graph import ParseAlternatives, ParseGraph, TokenNode

_COLUMNS = 10


def _parse_float(value: str, what: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConlluError(f"bad {what} {value!r}", line) from None


def _parse_alts(value: str, line: int) -> tuple[tuple[str, float], ...]:
    alts = []
    for part in value.split(","):
        if not part:
            continue
        tag, _, conf = part.partition(":")
        if not conf:
            raise ConlluError(f"bad alternate {part!r}, expected TAG:conf", line)
        alts.append((tag, _parse_float(conf, "alternate confidence", line)))
    return tuple(alts)


def _parse_misc(misc: str, line: int) -> dict:
    out = {
        "upos_confidence": 1.0,
        "xpos_confidence": 1.0,
        "upos_alts": (),
        "xpos_alts": (),
        "ner": "o",
    }
    if misc in {"", "_"}:
        return out
    for item in misc.split("|"):
        key, _, value = item.partition("=")
        if key == "UposConf":
            out["upos_confidence"] = _parse_float(value, "UposConf", line)
        elif key == "XposConf":
            out["xpos_confidence"] = _parse_float(value, "XposConf", line)
        elif key == "UposAlt":
            out["upos_alts"] = _parse_alts(value, line)
        elif key == "XposAlt":
            out["xpos_alts"] = _parse_alts(value, line)
        elif key == "Ner":
            out["ner"] = value
        # other MISC annotations pass through unused
    return out


class _Block:
    def __init__(self):
        self.comments: dict[str, str] = {}
        self.rows: list[tuple[int, list[str]]] = []  # (line number, columns)
        self.first_line = 0


def _iter_blocks(stream):
    block = _Block()
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if block.rows or block.comments:
                yield block
                block = _Block()
            continue
        if line.startswith("#"):
            if block.rows:
                # a new comment header right after token rows opens a new block
                yield block
                block = _Block()
            key, sep, value = line[1:].partition("=")
            if sep:
                block.comments[key.strip()] = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) == 1 and "  " in line:
            # be forgiving about space-separated hand-written fixtures
            cols = [c for c in line.split() if c]
        if len(cols) != _COLUMNS:
            raise ConlluError(
                f"expected {_COLUMNS} tab-separated columns, got {len(cols)}",
                line_no,
            )
        if not block.rows:
            block.first_line = line_no
        block.rows.append((line_no, cols))
    if block.rows or block.comments:
        yield block


def _block_to_graph(block: _Block) -> tuple[int, int, str, ParseGraph]:
    comments = block.comments
    if "sent_id" not in comments:
        raise ConlluError("block is missing '# sent_id ='", block.first_line)
    try:
        sent_id = int(comments["sent_id"])
    except ValueError:
        raise ConlluError(
            f"sent_id must be an integer, got {comments['sent_id']!r}",
            block.first_line,
        ) from None
    rank = int(comments.get("parse_rank", "1"))
    confidence = float(comments.get("parse_confidence", "1.0"))
    text = comments.get("text", "")

    tokens = []
    for line_no, cols in block.rows:
        tok_id, form, lemma, upos, xpos, _feats, head, deprel, _deps, misc = cols
        if "-" in tok_id:
            raise ConlluError(f"multiword token range {tok_id!r} not supported", line_no)
        if "." in tok_id:
            raise ConlluError(f"empty node {tok_id!r} not supported", line_no)
        try:
            tid = int(tok_id)
        except ValueError:
            raise ConlluError(f"bad token id {tok_id!r}", line_no) from None
        if head == "_":
            raise ConlluError(f"token {tid} has no head", line_no)
        try:
            hid = int(head)
        except ValueError:
            raise ConlluError(f"bad head {head!r}", line_no) from None
        if hid == tid:
            raise ConlluError(f"token {tid} is its own head", line_no)
        misc_info = _parse_misc(misc, line_no)
        tokens.append(
            TokenNode(
                token_id=tid,
                surface=form,
                lemma=lemma if lemma != "_" else form.lower(),
                upos=upos,
                xpos=xpos if xpos != "_" else upos,
                head=hid,
                deprel=deprel,
                **misc_info,
            )
        )
    if [t.token_id for t in tokens] != list(range(1, len(tokens) + 1)):
        raise ConlluError("token ids must be 1..n in order", block.first_line)
    graph = ParseGraph(
        sentence_id=sent_id,
        parse_id=rank,
        tokens=tuple(tokens),
        parse_confidence=confidence,
        text=text,
    )
    return sent_id, rank, text, graph


def ingest_conllu(source) -> list[ParseAlternatives]:
    """Read a k-best CoNLL-U stream into per-sentence ranked alternatives.

    *source* is a text stream or a string.  Sentence order follows first
    appearance; parses of one sentence are ordered by rank.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    per_sentence: dict[int, list[tuple[int, str, ParseGraph]]] = {}
    order: list[int] = []
    for block in _iter_blocks(source):
        sent_id, rank, text, graph = _block_to_graph(block)
        if sent_id not in per_sentence:
            per_sentence[sent_id] = []
            order.append(sent_id)
        per_sentence[sent_id].append((rank, text, graph))
    out = []
    for sent_id in order:
        entries = sorted(per_sentence[sent_id], key=lambda e: e[0])
        text = next((t for _, t, _ in entries if t), "")
        out.append(
            ParseAlternatives(
                sentence_id=sent_id,
                text=text,
                parses=tuple(g for _, _, g in entries),
            )
        )
    return out


def _format_alts(alts) -> str:
    return ",".join(f"{tag}:{conf:g}" for tag, conf in alts)


def _format_misc(t: TokenNode) -> str:
    parts = []
    if t.upos_confidence != 1.0:
        parts.append(f"UposConf={t.upos_confidence:g}")
    if t.xpos_confidence != 1.0:
        parts.append(f"XposConf={t.xpos_confidence:g}")
    if t.upos_alts:
        parts.append(f"UposAlt={_format_alts(t.upos_alts)}")
    if t.xpos_alts:
        parts.append(f"XposAlt={_format_alts(t.xpos_alts)}")
    if t.ner != "o":
        parts.append(f"Ner={t.ner}")
    return "|".join(parts) or "_"


def serialize_graph(graph: ParseGraph, text: str = "") -> str:
    """One CoNLL-U block for *graph*; overlay edges go to the DEPS column."""
    lines = [
        f"# sent_id = {graph.sentence_id}",
        f"# text = {text or graph.text}",
        f"# parse_rank = {graph.parse_id}",
        f"# parse_confidence = {graph.parse_confidence:g}",
    ]
    for step in graph.provenance:
        lines.append(f"# provenance = {step}")
    for g in graph.groups:
        members = ",".join(str(m) for m in g.members)
        lines.append(f"# coordination = {g.connective}: {members}")
    extra_by_dep: dict[int, list] = {}
    for e in graph.extra_edges:
        extra_by_dep.setdefault(e.dep, []).append(e)
    for t in graph.tokens:
        deps = extra_by_dep.get(t.token_id, [])
        deps_col = "|".join(f"{e.head}:{e.label}" for e in deps) or "_"
        misc = _format_misc(t)
        if t.token_id in graph.inert:
            misc = f"{misc}|Inert=Yes" if misc != "_" else "Inert=Yes"
        lines.append(
            "\t".join(
                [
                    str(t.token_id),
                    t.surface,
                    t.lemma,
                    t.upos,
                    t.xpos,
                    "_",
                    str(t.head),
                    t.deprel,
                    deps_col,
                    misc,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def serialize_corpus(corpus) -> str:
    blocks = []
    for alts in corpus:
        for graph in alts.parses:
            blocks.append(serialize_graph(graph, alts.text))
    return "\n".join(blocks)
