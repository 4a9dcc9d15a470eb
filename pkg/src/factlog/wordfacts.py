"""Logic-fact serialization of dependency parses.

Each token of a parse becomes one ``word/9`` record::

    word(index(S,T,P), lemma,
         [edge(index(S,N),label), ...],   % all edges at the token
         edge(index(S,H),label),          % the single incoming edge
         upos, xpos,
         index(S,R),                      % index of the sentence root
         ner, validation).

Inside the edge list an incoming edge is written with its label string
reversed (``jbusn`` for an incoming ``nsubj``), so a record is
self-contained without a direction flag.  Reconstruction uses the
incoming-edge field, which keeps the reversed convention a pure
serialization detail.
"""

from __future__ import annotations

from . import terms
from .errors import RuleSyntaxError
from .graph import ROOT, ParseGraph, TokenNode


def _atom(text: str):
    return terms.Atom(text.lower()) if text else terms.Atom("o")


def _edge_term(sentence_id: int, neighbor: int, label: str):
    return terms.Compound(
        "edge",
        (
            terms.Compound("index", (terms.Num(sentence_id), terms.Num(neighbor))),
            terms.Atom(label),
        ),
    )


def emit_word_facts(graph: ParseGraph) -> str:
    """All tokens of *graph* as word/9 records, one per line."""
    s = graph.sentence_id
    root_id = graph.root.token_id
    lines = []
    for t in graph.tokens:
        outgoing = sorted(
            (c.token_id, c.deprel) for c in graph.primary_children(t.token_id)
        )
        edge_list = [_edge_term(s, n, label) for n, label in outgoing]
        if t.head != ROOT:
            edge_list.append(_edge_term(s, t.head, t.deprel[::-1]))
        incoming = _edge_term(s, t.head, t.deprel)
        record = terms.Compound(
            "word",
            (
                terms.Compound(
                    "index",
                    (terms.Num(s), terms.Num(t.token_id), terms.Num(graph.parse_id)),
                ),
                _atom(t.lemma),
                terms.List_(tuple(edge_list)),
                incoming,
                _atom(t.upos),
                _atom(t.xpos),
                terms.Compound("index", (terms.Num(s), terms.Num(root_id))),
                _atom(t.ner),
                terms.Atom(t.validation),
            ),
        )
        lines.append(terms.format_term(record) + ".")
    return "\n".join(lines) + "\n"


def parse_word_facts(text: str) -> ParseGraph:
    """Rebuild a parse from word/9 records (the emit round-trip)."""
    tokens = []
    sentence_id = None
    parse_id = 1
    for line_no, stmt in terms.iter_statements(text):
        record = terms.parse_term(stmt)
        record = terms.expect_compound(record, "word", 9)
        idx = terms.expect_compound(record.args[0], "index", 3)
        s, tid, pid = (a.value for a in idx.args)
        if sentence_id is None:
            sentence_id = s
            parse_id = pid
        elif s != sentence_id:
            raise RuleSyntaxError(
                f"line {line_no}: mixed sentence ids {sentence_id} and {s}"
            )
        incoming = terms.expect_compound(record.args[3], "edge", 2)
        head = terms.expect_compound(incoming.args[0], "index", 2).args[1].value
        deprel = terms.text_of(incoming.args[1])
        lemma = terms.text_of(record.args[1])
        tokens.append(
            TokenNode(
                token_id=tid,
                surface=lemma,
                lemma=lemma,
                upos=terms.text_of(record.args[4]).upper(),
                xpos=terms.text_of(record.args[5]).upper(),
                head=head,
                deprel=deprel,
                ner=terms.text_of(record.args[7]),
                validation=terms.text_of(record.args[8]),
            )
        )
    if sentence_id is None:
        raise RuleSyntaxError("no word/9 records found")
    tokens.sort(key=lambda t: t.token_id)
    return ParseGraph(
        sentence_id=sentence_id, parse_id=parse_id, tokens=tuple(tokens)
    )
