"""Streaming N-Triples ingestion into a knowledge graph.

Input is line-delimited N-Triples (UTF-8, one triple per line, terminated
by '.'). Triples with IRI or blank-node objects become edges. String
literals are routed three ways: objects of the label property become term
labels, objects of a configured literal property (abstracts) are captured
as per-entity texts, and everything else is dropped and counted. Literals
with a language tag are kept only when the tag starts with "en".

Blank nodes are treated as entities with the synthetic IRI ``_:label`` so
graph topology survives.

Label triples do not force their subject's kind: a predicate IRI may carry
an rdfs:label without colliding with its predicate role. Labels are
attached after the full pass, so the result does not depend on line order.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

import numpy as np

from .errors import MalformedLine
from .vocab import TermKind, Vocabulary

_WS = " \t"
_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}
_UNESCAPES = {
    "\\": "\\\\", "\n": "\\n", "\r": "\\r", '"': '\\"', "\t": "\\t",
}


@dataclass
class Literal:
    value: str
    lang: str | None = None
    datatype: str | None = None


@dataclass
class ParseStats:
    triple_lines: int = 0
    edges: int = 0
    captured_literals: int = 0
    dropped_literals: int = 0
    label_triples: int = 0
    malformed_skipped: int = 0

    def conserved(self) -> bool:
        return self.triple_lines == (
            self.edges + self.captured_literals + self.dropped_literals
            + self.label_triples + self.malformed_skipped
        )


@dataclass
class KnowledgeGraph:
    """Directed multigraph over vocabulary ids plus per-entity texts."""

    vocab: Vocabulary
    subjects: np.ndarray
    predicates: np.ndarray
    objects: np.ndarray
    literals: dict[int, list[tuple[str, str, str | None]]] = field(default_factory=dict)

    @property
    def n_edges(self) -> int:
        return int(self.subjects.shape[0])

    def edge_tuples(self) -> list[tuple[int, int, int]]:
        return list(zip(self.subjects.tolist(), self.predicates.tolist(), self.objects.tolist()))


@dataclass
class ParseResult:
    graph: KnowledgeGraph
    vocab: Vocabulary
    stats: ParseStats


class _LineParser:
    """Single-line N-Triples scanner tracking character positions."""

    def __init__(self, line: str, line_no: int):
        self.line = line
        self.line_no = line_no
        self.pos = 0

    def fail(self, reason: str) -> MalformedLine:
        byte_off = len(self.line[: self.pos].encode("utf-8"))
        return MalformedLine(self.line_no, byte_off, reason)

    def skip_ws(self) -> None:
        while self.pos < len(self.line) and self.line[self.pos] in _WS:
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.line)

    def peek(self) -> str:
        return self.line[self.pos] if self.pos < len(self.line) else ""

    def _unescape(self, raw: str, start_pos: int) -> str:
        out: list[str] = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch != "\\":
                out.append(ch)
                i += 1
                continue
            if i + 1 >= len(raw):
                self.pos = start_pos + i
                raise self.fail("dangling escape")
            nxt = raw[i + 1]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
            elif nxt == "u" or nxt == "U":
                width = 4 if nxt == "u" else 8
                hexpart = raw[i + 2 : i + 2 + width]
                if len(hexpart) < width:
                    self.pos = start_pos + i
                    raise self.fail("truncated unicode escape")
                try:
                    out.append(chr(int(hexpart, 16)))
                except ValueError:
                    self.pos = start_pos + i
                    raise self.fail("bad unicode escape") from None
                i += 2 + width
            else:
                self.pos = start_pos + i
                raise self.fail(f"unknown escape \\{nxt}")
        return "".join(out)

    def iri(self) -> str:
        start = self.pos
        if self.peek() != "<":
            raise self.fail("expected '<'")
        end = self.line.find(">", self.pos + 1)
        if end < 0:
            raise self.fail("unterminated IRI")
        raw = self.line[self.pos + 1 : end]
        if any(c in raw for c in ' \t"<'):
            raise self.fail("illegal character in IRI")
        self.pos = end + 1
        return self._unescape(raw, start + 1)

    def blank(self) -> str:
        if not self.line.startswith("_:", self.pos):
            raise self.fail("expected blank node")
        start = self.pos
        self.pos += 2
        while self.pos < len(self.line) and (
            self.line[self.pos].isalnum() or self.line[self.pos] in "_.-"
        ):
            self.pos += 1
        label = self.line[start : self.pos]
        if label == "_:":
            self.pos = start
            raise self.fail("empty blank node label")
        return label

    def literal(self) -> Literal:
        if self.peek() != '"':
            raise self.fail("expected '\"'")
        start = self.pos
        i = self.pos + 1
        while i < len(self.line):
            ch = self.line[i]
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                break
            i += 1
        if i >= len(self.line) or self.line[i] != '"':
            raise self.fail("unterminated literal")
        raw = self.line[self.pos + 1 : i]
        value = self._unescape(raw, start + 1)
        self.pos = i + 1
        lang = None
        datatype = None
        if self.peek() == "@":
            self.pos += 1
            t0 = self.pos
            while self.pos < len(self.line) and (
                self.line[self.pos].isalnum() or self.line[self.pos] == "-"
            ):
                self.pos += 1
            lang = self.line[t0 : self.pos]
            if not lang:
                raise self.fail("empty language tag")
        elif self.line.startswith("^^", self.pos):
            self.pos += 2
            datatype = self.iri()
        return Literal(value, lang, datatype)

    def subject(self) -> str:
        if self.peek() == "<":
            return self.iri()
        if self.line.startswith("_:", self.pos):
            return self.blank()
        raise self.fail("expected IRI or blank node subject")

    def object(self) -> Union[str, Literal]:
        ch = self.peek()
        if ch == "<":
            return self.iri()
        if self.line.startswith("_:", self.pos):
            return self.blank()
        if ch == '"':
            return self.literal()
        raise self.fail("expected IRI, blank node, or literal object")

    def terminator(self) -> None:
        self.skip_ws()
        if self.peek() != ".":
            raise self.fail("expected '.'")
        self.pos += 1
        self.skip_ws()
        if not self.at_end() and self.peek() != "#":
            raise self.fail("trailing garbage after '.'")


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            for raw in fh:
                yield raw.decode("utf-8")
        return
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    for raw in source:
        if isinstance(raw, (bytes, bytearray)):
            yield bytes(raw).decode("utf-8")
        else:
            yield raw


def _lang_ok(lang: str | None) -> bool:
    return lang is None or lang.lower().startswith("en")


def parse_ntriples(
    source: Union[str, Path, bytes, IO[bytes], Iterable[str]],
    literal_properties: set[str] | frozenset[str] = frozenset(),
    label_property: str | None = None,
    lenient: bool = False,
    vocab: Vocabulary | None = None,
) -> ParseResult:
    """Parse N-Triples into a KnowledgeGraph and Vocabulary.

    ``literal_properties`` selects predicates whose English string objects
    are captured as texts; ``label_property`` selects the predicate whose
    objects become term labels. In lenient mode malformed lines are
    skipped and counted instead of raising MalformedLine.

    Pass an existing ``vocab`` to keep previously assigned ids (stage
    restarts re-parse the canonical graph against the saved vocabulary).
    """
    v = vocab if vocab is not None else Vocabulary()
    stats = ParseStats()
    subs: list[int] = []
    preds: list[int] = []
    objs: list[int] = []
    literals: dict[int, list[tuple[str, str, str | None]]] = {}
    pending_labels: dict[str, str] = {}

    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\r\n")
        stripped = line.lstrip(_WS)
        if not stripped or stripped.startswith("#"):
            continue
        stats.triple_lines += 1
        p = _LineParser(line, line_no)
        try:
            p.skip_ws()
            s_term = p.subject()
            p.skip_ws()
            pred_iri = p.iri()
            p.skip_ws()
            o_term = p.object()
            p.terminator()
        except MalformedLine:
            if lenient:
                stats.malformed_skipped += 1
                continue
            raise

        if isinstance(o_term, Literal):
            if pred_iri == label_property and _lang_ok(o_term.lang):
                stats.label_triples += 1
                pending_labels.setdefault(s_term, o_term.value)
            elif pred_iri in literal_properties and _lang_ok(o_term.lang):
                stats.captured_literals += 1
                sid = v.intern(s_term, TermKind.ENTITY)
                literals.setdefault(sid, []).append((pred_iri, o_term.value, o_term.lang))
            else:
                stats.dropped_literals += 1
        else:
            stats.edges += 1
            sid = v.intern(s_term, TermKind.ENTITY)
            pid = v.intern(pred_iri, TermKind.PREDICATE)
            oid = v.intern(o_term, TermKind.ENTITY)
            subs.append(sid)
            preds.append(pid)
            objs.append(oid)

    for term, label in pending_labels.items():
        tid = v.get(term)
        if tid is None:
            tid = v.intern(term, TermKind.ENTITY)
        if v.labels[tid] is None:
            v.set_label(tid, label)

    graph = KnowledgeGraph(
        vocab=v,
        subjects=np.asarray(subs, dtype=np.int64),
        predicates=np.asarray(preds, dtype=np.int64),
        objects=np.asarray(objs, dtype=np.int64),
        literals=literals,
    )
    return ParseResult(graph, v, stats)


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _UNESCAPES:
            out.append(_UNESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _render_term(term: str) -> str:
    return term if term.startswith("_:") else f"<{term}>"


def write_ntriples(
    g: KnowledgeGraph,
    out: IO[str],
    label_property: str | None = None,
) -> None:
    """Serialize edges, captured texts, and labels back to N-Triples.

    Re-parsing the output with the same property configuration rebuilds an
    identical graph (edge multiset, literals, labels).
    """
    v = g.vocab
    for s, p, o in zip(g.subjects.tolist(), g.predicates.tolist(), g.objects.tolist()):
        out.write(f"{_render_term(v.terms[s])} <{v.terms[p]}> {_render_term(v.terms[o])} .\n")
    for sid in sorted(g.literals):
        for prop, text, lang in g.literals[sid]:
            tag = f"@{lang}" if lang else ""
            out.write(
                f'{_render_term(v.terms[sid])} <{prop}> "{_escape_literal(text)}"{tag} .\n'
            )
    if label_property is not None:
        for tid, label in enumerate(v.labels):
            if label is not None:
                out.write(
                    f'{_render_term(v.terms[tid])} <{label_property}> '
                    f'"{_escape_literal(label)}" .\n'
                )


_TSV_ESC = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}


def _tsv_escape(s: str) -> str:
    return "".join(_TSV_ESC.get(c, c) for c in s)


def _tsv_unescape(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        if s[i] == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def write_vocab_tsv(v: Vocabulary, out: IO[str]) -> None:
    """Rows ``id<TAB>kind<TAB>term<TAB>label``, id ascending."""
    for tid in range(len(v)):
        label = v.labels[tid]
        out.write(
            f"{tid}\t{v.kinds[tid].value}\t{_tsv_escape(v.terms[tid])}\t"
            f"{_tsv_escape(label) if label is not None else ''}\n"
        )


def read_vocab_tsv(src: IO[str]) -> Vocabulary:
    v = Vocabulary()
    for row, line in enumerate(src):
        line = line.rstrip("\n")
        if not line:
            continue
        tid_s, kind_s, term, label = line.split("\t", 3)
        if int(tid_s) != row:
            raise ValueError(f"vocabulary ids must be dense and ascending (row {row})")
        tid = v.intern(_tsv_unescape(term), TermKind(kind_s))
        if label:
            v.set_label(tid, _tsv_unescape(label))
    return v
