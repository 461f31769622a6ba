import io

import pytest

from litkg import (
    MalformedLine,
    TermKind,
    parse_ntriples,
    read_vocab_tsv,
    write_ntriples,
    write_vocab_tsv,
)

ABSTRACT = "http://x/abstract"
LABEL = "http://www.w3.org/2000/01/rdf-schema#label"


def parse(text, **kwargs):
    kwargs.setdefault("literal_properties", frozenset({ABSTRACT}))
    kwargs.setdefault("label_property", LABEL)
    return parse_ntriples(text.encode("utf-8"), **kwargs)


def test_single_edge_triple():
    r = parse("<http://x/a> <http://x/p> <http://x/b> .\n")
    v = r.vocab
    assert len(v.ids_of_kind(TermKind.ENTITY)) == 2
    assert len(v.ids_of_kind(TermKind.PREDICATE)) == 1
    assert r.graph.n_edges == 1
    assert r.graph.literals == {}
    assert r.stats.edges == 1


def test_single_abstract_literal():
    r = parse('<http://x/a> <http://x/abstract> "A city."@en .\n')
    v = r.vocab
    a = v.id_of("http://x/a")
    assert v.kind(a) is TermKind.ENTITY
    assert r.graph.n_edges == 0
    assert r.graph.literals == {a: [(ABSTRACT, "A city.", "en")]}
    assert r.stats.captured_literals == 1


def test_malformed_object_reports_line_and_byte_offset():
    with pytest.raises(MalformedLine) as err:
        parse("<http://x/a> <http://x/p> garbage\n")
    assert err.value.line_no == 1
    assert err.value.byte_offset == 26  # position of the 'g'


def test_lenient_mode_skips_and_counts():
    text = (
        "<http://x/a> <http://x/p> garbage\n"
        "<http://x/a> <http://x/p> <http://x/b> .\n"
    )
    r = parse(text, lenient=True)
    assert r.stats.malformed_skipped == 1
    assert r.graph.n_edges == 1


def test_label_triples_populate_labels():
    text = (
        '<http://x/a> <%s> "Anna"@en .\n' % LABEL
        + "<http://x/a> <http://x/p> <http://x/b> .\n"
    )
    r = parse(text)
    a = r.vocab.id_of("http://x/a")
    assert r.vocab.labels[a] == "Anna"
    assert r.stats.label_triples == 1


def test_label_on_predicate_keeps_predicate_kind():
    # label line first: attaching must not pre-commit the subject to entity
    text = (
        '<http://x/p> <%s> "part of" .\n' % LABEL
        + "<http://x/a> <http://x/p> <http://x/b> .\n"
    )
    r = parse(text)
    p = r.vocab.id_of("http://x/p")
    assert r.vocab.kind(p) is TermKind.PREDICATE
    assert r.vocab.labels[p] == "part of"


def test_language_filter():
    text = (
        '<http://x/a> <http://x/abstract> "ville"@fr .\n'
        '<http://x/a> <http://x/abstract> "city"@en .\n'
        '<http://x/a> <http://x/abstract> "town"@en-GB .\n'
        '<http://x/a> <http://x/abstract> "untagged" .\n'
    )
    r = parse(text)
    a = r.vocab.id_of("http://x/a")
    texts = [t for _, t, _ in r.graph.literals[a]]
    assert texts == ["city", "town", "untagged"]
    assert r.stats.dropped_literals == 1


def test_datatyped_and_foreign_literals_dropped():
    text = (
        '<http://x/a> <http://x/other> "ignored" .\n'
        '<http://x/a> <http://x/age> "42"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
    )
    r = parse(text)
    assert r.stats.dropped_literals == 2
    assert r.graph.literals == {}


def test_blank_nodes_are_entities():
    r = parse("_:b0 <http://x/p> <http://x/a> .\n")
    b = r.vocab.id_of("_:b0")
    assert r.vocab.kind(b) is TermKind.ENTITY
    assert r.graph.n_edges == 1


def test_literal_escapes():
    text = '<http://x/a> <http://x/abstract> "line\\none \\"two\\" \\u00e9\\t\\\\" .\n'
    r = parse(text)
    a = r.vocab.id_of("http://x/a")
    assert r.graph.literals[a][0][1] == 'line\none "two" é\t\\'


def test_comments_and_blank_lines_skipped():
    text = (
        "# a comment\n"
        "\n"
        "   \n"
        "<http://x/a> <http://x/p> <http://x/b> . # trailing\n"
    )
    r = parse(text)
    assert r.stats.triple_lines == 1
    assert r.graph.n_edges == 1


def test_count_conservation():
    text = (
        "<http://x/a> <http://x/p> <http://x/b> .\n"
        '<http://x/a> <http://x/abstract> "A city."@en .\n'
        '<http://x/a> <http://x/other> "dropped" .\n'
        '<http://x/a> <%s> "Anna" .\n' % LABEL
        + "broken line\n"
    )
    r = parse(text, lenient=True)
    s = r.stats
    assert s.triple_lines == 5
    assert (s.edges, s.captured_literals, s.dropped_literals) == (1, 1, 1)
    assert (s.label_triples, s.malformed_skipped) == (1, 1)
    assert s.conserved()


def graph_signature(r):
    """Graph content keyed by term strings, independent of id assignment."""
    v = r.vocab
    edges = sorted(
        (v.terms[s], v.terms[p], v.terms[o]) for s, p, o in r.graph.edge_tuples()
    )
    literals = {
        v.terms[tid]: sorted(rows) for tid, rows in r.graph.literals.items()
    }
    labels = {
        v.terms[tid]: lab for tid, lab in enumerate(v.labels) if lab is not None
    }
    return edges, literals, labels


FIXTURE = (
    "<http://x/a> <http://x/p> <http://x/b> .\n"
    "<http://x/a> <http://x/p> <http://x/b> .\n"  # duplicate edge kept
    "<http://x/b> <http://x/q> _:n1 .\n"
    '<http://x/a> <http://x/abstract> "A \\"city\\".\\n"@en .\n'
    '<http://x/a> <%s> "Anna" .\n' % LABEL
    + '<http://x/q> <%s> "quality" .\n' % LABEL
)


def test_round_trip_through_canonical_serialization():
    first = parse(FIXTURE)
    assert first.graph.n_edges == 3
    buf = io.StringIO()
    write_ntriples(first.graph, buf, label_property=LABEL)
    second = parse(buf.getvalue())
    assert graph_signature(first) == graph_signature(second)


def test_parse_is_order_insensitive_up_to_ids():
    lines = FIXTURE.strip().split("\n")
    shuffled = "\n".join(lines[::-1]) + "\n"
    assert graph_signature(parse(FIXTURE)) == graph_signature(parse(shuffled))


def test_vocab_tsv_round_trip():
    r = parse(FIXTURE)
    v = r.vocab
    v.set_label(v.id_of("http://x/b"), "tab\there\nand newline")
    buf = io.StringIO()
    write_vocab_tsv(v, buf)
    buf.seek(0)
    back = read_vocab_tsv(buf)
    assert back.terms == v.terms
    assert back.kinds == v.kinds
    assert back.labels == v.labels
